#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace gpbog {

/// Runs body(i) for i in [0, n) on up to `threads` workers. Work is handed
/// out by index, so results written to slot i do not depend on scheduling.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

/// SplitMix64 step, used to derive independent per-item seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace gpbog
