#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace gpbog {

/// r₃(n) = #{x ∈ Z³ : |x|² = n} for 0 ≤ n ≤ n_max, by direct enumeration.
class ShellTable {
 public:
  static constexpr std::uint32_t kFormatVersion = 1;

  static ShellTable build(std::uint64_t n_max);
  /// Loads `dir/shells_v<version>_<n_max>.bin` or builds and writes it. An empty dir skips the cache.
  static ShellTable cached(std::uint64_t n_max, const std::filesystem::path& dir = default_cache_dir());
  /// GPBOG_CACHE_DIR, else $XDG_CACHE_HOME/gpbog, else $HOME/.cache/gpbog, else empty.
  static std::filesystem::path default_cache_dir();

  static ShellTable load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

  std::uint64_t n_max() const { return counts_.empty() ? 0 : counts_.size() - 1; }
  std::uint32_t count(std::uint64_t n) const { return counts_.at(n); }
  /// Number of lattice points with 0 < |x|² ≤ n.
  std::uint64_t points_up_to(std::uint64_t n) const;
  const std::vector<std::uint32_t>& counts() const { return counts_; }

 private:
  std::vector<std::uint32_t> counts_;
};

}  // namespace gpbog
