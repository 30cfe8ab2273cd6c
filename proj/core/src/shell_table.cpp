#include "gpbog/shell_table.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numeric>
#include <string>
#include <system_error>

#include "gpbog/errors.hpp"

namespace gpbog {

namespace {
constexpr char kMagic[8] = {'G', 'P', 'B', 'S', 'H', 'E', 'L', 'L'};

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

template <class T>
void put(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>((static_cast<std::uint64_t>(v) >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char buf[sizeof(T)];
  is.read(reinterpret_cast<char*>(buf), sizeof(T));
  if (!is) throw ValidationError("truncated shell table file");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}
}  // namespace

ShellTable ShellTable::build(std::uint64_t n_max) {
  if (n_max > (std::uint64_t{1} << 32)) throw ResourceError("shell table too large", n_max + 1);
  ShellTable t;
  t.counts_.assign(n_max + 1, 0);
  auto& c = t.counts_;
  // Enumerate x ≥ y ≥ z ≥ 0 and weight by the number of signed permutations.
  const std::uint64_t R = isqrt(n_max);
  for (std::uint64_t x = 0; x <= R; ++x) {
    const std::uint64_t x2 = x * x;
    for (std::uint64_t y = 0; y <= x && x2 + y * y <= n_max; ++y) {
      const std::uint64_t xy = x2 + y * y;
      const std::uint64_t zmax = std::min(y, isqrt(n_max - xy));
      for (std::uint64_t z = 0; z <= zmax; ++z) {
        std::uint32_t perms;
        if (x == y && y == z) perms = 1;
        else if (x == y || y == z) perms = 3;
        else perms = 6;
        const int nonzero = (x > 0) + (y > 0) + (z > 0);
        c[xy + z * z] += perms << nonzero;
      }
    }
  }
  return t;
}

std::uint64_t ShellTable::points_up_to(std::uint64_t n) const {
  if (n > n_max()) throw DomainError("shell index beyond table");
  std::uint64_t s = 0;
  for (std::uint64_t k = 1; k <= n; ++k) s += counts_[k];
  return s;
}

std::filesystem::path ShellTable::default_cache_dir() {
  if (const char* d = std::getenv("GPBOG_CACHE_DIR"); d && *d) return d;
  if (const char* d = std::getenv("XDG_CACHE_HOME"); d && *d) return std::filesystem::path(d) / "gpbog";
  if (const char* d = std::getenv("HOME"); d && *d) return std::filesystem::path(d) / ".cache" / "gpbog";
  return {};
}

void ShellTable::save(const std::filesystem::path& file) const {
  const auto tmp = std::filesystem::path(file.string() + ".tmp");
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ResourceError("cannot write " + tmp.string(), 0);
    os.write(kMagic, sizeof kMagic);
    put<std::uint32_t>(os, kFormatVersion);
    put<std::uint64_t>(os, n_max());
    for (auto v : counts_) put<std::uint32_t>(os, v);
    put<std::uint64_t>(os, std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0}));
    if (!os) throw ResourceError("failed writing " + tmp.string(), 0);
  }
  std::filesystem::rename(tmp, file);
}

ShellTable ShellTable::load(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw ValidationError("cannot open " + file.string());
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ValidationError("not a shell table: " + file.string());
  if (get<std::uint32_t>(is) != kFormatVersion) throw ValidationError("shell table version mismatch: " + file.string());
  const auto n_max = get<std::uint64_t>(is);
  ShellTable t;
  t.counts_.resize(n_max + 1);
  for (auto& v : t.counts_) v = get<std::uint32_t>(is);
  const auto total = get<std::uint64_t>(is);
  if (total != std::accumulate(t.counts_.begin(), t.counts_.end(), std::uint64_t{0}))
    throw ValidationError("shell table checksum mismatch: " + file.string());
  return t;
}

ShellTable ShellTable::cached(std::uint64_t n_max, const std::filesystem::path& dir) {
  if (dir.empty()) return build(n_max);
  const auto file = dir / ("shells_v" + std::to_string(kFormatVersion) + "_" + std::to_string(n_max) + ".bin");
  if (std::filesystem::exists(file)) {
    try {
      return load(file);
    } catch (const ValidationError&) {
      // Corrupt or stale file: rebuild below.
    }
  }
  ShellTable t = build(n_max);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (!ec) {
    try {
      t.save(file);
    } catch (const std::exception&) {
      // The cache is an optimization; an unwritable directory is not an error.
    }
  }
  return t;
}

}  // namespace gpbog
