#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "bep/errors.hpp"
#include "bep/harness.hpp"

namespace bep {

namespace {

constexpr char kMagic[4] = {'B', 'E', 'P', 'C'};
constexpr std::uint32_t kVersion = 1;

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
bool get(std::istream& is, T& v) {
  return static_cast<bool>(is.read(reinterpret_cast<char*>(&v), sizeof(T)));
}

template <class T>
void put_array(std::ostream& os, const std::vector<T>& v) {
  put<std::uint64_t>(os, v.size());
  os.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <class T>
bool get_array(std::istream& is, std::vector<T>& v, std::uint64_t expected) {
  std::uint64_t n = 0;
  if (!get(is, n) || n != expected) return false;
  v.resize(n);
  return static_cast<bool>(is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(T))));
}

/// Opens a cache file and positions it after the header if the stored key
/// matches exactly.
bool open_matching(const std::filesystem::path& path, const std::string& key, std::ifstream& is) {
  is.open(path, std::ios::binary);
  if (!is) return false;
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t len = 0;
  if (!is.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) return false;
  if (!get(is, version) || version != kVersion) return false;
  if (!get(is, len) || len != key.size()) return false;
  std::string stored(len, '\0');
  if (!is.read(stored.data(), static_cast<std::streamsize>(len))) return false;
  return stored == key;
}

template <class Body>
void write_atomic(const std::filesystem::path& path, const std::string& key, Body&& body) {
  const auto tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) return;  // an unwritable cache only costs a rebuild
    os.write(kMagic, 4);
    put(os, kVersion);
    put<std::uint64_t>(os, key.size());
    os.write(key.data(), static_cast<std::streamsize>(key.size()));
    body(os);
    if (!os) return;
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
}

std::string transition_text(Transition t) {
  std::ostringstream os;
  os << std::hexfloat << t.a << ',' << t.b;
  return os.str();
}

}  // namespace

Cache::Cache(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
}

std::uint64_t Cache::fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

namespace {

void require_decay(const BumpProfile& b, double decay_tol) {
  if (b.boundary_decay < decay_tol) return;
  std::ostringstream os;
  os << "bump: boundary decay " << b.boundary_decay << " is not below the tolerance " << decay_tol
     << "; enlarge the box";
  throw InfeasibleError(os.str());
}

}  // namespace

std::string Cache::symbols_key(const Grid& grid) {
  return "lp-symbols;" + grid.key() + ";transition=" + transition_text(kLowPassTransition);
}

std::string Cache::bump_key(const Grid& axis_grid) {
  return "bump;" + axis_grid.key() + ";transition=" + transition_text(kBumpTransition);
}

std::filesystem::path Cache::file_for(const std::string& kind, const std::string& key) const {
  std::ostringstream name;
  name << kind << '-' << std::hex << std::setw(16) << std::setfill('0') << fnv1a(key) << ".bin";
  return dir_ / name.str();
}

LPSymbols Cache::symbols(const GridPtr& grid) {
  const std::string key = symbols_key(*grid);
  const auto path = file_for("symbols", key);
  std::ifstream is;
  if (open_matching(path, key, is)) {
    std::vector<std::int8_t> levels;
    std::vector<double> weights;
    if (get_array(is, levels, grid->total()) && get_array(is, weights, grid->total())) {
      ++hits_;
      return LPSymbols(grid, std::move(levels), std::move(weights));
    }
  }
  ++misses_;
  LPSymbols sym = build_lp_symbols(grid);
  write_atomic(path, key, [&](std::ostream& os) {
    put_array(os, std::vector<std::int8_t>(sym.levels().begin(), sym.levels().end()));
    put_array(os, std::vector<double>(sym.weights().begin(), sym.weights().end()));
  });
  return sym;
}

BumpProfile Cache::bump(const GridPtr& axis_grid, double decay_tol) {
  const std::string key = bump_key(*axis_grid);
  const auto path = file_for("bump", key);
  std::ifstream is;
  if (open_matching(path, key, is)) {
    BumpProfile b;
    b.axis_grid = axis_grid;
    if (get(is, b.boundary_decay) && get(is, b.phi0) && get_array(is, b.hat_samples, axis_grid->total()) &&
        get_array(is, b.phys_samples, axis_grid->total())) {
      ++hits_;
      require_decay(b, decay_tol);
      return b;
    }
  }
  ++misses_;
  // Built with an infinite tolerance so the file is reusable for any
  // tolerance; the requested one is checked below.
  BumpProfile b = build_bump(axis_grid, std::numeric_limits<double>::infinity());
  write_atomic(path, key, [&](std::ostream& os) {
    put(os, b.boundary_decay);
    put(os, b.phi0);
    put_array(os, b.hat_samples);
    put_array(os, b.phys_samples);
  });
  require_decay(b, decay_tol);
  return b;
}

Lattice datum_lattice(const ExperimentConfig& cfg, int n_top, Cache& cache) {
  const double L = aligned_box_length(cfg.q);
  std::vector<std::size_t> sizes{resolving_axis_size(n_top, cfg.q)};
  std::size_t points = sizes[0];
  for (int a = 1; a < cfg.dim; ++a) {
    sizes.push_back(cfg.transverse);
    points *= cfg.transverse;
  }
  if (points > cfg.max_points) {
    throw InfeasibleError("lattice for n = " + std::to_string(n_top) + " needs " + std::to_string(points) +
                          " points, above grid.max_points = " + std::to_string(cfg.max_points));
  }
  auto grid = make_grid(cfg.dim, std::vector<double>(cfg.dim, L), sizes);
  auto axis = make_grid(1, {L}, {cfg.transverse});
  BumpProfile bump = cache.bump(axis, cfg.decay_tol);
  LPSymbols sym = cache.symbols(grid);
  return {grid, std::move(sym), std::move(bump)};
}

}  // namespace bep
