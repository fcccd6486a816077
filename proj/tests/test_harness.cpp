#include <doctest.h>

#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "bep/errors.hpp"
#include "bep/harness.hpp"

using namespace bep;

namespace {

/// Fresh scratch directory under the system temp dir.
std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("bep_harness_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::string> dirs(const std::filesystem::path& root) {
  return {"run.output_dir=" + (root / "out").string(), "run.cache_dir=" + (root / "cache").string()};
}

std::vector<std::string> with(std::vector<std::string> base, std::initializer_list<std::string> extra) {
  base.insert(base.end(), extra);
  return base;
}

std::string error_of(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  try {
    parse_config(path, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream is(path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

std::string cache_file(const std::filesystem::path& dir, const std::string& kind, const std::string& key) {
  std::ostringstream name;
  name << kind << '-' << std::hex << std::setw(16) << std::setfill('0') << Cache::fnv1a(key) << ".bin";
  return (dir / name.str()).string();
}

}  // namespace

TEST_CASE("config admissibility") {
  const auto root = scratch("admissible");
  const auto base = dirs(root);
  SUBCASE("defaults") {
    const ExperimentConfig cfg = parse_config({}, base);
    CHECK(cfg.idx.s == 2.5);
    CHECK(cfg.n_max == 9);
    CHECK(cfg.q == 8);
  }
  SUBCASE("s below the critical index") {
    const std::string msg = error_of({}, with(base, {"besov.s=1.8"}));
    CHECK(msg.find("inadmissible Besov index") != std::string::npos);
    CHECK(msg.find("s <= 1 + d/p") != std::string::npos);
  }
  SUBCASE("endpoint with r = 1") {
    const ExperimentConfig cfg = parse_config({}, with(base, {"besov.s=1.6666666666666667", "besov.p=3", "besov.r=1"}));
    CHECK(cfg.idx.p == 3.0);
    CHECK(error_of({}, with(base, {"besov.s=1.6666666666666667", "besov.p=3", "besov.r=2"})).find("r = 1") !=
          std::string::npos);
  }
  SUBCASE("infinite r") { CHECK(std::isinf(parse_config({}, with(base, {"besov.r=inf"})).idx.r)); }
}

TEST_CASE("config rejects malformed input") {
  const auto root = scratch("reject");
  const auto base = dirs(root);
  CHECK(error_of({}, with(base, {"grid.colour=3"})).find("unknown key") != std::string::npos);
  CHECK(error_of({}, with(base, {"grid.dim=4"})).find("grid.dim") != std::string::npos);
  CHECK(error_of({}, with(base, {"grid.q=two"})).find("not an integer") != std::string::npos);
  CHECK(error_of({}, with(base, {"solver.cfl"})).find("key=value") != std::string::npos);
  CHECK(error_of({}, with(base, {"datum.n_max=14"})).find("max_points") != std::string::npos);
  CHECK(error_of({}, with(base, {"lemma31.n_hi=12"})).find("lemma31") != std::string::npos);
  CHECK(error_of({}, with(base, {"prop31.times=0.001,0.002"})).find("prop31.times") != std::string::npos);

  const auto ini = root / "stray.ini";
  std::ofstream(ini) << "dim = 2\n[grid]\nq = 8\n";
  CHECK(error_of(ini, base).find("outside a section") != std::string::npos);
  std::ofstream(ini) << "[grid]\nshape = box\n";
  CHECK(error_of(ini, base).find("unknown key") != std::string::npos);
  CHECK(error_of(root / "missing.ini", base).find("cannot read") != std::string::npos);
}

TEST_CASE("config file, overrides and effective config round trip") {
  const auto root = scratch("roundtrip");
  const auto ini = root / "exp.ini";
  std::ofstream(ini) << "[grid]\nq = 16\n[besov]\ns = 3\n[solver]\nsample_times = 0.002, 0.004\n[hoelder]\nalphas = 0.25,0.5\n";
  const ExperimentConfig cfg = parse_config(ini, with(dirs(root), {"besov.s=2.75", "datum.single_n=5"}));
  CHECK(cfg.q == 16);
  CHECK(cfg.idx.s == 2.75);
  REQUIRE(cfg.single_n.has_value());
  CHECK(*cfg.single_n == 5);
  CHECK(cfg.sample_times == std::vector<double>{0.002, 0.004});
  CHECK(cfg.alphas == std::vector<double>{0.25, 0.5});

  const auto echo = root / "echo.ini";
  std::ofstream(echo) << effective_config(cfg);
  const ExperimentConfig again = parse_config(echo);
  CHECK(effective_config(again) == effective_config(cfg));
  CHECK(again.idx.s == cfg.idx.s);
  CHECK(again.output_dir == cfg.output_dir);
}

TEST_CASE("cache directory from the environment") {
  const auto root = scratch("env");
  ExperimentConfig cfg;
  cfg.cache_dir = root / "configured";
  const char* saved = std::getenv("BESOV_EP_CACHE");
  const std::string restore = saved ? saved : "";
  unsetenv("BESOV_EP_CACHE");
  CHECK(resolve_cache_dir(cfg) == cfg.cache_dir);
  setenv("BESOV_EP_CACHE", (root / "env").c_str(), 1);
  CHECK(resolve_cache_dir(cfg) == root / "env");
  if (saved) {
    setenv("BESOV_EP_CACHE", restore.c_str(), 1);
  } else {
    unsetenv("BESOV_EP_CACHE");
  }
}

TEST_CASE("cache hits, misses and stale files") {
  const auto root = scratch("cache");
  const auto grid = make_grid(2, {10.0, 10.0}, {64, 16});
  const auto axis = make_grid(1, {2400.0}, {1024});

  Cache first(root);
  const LPSymbols built = first.symbols(grid);
  const BumpProfile bump = first.bump(axis, 0.05);
  CHECK(first.misses() == 2);
  CHECK(first.hits() == 0);

  Cache second(root);
  const LPSymbols loaded = second.symbols(grid);
  const BumpProfile reloaded = second.bump(axis, 0.05);
  CHECK(second.hits() == 2);
  CHECK(second.misses() == 0);
  CHECK(std::equal(built.levels().begin(), built.levels().end(), loaded.levels().begin()));
  CHECK(std::equal(built.weights().begin(), built.weights().end(), loaded.weights().begin()));
  CHECK(loaded.j_max() == built.j_max());
  CHECK(reloaded.phys_samples == bump.phys_samples);
  CHECK(reloaded.boundary_decay == bump.boundary_decay);

  SUBCASE("a file holding another key is rebuilt") {
    const auto other = make_grid(2, {10.0, 10.0}, {32, 16});
    const auto target = cache_file(root, "symbols", Cache::symbols_key(*other));
    std::filesystem::copy_file(cache_file(root, "symbols", Cache::symbols_key(*grid)), target,
                               std::filesystem::copy_options::overwrite_existing);
    Cache third(root);
    const LPSymbols rebuilt = third.symbols(other);
    CHECK(third.misses() == 1);
    CHECK(rebuilt.grid().total() == other->total());
    CHECK(third.symbols(other).j_max() == rebuilt.j_max());
    CHECK(third.hits() == 1);
  }
  SUBCASE("a truncated file is rebuilt") {
    std::filesystem::resize_file(cache_file(root, "symbols", Cache::symbols_key(*grid)), 40);
    Cache third(root);
    CHECK(third.symbols(grid).j_max() == built.j_max());
    CHECK(third.misses() == 1);
  }
  SUBCASE("the decay tolerance is checked on every load") {
    Cache third(root);
    CHECK_THROWS_AS(third.bump(axis, bump.boundary_decay / 2), InfeasibleError);
  }
}

TEST_CASE("datum lattice") {
  const auto root = scratch("lattice");
  ExperimentConfig cfg = parse_config({}, dirs(root));
  Cache cache(root / "cache");
  const Lattice lat = datum_lattice(cfg, 6, cache);
  CHECK(lat.grid->size(0) == resolving_axis_size(6, cfg.q));
  CHECK(lat.grid->size(1) == cfg.transverse);
  CHECK(lat.grid->length(0) == doctest::Approx(aligned_box_length(cfg.q)));
  CHECK(lat.bump.boundary_decay < cfg.decay_tol);
  cfg.max_points = 1024;
  CHECK_THROWS_AS(datum_lattice(cfg, 6, cache), InfeasibleError);
}

TEST_CASE("run exit codes and deterministic artifacts") {
  const auto root = scratch("run");
  const auto overrides = with(dirs(root), {"datum.n_max=6", "lemma31.n_hi=6", "lipschitz.n_hi=6"});
  const ExperimentConfig cfg = parse_config({}, overrides);
  std::ostringstream log;
  CHECK(run("bogus", cfg, log) == kExitConfigError);
  CHECK(run("norms", cfg, log) == kExitConfigError);

  std::ostringstream first, second;
  CHECK(run("lemma31", cfg, first) == kExitPass);
  const std::string csv = slurp(root / "out" / "lemma31.csv");
  CHECK(run("lemma31", cfg, second) == kExitPass);
  CHECK(slurp(root / "out" / "lemma31.csv") == csv);
  CHECK(first.str() == second.str());
  CHECK(first.str().find("PASS lemma31 exponent") != std::string::npos);
  CHECK(std::filesystem::exists(root / "out" / "lemma31.dat"));
  CHECK(slurp(root / "out" / "effective_config.ini") == effective_config(cfg));

  ExperimentConfig small = cfg;
  small.max_points = std::size_t{1} << 16;
  small.hoelder_n_lo = 7;
  small.hoelder_n_hi = 9;
  std::ostringstream hoelder;
  CHECK(run("hoelder", small, hoelder) == kExitInfeasible);
  CHECK(hoelder.str().find("fewer than 3 feasible") != std::string::npos);
}
