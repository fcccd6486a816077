#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bep/estimates_lab.hpp"

namespace bep {

struct ExperimentConfig {
  // [grid]
  int dim = 2;
  int q = 8;                  // box length 24 pi q / 17 on every axis
  std::size_t transverse = 16;
  std::size_t max_points = std::size_t{1} << 22;
  // [besov]
  BesovIndex idx{};
  // [datum]
  int n_min = 3;
  int n_max = 9;
  std::optional<int> single_n;
  // [bump]
  double decay_tol = 0.05;
  // [solver]
  TimeStepPolicy policy{};
  double growth_guard = 4.0;
  double horizon = 0.01;
  std::vector<double> sample_times{0.001, 0.005, 0.01};
  // [lemma31]
  int lemma_n_lo = 4;
  int lemma_n_hi = 9;
  // [prop31]
  std::vector<double> prop_times{1e-4, 3e-4, 1e-3, 3e-3, 1e-2};
  // [lipschitz]
  int lip_n_lo = 4;
  int lip_n_hi = 9;
  std::vector<double> lip_times{2.5e-4, 5e-4, 1e-3, 2e-3};
  // [hoelder]
  std::vector<double> alphas{0.5};
  int hoelder_n_lo = 10;
  int hoelder_n_hi = 14;
  HoelderSettings hoelder{};
  // [audit]
  int audit_scale_lo = 4;
  int audit_scale_hi = 9;
  int audit_samples = 3;
  // [norms]
  std::vector<std::filesystem::path> norm_fields;
  // [run]
  std::filesystem::path output_dir = "results";
  std::filesystem::path cache_dir = "cache";
  std::uint64_t seed = 20240601;
  int threads = 1;
};

/// Reads an INI file (empty path: defaults only) and applies `section.key=value`
/// overrides. Throws ConfigError for unknown keys, malformed values, an
/// inadmissible Besov index or an unresolvable datum band.
ExperimentConfig parse_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

/// The effective configuration in the same INI layout parse_config reads.
std::string effective_config(const ExperimentConfig& cfg);

/// BESOV_EP_CACHE if set, otherwise the configured directory.
std::filesystem::path resolve_cache_dir(const ExperimentConfig& cfg);

/// On-disk store for LP symbols and bump profiles. Files are named by a
/// 64-bit FNV-1a hash of a canonical key and carry the full key in their
/// header, so a hash collision or stale file is rebuilt, never served.
class Cache {
 public:
  explicit Cache(std::filesystem::path dir);

  const std::filesystem::path& dir() const noexcept { return dir_; }

  LPSymbols symbols(const GridPtr& grid);
  BumpProfile bump(const GridPtr& axis_grid, double decay_tol);

  std::size_t hits() const noexcept { return hits_; }
  std::size_t misses() const noexcept { return misses_; }

  static std::uint64_t fnv1a(const std::string& text);
  static std::string symbols_key(const Grid& grid);
  static std::string bump_key(const Grid& axis_grid);

 private:
  std::filesystem::path file_for(const std::string& kind, const std::string& key) const;

  std::filesystem::path dir_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

/// Lattice resolving the datum truncated at n_top. Throws InfeasibleError
/// above cfg.max_points.
Lattice datum_lattice(const ExperimentConfig& cfg, int n_top, Cache& cache);

enum ExitCode : int { kExitPass = 0, kExitInfeasible = 1, kExitPropertyFailure = 2, kExitConfigError = 3 };

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"selfcheck", "lemma31", "prop31", "hoelder", "lipschitz", "solve", "norms"};
  return names;
}

/// Runs one command inside a worker pool of cfg.threads threads, writes its
/// artifacts under cfg.output_dir and a report to `out`. Returns an ExitCode.
int run(const std::string& command, const ExperimentConfig& cfg, std::ostream& out);

/// One PASS/FAIL line of the selfcheck suite.
struct PropertyResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Also writes the audit tables under cfg.output_dir.
std::vector<PropertyResult> selfcheck(const ExperimentConfig& cfg);

}  // namespace bep
