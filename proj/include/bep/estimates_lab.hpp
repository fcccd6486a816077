#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bep/ep_dynamics.hpp"
#include "bep/littlewood_paley.hpp"
#include "bep/profile_builder.hpp"

namespace bep {

/// Least-squares line through (xs, ys).
struct ScalingFit {
  std::vector<double> xs;
  std::vector<double> ys;
  double slope = 0.0;
  double intercept = 0.0;
  double max_dev = 0.0;  // max |y - (slope x + intercept)|
};

/// Throws std::invalid_argument for fewer than 3 points, mismatched sizes,
/// non-finite data or a degenerate abscissa.
ScalingFit fit_line(std::vector<double> xs, std::vector<double> ys);

/// Least-squares slope of y = k t through the origin.
double slope_through_origin(std::span<const double> ts, std::span<const double> ys);

// ---------------------------------------------------------------------------
// Lower bound for ||u0 . grad Delta_n u0||_{L^p}

struct Lemma31Row {
  int n = 0;
  double value = 0.0;     // ||u0 . grad Delta_n u0||_{L^p}
  double scaled = 0.0;    // n^2 * value
  double log2_scaled = 0.0;
  double cos_norm = 0.0;  // ||f * c_n phi' cos(a_n x_1) phi(x_2)...||_{L^p}
  double sin_norm = 0.0;  // ||f * c_n a_n phi sin(a_n x_1) phi(x_2)...||_{L^p}
  double sin_lower = 0.0; // c0 a_n ||phi sin(a_n x_1) phi(x_2)...||_{L^p(cube)}: lower bound for sin_norm / c_n
  double cos_upper = 0.0; // cos_norm / c_n
  std::string dominant;   // "sin" or "cos"
  double ratio = 0.0;     // sin_norm / cos_norm
  double ratio_bound = 0.0;  // 2^{n-1} c / C
};

struct Lemma31Result {
  std::vector<Lemma31Row> rows;
  ScalingFit fit;  // log2(n^2 value) against n
  CenterBound center;
  double c = 0.0;  // min over n of sin_lower / 2^n
  double C = 0.0;  // max over n of cos_upper
};

/// u0 must be the datum described by `spec` on `grid`; every n in [n_lo, n_hi]
/// must be a datum term. Throws std::invalid_argument otherwise.
Lemma31Result lemma31_lower_bound(const VectorField& u0, const DatumSpec& spec, const BumpProfile& bump,
                                  const LPSymbols& sym, int n_lo, int n_hi);

// ---------------------------------------------------------------------------
// Delta_n(u0 . grad u0) = u0 . grad Delta_n u0 + [Delta_n, u0] . grad u0

struct CommutatorCheck {
  int n = 0;
  double defect = 0.0;        // ||residual|| / ||u0 . grad u0||
  double block_defect = 0.0;  // ||residual|| / ||Delta_n(u0 . grad u0)||
  double commutator = 0.0;    // ||[Delta_n, u0] . grad u0||_{L^p}
  double transport = 0.0;     // ||u0 . grad Delta_n u0||_{L^p}
  double ratio = 0.0;         // commutator / transport
};

CommutatorCheck commutator_decomposition_check(const VectorField& u0, int n, const LPSymbols& sym, double p = 2.0);

/// ||[Delta_j, u0] . grad u0||_{L^p} for j = -1 .. j_max (entry j + 1).
std::vector<double> commutator_profile(const VectorField& u0, const LPSymbols& sym, double p);

// ---------------------------------------------------------------------------
// Short-time expansion of S_t(u0)

struct Prop31Row {
  double t = 0.0;
  double diff_sm1 = 0.0;  // ||S_t(u0) - u0||_{B^{s-1}_{p,r}}
  double w_sm2 = 0.0;     // ||w||_{B^{s-2}_{p,r}}
  double w_sm2_inf = 0.0; // ||w||_{B^{s-2}_{p,inf}}
};

struct Prop31Result {
  std::vector<Prop31Row> rows;
  // Absent when a norm vanishes (zero datum).
  std::optional<ScalingFit> diff_fit;  // log2 diff_sm1 against log2 t
  std::optional<ScalingFit> w_fit;     // log2 w_sm2 against log2 t
  double p_norm_inf = 0.0;        // ||P(u0)||_{B^s_{p,inf}}
  double commutator_bound = 0.0;  // sup_n 2^{ns} ||[Delta_n, u0] . grad u0||_{L^p}
  double u0_norm = 0.0;           // ||u0||_{B^s_{p,r}}
  double dt = 0.0;
  std::size_t steps = 0;
};

/// Solves once and evaluates both norms on t_grid (>= 4 positive times).
Prop31Result prop31_slopes(const VectorField& u0, const BesovIndex& idx, const LPSymbols& sym,
                           std::vector<double> t_grid, double dt);

/// Largest relative change of the norms of `a` against `b`, row by row.
double prop31_relative_change(const Prop31Result& a, const Prop31Result& b);

// ---------------------------------------------------------------------------
// Hoelder quotient along t_n = (n^3 2^{-n})^{1/(1-alpha)}

/// Grid, symbols and bump for one experiment lattice.
struct Lattice {
  GridPtr grid;
  LPSymbols sym;
  BumpProfile bump;
};

/// Builds (or loads) the lattice that resolves the datum truncated at n;
/// throws InfeasibleError when that lattice is over budget.
using LatticeFactory = std::function<Lattice(int n)>;

struct HoelderRecord {
  int n = 0;
  double alpha = 0.0;
  double t_n = 0.0;
  double D = 0.0;  // ||S_{t_n}(u0) - u0||_{B^s_{p,r}}
  double Q = 0.0;  // t_n^{-alpha} D
  bool feasible = false;
  std::string note;
  double dt = 0.0;
  std::size_t steps = 0;
  double dt_check = 0.0;  // relative change of D when dt is halved
};

double hoelder_time(int n, double alpha);
inline double hoelder_quotient(double D, double t, double alpha) { return D * std::pow(t, -alpha); }

struct HoelderSettings {
  double horizon = 1.0;
  TimeStepPolicy policy{0.25, 0.0, 0.0, 4};
  double dt_check_tol = 1e-6;
  int n_min_datum = 3;
};

struct HoelderSweep {
  std::vector<HoelderRecord> records;
  bool monotone = false;           // strictly increasing Q over the feasible n of one alpha
  std::optional<ScalingFit> fit;   // Q against n (linear), first alpha, >= 3 feasible n
};

/// Records infeasible cells (t_n beyond the horizon, lattice over budget,
/// unresolved band, dt-halving change above tolerance) instead of throwing.
HoelderSweep hoelder_ratio_sweep(const LatticeFactory& lattice_for, const BesovIndex& idx,
                                 std::span<const double> alphas, int n_lo, int n_hi, const HoelderSettings& settings);

/// Smallest power of two N (at least 64) with N/3 >= q (2^n + 0.36): the axis-0
/// size that resolves the band of f_n on a box of length aligned_box_length(q).
std::size_t resolving_axis_size(int n, int q);

// ---------------------------------------------------------------------------
// Time-Lipschitz coefficient of the block n

struct LipschitzRow {
  int n = 0;
  double r_n = 0.0;         // slope in t of 2^{ns} ||Delta_n(S_t(u0) - u0)||_{L^p}
  double scaled = 0.0;      // n^2 r_n
  double log2_scaled = 0.0;
  double lower_bound = 0.0; // c n^{-2} 2^n - C
  bool bound_ok = false;
};

struct LipschitzResult {
  std::vector<LipschitzRow> rows;
  ScalingFit fit;  // log2(n^2 r_n) against n
  double full_slope = 0.0;  // slope in t of ||S_t(u0) - u0||_{B^s_{p,r}}
  double c = 0.0;  // min over n of n^2 2^{n(s-1)} ||u0 . grad Delta_n u0||_{L^p}
  double C = 0.0;  // max over n of 2^{ns}(||[Delta_n, u0] . grad u0|| + ||Delta_n P(u0)||)
  double dt = 0.0;
};

LipschitzResult lipschitz_constant_growth(const VectorField& u0, const BesovIndex& idx, const LPSymbols& sym,
                                          int n_lo, int n_hi, std::vector<double> t_window, double dt);

// ---------------------------------------------------------------------------
// Randomized audits of the commutator and product estimates

struct AuditRow {
  int scale_exp = 0;     // fields live at |k_1| in [2^{e-1}, 2^e]
  double constant = 0.0; // largest ratio over the samples
};

struct AuditResult {
  std::string name;
  std::vector<AuditRow> rows;
  double spread = 0.0;  // max / min constant
};

struct AuditSettings {
  int scale_lo = 4;
  int scale_hi = 9;
  int samples = 3;
  std::uint64_t seed = 20240601;
  BesovIndex idx{};
};

/// sup_j 2^{js} ||[Delta_j, v] . grad f|| / (||grad v||_inf ||f||_{B^s_{p,inf}} + ||grad f||_inf ||grad v||_{B^{s-1}_{p,inf}}).
AuditResult commutator_audit(const AuditSettings& settings);
/// ||uv||_{B^s} / (||u||_inf ||v||_{B^s} + ||v||_inf ||u||_{B^s}).
AuditResult product_audit(const AuditSettings& settings);
/// ||uv||_{B^{s-2}} / (||u||_{B^{s-1}} ||v||_{B^{s-2}}).
AuditResult low_regularity_product_audit(const AuditSettings& settings);

// ---------------------------------------------------------------------------
// CSV output

void write_lemma31_csv(std::ostream& os, const Lemma31Result& r);
void write_prop31_csv(std::ostream& os, const Prop31Result& r);
void write_hoelder_csv(std::ostream& os, const HoelderSweep& r);
void write_lipschitz_csv(std::ostream& os, const LipschitzResult& r);
void write_audit_csv(std::ostream& os, const AuditResult& r);

}  // namespace bep
