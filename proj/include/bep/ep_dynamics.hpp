#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bep/errors.hpp"
#include "bep/field.hpp"
#include "bep/littlewood_paley.hpp"

namespace bep {

/// Physical samples of a velocity field and of its Jacobian, entry i*d + j
/// holding d_j u_i.
struct PhysicalState {
  std::vector<RealBuffer> value;
  std::vector<RealBuffer> jacobian;

  /// Largest pointwise Euclidean speed.
  double max_speed() const;
};

PhysicalState physical_state(const VectorField& u);
/// Pointwise sum of two states on the same grid.
PhysicalState operator+(const PhysicalState& a, const PhysicalState& b);

/// Which parts of B(u, v) = -(u.grad)v + Q(u, v) + R(u, v) to assemble.
enum TermMask : unsigned { kConvective = 1u, kNonlocalQ = 2u, kNonlocalR = 4u, kAllTerms = 7u };

using StatePair = std::pair<const PhysicalState*, const PhysicalState*>;

/// Sum over pairs (a, b) of the selected terms of B(a, b). All products are
/// formed in physical space, transformed once and dealiased.
VectorField assemble_bilinear(std::span<const StatePair> pairs, const GridPtr& grid, unsigned mask = kAllTerms);

/// (u.grad) v, component i = sum_k u_k d_k v_i.
VectorField convective(const VectorField& u, const VectorField& v);
/// -(1 - Lap)^{-1} div M with
/// M = Gu Gv + Gu Gv^T - Gu^T Gv - (div u) Gv + (1/2)(Gu : Gv) I, (G)_{ij} = d_j u_i,
/// and the divergence taken along rows.
VectorField q_bilinear(const VectorField& u, const VectorField& v);
/// -(1 - Lap)^{-1} ((div u) v + (grad u)^T . v), ((grad u)^T . v)_i = sum_j d_i u_j v_j.
VectorField r_bilinear(const VectorField& u, const VectorField& v);
/// Q(u, v) + R(u, v) - (u.grad) v.
VectorField bilinear(const VectorField& u, const VectorField& v);
/// P(u) = Q(u, u) + R(u, u).
VectorField nonlocal_p(const VectorField& u);
/// P(u) - (u.grad) u.
VectorField rhs(const VectorField& u);

/// ||(1 - Lap) rhs(u) + u.grad m + (grad u)^T m + (div u) m||_2 / ||u.grad m||_2
/// with m = (1 - Lap) u; zero for u = 0.
double momentum_residual(const VectorField& u);

/// One classical RK4 step on rhs. Throws SolverError on CFL >= 1 or
/// non-finite output, std::invalid_argument for dt <= 0.
VectorField step_rk4(const VectorField& u, double dt);

/// dt = min(cfl * dx_min / max(velocity_floor, max|u0|), dt_max, horizon / min_steps).
struct TimeStepPolicy {
  double cfl = 0.25;
  double velocity_floor = 1.0;
  double dt_max = 0.0;  // <= 0 disables the cap
  int min_steps = 1;
};

double choose_time_step(const VectorField& u0, const TimeStepPolicy& policy, double horizon);

struct NormRecord {
  double t = 0.0;
  double besov_s = 0.0;          // ||u(t)||_{B^s_{p,r}}
  double besov_s_diff = 0.0;     // ||u(t) - u0||_{B^s_{p,r}}
  double besov_sm1_diff = 0.0;   // ||u(t) - u0||_{B^{s-1}_{p,r}}
  double besov_sm2_diff = 0.0;   // ||u(t) - u0||_{B^{s-2}_{p,r}}
  double besov_sm2_w = 0.0;      // ||w||_{B^{s-2}_{p,r}}, w = u(t) - u0 - t*rhs(u0)
  double besov_sm2_w_inf = 0.0;  // ||w||_{B^{s-2}_{p,inf}}
  double hermitian_defect = 0.0; // max |c(k) - conj c(-k)| / max |c|
  double cfl = 0.0;              // CFL number of the last step taken
};

/// Fields handed to a solve observer at every recorded time.
struct SampleView {
  double t;
  const VectorField& u0;
  const VectorField& increment;  // u(t) - u0
  const VectorField& w;          // u(t) - u0 - t*rhs(u0)
};

struct SolveOptions {
  double growth_guard = 4.0;
  bool store_snapshots = true;
  /// Throw SolverError on a terminal diagnostic; otherwise return the partial trace.
  bool throw_on_abort = true;
  std::function<void(const SampleView&)> observer;
};

struct SolveTrace {
  enum class Status { completed, cfl_violation, growth_guard, non_finite };

  std::vector<double> times;
  std::vector<VectorField> snapshots;
  std::vector<NormRecord> norm_log;
  double dt = 0.0;
  std::vector<double> cfl_log;
  Status status = Status::completed;
  std::string diagnostic;
  std::size_t steps = 0;
};

/// Integrates u_t = rhs(u) from u0 to `horizon` with RK4 and fixed step dt,
/// landing exactly on each sample time. The state is advanced in the form
/// z = u - u0 - t*rhs(u0), which reproduces the RK4 iterates for u while
/// keeping the small increments at full relative precision.
/// Throws std::invalid_argument for sample times outside [0, horizon] or dt <= 0.
SolveTrace solve(const VectorField& u0, double horizon, double dt, std::vector<double> sample_times,
                 const BesovIndex& idx, const LPSymbols& sym, const SolveOptions& options = {});

/// Columns t, besov_s, besov_sm1_diff, besov_sm2_w, cfl.
void write_trace_csv(std::ostream& os, const SolveTrace& trace);

}  // namespace bep
