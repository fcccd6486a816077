#include "bep/ep_dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "bep/spectral_ops.hpp"
#include "detail/fft.hpp"

namespace bep {

namespace {

constexpr int kMaxDim = 3;

void require_velocity(const VectorField& u, const char* where) {
  if (u.components() != u.grid().dim()) {
    throw std::invalid_argument(std::string(where) + ": component count must equal the grid dimension");
  }
  if (u.grid().dim() > kMaxDim) {
    throw std::invalid_argument(std::string(where) + ": dimension above 3 is not supported");
  }
}

}  // namespace

double PhysicalState::max_speed() const {
  if (value.empty()) return 0.0;
  const std::size_t n = value.front().size();
  double best = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double s = 0.0;
    for (const auto& c : value) s += c[p] * c[p];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

PhysicalState physical_state(const VectorField& u) {
  require_velocity(u, "physical_state");
  const Grid& g = u.grid();
  const int d = g.dim();
  PhysicalState st;
  st.value.assign(d, RealBuffer(g.total()));
  st.jacobian.assign(d * d, RealBuffer(g.total()));

  // Spectral sources in output order: values, then d_j u_i at i*d + j.
  const int count = d + d * d;
  auto source = [&](int k) -> SpectralField {
    if (k < d) return u[k];
    const int e = k - d;
    return partial_derivative(u[e / d], e % d);
  };
  auto target = [&](int k) -> double* { return k < d ? st.value[k].data() : st.jacobian[k - d].data(); };

  ComplexBuffer work;
  for (int k = 0; k < count; k += 2) {
    const SpectralField a = source(k);
    if (k + 1 < count) {
      const SpectralField b = source(k + 1);
      detail::spectral_pair_to_real(g, a.coeffs().data(), b.coeffs().data(), target(k), target(k + 1), work);
    } else {
      detail::spectral_pair_to_real(g, a.coeffs().data(), nullptr, target(k), nullptr, work);
    }
  }
  return st;
}

PhysicalState operator+(const PhysicalState& a, const PhysicalState& b) {
  if (a.value.size() != b.value.size() || a.value.empty() || a.value[0].size() != b.value[0].size()) {
    throw GridMismatch("PhysicalState: operands differ in shape");
  }
  PhysicalState out = a;
  for (std::size_t i = 0; i < out.value.size(); ++i) {
    for (std::size_t p = 0; p < out.value[i].size(); ++p) out.value[i][p] += b.value[i][p];
  }
  for (std::size_t i = 0; i < out.jacobian.size(); ++i) {
    for (std::size_t p = 0; p < out.jacobian[i].size(); ++p) out.jacobian[i][p] += b.jacobian[i][p];
  }
  return out;
}

VectorField assemble_bilinear(std::span<const StatePair> pairs, const GridPtr& grid, unsigned mask) {
  const Grid& g = *grid;
  const int d = g.dim();
  if (d > kMaxDim) throw std::invalid_argument("assemble_bilinear: dimension above 3 is not supported");
  const std::size_t n = g.total();
  for (const auto& [a, b] : pairs) {
    if (static_cast<int>(a->value.size()) != d || static_cast<int>(b->value.size()) != d ||
        a->value[0].size() != n || b->value[0].size() != n) {
      throw GridMismatch("assemble_bilinear: state does not match the grid");
    }
  }
  const bool want_c = mask & kConvective;
  const bool want_m = mask & kNonlocalQ;
  const bool want_r = mask & kNonlocalR;

  std::vector<RealBuffer> conv(want_c ? d : 0, RealBuffer(n, 0.0));
  std::vector<RealBuffer> mom(want_m ? d * d : 0, RealBuffer(n, 0.0));
  std::vector<RealBuffer> rvec(want_r ? d : 0, RealBuffer(n, 0.0));

  for (const auto& [sa, sb] : pairs) {
    const PhysicalState& A = *sa;
    const PhysicalState& B = *sb;
    for (std::size_t p = 0; p < n; ++p) {
      std::array<double, kMaxDim> u{}, v{};
      std::array<double, kMaxDim * kMaxDim> gu{}, gv{};
      for (int i = 0; i < d; ++i) {
        u[i] = A.value[i][p];
        v[i] = B.value[i][p];
      }
      for (int e = 0; e < d * d; ++e) {
        gu[e] = A.jacobian[e][p];
        gv[e] = B.jacobian[e][p];
      }
      double div_u = 0.0;
      for (int i = 0; i < d; ++i) div_u += gu[i * d + i];
      if (want_c) {
        for (int i = 0; i < d; ++i) {
          double s = 0.0;
          for (int k = 0; k < d; ++k) s += u[k] * gv[i * d + k];
          conv[i][p] += s;
        }
      }
      if (want_m) {
        double contract = 0.0;
        for (int e = 0; e < d * d; ++e) contract += gu[e] * gv[e];
        for (int i = 0; i < d; ++i) {
          for (int j = 0; j < d; ++j) {
            double s = -div_u * gv[i * d + j];
            for (int k = 0; k < d; ++k) {
              s += gu[i * d + k] * gv[k * d + j] + gu[i * d + k] * gv[j * d + k] - gu[k * d + i] * gv[k * d + j];
            }
            if (i == j) s += 0.5 * contract;
            mom[i * d + j][p] += s;
          }
        }
      }
      if (want_r) {
        for (int i = 0; i < d; ++i) {
          double s = div_u * v[i];
          for (int j = 0; j < d; ++j) s += gu[j * d + i] * v[j];
          rvec[i][p] += s;
        }
      }
    }
  }

  // Every product goes through one paired transform and is folded into the
  // output with its multiplier: -1 (convective), -i xi_j / (1 + |xi|^2) (M_ij),
  // -1 / (1 + |xi|^2) (R_i).
  enum class Role { conv, mom, rvec };
  struct Job {
    const RealBuffer* data;
    Role role;
    int i;
    int j;
  };
  std::vector<Job> jobs;
  for (int i = 0; i < static_cast<int>(conv.size()); ++i) jobs.push_back({&conv[i], Role::conv, i, 0});
  for (int e = 0; e < static_cast<int>(mom.size()); ++e) jobs.push_back({&mom[e], Role::mom, e / d, e % d});
  for (int i = 0; i < static_cast<int>(rvec.size()); ++i) jobs.push_back({&rvec[i], Role::rvec, i, 0});

  VectorField out(grid, d);
  std::vector<double> nyquist(d);
  for (int a = 0; a < d; ++a) nyquist[a] = -static_cast<double>(g.size(a) / 2) * g.frequency_step(a);

  auto fold = [&](const Job& job, std::span<const cplx> c) {
    auto dst = out[job.i].coeffs();
    for_each_frequency(g, [&](std::size_t flat, std::span<const double> xi) {
      double k2 = 0.0;
      for (double x : xi) k2 += x * x;
      const double h = 1.0 / (1.0 + k2);
      switch (job.role) {
        case Role::conv:
          dst[flat] -= c[flat];
          break;
        case Role::mom:
          if (xi[job.j] != nyquist[job.j]) dst[flat] -= cplx(0.0, xi[job.j] * h) * c[flat];
          break;
        case Role::rvec:
          dst[flat] -= h * c[flat];
          break;
      }
    });
  };

  ComplexBuffer work;
  ComplexBuffer ca(n), cb(n);
  for (std::size_t k = 0; k < jobs.size(); k += 2) {
    const bool pair = k + 1 < jobs.size();
    detail::real_pair_to_spectral(g, jobs[k].data->data(), pair ? jobs[k + 1].data->data() : nullptr, ca.data(),
                                  pair ? cb.data() : nullptr, work);
    fold(jobs[k], ca);
    if (pair) fold(jobs[k + 1], cb);
  }
  for (int i = 0; i < d; ++i) dealias_in_place(out[i]);
  return out;
}

namespace {

VectorField assemble_fields(const VectorField& u, const VectorField& v, unsigned mask) {
  require_velocity(u, "bilinear");
  require_velocity(v, "bilinear");
  require_same_grid(u.grid(), v.grid(), "bilinear");
  const PhysicalState a = physical_state(u);
  const PhysicalState b = physical_state(v);
  const StatePair pair{&a, &b};
  return assemble_bilinear(std::span<const StatePair>(&pair, 1), u.grid_ptr(), mask);
}

VectorField assemble_self(const VectorField& u, unsigned mask, double* speed = nullptr) {
  require_velocity(u, "rhs");
  const PhysicalState a = physical_state(u);
  if (speed) *speed = a.max_speed();
  const StatePair pair{&a, &a};
  return assemble_bilinear(std::span<const StatePair>(&pair, 1), u.grid_ptr(), mask);
}

}  // namespace

VectorField convective(const VectorField& u, const VectorField& v) {
  return -1.0 * assemble_fields(u, v, kConvective);
}

VectorField q_bilinear(const VectorField& u, const VectorField& v) { return assemble_fields(u, v, kNonlocalQ); }

VectorField r_bilinear(const VectorField& u, const VectorField& v) { return assemble_fields(u, v, kNonlocalR); }

VectorField bilinear(const VectorField& u, const VectorField& v) { return assemble_fields(u, v, kAllTerms); }

VectorField nonlocal_p(const VectorField& u) { return assemble_self(u, kNonlocalQ | kNonlocalR); }

VectorField rhs(const VectorField& u) { return assemble_self(u, kAllTerms); }

double momentum_residual(const VectorField& u) {
  require_velocity(u, "momentum_residual");
  const int d = u.components();
  const VectorField m = helmholtz_forward(u);
  const VectorField mt = helmholtz_forward(rhs(u));
  const SpectralField div_u = divergence(u);
  VectorField transport(u.grid_ptr(), d);
  VectorField residual = mt;
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) transport[i] += pointwise_product(u[k], partial_derivative(m[i], k));
    residual[i] += transport[i];
    for (int j = 0; j < d; ++j) residual[i] += pointwise_product(partial_derivative(u[j], i), m[j]);
    residual[i] += pointwise_product(div_u, m[i]);
  }
  const double scale = transport.coefficient_norm();
  return scale > 0.0 ? residual.coefficient_norm() / scale : residual.coefficient_norm();
}

namespace {

std::string describe_step(double t, double dt) {
  std::ostringstream os;
  os << std::setprecision(17) << "t = " << t << ", dt = " << dt;
  return os.str();
}

}  // namespace

VectorField step_rk4(const VectorField& u, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("step_rk4: dt must be positive and finite");
  double speed = 0.0;
  const VectorField k1 = assemble_self(u, kAllTerms, &speed);
  const double cfl = speed * dt / u.grid().min_spacing();
  if (!(cfl < 1.0)) {
    throw SolverError(SolverError::Kind::cfl_violation,
                      "step_rk4: CFL number " + std::to_string(cfl) + " >= 1 (" + describe_step(0.0, dt) + ")");
  }
  const VectorField k2 = rhs(u + (0.5 * dt) * k1);
  const VectorField k3 = rhs(u + (0.5 * dt) * k2);
  const VectorField k4 = rhs(u + dt * k3);
  VectorField out = u;
  out.axpy(dt / 6.0, k1).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4);
  if (!out.all_finite()) throw SolverError(SolverError::Kind::non_finite, "step_rk4: non-finite coefficients");
  return out;
}

double choose_time_step(const VectorField& u0, const TimeStepPolicy& policy, double horizon) {
  if (!(policy.cfl > 0.0) || policy.cfl >= 1.0) throw std::invalid_argument("choose_time_step: cfl must lie in (0, 1)");
  if (policy.min_steps < 1) throw std::invalid_argument("choose_time_step: min_steps must be >= 1");
  const double speed = std::max(policy.velocity_floor, physical_state(u0).max_speed());
  double dt = speed > 0.0 ? policy.cfl * u0.grid().min_spacing() / speed : std::numeric_limits<double>::infinity();
  if (policy.dt_max > 0.0) dt = std::min(dt, policy.dt_max);
  if (horizon > 0.0) dt = std::min(dt, horizon / policy.min_steps);
  if (!std::isfinite(dt)) throw std::invalid_argument("choose_time_step: no finite step for a zero field and horizon");
  return dt;
}

namespace {

double hermitian_defect(const VectorField& u) {
  double defect = 0.0;
  const Grid& g = u.grid();
  for (const auto& c : u) {
    auto a = c.coeffs();
    for (std::size_t flat = 0; flat < a.size(); ++flat) {
      defect = std::max(defect, std::abs(a[flat] - std::conj(a[g.mirror_flat(flat)])));
    }
  }
  const double scale = u.max_abs();
  return scale > 0.0 ? defect / scale : defect;
}

SolverError::Kind error_kind(SolveTrace::Status s) {
  switch (s) {
    case SolveTrace::Status::cfl_violation:
      return SolverError::Kind::cfl_violation;
    case SolveTrace::Status::growth_guard:
      return SolverError::Kind::growth_guard;
    default:
      return SolverError::Kind::non_finite;
  }
}

}  // namespace

SolveTrace solve(const VectorField& u0, double horizon, double dt, std::vector<double> sample_times,
                 const BesovIndex& idx, const LPSymbols& sym, const SolveOptions& options) {
  require_velocity(u0, "solve");
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("solve: horizon must be finite and >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("solve: dt must be positive and finite");
  for (double t : sample_times) {
    if (!(t >= 0.0) || t > horizon) {
      throw std::invalid_argument("solve: sample time " + std::to_string(t) + " outside [0, horizon]");
    }
  }
  sample_times.push_back(0.0);
  sample_times.push_back(horizon);
  std::sort(sample_times.begin(), sample_times.end());
  sample_times.erase(std::unique(sample_times.begin(), sample_times.end()), sample_times.end());

  const GridPtr& grid = u0.grid_ptr();
  const int d = u0.components();
  const double dx = grid->min_spacing();

  SolveTrace trace;
  trace.dt = dt;

  const PhysicalState s0 = physical_state(u0);
  const StatePair self{&s0, &s0};
  const VectorField ut0 = assemble_bilinear(std::span<const StatePair>(&self, 1), grid, kAllTerms);
  const double b0 = besov_norm(u0, idx, sym);

  auto abort = [&](SolveTrace::Status status, std::string message) {
    trace.status = status;
    trace.diagnostic = std::move(message);
    if (options.throw_on_abort) throw SolverError(error_kind(status), "solve: " + trace.diagnostic);
  };

  // dz/dt = B(u0, v) + B(v, u0 + v) with v = t*ut0 + z.
  auto derivative = [&](double t, const VectorField& z, double* speed) {
    VectorField v = z;
    v.axpy(t, ut0);
    const PhysicalState sv = physical_state(v);
    const PhysicalState sw = s0 + sv;
    if (speed) *speed = sw.max_speed();
    const std::array<StatePair, 2> pairs{StatePair{&s0, &sv}, StatePair{&sv, &sw}};
    return assemble_bilinear(pairs, grid, kAllTerms);
  };

  double last_cfl = 0.0;
  auto record = [&](double t, const VectorField& z) {
    VectorField incr = z;
    incr.axpy(t, ut0);
    const VectorField u = u0 + incr;
    const auto bu = block_norms(u, idx.p, sym);
    const auto bi = block_norms(incr, idx.p, sym);
    const auto bz = block_norms(z, idx.p, sym);
    NormRecord rec;
    rec.t = t;
    rec.besov_s = besov_from_blocks(bu, idx.s, idx.r);
    rec.besov_s_diff = besov_from_blocks(bi, idx.s, idx.r);
    rec.besov_sm1_diff = besov_from_blocks(bi, idx.s - 1.0, idx.r);
    rec.besov_sm2_diff = besov_from_blocks(bi, idx.s - 2.0, idx.r);
    rec.besov_sm2_w = besov_from_blocks(bz, idx.s - 2.0, idx.r);
    rec.besov_sm2_w_inf = besov_from_blocks(bz, idx.s - 2.0, std::numeric_limits<double>::infinity());
    rec.hermitian_defect = hermitian_defect(u);
    rec.cfl = last_cfl;
    trace.times.push_back(t);
    trace.norm_log.push_back(rec);
    if (options.observer) options.observer(SampleView{t, u0, incr, z});
    if (options.store_snapshots) trace.snapshots.push_back(u);
    if (!std::isfinite(rec.besov_s)) {
      abort(SolveTrace::Status::non_finite, "non-finite norm at t = " + std::to_string(t));
      return false;
    }
    if (rec.besov_s > options.growth_guard * b0) {
      std::ostringstream os;
      os << std::setprecision(6) << "growth guard: ||u(t)|| = " << rec.besov_s << " exceeds " << options.growth_guard
         << " * ||u0|| = " << options.growth_guard * b0 << " at t = " << t;
      abort(SolveTrace::Status::growth_guard, os.str());
      return false;
    }
    return true;
  };

  VectorField z(grid, d);
  double t = 0.0;
  std::size_t next = 0;
  if (!record(0.0, z)) return trace;
  ++next;
  while (next < sample_times.size()) {
    const double target = sample_times[next];
    const double h = (target - t <= dt * (1.0 + 1e-9)) ? target - t : dt;
    const double t_end = (h == target - t) ? target : t + h;
    double speed = 0.0;
    const VectorField k1 = derivative(t, z, &speed);
    last_cfl = speed * h / dx;
    trace.cfl_log.push_back(last_cfl);
    if (!(last_cfl < 1.0)) {
      abort(SolveTrace::Status::cfl_violation,
            "CFL number " + std::to_string(last_cfl) + " >= 1 at " + describe_step(t, h));
      return trace;
    }
    const VectorField k2 = derivative(t + 0.5 * h, z + (0.5 * h) * k1, nullptr);
    const VectorField k3 = derivative(t + 0.5 * h, z + (0.5 * h) * k2, nullptr);
    const VectorField k4 = derivative(t + h, z + h * k3, nullptr);
    z.axpy(h / 6.0, k1).axpy(h / 3.0, k2).axpy(h / 3.0, k3).axpy(h / 6.0, k4);
    ++trace.steps;
    t = t_end;
    if (!z.all_finite()) {
      abort(SolveTrace::Status::non_finite, "non-finite coefficients at " + describe_step(t, h));
      return trace;
    }
    if (t == target) {
      if (!record(t, z)) return trace;
      ++next;
    }
  }
  return trace;
}

void write_trace_csv(std::ostream& os, const SolveTrace& trace) {
  os << "t,besov_s,besov_sm1_diff,besov_sm2_w,cfl\n" << std::setprecision(17);
  for (const auto& r : trace.norm_log) {
    os << r.t << ',' << r.besov_s << ',' << r.besov_sm1_diff << ',' << r.besov_sm2_w << ',' << r.cfl << '\n';
  }
}

}  // namespace bep
