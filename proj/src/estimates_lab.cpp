#include "bep/estimates_lab.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <stdexcept>

#include <tbb/parallel_for.h>

#include "bep/errors.hpp"
#include "bep/random_fields.hpp"
#include "bep/spectral_ops.hpp"

namespace bep {

ScalingFit fit_line(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("fit_line: abscissae and ordinates differ in length");
  if (xs.size() < 3) throw std::invalid_argument("fit_line: at least 3 points are required");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw std::invalid_argument("fit_line: non-finite data point");
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_line: all abscissae coincide");
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    fit.max_dev = std::max(fit.max_dev, std::abs(ys[i] - (fit.slope * xs[i] + fit.intercept)));
  }
  fit.xs = std::move(xs);
  fit.ys = std::move(ys);
  return fit;
}

double slope_through_origin(std::span<const double> ts, std::span<const double> ys) {
  if (ts.size() != ys.size() || ts.empty()) throw std::invalid_argument("slope_through_origin: bad sample sizes");
  double sty = 0.0, stt = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    sty += ts[i] * ys[i];
    stt += ts[i] * ts[i];
  }
  if (!(stt > 0.0)) throw std::invalid_argument("slope_through_origin: all times are zero");
  return sty / stt;
}

namespace {

void require_terms(const DatumSpec& spec, int n_lo, int n_hi, const char* where) {
  const auto terms = spec.terms();
  if (n_lo > n_hi) throw std::invalid_argument(std::string(where) + ": empty n range");
  for (int n = n_lo; n <= n_hi; ++n) {
    if (std::find(terms.begin(), terms.end(), n) == terms.end()) {
      throw std::invalid_argument(std::string(where) + ": n = " + std::to_string(n) + " is not a datum term");
    }
  }
}

double transport_norm(const VectorField& u0, int n, const LPSymbols& sym, double p) {
  return lp_norm(convective(u0, dyadic_block(u0, n, sym)), p);
}

}  // namespace

Lemma31Result lemma31_lower_bound(const VectorField& u0, const DatumSpec& spec, const BumpProfile& bump,
                                  const LPSymbols& sym, int n_lo, int n_hi) {
  require_terms(spec, n_lo, n_hi, "lemma31_lower_bound");
  require_same_grid(u0.grid(), sym.grid(), "lemma31_lower_bound");
  const GridPtr& grid = u0.grid_ptr();
  const double p = spec.idx.p;
  const double s = spec.idx.s;
  const SpectralField& f = u0[0];

  Lemma31Result out;
  out.center = center_value_bound(f, bump, spec);
  const SubBox cube = SubBox::centered_cube(grid->dim(), out.center.delta);

  const int count = n_hi - n_lo + 1;
  out.rows.resize(count);
  tbb::parallel_for(0, count, [&](int k) {
    const int n = n_lo + k;
    Lemma31Row& row = out.rows[k];
    row.n = n;
    row.value = transport_norm(u0, n, sym, p);
    row.scaled = double(n) * n * row.value;
    row.log2_scaled = std::log2(row.scaled);
    const double w = datum_weight(n, s);
    const double a = carrier_frequency(n);
    const SpectralField sin_part = fn_sin_part(grid, n, bump);
    row.cos_upper = lp_norm(pointwise_product(f, fn_cos_part(grid, n, bump)), p);
    row.cos_norm = w * row.cos_upper;
    row.sin_norm = w * a * lp_norm(pointwise_product(f, sin_part), p);
    row.sin_lower = out.center.c0 * a * lp_norm(sin_part, p, cube);
    row.ratio = row.sin_norm / row.cos_norm;
    row.dominant = row.sin_norm >= row.cos_norm ? "sin" : "cos";
  });

  out.c = std::numeric_limits<double>::infinity();
  std::vector<double> xs, ys;
  for (const auto& row : out.rows) {
    out.c = std::min(out.c, row.sin_lower / std::ldexp(1.0, row.n));
    out.C = std::max(out.C, row.cos_upper);
    xs.push_back(row.n);
    ys.push_back(row.log2_scaled);
  }
  for (auto& row : out.rows) row.ratio_bound = std::ldexp(1.0, row.n - 1) * out.c / out.C;
  if (count >= 3) out.fit = fit_line(std::move(xs), std::move(ys));
  return out;
}

CommutatorCheck commutator_decomposition_check(const VectorField& u0, int n, const LPSymbols& sym, double p) {
  require_same_grid(u0.grid(), sym.grid(), "commutator_decomposition_check");
  const VectorField conv = convective(u0, u0);
  const VectorField lhs = dyadic_block(conv, n, sym);
  const VectorField transport = convective(u0, dyadic_block(u0, n, sym));
  std::vector<SpectralField> comps;
  for (int i = 0; i < u0.components(); ++i) comps.push_back(commutator(u0, u0[i], n, sym));
  const VectorField comm(std::move(comps));
  const VectorField resid = lhs - transport - comm;
  const double err = resid.coefficient_norm();
  const double scale = conv.coefficient_norm();
  const double block_scale = lhs.coefficient_norm();
  CommutatorCheck out;
  out.n = n;
  out.defect = scale > 0.0 ? err / scale : err;
  out.block_defect = block_scale > 0.0 ? err / block_scale : err;
  out.commutator = lp_norm(comm, p);
  out.transport = lp_norm(transport, p);
  out.ratio = out.transport > 0.0 ? out.commutator / out.transport : 0.0;
  return out;
}

std::vector<double> commutator_profile(const VectorField& u0, const LPSymbols& sym, double p) {
  require_same_grid(u0.grid(), sym.grid(), "commutator_profile");
  const VectorField conv = convective(u0, u0);
  std::vector<double> out(sym.j_max() + 2, 0.0);
  tbb::parallel_for(-1, sym.j_max() + 1, [&](int j) {
    const VectorField comm = dyadic_block(conv, j, sym) - convective(u0, dyadic_block(u0, j, sym));
    out[j + 1] = lp_norm(comm, p);
  });
  return out;
}

namespace {

std::vector<double> positive_sorted_times(std::vector<double> ts, std::size_t min_count, const char* where) {
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (ts.size() < min_count) {
    throw std::invalid_argument(std::string(where) + ": at least " + std::to_string(min_count) + " distinct times required");
  }
  if (!(ts.front() > 0.0)) throw std::invalid_argument(std::string(where) + ": times must be positive");
  return ts;
}

std::optional<ScalingFit> log_fit(std::span<const double> ts, std::span<const double> ys) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ys[i] > 0.0)) return std::nullopt;
    lx.push_back(std::log2(ts[i]));
    ly.push_back(std::log2(ys[i]));
  }
  return fit_line(std::move(lx), std::move(ly));
}

}  // namespace

Prop31Result prop31_slopes(const VectorField& u0, const BesovIndex& idx, const LPSymbols& sym,
                           std::vector<double> t_grid, double dt) {
  t_grid = positive_sorted_times(std::move(t_grid), 4, "prop31_slopes");
  const double horizon = t_grid.back();
  SolveOptions opt;
  opt.store_snapshots = false;
  const SolveTrace trace = solve(u0, horizon, dt, t_grid, idx, sym, opt);

  Prop31Result out;
  out.dt = dt;
  out.steps = trace.steps;
  std::vector<double> ts, d1, w2;
  for (const auto& rec : trace.norm_log) {
    if (rec.t == 0.0) continue;
    out.rows.push_back({rec.t, rec.besov_sm1_diff, rec.besov_sm2_w, rec.besov_sm2_w_inf});
    ts.push_back(rec.t);
    d1.push_back(rec.besov_sm1_diff);
    w2.push_back(rec.besov_sm2_w);
  }
  out.diff_fit = log_fit(ts, d1);
  out.w_fit = log_fit(ts, w2);
  out.p_norm_inf = besov_from_blocks(block_norms(nonlocal_p(u0), idx.p, sym), idx.s,
                                     std::numeric_limits<double>::infinity());
  const auto comm = commutator_profile(u0, sym, idx.p);
  for (std::size_t k = 0; k < comm.size(); ++k) {
    out.commutator_bound = std::max(out.commutator_bound, std::exp2(idx.s * (static_cast<double>(k) - 1.0)) * comm[k]);
  }
  out.u0_norm = besov_norm(u0, idx, sym);
  return out;
}

double prop31_relative_change(const Prop31Result& a, const Prop31Result& b) {
  if (a.rows.size() != b.rows.size()) throw std::invalid_argument("prop31_relative_change: row counts differ");
  double worst = 0.0;
  auto rel = [](double x, double y) {
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale > 0.0 ? std::abs(x - y) / scale : 0.0;
  };
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    worst = std::max({worst, rel(a.rows[i].diff_sm1, b.rows[i].diff_sm1), rel(a.rows[i].w_sm2, b.rows[i].w_sm2),
                      rel(a.rows[i].w_sm2_inf, b.rows[i].w_sm2_inf)});
  }
  return worst;
}

double hoelder_time(int n, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("hoelder_time: alpha must lie in (0, 1)");
  const double base = std::pow(static_cast<double>(n), 3) * std::ldexp(1.0, -n);
  return std::pow(base, 1.0 / (1.0 - alpha));
}

std::size_t resolving_axis_size(int n, int q) {
  std::size_t size = 64;
  while (static_cast<double>(size / 3) < q * (std::ldexp(1.0, n) + 0.36)) size *= 2;
  return size;
}

HoelderSweep hoelder_ratio_sweep(const LatticeFactory& lattice_for, const BesovIndex& idx,
                                 std::span<const double> alphas, int n_lo, int n_hi, const HoelderSettings& settings) {
  if (alphas.empty()) throw std::invalid_argument("hoelder_ratio_sweep: no alpha given");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("hoelder_ratio_sweep: alpha must lie in (0, 1)");
  }
  HoelderSweep out;
  // Cells run one after another: a single lattice near the top of the band
  // already takes most of the memory budget.
  for (int n = n_lo; n <= n_hi; ++n) {
    std::vector<HoelderRecord> cells;
    bool any_feasible_time = false;
    for (double alpha : alphas) {
      HoelderRecord rec;
      rec.n = n;
      rec.alpha = alpha;
      rec.t_n = hoelder_time(n, alpha);
      if (rec.t_n > settings.horizon) {
        rec.note = "t_n exceeds the validated horizon";
      } else {
        any_feasible_time = true;
      }
      cells.push_back(rec);
    }
    if (any_feasible_time) {
      try {
        const Lattice lat = lattice_for(n);
        const DatumSpec spec{idx, settings.n_min_datum, n, std::nullopt};
        spec.validate(*lat.grid, lat.sym);
        const VectorField u0 = make_u0(lat.grid, spec, lat.bump);
        SolveOptions opt;
        opt.store_snapshots = false;
        for (auto& rec : cells) {
          if (rec.t_n > settings.horizon) continue;
          const double dt = choose_time_step(u0, settings.policy, rec.t_n);
          const SolveTrace a = solve(u0, rec.t_n, dt, {rec.t_n}, idx, lat.sym, opt);
          const SolveTrace b = solve(u0, rec.t_n, dt / 2, {rec.t_n}, idx, lat.sym, opt);
          rec.dt = dt;
          rec.steps = a.steps;
          rec.D = a.norm_log.back().besov_s_diff;
          const double D2 = b.norm_log.back().besov_s_diff;
          rec.dt_check = std::abs(rec.D - D2) / std::max(std::abs(D2), std::numeric_limits<double>::min());
          rec.Q = hoelder_quotient(rec.D, rec.t_n, rec.alpha);
          if (rec.dt_check > settings.dt_check_tol) {
            rec.note = "dt halving changes D by more than the tolerance";
          } else {
            rec.feasible = true;
          }
        }
      } catch (const InfeasibleError& e) {
        for (auto& rec : cells) {
          if (rec.note.empty()) rec.note = e.what();
        }
      } catch (const SolverError& e) {
        for (auto& rec : cells) {
          if (rec.note.empty()) rec.note = e.what();
        }
      } catch (const std::invalid_argument& e) {
        for (auto& rec : cells) {
          if (rec.note.empty()) rec.note = e.what();
        }
      }
    }
    for (auto& rec : cells) out.records.push_back(std::move(rec));
  }

  const double first = alphas.front();
  std::vector<double> ns, qs;
  for (const auto& rec : out.records) {
    if (rec.alpha == first && rec.feasible) {
      ns.push_back(rec.n);
      qs.push_back(rec.Q);
    }
  }
  out.monotone = ns.size() >= 2;
  for (std::size_t i = 1; i < qs.size(); ++i) out.monotone = out.monotone && qs[i] > qs[i - 1];
  if (ns.size() >= 3) out.fit = fit_line(std::move(ns), std::move(qs));
  return out;
}

LipschitzResult lipschitz_constant_growth(const VectorField& u0, const BesovIndex& idx, const LPSymbols& sym,
                                          int n_lo, int n_hi, std::vector<double> t_window, double dt) {
  t_window = positive_sorted_times(std::move(t_window), 2, "lipschitz_constant_growth");
  if (n_lo > n_hi || n_lo < 0 || n_hi > sym.j_max()) {
    throw std::invalid_argument("lipschitz_constant_growth: n range outside [0, j_max]");
  }
  const double s = idx.s;
  const int count = n_hi - n_lo + 1;
  std::vector<std::vector<double>> block_series(count);
  std::vector<double> full_series, ts;
  SolveOptions opt;
  opt.store_snapshots = false;
  opt.observer = [&](const SampleView& view) {
    if (view.t == 0.0) return;
    const auto blocks = block_norms(view.increment, idx.p, sym);
    for (int k = 0; k < count; ++k) {
      const int n = n_lo + k;
      block_series[k].push_back(std::exp2(n * s) * blocks[n + 1]);
    }
    full_series.push_back(besov_from_blocks(blocks, s, idx.r));
    ts.push_back(view.t);
  };
  solve(u0, t_window.back(), dt, t_window, idx, sym, opt);

  LipschitzResult out;
  out.dt = dt;
  out.full_slope = slope_through_origin(ts, full_series);

  const auto comm = commutator_profile(u0, sym, idx.p);
  const auto p_blocks = block_norms(nonlocal_p(u0), idx.p, sym);
  out.c = std::numeric_limits<double>::infinity();
  std::vector<double> values(count);
  tbb::parallel_for(0, count, [&](int k) { values[k] = transport_norm(u0, n_lo + k, sym, idx.p); });
  for (int k = 0; k < count; ++k) {
    const int n = n_lo + k;
    out.c = std::min(out.c, double(n) * n * std::exp2(n * (s - 1.0)) * values[k]);
    out.C = std::max(out.C, std::exp2(n * s) * (comm[n + 1] + p_blocks[n + 1]));
  }

  std::vector<double> xs, ys;
  bool positive = true;
  for (int k = 0; k < count; ++k) {
    LipschitzRow row;
    row.n = n_lo + k;
    row.r_n = slope_through_origin(ts, block_series[k]);
    row.scaled = double(row.n) * row.n * row.r_n;
    row.log2_scaled = row.scaled > 0.0 ? std::log2(row.scaled) : -std::numeric_limits<double>::infinity();
    row.lower_bound = out.c * std::ldexp(1.0, row.n) / (double(row.n) * row.n) - out.C;
    row.bound_ok = row.r_n >= row.lower_bound;
    positive = positive && row.scaled > 0.0;
    xs.push_back(row.n);
    ys.push_back(row.log2_scaled);
    out.rows.push_back(row);
  }
  if (positive && count >= 3) out.fit = fit_line(std::move(xs), std::move(ys));
  return out;
}

namespace {

struct AuditCell {
  GridPtr grid;
  LPSymbols sym;
};

AuditCell audit_cell(int e) {
  const std::size_t K = std::size_t{1} << e;
  auto grid = make_grid(2, {2.0 * std::numbers::pi, 2.0 * std::numbers::pi}, {8 * K, 16});
  return {grid, build_lp_symbols(grid)};
}

SpectralField audit_field(const GridPtr& grid, int e, std::mt19937_64& rng) {
  const std::int64_t K = std::int64_t{1} << e;
  const ModeFilter keep = [K](std::span<const std::int64_t> k) {
    const auto k1 = std::abs(k[0]);
    return 2 * k1 >= K && k1 <= K && std::abs(k[1]) <= 2;
  };
  SpectralField f = random_field(grid, keep, rng);
  f *= 1.0 / f.max_abs();
  return f;
}

double max_pointwise_norm(const std::vector<RealBuffer>& comps) {
  double best = 0.0;
  for (std::size_t p = 0; p < comps.front().size(); ++p) {
    double s = 0.0;
    for (const auto& c : comps) s += c[p] * c[p];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double sup_norm(const SpectralField& f) {
  const RealBuffer v = to_physical(f);
  double best = 0.0;
  for (double x : v) best = std::max(best, std::abs(x));
  return best;
}

/// Per-scale maximum of `ratio(cell, rng)` over the samples.
template <class Ratio>
AuditResult run_audit(std::string name, const AuditSettings& st, Ratio&& ratio) {
  if (st.scale_lo > st.scale_hi || st.scale_lo < 2 || st.samples < 1) {
    throw std::invalid_argument("audit: invalid scale range or sample count");
  }
  const int scales = st.scale_hi - st.scale_lo + 1;
  std::vector<double> values(static_cast<std::size_t>(scales) * st.samples, 0.0);
  tbb::parallel_for(0, scales, [&](int k) {
    const int e = st.scale_lo + k;
    const AuditCell cell = audit_cell(e);
    for (int i = 0; i < st.samples; ++i) {
      std::seed_seq seq{st.seed, static_cast<std::uint64_t>(e), static_cast<std::uint64_t>(i)};
      std::mt19937_64 rng(seq);
      values[static_cast<std::size_t>(k) * st.samples + i] = ratio(cell, e, rng);
    }
  });
  AuditResult out;
  out.name = std::move(name);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int k = 0; k < scales; ++k) {
    AuditRow row{st.scale_lo + k, 0.0};
    for (int i = 0; i < st.samples; ++i) row.constant = std::max(row.constant, values[static_cast<std::size_t>(k) * st.samples + i]);
    lo = std::min(lo, row.constant);
    hi = std::max(hi, row.constant);
    out.rows.push_back(row);
  }
  out.spread = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return out;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

AuditResult commutator_audit(const AuditSettings& st) {
  const BesovIndex idx = st.idx;
  return run_audit("commutator", st, [&](const AuditCell& cell, int e, std::mt19937_64& rng) {
    std::vector<SpectralField> vc;
    vc.push_back(audit_field(cell.grid, e, rng));
    vc.push_back(audit_field(cell.grid, e, rng));
    const VectorField v(std::move(vc));
    const SpectralField f = audit_field(cell.grid, e, rng);

    double numerator = 0.0;
    for (int j = -1; j <= cell.sym.j_max(); ++j) {
      numerator = std::max(numerator, std::exp2(j * idx.s) * lp_norm(commutator(v, f, j, cell.sym), idx.p));
    }
    const PhysicalState sv = physical_state(v);
    const double grad_v_inf = max_pointwise_norm(sv.jacobian);
    const double grad_f_inf = max_pointwise_norm(to_physical(gradient(f)));
    std::vector<SpectralField> partials;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) partials.push_back(partial_derivative(v[i], j));
    }
    const VectorField grad_v(std::move(partials));
    const double f_b = besov_from_blocks(block_norms(f, idx.p, cell.sym), idx.s, kInf);
    const double gv_b = besov_from_blocks(block_norms(grad_v, idx.p, cell.sym), idx.s - 1.0, kInf);
    return numerator / (grad_v_inf * f_b + grad_f_inf * gv_b);
  });
}

AuditResult product_audit(const AuditSettings& st) {
  const BesovIndex idx = st.idx;
  return run_audit("product", st, [&](const AuditCell& cell, int e, std::mt19937_64& rng) {
    const SpectralField u = audit_field(cell.grid, e, rng);
    const SpectralField v = audit_field(cell.grid, e, rng);
    const double uv = besov_norm(pointwise_product(u, v), idx, cell.sym);
    return uv / (sup_norm(u) * besov_norm(v, idx, cell.sym) + sup_norm(v) * besov_norm(u, idx, cell.sym));
  });
}

AuditResult low_regularity_product_audit(const AuditSettings& st) {
  const BesovIndex idx = st.idx;
  return run_audit("low_regularity_product", st, [&](const AuditCell& cell, int e, std::mt19937_64& rng) {
    const SpectralField u = audit_field(cell.grid, e, rng);
    const SpectralField v = audit_field(cell.grid, e, rng);
    const double uv = besov_norm(pointwise_product(u, v), idx.with_s(idx.s - 2.0), cell.sym);
    return uv / (besov_norm(u, idx.with_s(idx.s - 1.0), cell.sym) * besov_norm(v, idx.with_s(idx.s - 2.0), cell.sym));
  });
}

void write_lemma31_csv(std::ostream& os, const Lemma31Result& r) {
  os << "n,value,n2_value,log2_n2_value,cos_norm,sin_norm,ratio,ratio_bound,dominant\n" << std::setprecision(17);
  for (const auto& row : r.rows) {
    os << row.n << ',' << row.value << ',' << row.scaled << ',' << row.log2_scaled << ',' << row.cos_norm << ','
       << row.sin_norm << ',' << row.ratio << ',' << row.ratio_bound << ',' << row.dominant << '\n';
  }
}

void write_prop31_csv(std::ostream& os, const Prop31Result& r) {
  os << "t,diff_sm1,w_sm2,w_sm2_inf\n" << std::setprecision(17);
  for (const auto& row : r.rows) os << row.t << ',' << row.diff_sm1 << ',' << row.w_sm2 << ',' << row.w_sm2_inf << '\n';
}

void write_hoelder_csv(std::ostream& os, const HoelderSweep& r) {
  os << "n,alpha,t_n,D,Q,feasible,dt,steps,dt_check,note\n" << std::setprecision(17);
  for (const auto& rec : r.records) {
    os << rec.n << ',' << rec.alpha << ',' << rec.t_n << ',' << rec.D << ',' << rec.Q << ',' << (rec.feasible ? 1 : 0)
       << ',' << rec.dt << ',' << rec.steps << ',' << rec.dt_check << ",\"" << rec.note << "\"\n";
  }
}

void write_lipschitz_csv(std::ostream& os, const LipschitzResult& r) {
  os << "n,r_n,n2_r_n,log2_n2_r_n,lower_bound,bound_ok\n" << std::setprecision(17);
  for (const auto& row : r.rows) {
    os << row.n << ',' << row.r_n << ',' << row.scaled << ',' << row.log2_scaled << ',' << row.lower_bound << ','
       << (row.bound_ok ? 1 : 0) << '\n';
  }
}

void write_audit_csv(std::ostream& os, const AuditResult& r) {
  os << "scale_exp,constant\n" << std::setprecision(17);
  for (const auto& row : r.rows) os << row.scale_exp << ',' << row.constant << '\n';
}

}  // namespace bep
