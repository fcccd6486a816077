#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include <tbb/task_arena.h>

#include "bep/errors.hpp"
#include "bep/field_io.hpp"
#include "bep/harness.hpp"
#include "bep/oracles.hpp"
#include "bep/random_fields.hpp"
#include "bep/spectral_ops.hpp"

namespace bep {

namespace {

double max_rel(const SpectralField& a, const SpectralField& b) {
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff = std::max(diff, std::abs(a[i] - b[i]));
    scale = std::max({scale, std::abs(a[i]), std::abs(b[i])});
  }
  return scale > 0.0 ? diff / scale : diff;
}

double max_rel(const VectorField& a, const VectorField& b) {
  double worst = 0.0;
  for (int i = 0; i < a.components(); ++i) worst = std::max(worst, max_rel(a[i], b[i]));
  return worst;
}

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(4) << std::scientific << x;
  return os.str();
}

std::string num(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

PropertyResult below(std::string name, double value, double tol) {
  return {std::move(name), value < tol, "measured " + sci(value) + ", tolerance " + sci(tol)};
}

GridPtr torus(int d, std::size_t n) {
  return make_grid(d, std::vector<double>(d, 2.0 * std::numbers::pi), std::vector<std::size_t>(d, n));
}

/// Writes `csv` and a whitespace-separated copy of its first `numeric` columns.
void emit(const std::filesystem::path& dir, const std::string& stem, const std::string& csv, int numeric) {
  std::ofstream(dir / (stem + ".csv")) << csv;
  std::ofstream dat(dir / (stem + ".dat"));
  std::istringstream lines(csv);
  std::string line;
  bool header = true;
  while (std::getline(lines, line)) {
    std::istringstream cells(line);
    std::string cell, row;
    for (int k = 0; k < numeric && std::getline(cells, cell, ','); ++k) row += (k ? " " : "") + cell;
    dat << (header ? "# " : "") << row << '\n';
    header = false;
  }
}

}  // namespace

std::vector<PropertyResult> selfcheck(const ExperimentConfig& cfg) {
  std::vector<PropertyResult> out;
  std::mt19937_64 rng(cfg.seed);

  {
    const auto g = torus(2, 16);
    const SpectralField u = random_band_limited(g, 1.0, rng);
    const RealBuffer x = to_physical(u);
    out.push_back(below("spectral round trip", max_rel(to_spectral(g, x), u), 1e-13));
    double worst = 0.0;
    for (int a = 0; a < 2; ++a) worst = std::max(worst, max_rel(partial_derivative(u, a), oracle::derivative(u, a)));
    out.push_back(below("derivative multiplier", worst, 1e-15));
    out.push_back(below("helmholtz inverse", max_rel(helmholtz_inverse(u), oracle::helmholtz_inverse(u)), 1e-15));
  }
  {
    const auto g = torus(2, 8);
    const SpectralField u = random_band_limited(g, 1.0, rng);
    const SpectralField v = random_band_limited(g, 1.0, rng);
    out.push_back(below("dealiased product", max_rel(pointwise_product(u, v), oracle::convolve(u, v)), 1e-12));
  }
  {
    const auto g = torus(2, 64);
    const LPSymbols sym = build_lp_symbols(g);
    double partition = 0.0, symbol = 0.0;
    for_each_frequency(*g, [&](std::size_t flat, std::span<const double> xi) {
      const double r = std::hypot(xi[0], xi[1]);
      double sum = 0.0;
      for (int j = -1; j <= sym.j_max(); ++j) {
        sum += sym.block(j, flat);
        symbol = std::max(symbol, std::abs(sym.block(j, flat) - oracle::block_symbol(j, r)));
      }
      partition = std::max(partition, std::abs(sum - 1.0));
    });
    out.push_back(below("partition of unity", partition, 1e-14));
    out.push_back(below("block symbols", symbol, 1e-14));
    const SpectralField u = random_band_limited(g, 1.0, rng);
    double worst = 0.0;
    for (int j = -1; j <= sym.j_max(); ++j) worst = std::max(worst, max_rel(dyadic_block(u, j, sym), oracle::dyadic_block(u, j)));
    out.push_back(below("dyadic blocks", worst, 1e-13));
  }
  {
    const double L = 2400.0;
    auto axis = make_grid(1, {L}, {1024});
    const BumpProfile b = build_bump(axis);
    double worst = 0.0;
    for (std::size_t k = 0; k < 60; k += 3) {
      worst = std::max(worst, std::abs(b.phys_samples[k] - oracle::bump_value(axis->coordinate(0, k))));
    }
    out.push_back(below("bump samples", worst, 1e-10));
    SpectralField phi(axis);
    for (std::size_t i = 0; i < axis->total(); ++i) phi[i] = b.hat_samples[i] / L;
    const double expect = oracle::bump_l2_norm();
    out.push_back(below("bump L2 norm", std::abs(lp_norm(phi, 2.0) - expect) / expect, 1e-10));
  }
  {
    const double L = aligned_box_length(cfg.q);
    auto grid = make_grid(2, {L, L}, {resolving_axis_size(8, cfg.q), cfg.transverse});
    const LPSymbols sym = build_lp_symbols(grid);
    const BumpProfile bump = build_bump(make_grid(1, {L}, {cfg.transverse}), cfg.decay_tol);
    double leak = 0.0, keep = 0.0;
    for (int n = 4; n <= 7; ++n) {
      const SpectralField f = make_fn(grid, n, bump);
      const double norm = f.coefficient_norm();
      for (int j = -1; j <= sym.j_max(); ++j) {
        const SpectralField b = dyadic_block(f, j, sym);
        if (j == n) {
          keep = std::max(keep, max_rel(b, f));
        } else {
          leak = std::max(leak, b.coefficient_norm() / norm);
        }
      }
    }
    out.push_back(below("f_n localization (j != n)", leak, 1e-12));
    out.push_back(below("f_n localization (j = n)", keep, 1e-12));
    const VectorField u0 = make_u0(grid, DatumSpec{cfg.idx, 3, 7, std::nullopt}, bump);
    double defect = 0.0;
    for (int n = 4; n <= 7; ++n) defect = std::max(defect, commutator_decomposition_check(u0, n, sym, cfg.idx.p).defect);
    out.push_back(below("commutator identity", defect, 1e-12));
  }
  {
    const auto g = torus(2, 8);
    const LPSymbols sym = build_lp_symbols(g);
    const VectorField v = random_band_limited_vector(g, 1.0, rng);
    const SpectralField f = random_band_limited(g, 1.0, rng);
    double worst = 0.0;
    for (int j = -1; j <= sym.j_max(); ++j) worst = std::max(worst, max_rel(commutator(v, f, j, sym), oracle::commutator(v, f, j)));
    out.push_back(below("commutator vs oracle", worst, 1e-12));
    const VectorField u = random_band_limited_vector(g, 1.0, rng);
    out.push_back(below("convective vs oracle", max_rel(convective(u, v), oracle::convective(u, v)), 1e-12));
    out.push_back(below("Q vs oracle", max_rel(q_bilinear(u, v), oracle::q_bilinear(u, v)), 1e-12));
    out.push_back(below("R vs oracle", max_rel(r_bilinear(u, v), oracle::r_bilinear(u, v)), 1e-12));
    const VectorField w = random_band_limited_vector(g, 1.0, rng);
    out.push_back(below("bilinearity", max_rel(bilinear(2.0 * u + w, v), 2.0 * bilinear(u, v) + bilinear(w, v)), 1e-13));
  }
  {
    double worst = 0.0;
    for (int d : {2, 3}) {
      const auto g = torus(d, d == 2 ? 32 : 16);
      for (int k = 0; k < 3; ++k) worst = std::max(worst, momentum_residual(random_band_limited_vector(g, 1.0, rng)));
    }
    out.push_back(below("momentum residual", worst, 1e-10));
  }
  {
    const auto g = torus(2, 16);
    VectorField u0 = random_band_limited_vector(g, 0.6, rng);
    u0 *= 0.5 / u0.max_abs();
    auto integrate = [&](int steps) {
      VectorField u = u0;
      for (int k = 0; k < steps; ++k) u = step_rk4(u, 0.2 / steps);
      return u;
    };
    const VectorField a = integrate(4), b = integrate(8), c = integrate(16);
    const double ratio = (a - b).coefficient_norm() / (b - c).coefficient_norm();
    out.push_back({"RK4 order", ratio >= 13.0 && ratio <= 19.0, "Richardson ratio " + num(ratio) + ", band [13, 19]"});
  }
  {
    AuditSettings st;
    st.scale_lo = cfg.audit_scale_lo;
    st.scale_hi = cfg.audit_scale_hi;
    st.samples = cfg.audit_samples;
    st.seed = cfg.seed;
    st.idx = cfg.idx;
    const AuditResult comm = commutator_audit(st);
    std::filesystem::create_directories(cfg.output_dir);
    auto save = [&](const AuditResult& a) {
      std::ostringstream csv;
      write_audit_csv(csv, a);
      emit(cfg.output_dir, "audit_" + a.name, csv.str(), 2);
    };
    save(comm);
    out.push_back({"commutator estimate bounded", comm.spread < 10.0, "max/min constant " + num(comm.spread) + " < 10"});
    for (const AuditResult& a : {product_audit(st), low_regularity_product_audit(st)}) {
      save(a);
      const double first = a.rows.front().constant;
      double worst = 0.0;
      for (const auto& row : a.rows) worst = std::max(worst, row.constant / first);
      out.push_back({a.name + " estimate bounded", worst <= 10.0, "max C(K)/C(2^" + std::to_string(st.scale_lo) + ") " + num(worst) + " <= 10"});
    }
  }
  return out;
}

namespace {

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

void verdict(std::ostream& out, const std::string& name, bool pass, const std::string& detail) {
  out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
}

std::string fit_text(const ScalingFit& fit) { return "slope " + num(fit.slope) + ", max_dev " + num(fit.max_dev); }

int run_selfcheck(const ExperimentConfig& cfg, std::ostream& out) {
  bool ok = true;
  for (const auto& p : selfcheck(cfg)) {
    verdict(out, p.name, p.pass, p.detail);
    ok = ok && p.pass;
  }
  return ok ? kExitPass : kExitPropertyFailure;
}

DatumSpec datum_spec(const ExperimentConfig& cfg) { return {cfg.idx, cfg.n_min, cfg.n_max, cfg.single_n}; }

int run_lemma31(const ExperimentConfig& cfg, Cache& cache, std::ostream& out) {
  const Lattice lat = datum_lattice(cfg, cfg.n_max + 1, cache);
  const DatumSpec spec = datum_spec(cfg);
  const VectorField u0 = make_u0(lat.grid, spec, lat.bump);
  const Lemma31Result r = lemma31_lower_bound(u0, spec, lat.bump, lat.sym, cfg.lemma_n_lo, cfg.lemma_n_hi);
  std::ostringstream csv;
  write_lemma31_csv(csv, r);
  emit(cfg.output_dir, "lemma31", csv.str(), 8);
  out << "lemma31: c0 = " << sci(r.center.c0) << ", delta = " << num(r.center.delta) << ", c = " << sci(r.c)
      << ", C = " << sci(r.C) << '\n';
  bool ratios = true;
  std::optional<int> from;
  for (const auto& row : r.rows) {
    ratios = ratios && row.ratio >= row.ratio_bound;
    if (row.ratio < row.ratio_bound) {
      from.reset();
    } else if (!from) {
      from = row.n;
    }
  }
  out << "lemma31: lower bound holds from n = " << (from ? std::to_string(*from) : std::string("none")) << '\n';
  const double target = 1.0 - cfg.idx.s;
  const bool slope_ok = r.rows.size() >= 3 && within(r.fit.slope, target, 0.1) && r.fit.max_dev < 0.15;
  verdict(out, "lemma31 exponent", slope_ok, fit_text(r.fit) + ", target " + num(target) + " +- 0.1");
  verdict(out, "lemma31 sin term dominance", ratios, "sin/cos >= 2^{n-1} c / C for every n");
  return slope_ok && ratios ? kExitPass : kExitPropertyFailure;
}

int run_prop31(const ExperimentConfig& cfg, Cache& cache, std::ostream& out) {
  const Lattice lat = datum_lattice(cfg, cfg.n_max + 1, cache);
  const VectorField u0 = make_u0(lat.grid, datum_spec(cfg), lat.bump);
  const double t_max = *std::max_element(cfg.prop_times.begin(), cfg.prop_times.end());
  const double dt = choose_time_step(u0, cfg.policy, t_max);
  const Prop31Result r = prop31_slopes(u0, cfg.idx, lat.sym, cfg.prop_times, dt);
  const Prop31Result half = prop31_slopes(u0, cfg.idx, lat.sym, cfg.prop_times, dt / 2);
  const double change = prop31_relative_change(r, half);
  std::ostringstream csv;
  write_prop31_csv(csv, r);
  emit(cfg.output_dir, "prop31", csv.str(), 4);
  out << "prop31: dt = " << sci(dt) << ", steps = " << r.steps << ", ||u0||_B^s = " << sci(r.u0_norm)
      << ", ||P(u0)||_B^s_inf = " << sci(r.p_norm_inf) << ", commutator bound = " << sci(r.commutator_bound) << '\n';
  const bool d_ok = r.diff_fit && within(r.diff_fit->slope, 1.0, 0.1);
  const bool w_ok = r.w_fit && within(r.w_fit->slope, 2.0, 0.15);
  verdict(out, "prop31 difference slope", d_ok, r.diff_fit ? fit_text(*r.diff_fit) + ", target 1 +- 0.1" : "zero norms");
  verdict(out, "prop31 remainder slope", w_ok, r.w_fit ? fit_text(*r.w_fit) + ", target 2 +- 0.15" : "zero norms");
  verdict(out, "prop31 dt halving", change < 1e-6, "relative change " + sci(change) + " < 1e-6");
  return d_ok && w_ok && change < 1e-6 ? kExitPass : kExitPropertyFailure;
}

int run_lipschitz(const ExperimentConfig& cfg, Cache& cache, std::ostream& out) {
  const Lattice lat = datum_lattice(cfg, cfg.n_max + 1, cache);
  const VectorField u0 = make_u0(lat.grid, datum_spec(cfg), lat.bump);
  const double t_max = *std::max_element(cfg.lip_times.begin(), cfg.lip_times.end());
  const double dt = choose_time_step(u0, cfg.policy, t_max);
  const LipschitzResult r = lipschitz_constant_growth(u0, cfg.idx, lat.sym, cfg.lip_n_lo, cfg.lip_n_hi, cfg.lip_times, dt);
  std::ostringstream csv;
  write_lipschitz_csv(csv, r);
  emit(cfg.output_dir, "lipschitz", csv.str(), 6);
  out << "lipschitz: dt = " << sci(dt) << ", c = " << sci(r.c) << ", C = " << sci(r.C)
      << ", slope of the full norm = " << sci(r.full_slope) << '\n';
  bool bounds = true;
  for (const auto& row : r.rows) bounds = bounds && row.bound_ok;
  const bool slope_ok = r.rows.size() >= 3 && within(r.fit.slope, 1.0, 0.15) && r.fit.max_dev < 0.15;
  verdict(out, "lipschitz growth exponent", slope_ok, fit_text(r.fit) + ", target 1 +- 0.15");
  verdict(out, "lipschitz lower bound", bounds, "r_n >= c n^-2 2^n - C for every n");
  return slope_ok && bounds ? kExitPass : kExitPropertyFailure;
}

int run_hoelder(const ExperimentConfig& cfg, Cache& cache, std::ostream& out) {
  const LatticeFactory factory = [&](int n) { return datum_lattice(cfg, n, cache); };
  const HoelderSweep r = hoelder_ratio_sweep(factory, cfg.idx, cfg.alphas, cfg.hoelder_n_lo, cfg.hoelder_n_hi, cfg.hoelder);
  std::ostringstream csv;
  write_hoelder_csv(csv, r);
  emit(cfg.output_dir, "hoelder", csv.str(), 9);
  int feasible = 0;
  for (const auto& rec : r.records) {
    out << "hoelder: n = " << rec.n << ", alpha = " << rec.alpha << ", t_n = " << num(rec.t_n);
    if (rec.feasible) {
      ++feasible;
      out << ", Q = " << sci(rec.Q) << ", dt check " << sci(rec.dt_check) << '\n';
    } else {
      out << ", infeasible: " << rec.note << '\n';
    }
  }
  if (!r.fit) {
    out << "hoelder: fewer than 3 feasible n for alpha = " << cfg.alphas.front() << '\n';
    return kExitInfeasible;
  }
  const bool ok = r.monotone && r.fit->slope > 0.0;
  verdict(out, "hoelder quotient increasing", ok, "linear slope " + sci(r.fit->slope) + ", monotone " + (r.monotone ? "yes" : "no"));
  return ok ? kExitPass : kExitPropertyFailure;
}

int run_solve(const ExperimentConfig& cfg, Cache& cache, std::ostream& out) {
  const Lattice lat = datum_lattice(cfg, cfg.n_max + 1, cache);
  const DatumSpec spec = datum_spec(cfg);
  const VectorField u0 = make_u0(lat.grid, spec, lat.bump);
  const double dt = choose_time_step(u0, cfg.policy, cfg.horizon);
  SolveOptions opt;
  opt.growth_guard = cfg.growth_guard;
  opt.throw_on_abort = false;
  const SolveTrace trace = solve(u0, cfg.horizon, dt, cfg.sample_times, cfg.idx, lat.sym, opt);
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  emit(cfg.output_dir, "trace", csv.str(), 5);
  for (std::size_t k = 0; k < trace.snapshots.size(); ++k) {
    write_field(cfg.output_dir / ("snapshot_" + std::to_string(k) + ".bepf"), trace.snapshots[k]);
  }
  nlohmann::json prov = datum_provenance(*lat.grid, spec, lat.bump);
  prov["dt"] = dt;
  prov["steps"] = trace.steps;
  prov["snapshot_times"] = trace.times;
  write_provenance(cfg.output_dir / "provenance.json", prov);
  out << "solve: dt = " << sci(dt) << ", steps = " << trace.steps << ", snapshots = " << trace.snapshots.size() << '\n';
  if (trace.status != SolveTrace::Status::completed) {
    out << "solve: aborted: " << trace.diagnostic << '\n';
    return kExitInfeasible;
  }
  return kExitPass;
}

int run_norms(const ExperimentConfig& cfg, Cache& cache, std::ostream& out) {
  if (cfg.norm_fields.empty()) throw ConfigError("config: norms needs norms.fields (one file per component)");
  std::vector<SpectralField> comps;
  for (const auto& path : cfg.norm_fields) comps.push_back(read_field(path));
  for (const auto& c : comps) require_same_grid(c.grid(), comps.front().grid(), "norms");
  const VectorField u(std::move(comps));
  const LPSymbols sym = cache.symbols(u.grid_ptr());
  const auto rows = block_profile(u, cfg.idx, sym);
  std::ostringstream csv;
  write_block_profile_csv(csv, rows);
  emit(cfg.output_dir, "norms", csv.str(), 4);
  out << std::setprecision(17) << "norms: B^" << cfg.idx.s << "_{" << cfg.idx.p << "," << cfg.idx.r
      << "} = " << besov_norm(u, cfg.idx, sym) << '\n';
  return kExitPass;
}

}  // namespace

int run(const std::string& command, const ExperimentConfig& cfg, std::ostream& out) {
  int code = kExitPass;
  tbb::task_arena arena(cfg.threads);
  arena.execute([&] {
    try {
      std::filesystem::create_directories(cfg.output_dir);
      std::ofstream(cfg.output_dir / "effective_config.ini") << effective_config(cfg);
      Cache cache(resolve_cache_dir(cfg));
      if (command == "selfcheck") {
        code = run_selfcheck(cfg, out);
      } else if (command == "lemma31") {
        code = run_lemma31(cfg, cache, out);
      } else if (command == "prop31") {
        code = run_prop31(cfg, cache, out);
      } else if (command == "hoelder") {
        code = run_hoelder(cfg, cache, out);
      } else if (command == "lipschitz") {
        code = run_lipschitz(cfg, cache, out);
      } else if (command == "solve") {
        code = run_solve(cfg, cache, out);
      } else if (command == "norms") {
        code = run_norms(cfg, cache, out);
      } else {
        throw ConfigError("unknown command '" + command + "'");
      }
    } catch (const ConfigError& e) {
      out << "error [" << command << "]: " << e.what() << '\n';
      code = kExitConfigError;
    } catch (const InfeasibleError& e) {
      out << "infeasible [" << command << "]: " << e.what() << '\n';
      code = kExitInfeasible;
    } catch (const SolverError& e) {
      out << "solver [" << command << "]: " << e.what() << '\n';
      code = kExitInfeasible;
    } catch (const std::exception& e) {
      out << "failure [" << command << "]: " << e.what() << '\n';
      code = kExitPropertyFailure;
    }
  });
  return code;
}

}  // namespace bep
