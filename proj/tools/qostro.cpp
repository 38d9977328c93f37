// qostro: q-calculus Ostrowski inequality toolkit.
//
// Subcommands re-run every numeric fact the library is built on: the
// verification table, the counterexample to the disproved bound, CSV data
// for the bound envelope and the witness functions, sharpness probes, and
// the q-analogue of the midpoint rule.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcalc/extremal.hpp"
#include "qcalc/inequalities.hpp"
#include "qcalc/oracle.hpp"
#include "qcalc/qcore.hpp"

namespace {

using namespace qcalc;

constexpr double kInvalid = std::numeric_limits<double>::quiet_NaN();

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct RunConfig {
  double q = 0.5;
  double a = 0.0;
  double b = 1.0;
  double tol = 1e-12;
  double log_tol = 1e-9;
  int grid = 1000;
  std::string out;

  QParam qparam() const { return QParam(q); }
  QInterval interval() const { return QInterval(a, b); }
};

// Runs fn against --out (or stdout) and forwards its exit code.
int with_output(const std::string& path, const std::function<int(std::ostream&)>& fn) {
  if (path.empty()) return fn(std::cout);
  std::ofstream file(path);
  if (!file) {
    std::cerr << "error: cannot open output file '" << path << "'\n";
    return 2;
  }
  return fn(file);
}

// ---------------------------------------------------------------------------
// verify

struct TableRow {
  std::string id;
  double lhs;
  double rhs;
  bool pass;
};

class CheckTable {
 public:
  // Passes when lhs <= rhs.
  void expect_le(const std::string& id, double lhs, double rhs) {
    rows_.push_back({id, lhs, rhs, lhs <= rhs});
  }
  // Passes when lhs > rhs (expected violations, positive gaps).
  void expect_gt(const std::string& id, double lhs, double rhs) {
    rows_.push_back({id, lhs, rhs, lhs > rhs});
  }
  // Boolean outcome with the two relevant numbers attached.
  void expect_flag(const std::string& id, bool ok, double lhs, double rhs) {
    rows_.push_back({id, lhs, rhs, ok});
  }

  int print(std::ostream& os) const {
    os << pad("check", 46) << pad("lhs", 25) << pad("rhs", 25)
       << pad("margin", 25) << "status\n";
    std::size_t passed = 0;
    for (const TableRow& r : rows_) {
      os << pad(r.id, 46) << pad(g17(r.lhs), 25) << pad(g17(r.rhs), 25)
         << pad(g17(r.rhs - r.lhs), 25) << (r.pass ? "PASS" : "FAIL") << "\n";
      if (r.pass) ++passed;
    }
    os << "verify: " << passed << "/" << rows_.size() << " checks passed\n";
    return passed == rows_.size() ? 0 : 1;
  }

 private:
  static std::string pad(const std::string& s, std::size_t w) {
    return s.size() >= w ? s + " " : s + std::string(w - s.size(), ' ');
  }

  std::vector<TableRow> rows_;
};

PiecewiseLinearFn random_plfn(std::mt19937& rng, double a, double b) {
  std::uniform_int_distribution<int> n_mid(0, 6);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> value(-1.0, 1.0);

  std::vector<double> ts{a, b};
  const int extra = n_mid(rng);
  for (int i = 0; i < extra; ++i) ts.push_back(a + (b - a) * unit(rng));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  std::vector<double> ys(ts.size());
  for (double& y : ys) y = value(rng);
  return PiecewiseLinearFn(ts, ys);
}

// A sup-norm estimate is exact only up to final-digit rounding; bump it so it
// is a valid upper bound before feeding it back as a certified norm.
double safe_norm(const SupNormEstimate& e) {
  return e.estimate * (1.0 + 1e-9) + 1e-12;
}

int run_verify(const RunConfig& cfg) {
  const QParam q = cfg.qparam();
  const QInterval iv = cfg.interval();
  const QInterval unit(0.0, 1.0);
  const double qv = q.value();
  const double tol = cfg.tol;
  CheckTable table;

  // --- qcore -------------------------------------------------------------
  {
    const PiecewiseLinearFn f({0.0, 0.3, 0.7, 1.0}, {0.2, -0.5, 0.9, 0.1});
    double worst = 0.0;
    for (int i = 0; i <= 2000; ++i) {
      const double t = i / 2000.0;
      const auto& ts = f.abscissae();
      const auto& ys = f.ordinates();
      const auto it = std::upper_bound(ts.begin(), ts.end(), t);
      if (it == ts.begin() || it == ts.end()) continue;  // breakpoint/endpoint
      const std::size_t j = static_cast<std::size_t>(it - ts.begin());
      const double direct =
          ys[j - 1] + (ys[j] - ys[j - 1]) * (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
      worst = std::max(worst, std::abs(f(t) - direct));
    }
    table.expect_le("qcore.plfn_interpolation_identity", worst, 1e-15);
  }

  const double witness_x = (1.0 + qv) / 2.0;
  {
    const LatticeFn f = make_selfsim_witness(witness_x, q);
    double worst_scale = 0.0;
    double worst_quot = 0.0;
    const RealFn fn = [&f](double t) { return f(t); };
    for (int j = 0; j <= 60; ++j) {
      for (double s : {1.0, 0.37, 0.73}) {
        const double t = s * std::pow(qv, j);
        worst_scale = std::max(worst_scale, std::abs(f(qv * t) - qv * f(t)));
        worst_quot =
            std::max(worst_quot, std::abs(q_derivative(fn, t, q, 0.0) - f(t) / t));
      }
    }
    // The witness slopes grow like 2/(1-x) as q -> 1, and the quotient route
    // divides the lerp rounding by (1-q)t; both identities are exact in real
    // arithmetic, so the slack is pure conditioning.
    const double slope = (1.0 + witness_x) / (1.0 - witness_x);
    constexpr double kUlp = 2.3e-16;
    table.expect_le("qcore.selfsim_scaling[f(qt)=qf(t)]", worst_scale,
                    1e-12 + 8.0 * kUlp * slope);
    table.expect_le("qcore.selfsim_derivative_quotient", worst_quot,
                    1e-12 + 8.0 * kUlp * slope / (1.0 - qv));
  }

  {
    const PiecewiseLinearFn f = make_absdev(1, q, iv);
    const RealFn fn = [&f](double t) { return f(t); };
    const double sup = f.max_abs_value();
    const QIntegralResult coarse = q_integral(fn, q, iv, iv.b(), sup, tol);
    const QIntegralResult fine = q_integral(fn, q, iv, iv.b(), sup, tol / 10.0);
    table.expect_le("qcore.truncation_soundness",
                    std::abs(coarse.value - fine.value),
                    tol + tol / 10.0 + 8.0 * 2.3e-16 * std::abs(coarse.value));
  }

  {
    const PiecewiseLinearFn f = make_absdev(1, q, iv);
    const PiecewiseLinearFn g = make_absdev(2, q, iv);
    const double alpha = 2.5, beta = -1.25;
    const RealFn combo = [&](double t) { return alpha * f(t) + beta * g(t); };
    const double sup_combo =
        std::abs(alpha) * f.max_abs_value() + std::abs(beta) * g.max_abs_value();
    const QIntegralResult ic = q_integral(combo, q, iv, iv.b(), sup_combo, tol);
    const QIntegralResult fa = q_integral([&](double t) { return f(t); }, q, iv,
                                          iv.b(), f.max_abs_value(), tol);
    const QIntegralResult ga = q_integral([&](double t) { return g(t); }, q, iv,
                                          iv.b(), g.max_abs_value(), tol);
    // A few ulps of the three values on top of the certified tails; on large
    // intervals the integrals themselves reach 1e5 and the tails alone are
    // finer than binary64 resolution.
    const double ulp_slack =
        16.0 * 2.3e-16 *
        (std::abs(ic.value) + std::abs(alpha * fa.value) + std::abs(beta * ga.value));
    table.expect_le(
        "qcore.q_integral_linearity",
        std::abs(ic.value - alpha * fa.value - beta * ga.value),
        ic.tail_bound + std::abs(alpha) * fa.tail_bound +
            std::abs(beta) * ga.tail_bound + ulp_slack);
  }

  {
    const QIntegralResult r = q_integral([](double t) { return t * t; },
                                         QParam(0.999), unit, 1.0, 1.0, 1e-9);
    table.expect_le("qcore.q_to_1_limit[t^2,q=0.999]",
                    std::abs(r.value - 1.0 / 3.0), 5e-4);
  }

  {
    // Rounding a + q^m (b-a) perturbs the offset by up to half an ulp of a,
    // which reads as a log-domain shift of ~ulp(a)/(2 q^m len |ln q|); the
    // depth is capped where that stays below the membership tolerance. a = 0
    // (the default interval) is exact and runs the full m <= 60.
    int mismatches = 0;
    int tested = 0;
    for (double qq : {0.3, 0.5, 0.6, 0.9, qv}) {
      const QParam qp(qq);
      const double absorb_floor =
          std::abs(iv.a()) * 5e-7 / std::abs(std::log(qq));
      for (int m = 0; m <= 60; ++m) {
        if (std::pow(qq, m) * iv.length() < absorb_floor) break;
        ++tested;
        const auto got = lattice_index_of(lattice_point(iv, qp, m), iv, qp, cfg.log_tol);
        if (!got || *got != m) ++mismatches;
      }
    }
    table.expect_le("qcore.lattice_roundtrip[" + std::to_string(tested) + " points]",
                    mismatches, 0.0);
  }

  // --- inequalities --------------------------------------------------------
  {
    double worst = 0.0;
    for (int m = 0; m <= 60; ++m) {
      worst = std::max(worst,
                       std::abs(lattice_ostrowski_bound(m, q, iv) -
                                (1.0 - qv) * iv.length() * abs_weighted_sum_closed(m, q)));
    }
    table.expect_le("ineq.sum_identity_vs_lattice_bound", worst,
                    1e-13 * std::max(1.0, iv.length()));
  }

  {
    double worst_excess = -1.0;
    for (int dq = 1; dq <= 9; ++dq) {
      const QParam qp(dq / 10.0);
      for (int m = 0; m <= 30; ++m) {
        int K = 1;
        while (oracle::series_abs_weighted_sum(m, qp, K).remainder_bound >= 1e-12) {
          ++K;
        }
        const auto partial = oracle::series_abs_weighted_sum(m, qp, K);
        const double excess = std::abs(abs_weighted_sum_closed(m, qp) - partial.value) -
                              partial.remainder_bound;
        worst_excess = std::max(worst_excess, excess);
      }
    }
    table.expect_le("ineq.closed_form_vs_series_oracle", worst_excess, 0.0);
  }

  {
    // full - lattice = (b-a) 2 q^m (1 - q^(m+1)/(1+q)); strictness lives in
    // the closed form, the subtraction only has to agree with it (for small q
    // the gap drops below one ulp of the bound scale).
    double min_predicted = std::numeric_limits<double>::infinity();
    double min_gap = std::numeric_limits<double>::infinity();
    double worst_dev = 0.0;
    for (int m = 0; m <= 40; ++m) {
      const double x = lattice_point(iv, q, m);
      const double gap =
          full_ostrowski_bound(x, q, iv) - lattice_ostrowski_bound(m, q, iv);
      const double qm = std::pow(qv, m);
      const double predicted = iv.length() * 2.0 * qm * (1.0 - qv * qm / (1.0 + qv));
      min_predicted = std::min(min_predicted, predicted);
      min_gap = std::min(min_gap, gap);
      worst_dev = std::max(worst_dev, std::abs(gap - predicted));
    }
    const double gap_noise =
        16.0 * 2.3e-16 * (std::abs(iv.a()) + std::abs(iv.b()) + iv.length());
    table.expect_flag("ineq.full_bound_dominates_lattice",
                      min_predicted > 0.0 && min_gap >= -gap_noise, min_predicted,
                      0.0);
    table.expect_le("ineq.dominance_gap_matches_closed_form", worst_dev,
                    1e-13 * std::max(1.0, iv.length()) + gap_noise);
  }

  {
    double worst = 0.0;
    for (int i = 1; i <= 99; ++i) {
      const QParam qp(i / 100.0);
      const double at_star = lattice_ostrowski_bound(midpoint_index(qp), qp, unit);
      double best = std::numeric_limits<double>::infinity();
      for (int m = 0; m <= 100; ++m) {
        best = std::min(best, lattice_ostrowski_bound(m, qp, unit));
      }
      worst = std::max(worst, at_star - best);
    }
    table.expect_le("ineq.midpoint_index_minimizes", worst, 1e-12);
  }

  {
    double worst = 0.0;
    for (int m = 0; m <= 40; ++m) {
      const double x = lattice_point(iv, q, m);
      worst = std::max(worst, std::abs(disproved_bound(x, q, iv) -
                                       lattice_ostrowski_bound(m, q, iv)));
    }
    table.expect_le("ineq.disproved_equals_lattice_on_lattice", worst,
                    1e-12 * std::max(1.0, iv.length()));
  }

  {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> unit_dist(0.0, 1.0);
    std::uniform_int_distribution<int> n_dist(0, 20);
    std::uniform_int_distribution<int> m_dist(0, 12);

    // Same resolution cap as the roundtrip row: lattice points past it are
    // not recoverable from the rounded abscissa.
    const double absorb_floor = std::abs(iv.a()) * 5e-7 / std::abs(std::log(qv));
    int m_cap = 12;
    while (m_cap > 0 && std::pow(qv, m_cap) * iv.length() < absorb_floor) --m_cap;

    int mvt_violations = 0;
    int ostrowski_violations = 0;
    for (int i = 0; i < 500; ++i) {
      const PiecewiseLinearFn f = random_plfn(rng, iv.a(), iv.b());
      const RealFn fn = [&f](double t) { return f(t); };
      const double norm = safe_norm(sup_norm_qderiv(f, q));
      const double x = iv.a() + iv.length() * (0.05 + 0.95 * unit_dist(rng));
      // Rounding the comparison point a + q^n (x-a) costs ~ulp(a), which the
      // slopes amplify to norm * ulp; the inequality itself is about the
      // exact point. Zero on the default interval (a = 0 is exact).
      const double eval_noise =
          8.0 * norm * 2.3e-16 * (std::abs(iv.a()) + std::abs(iv.b()));
      const BoundCheckReport mvt = check_mvt(fn, x, n_dist(rng), q, iv, norm);
      if (mvt.lhs > mvt.rhs + eval_noise) ++mvt_violations;
      if (!check_ostrowski(fn, x, q, iv, norm, OstrowskiBound::full(), tol).satisfied) {
        ++ostrowski_violations;
      }
      const int m = std::min(m_dist(rng), m_cap);
      if (!check_ostrowski(fn, lattice_point(iv, q, m), q, iv, norm,
                           OstrowskiBound::lattice(m), tol)
               .satisfied) {
        ++ostrowski_violations;
      }
    }
    table.expect_le("ineq.mvt_soundness[500 random fns]", mvt_violations, 0.0);
    table.expect_le("ineq.ostrowski_soundness[500 random fns]",
                    ostrowski_violations, 0.0);
  }

  {
    // Step function: naive two-point MVT fails off the lattice.
    const RealFn step = [](double t) { return t >= 1.0 ? 1.0 : 0.0; };
    const QInterval wide(0.0, 2.0);
    const double norm = 1.0 / (1.0 - qv);
    const auto pair = naive_mvt_violation_search(step, wide, norm, cfg.grid);
    double excess = -1.0;
    if (pair) {
      excess = std::abs(step(pair->first) - step(pair->second)) -
               norm * std::abs(pair->first - pair->second);
    }
    table.expect_gt("ineq.naive_mvt_violation_found[step fn]", excess, 1e-12);
  }

  {
    const RealFn sq = [](double t) { return t * t; };
    const QParam half(0.5);
    const double c = find_lagrange_witness(sq, 1.0, 1, half, unit, 1e-10);
    const double y = 0.5;
    const double residual =
        std::abs(q_derivative(sq, c, half, 0.0) * (1.0 - y) - (sq(1.0) - sq(y)));
    table.expect_le("ineq.lagrange_witness_residual[t^2,q=1/2]", residual, 1e-10);
  }

  {
    const double mid = (iv.a() + iv.b()) / 2.0;
    table.expect_le("ineq.classical_midpoint_exact",
                    std::abs(classical_ostrowski_bound(mid, iv) - iv.length() / 4.0),
                    0.0);
  }

  // --- the frozen counterexample (q = 1/2 on [0,1]) ------------------------
  {
    const QParam half(0.5);
    const PiecewiseLinearFn cx = make_counterexample();
    const RealFn fn = [&cx](double t) { return cx(t); };

    const QIntegralResult integral =
        q_integral(fn, half, unit, 1.0, cx.max_abs_value(), tol);
    table.expect_le("cx.q_integral_equals_1/6[q=1/2]",
                    std::abs(integral.value - 1.0 / 6.0),
                    integral.tail_bound + 1e-15);

    const SupNormEstimate norm = sup_norm_qderiv(cx, half);
    table.expect_flag("cx.qderiv_norm_is_one",
                      norm.exact && std::abs(norm.estimate - 1.0) <= 1e-12,
                      std::abs(norm.estimate - 1.0), 1e-12);

    table.expect_le("cx.disproved_bound_value_23/75",
                    std::abs(disproved_bound(0.9, half, unit) - 23.0 / 75.0), 1e-14);

    const BoundCheckReport bad =
        check_ostrowski(fn, 0.9, half, unit, 1.0, OstrowskiBound::disproved(), tol);
    table.expect_gt("cx.disproved_bound_is_violated[x=9/10]", bad.lhs,
                    bad.rhs + bad.lhs_tail);

    const BoundCheckReport good =
        check_ostrowski(fn, 0.9, half, unit, 1.0, OstrowskiBound::full(), tol);
    table.expect_le("cx.full_bound_holds[x=9/10]", good.lhs,
                    good.rhs + good.lhs_tail);

    table.expect_le("cx.riemann_integral_is_0.45",
                    std::abs(oracle::riemann_integral(fn, unit, 200000) - 0.45), 1e-6);
  }

  // --- extremal witnesses ---------------------------------------------------
  // Margin rows subtract the certified integral tail, so they stay honest
  // when --tol is loosened; the default tolerance resolves them to ~1e-12.
  {
    double worst = 0.0;
    for (double qq : {0.3, 0.5, 0.7}) {
      const QParam qp(qq);
      for (int m : {0, 1, 2, 5}) {
        const PiecewiseLinearFn f = make_absdev(m, qp, unit);
        const RealFn fn = [&f](double t) { return f(t); };
        const BoundCheckReport r =
            check_ostrowski(fn, lattice_point(unit, qp, m), qp, unit, 1.0,
                            OstrowskiBound::lattice(m), tol);
        worst = std::max(worst, std::abs(r.margin) - r.lhs_tail);
      }
    }
    table.expect_le("ext.lattice_sharpness_equality[absdev]", worst, 1e-10);
  }

  {
    const QParam q06(0.6);
    const LatticeFn f = make_selfsim_witness(0.8, q06);
    const RealFn fn = [&f](double t) { return f(t); };
    const BoundCheckReport r =
        check_ostrowski(fn, 0.8, q06, unit, 1.0, OstrowskiBound::full(), tol);
    table.expect_le("ext.offlattice_sharpness[q=0.6,x=0.8]",
                    std::abs(r.margin) - r.lhs_tail, 1e-10);
  }

  {
    double worst_excess = -1.0;
    for (int dq = 3; dq <= 9; ++dq) {
      const QParam qp(dq / 10.0);
      const double x = (1.0 + qp.value()) / 2.0;
      const LatticeFn fams[] = {make_selfsim_witness(x, qp),
                                make_smoothed_witness(x, qp, 0.2),
                                make_lifted_witness(x, qp, 1.0)};
      for (const LatticeFn& f : fams) {
        const QIntegralResult r = q_integral([&f](double t) { return f(t); }, qp,
                                             unit, 1.0, f.max_abs_value(), tol);
        worst_excess = std::max(
            worst_excess, std::abs(r.value + 1.0 / (1.0 + qp.value())) - r.tail_bound);
      }
    }
    table.expect_le("ext.family_integrals[-1/(1+q)]", worst_excess, 0.0);
  }

  {
    const QParam q06(0.6);
    double worst_margin = 0.0;
    double worst_formula = 0.0;
    double worst_band = 0.0;
    int certify_failures = 0;
    for (double eps : {0.2, 0.05, 0.01}) {
      const LatticeFn f = make_smoothed_witness(0.8, q06, eps);
      const RealFn fn = [&f](double t) { return f(t); };
      const BoundCheckReport r =
          check_ostrowski(fn, 0.8, q06, unit, 1.0, OstrowskiBound::full(), tol);
      worst_margin = std::max(worst_margin, std::abs(r.margin - eps) - r.lhs_tail);
      if (!certify_unit_norm(f, 50)) ++certify_failures;

      const double switch_abscissa = 0.8 * std::pow(0.6, f.eps_switch);
      const double d = q_derivative(fn, switch_abscissa, q06, 0.0);
      const double formula = (1.0 + 0.6 - eps / switch_abscissa) / (1.0 - 0.6);
      worst_formula = std::max(worst_formula, std::abs(d - formula));
      worst_band = std::max(worst_band, std::abs(d) - 1.0);
    }
    table.expect_le("ext.smoothed_margin_equals_eps", worst_margin, 1e-10);
    table.expect_le("ext.smoothed_certify_unit_norm", certify_failures, 0.0);
    table.expect_le("ext.smoothed_switch_derivative_formula", worst_formula, 1e-12);
    table.expect_le("ext.smoothed_switch_derivative_in_band", worst_band, 0.0);

    LatticeFn corrupted = make_smoothed_witness(0.8, q06, 0.2);
    corrupted.eps = 2.0 * corrupted.x + 0.1;  // deliberately inconsistent
    const bool rejected = !certify_unit_norm(corrupted, 50);
    table.expect_flag("ext.certify_rejects_corrupted_eps", rejected,
                      rejected ? 0.0 : 1.0, 0.0);
  }

  {
    const QParam q06(0.6);
    const LatticeFn fx = make_selfsim_witness(0.8, q06);
    const LatticeFn feps = make_smoothed_witness(0.8, q06, 0.2);
    const auto probe_fx =
        q_derivative_at_a([&fx](double t) { return fx(t); }, q06, unit, 60, 1e-6);
    const auto probe_feps =
        q_derivative_at_a([&feps](double t) { return feps(t); }, q06, unit, 60, 1e-6);
    const double spread_floor = 2.0 * std::min(0.8, 1.0 - 0.8) - 1e-9;
    table.expect_flag("ext.selfsim_probe_diverges",
                      !probe_fx.converged && probe_fx.spread >= spread_floor,
                      probe_fx.spread, spread_floor);
    table.expect_flag("ext.smoothed_probe_converges_to_-1",
                      probe_feps.converged && std::abs(probe_feps.limit + 1.0) <= 1e-9,
                      std::abs(probe_feps.limit + 1.0), 1e-9);
  }

  {
    const QParam q06(0.6);
    const LatticeFn g = make_lifted_witness(0.8, q06, 10.0);
    const RealFn fn = [&g](double t) { return g(t); };
    const BoundCheckReport r =
        check_ostrowski(fn, 0.8, q06, unit, 1.0, OstrowskiBound::full(), tol);
    table.expect_gt("ext.lifted_gap_exceeds_full_bound[C=10]", r.lhs,
                    r.rhs + r.lhs_tail);
    // The lifted band |D_q g| <= 1 is sampled at moderate depth; deeper
    // generations are numerically meaningless (values ~C, differences ~t).
    double worst_band = 0.0;
    for (int n = 0; n <= 20; ++n) {
      const double qn = std::pow(0.6, n);
      worst_band = std::max(worst_band, std::abs(q_derivative(fn, qn, q06, 0.0)));
      worst_band = std::max(worst_band, std::abs(q_derivative(fn, 0.8 * qn, q06, 0.0)));
    }
    for (int i = 1; i <= 2000; ++i) {
      worst_band = std::max(worst_band, std::abs(q_derivative(fn, i / 2000.0, q06, 0.0)));
    }
    table.expect_le("ext.lifted_unit_band[sampled]", worst_band, 1.0 + 1e-9);
  }

  {
    const QParam q06(0.6);
    double worst = 0.0;
    for (double x : {0.48, 0.288}) {
      const double gen = std::floor(std::log(x) / std::log(0.6));
      const double xt = x / std::pow(0.6, gen);
      const LatticeFn f = make_selfsim_witness(xt, q06);
      const RealFn fn = [&f](double t) { return f(t); };
      const BoundCheckReport r =
          check_ostrowski(fn, x, q06, unit, 1.0, OstrowskiBound::full(), tol);
      worst = std::max(worst, std::abs(r.margin) - r.lhs_tail);
    }
    table.expect_le("ext.rescaled_witness_attains_bound", worst, 1e-10);
  }

  {
    const QParam q06(0.6);
    const LatticeFn f = make_selfsim_witness(0.8, q06);
    const BoundCheckReport r = check_interpolation_lemma(
        [&f](double t) { return f(t); }, 0.48, 0.6, q06, 257);
    table.expect_flag("ext.interpolation_lemma[selfsim 0.48,0.6]", r.satisfied,
                      r.lhs, r.rhs);
  }

  // --- oracle cross-checks --------------------------------------------------
  {
    const QParam half(0.5);
    const PiecewiseLinearFn cx = make_counterexample();
    const QParam q06(0.6);
    const LatticeFn fx = make_selfsim_witness(0.8, q06);
    const PiecewiseLinearFn ad = make_absdev(1, q, iv);

    double worst_excess = -1.0;
    const auto compare = [&](const RealFn& fn, QParam qp, QInterval dom, double sup) {
      const QIntegralResult adaptive = q_integral(fn, qp, dom, dom.b(), sup, tol);
      const QIntegralResult fixed = oracle::series_q_integral(fn, qp, dom, dom.b(), sup, 80);
      const double ulp_slack =
          8.0 * 2.3e-16 * (std::abs(adaptive.value) + std::abs(fixed.value));
      worst_excess =
          std::max(worst_excess, std::abs(adaptive.value - fixed.value) -
                                     (adaptive.tail_bound + fixed.tail_bound + ulp_slack));
    };
    compare([&cx](double t) { return cx(t); }, half, unit, cx.max_abs_value());
    compare([&fx](double t) { return fx(t); }, q06, unit, fx.max_abs_value());
    compare([&ad](double t) { return ad(t); }, q, iv, ad.max_abs_value());
    table.expect_le("oracle.adaptive_vs_fixed_truncation", worst_excess, 0.0);
  }

  {
    double worst_excess = -1.0;
    for (int j : {2, 3}) {
      const QParam qp(1.0 - std::pow(10.0, -j));
      for (int p : {1, 2, 3}) {
        const RealFn mono = [p](double t) { return std::pow(t, p); };
        const QIntegralResult qi = q_integral(mono, qp, unit, 1.0, 1.0, 1e-9);
        const double riem = oracle::riemann_integral(mono, unit, 200000);
        worst_excess = std::max(worst_excess,
                                std::abs(qi.value - riem) - 3.0 * std::pow(10.0, -j));
      }
    }
    table.expect_le("oracle.q_to_1_matches_riemann", worst_excess, 0.0);
  }

  return with_output(cfg.out, [&](std::ostream& os) { return table.print(os); });
}

// ---------------------------------------------------------------------------
// counterexample

int run_counterexample(const RunConfig& cfg, double x) {
  const QParam half(0.5);
  const QInterval unit(0.0, 1.0);
  if (!unit.contains(x)) {
    std::cerr << "error: --x must lie in [0,1]\n";
    return 2;
  }

  const PiecewiseLinearFn cx = make_counterexample();
  const RealFn fn = [&cx](double t) { return cx(t); };

  const BoundCheckReport bad =
      check_ostrowski(fn, x, half, unit, 1.0, OstrowskiBound::disproved(), cfg.tol);
  const BoundCheckReport good =
      check_ostrowski(fn, x, half, unit, 1.0, OstrowskiBound::full(), cfg.tol);
  const auto m = lattice_index_of(x, unit, half, cfg.log_tol);

  return with_output(cfg.out, [&](std::ostream& os) {
    os << "counterexample: f(t) = t on [0,9/10], -9t+9 on [9/10,1]; q = 1/2 on [0,1]\n";
    os << "x                 = " << g17(x) << (m ? "  (lattice point m=" + std::to_string(*m) + ")" : "  (off-lattice)") << "\n";
    os << "lhs |f(x) - mean| = " << g17(bad.lhs) << "   (integral tail <= " << g17(bad.lhs_tail) << ")\n";
    os << "disproved bound   = " << g17(bad.rhs) << "   -> " << (bad.satisfied ? "HOLDS" : "VIOLATED") << "\n";
    os << "full bound        = " << g17(good.rhs) << "   -> " << (good.satisfied ? "HOLDS" : "VIOLATED") << "\n";
    os << "DISPROVED: " << (bad.satisfied ? "HOLDS" : "VIOLATED")
       << ", FULL: " << (good.satisfied ? "HOLDS" : "VIOLATED") << "\n";

    bool ok = good.satisfied;
    if (m) ok = ok && bad.satisfied;          // on the lattice both must hold
    if (x == 0.9) ok = ok && !bad.satisfied;  // the headline violation
    return ok ? 0 : 1;
  });
}

// ---------------------------------------------------------------------------
// bounds

int run_bounds(const RunConfig& cfg) {
  if (cfg.grid < 2) {
    std::cerr << "error: --grid must be >= 2\n";
    return 2;
  }
  const QParam q = cfg.qparam();
  const QInterval iv = cfg.interval();

  std::vector<double> xs;
  for (int i = 0; i <= cfg.grid; ++i) {
    xs.push_back(i == cfg.grid ? iv.b() : iv.a() + iv.length() * i / cfg.grid);
  }
  for (int m = 0; m <= 40; ++m) {
    const double x = lattice_point(iv, q, m);
    if (x > iv.a()) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  return with_output(cfg.out, [&](std::ostream& os) {
    os << "x,lattice_m,bound_lattice,bound_full,bound_disproved,bound_M,branch\n";
    for (double x : xs) {
      std::optional<int> m;
      if (x != iv.a()) m = lattice_index_of(x, iv, q, cfg.log_tol);
      const CombinedBound combined = combined_bound_M(x, q, iv, cfg.log_tol);
      os << g17(x) << ",";
      if (m) {
        os << *m << "," << g17(lattice_ostrowski_bound(*m, q, iv)) << ",";
      } else {
        os << "nan,nan,";
      }
      os << g17(full_ostrowski_bound(x, q, iv)) << ","
         << g17(disproved_bound(x, q, iv)) << "," << g17(combined.value) << ","
         << (combined.branch == BoundBranch::Lattice ? "LATTICE" : "OFF_LATTICE")
         << "\n";
    }
    return 0;
  });
}

// ---------------------------------------------------------------------------
// figure

int run_figure(const RunConfig& cfg, int id, double x, double eps, double lift) {
  const QInterval unit(0.0, 1.0);
  const QParam q = cfg.qparam();

  const auto sample_ts = [] {
    std::vector<double> ts;
    for (int i = 0; i <= 2000; ++i) ts.push_back(i / 2000.0);
    return ts;
  };

  if (id == 1) {
    const PiecewiseLinearFn cx = make_counterexample();
    const RealFn fn = [&cx](double t) { return cx(t); };
    const QIntegralResult integral =
        q_integral(fn, q, unit, 1.0, cx.max_abs_value(), cfg.tol);
    return with_output(cfg.out, [&](std::ostream& os) {
      os << "t,value,deviation,bound_disproved,bound_full\n";
      for (double t : sample_ts()) {
        os << g17(t) << "," << g17(cx(t)) << ","
           << g17(std::abs(cx(t) - integral.value)) << ","
           << g17(disproved_bound(t, q, unit)) << ","
           << g17(full_ostrowski_bound(t, q, unit)) << "\n";
      }
      return 0;
    });
  }

  LatticeFn f;
  switch (id) {
    case 2:
      f = make_selfsim_witness(x, q);
      break;
    case 3:
      f = make_lifted_witness(x, q, lift);
      break;
    case 4:
      f = make_smoothed_witness(x, q, eps);
      break;
    default:
      std::cerr << "error: figure id must be 1, 2, 3 or 4\n";
      return 2;
  }

  const RealFn fn = [&f](double t) { return f(t); };
  return with_output(cfg.out, [&](std::ostream& os) {
    os << "t,value,derivative\n";
    for (double t : sample_ts()) {
      double value = kInvalid;
      double deriv = kInvalid;
      if (t > 0.0) {
        value = f(t);
        deriv = q_derivative(fn, t, q, 0.0);
      } else if (f.kind != LatticeKind::Lifted) {
        value = f(t);
      }
      os << g17(t) << "," << g17(value) << "," << g17(deriv) << "\n";
    }
    return 0;
  });
}

// ---------------------------------------------------------------------------
// sharpness

int run_sharpness(const RunConfig& cfg, double x, std::optional<double> eps,
                  bool lattice_flag) {
  const QParam q = cfg.qparam();
  const QInterval iv = cfg.interval();
  const QInterval unit(0.0, 1.0);

  if (!(x > iv.a()) || x > iv.b()) {
    std::cerr << "error: --x must lie in (a,b]\n";
    return 2;
  }

  // Witnesses live on [0,1]; a non-unit interval is handled through the
  // affine change of variable, and all printed quantities are normalized.
  const double u = (x - iv.a()) / iv.length();
  const auto m = lattice_index_of(u, unit, q, cfg.log_tol);

  return with_output(cfg.out, [&](std::ostream& os) -> int {
    os << "x          = " << g17(x) << "\n";
    os << "normalized = " << g17(u) << "\n";

    BoundCheckReport report;
    double expected = 0.0;
    if (m) {
      if (!lattice_flag) {
        std::cerr << "error: x is the lattice point m=" << *m
                  << "; pass --lattice to probe lattice sharpness with |t - q^m|\n";
        return 2;
      }
      const PiecewiseLinearFn f = make_absdev(*m, q, unit);
      const RealFn fn = [&f](double t) { return f(t); };
      report = check_ostrowski(fn, lattice_point(unit, q, *m), q, unit, 1.0,
                               OstrowskiBound::lattice(*m), cfg.tol);
      os << "witness    = |t - q^" << *m << "| (lattice bound)\n";
    } else {
      // Rescale into the fundamental cell (q,1).
      const double gen = std::floor(std::log(u) / std::log(q.value()));
      const double xt = u / std::pow(q.value(), gen);
      if (eps) {
        if (!(*eps > 0.0) || *eps > 2.0 * xt) {
          std::cerr << "error: --eps must satisfy 0 < eps <= " << g17(2.0 * xt)
                    << " for this x\n";
          return 2;
        }
        const LatticeFn f = make_smoothed_witness(xt, q, *eps);
        const RealFn fn = [&f](double t) { return f(t); };
        report = check_ostrowski(fn, u, q, unit, 1.0, OstrowskiBound::full(), cfg.tol);
        expected = *eps;
        os << "witness    = smoothed family, scaled x = " << g17(xt)
           << ", eps = " << g17(*eps) << " (full bound)\n";
      } else {
        const LatticeFn f = make_selfsim_witness(xt, q);
        const RealFn fn = [&f](double t) { return f(t); };
        report = check_ostrowski(fn, u, q, unit, 1.0, OstrowskiBound::full(), cfg.tol);
        os << "witness    = self-similar family, scaled x = " << g17(xt)
           << " (full bound)\n";
      }
    }

    os << "lhs        = " << g17(report.lhs) << "\n";
    os << "bound      = " << g17(report.rhs) << "\n";
    os << "margin     = " << g17(report.margin) << "\n";
    os << "expected   = " << g17(expected) << "\n";
    return std::abs(report.margin - expected) <= 1e-8 ? 0 : 1;
  });
}

// ---------------------------------------------------------------------------
// midpoint

int run_midpoint(const RunConfig& cfg) {
  const QParam q = cfg.qparam();
  const QInterval iv = cfg.interval();

  const int m_star = midpoint_index(q);
  const double at_star = lattice_ostrowski_bound(m_star, q, iv);

  int scan_best = 0;
  double scan_value = std::numeric_limits<double>::infinity();
  for (int m = 0; m <= 100; ++m) {
    const double v = lattice_ostrowski_bound(m, q, iv);
    if (v < scan_value) {
      scan_value = v;
      scan_best = m;
    }
  }
  const bool agrees = at_star <= scan_value + 1e-12 * std::max(1.0, iv.length());

  return with_output(cfg.out, [&](std::ostream& os) {
    os << "midpoint index m* = " << m_star << "\n";
    os << "lattice point     = " << g17(lattice_point(iv, q, m_star)) << "\n";
    os << "bound at m*       = " << g17(at_star) << "\n";
    os << "argmin scan m<=100: m = " << scan_best << ", bound = " << g17(scan_value)
       << (agrees ? "  (agrees)" : "  (DISAGREES)") << "\n";
    return agrees ? 0 : 1;
  });
}

}  // namespace

// ---------------------------------------------------------------------------

int main(int argc, char** argv) {
  CLI::App app{"q-calculus Ostrowski inequality toolkit"};
  app.require_subcommand(1);

  RunConfig cfg;

  const auto add_common = [&cfg](CLI::App* cmd, bool with_interval = true) {
    cmd->add_option("--q", cfg.q, "deformation parameter in (0,1)");
    if (with_interval) {
      cmd->add_option("--a", cfg.a, "left endpoint");
      cmd->add_option("--b", cfg.b, "right endpoint");
    }
    cmd->add_option("--tol", cfg.tol, "integral truncation tolerance");
    cmd->add_option("--log-tol", cfg.log_tol, "lattice membership tolerance (log domain)");
    cmd->add_option("--out", cfg.out, "write output to FILE instead of stdout");
  };

  CLI::App* verify = app.add_subcommand("verify", "run the verification table");
  add_common(verify);
  verify->add_option("--grid", cfg.grid, "grid size for searches");

  double cx_x = 0.9;
  CLI::App* counterexample = app.add_subcommand(
      "counterexample", "reproduce the violation of the disproved bound (q=1/2, [0,1])");
  counterexample->add_option("--x", cx_x, "evaluation point (default 9/10)");
  counterexample->add_option("--tol", cfg.tol, "integral truncation tolerance");
  counterexample->add_option("--out", cfg.out, "write output to FILE instead of stdout");

  CLI::App* bounds = app.add_subcommand(
      "bounds", "CSV of all bound formulas over an x-grid plus lattice points");
  add_common(bounds);
  bounds->add_option("--grid", cfg.grid, "number of uniform grid cells");

  int fig_id = 0;
  double fig_x = 0.8, fig_eps = 0.2, fig_lift = 1.0;
  CLI::App* figure = app.add_subcommand(
      "figure", "CSV samples of a witness/counterexample on [0,1] (ids 1-4)");
  figure->add_option("id", fig_id, "1: counterexample+bounds, 2: self-similar witness, "
                                   "3: lifted witness, 4: smoothed witness")
      ->required();
  auto* fig_q_opt = figure->add_option("--q", cfg.q, "deformation parameter (default: 1/2 for id 1, 0.6 otherwise)");
  figure->add_option("--x", fig_x, "witness abscissa (ids 2-4)");
  figure->add_option("--eps", fig_eps, "smoothing parameter (id 4)");
  figure->add_option("--C", fig_lift, "lift constant (id 3)");
  figure->add_option("--tol", cfg.tol, "integral truncation tolerance");
  figure->add_option("--out", cfg.out, "write output to FILE instead of stdout");

  double sharp_x = 0.0;
  double sharp_eps = 0.0;
  bool sharp_lattice = false;
  CLI::App* sharpness = app.add_subcommand(
      "sharpness", "build the witness for a given x and report bound attainment "
                   "(non-unit intervals are normalized to [0,1] first)");
  add_common(sharpness);
  sharpness->add_option("--x", sharp_x, "abscissa where the bound is probed")->required();
  auto* sharp_eps_opt =
      sharpness->add_option("--eps", sharp_eps, "use the smoothed (q-differentiable) witness");
  sharpness->add_flag("--lattice", sharp_lattice,
                      "allow lattice x and probe with |t - q^m| instead");

  CLI::App* midpoint = app.add_subcommand(
      "midpoint", "q-analogue of the midpoint rule: the minimizing lattice index");
  add_common(midpoint);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (figure->parsed() && fig_q_opt->count() == 0) {
      cfg.q = fig_id == 1 ? 0.5 : 0.6;
    }

    if (verify->parsed()) return run_verify(cfg);
    if (counterexample->parsed()) return run_counterexample(cfg, cx_x);
    if (bounds->parsed()) return run_bounds(cfg);
    if (figure->parsed()) return run_figure(cfg, fig_id, fig_x, fig_eps, fig_lift);
    if (sharpness->parsed()) {
      std::optional<double> eps;
      if (sharp_eps_opt->count() > 0) eps = sharp_eps;
      return run_sharpness(cfg, sharp_x, eps, sharp_lattice);
    }
    if (midpoint->parsed()) return run_midpoint(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
