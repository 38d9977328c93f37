#include "qcalc/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcalc {

namespace {

constexpr double kLogSnapTol = 1e-9;

// Witness abscissae must sit strictly between lattice generations, otherwise
// the two branch slopes degenerate.
void require_interior_x(double x, double q) {
  if (!(x > q) || !(x < 1.0)) {
    throw std::invalid_argument("witness: x must lie strictly inside (q,1)");
  }
  const double r = std::log(x) / std::log(q);
  if (std::abs(r - std::round(r)) <= kLogSnapTol) {
    throw std::invalid_argument("witness: x must not lie on the q-lattice");
  }
}

}  // namespace

PiecewiseLinearFn make_absdev(int m, QParam q, QInterval interval) {
  const double a = interval.a();
  const double b = interval.b();
  const double peak = lattice_point(interval, q, m);
  if (m == 0) {
    return PiecewiseLinearFn({a, b}, {b - a, 0.0});
  }
  if (!(peak > a)) {
    throw std::invalid_argument(
        "make_absdev: q^m (b-a) underflows the interval resolution");
  }
  return PiecewiseLinearFn({a, peak, b}, {peak - a, 0.0, b - peak});
}

PiecewiseLinearFn make_counterexample() {
  return PiecewiseLinearFn({0.0, 0.9, 1.0}, {0.0, 0.9, 0.0});
}

LatticeFn make_selfsim_witness(double x, QParam q) {
  require_interior_x(x, q.value());
  LatticeFn f;
  f.kind = LatticeKind::SelfSim;
  f.x = x;
  f.q = q.value();
  return f;
}

LatticeFn make_smoothed_witness(double x, QParam q, double eps) {
  require_interior_x(x, q.value());
  if (!(eps > 0.0) || eps > 2.0 * x) {
    throw std::invalid_argument("make_smoothed_witness: requires 0 < eps <= 2x");
  }
  LatticeFn f;
  f.kind = LatticeKind::Smoothed;
  f.x = x;
  f.q = q.value();
  f.eps = eps;
  // Largest n with eps/2 <= x q^n, i.e. floor(log_q(eps/(2x))); beyond it the
  // lowered nodes switch to the -t branch.
  const double r =
      std::min(std::log(eps / (2.0 * x)) / std::log(q.value()), 2e9);
  const double rounded = std::round(r);
  f.eps_switch = std::abs(r - rounded) <= kLogSnapTol
                     ? static_cast<int>(rounded)
                     : static_cast<int>(std::floor(r));
  return f;
}

LatticeFn make_lifted_witness(double x, QParam q, double C) {
  require_interior_x(x, q.value());
  if (!(C > 0.0)) {
    throw std::invalid_argument("make_lifted_witness: requires C > 0");
  }
  LatticeFn f;
  f.kind = LatticeKind::Lifted;
  f.x = x;
  f.q = q.value();
  f.lift = C;
  return f;
}

BoundCheckReport check_interpolation_lemma(const RealFn& f, double c, double d,
                                           QParam q, int samples) {
  const double qv = q.value();
  if (!(0.0 < c) || !(c < d) || !(d <= 1.0) || !(qv * d < c)) {
    throw std::invalid_argument(
        "check_interpolation_lemma: requires 0 < qc < qd < c < d <= 1");
  }
  if (samples < 2) {
    throw std::invalid_argument("check_interpolation_lemma: samples must be >= 2");
  }

  const double at_c = q_derivative(f, c, q, 0.0);
  const double at_d = q_derivative(f, d, q, 0.0);
  const double lo = std::min(at_c, at_d);
  const double hi = std::max(at_c, at_d);

  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double t = c + (d - c) * i / (samples - 1);
    const double v = q_derivative(f, t, q, 0.0);
    worst = std::max(worst, std::max(lo - v, v - hi));
  }

  BoundCheckReport r;
  r.lhs = worst;   // > 0 means the envelope was escaped
  r.rhs = 1e-12;   // numerical slack
  r.margin = r.rhs - r.lhs;
  r.lhs_tail = 0.0;
  r.satisfied = r.lhs <= r.rhs;
  return r;
}

bool certify_unit_norm(const LatticeFn& f, int generations) {
  if (f.kind == LatticeKind::Lifted) {
    // Near the accumulation point the lifted values are ~C while their
    // differences are ~t, so the quotient loses C*eps/t digits and no finite
    // tolerance certifies the band; sample it at moderate depth instead.
    throw std::invalid_argument(
        "certify_unit_norm: supported for the SelfSim and Smoothed families only");
  }
  try {
    const QParam q(f.q);
    const RealFn fn = [&f](double t) { return f(t); };

    const auto in_unit_band = [&](double t) {
      const double d = q_derivative(fn, t, q, 0.0);
      return std::abs(d) <= 1.0 + 1e-12;
    };

    for (int n = 0; n <= generations; ++n) {
      const double qn = std::pow(f.q, n);
      if (!in_unit_band(qn) || !in_unit_band(f.x * qn)) return false;
    }
    for (int n = 0; n <= generations; ++n) {
      const double qn = std::pow(f.q, n);
      if (!check_interpolation_lemma(fn, f.x * qn, qn, q, 33).satisfied) {
        return false;
      }
      if (!check_interpolation_lemma(fn, f.q * qn, f.x * qn, q, 33).satisfied) {
        return false;
      }
    }
    return true;
  } catch (...) {
    return false;
  }
}

}  // namespace qcalc
