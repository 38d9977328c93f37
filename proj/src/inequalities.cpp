#include "qcalc/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qcalc {

namespace {

BoundCheckReport make_report(double lhs, double rhs, double lhs_tail,
                             std::optional<BoundBranch> branch = std::nullopt) {
  BoundCheckReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.margin = rhs - lhs;
  r.lhs_tail = lhs_tail;
  r.satisfied = lhs <= rhs + lhs_tail;
  r.branch = branch;
  return r;
}

}  // namespace

double abs_weighted_sum_closed(int m, QParam q) {
  if (m < 0) throw std::invalid_argument("abs_weighted_sum_closed: m must be nonnegative");
  const double qv = q.value();
  return ((1.0 + 2.0 * std::pow(qv, 2 * m + 1)) / (1.0 + qv) - std::pow(qv, m)) /
         (1.0 - qv);
}

double lattice_ostrowski_bound(int m, QParam q, QInterval interval) {
  if (m < 0) throw std::invalid_argument("lattice_ostrowski_bound: m must be nonnegative");
  const double qv = q.value();
  return interval.length() *
         ((1.0 + 2.0 * std::pow(qv, 2 * m + 1)) / (1.0 + qv) - std::pow(qv, m));
}

double full_ostrowski_bound(double x, QParam q, QInterval interval) {
  if (!interval.contains(x)) {
    throw std::domain_error("full_ostrowski_bound: x outside [a,b]");
  }
  return (x - interval.a()) + interval.length() / (1.0 + q.value());
}

double disproved_bound(double x, QParam q, QInterval interval) {
  if (!interval.contains(x)) {
    throw std::domain_error("disproved_bound: x outside [a,b]");
  }
  const double qv = q.value();
  const double u = (x - interval.a()) / interval.length();
  return interval.length() * ((1.0 + 2.0 * qv * u * u) / (1.0 + qv) - u);
}

CombinedBound combined_bound_M(double x, QParam q, QInterval interval,
                               double log_tol) {
  if (!interval.contains(x)) {
    throw std::domain_error("combined_bound_M: x outside [a,b]");
  }
  if (x == interval.a()) {
    // Limit case: a is an accumulation point, not a lattice point.
    return {interval.length() / (1.0 + q.value()), BoundBranch::OffLattice};
  }
  if (auto m = lattice_index_of(x, interval, q, log_tol)) {
    return {lattice_ostrowski_bound(*m, q, interval), BoundBranch::Lattice};
  }
  return {full_ostrowski_bound(x, q, interval), BoundBranch::OffLattice};
}

int midpoint_index(QParam q) {
  const double m_real = std::log(0.5) / std::log(q.value());
  return std::max(0, static_cast<int>(std::min(std::floor(m_real), 2e9)));
}

double classical_ostrowski_bound(double x, QInterval interval) {
  if (!interval.contains(x)) {
    throw std::domain_error("classical_ostrowski_bound: x outside [a,b]");
  }
  const double len = interval.length();
  const double centered = x - (interval.a() + interval.b()) / 2.0;
  return (0.25 + centered * centered / (len * len)) * len;
}

BoundCheckReport check_mvt(const RealFn& f, double x, int n, QParam q,
                           QInterval interval, double norm) {
  if (!(x > interval.a()) || x > interval.b()) {
    throw std::domain_error("check_mvt: x must lie in (a,b]");
  }
  if (n < 0) throw std::invalid_argument("check_mvt: n must be nonnegative");
  const double y = interval.a() + std::pow(q.value(), n) * (x - interval.a());
  const double lhs = std::abs(f(x) - f(y));
  const double rhs = std::abs(x - y) * norm;
  return make_report(lhs, rhs, 0.0);
}

std::optional<std::pair<double, double>> naive_mvt_violation_search(
    const RealFn& f, QInterval interval, double norm, int grid) {
  if (grid < 2) {
    throw std::invalid_argument("naive_mvt_violation_search: grid must be >= 2");
  }
  const double a = interval.a();
  const double len = interval.length();
  const std::size_t n = static_cast<std::size_t>(grid);

  std::vector<double> ts(n);
  std::vector<double> vs(n);
  for (std::size_t i = 0; i < n; ++i) {
    ts[i] = a + len * static_cast<double>(i) / (grid - 1);
    vs[i] = f(ts[i]);
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(vs[i] - vs[j]) > norm * std::abs(ts[i] - ts[j]) + 1e-12) {
        return std::make_pair(ts[i], ts[j]);
      }
    }
  }
  return std::nullopt;
}

double find_lagrange_witness(const RealFn& f, double x, int n, QParam q,
                             QInterval interval, double tol) {
  if (!(x > interval.a()) || x > interval.b()) {
    throw std::domain_error("find_lagrange_witness: x must lie in (a,b]");
  }
  if (n < 1) throw std::invalid_argument("find_lagrange_witness: n must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("find_lagrange_witness: tol must be positive");

  const double a = interval.a();
  const double y = a + std::pow(q.value(), n) * (x - a);
  const double secant = (f(x) - f(y)) / (x - y);
  const auto residual = [&](double c) { return q_derivative(f, c, q, a) - secant; };

  constexpr int kGrid = 2048;
  double best_c = y;
  double best_abs = std::numeric_limits<double>::infinity();
  double prev_c = 0.0;
  double prev_r = 0.0;
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;

  for (int i = 0; i <= kGrid; ++i) {
    const double c = y + (x - y) * i / kGrid;
    const double r = residual(c);
    if (r == 0.0) return c;
    if (std::abs(r) < best_abs) {
      best_abs = std::abs(r);
      best_c = c;
    }
    if (i > 0 && (prev_r < 0.0) != (r < 0.0)) {
      lo = prev_c;
      hi = c;
      bracketed = true;
      break;
    }
    prev_c = c;
    prev_r = r;
  }

  if (bracketed) {
    double r_lo = residual(lo);
    for (int iter = 0; iter < 200; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      const double r_mid = residual(mid);
      if (r_mid == 0.0) return mid;
      if ((r_mid < 0.0) == (r_lo < 0.0)) {
        lo = mid;
        r_lo = r_mid;
      } else {
        hi = mid;
      }
    }
    const double c = 0.5 * (lo + hi);
    if (std::abs(residual(c)) < best_abs) {
      best_abs = std::abs(residual(c));
      best_c = c;
    }
  }

  if (best_abs * (x - y) > tol) {
    throw std::runtime_error(
        "find_lagrange_witness: no point meets tol; is f continuous on [a,b]?");
  }
  return best_c;
}

BoundCheckReport check_ostrowski(const RealFn& f, double x, QParam q,
                                 QInterval interval, double norm,
                                 OstrowskiBound bound, double tol) {
  if (!interval.contains(x)) {
    throw std::domain_error("check_ostrowski: x outside [a,b]");
  }
  const double len = interval.length();

  // |f| on the sampled lattice toward a is controlled by the value at b and
  // the derivative bound, which certifies the series truncation.
  const double sup_lattice = std::abs(f(interval.b())) + len * norm;
  const QIntegralResult integral =
      q_integral(f, q, interval, interval.b(), sup_lattice, tol);

  const double lhs = std::abs(f(x) - integral.value / len);
  const double lhs_tail = integral.tail_bound / len;

  double rhs = 0.0;
  std::optional<BoundBranch> branch;
  switch (bound.kind) {
    case OstrowskiBound::Kind::Lattice: {
      const auto m = lattice_index_of(x, interval, q);
      if (!m || *m != bound.m) {
        throw std::invalid_argument(
            "check_ostrowski: x is not the requested lattice point");
      }
      rhs = lattice_ostrowski_bound(bound.m, q, interval) * norm;
      branch = BoundBranch::Lattice;
      break;
    }
    case OstrowskiBound::Kind::Full:
      rhs = full_ostrowski_bound(x, q, interval) * norm;
      break;
    case OstrowskiBound::Kind::Disproved:
      rhs = disproved_bound(x, q, interval) * norm;
      break;
    case OstrowskiBound::Kind::Combined: {
      const CombinedBound cb = combined_bound_M(x, q, interval);
      rhs = cb.value * norm;
      branch = cb.branch;
      break;
    }
  }

  return make_report(lhs, rhs, lhs_tail, branch);
}

}  // namespace qcalc
