#include "qcalc/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace qcalc::oracle {

namespace {

// Deterministic pairwise reduction; keeps the rounding error logarithmic in
// the term count without sharing the accumulation style used in qcore.
double pairwise_sum(std::vector<double>& terms, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += terms[i];
    return s;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(terms, lo, mid) + pairwise_sum(terms, mid, hi);
}

}  // namespace

PartialSum series_abs_weighted_sum(int m, QParam q, int K) {
  if (m < 0) throw std::invalid_argument("series_abs_weighted_sum: m must be nonnegative");
  if (K < 1) throw std::invalid_argument("series_abs_weighted_sum: K must be >= 1");

  const double qv = q.value();
  const double qm = std::pow(qv, m);

  std::vector<double> terms(static_cast<std::size_t>(K));
  double qk = 1.0;
  for (int k = 0; k < K; ++k) {
    terms[static_cast<std::size_t>(k)] = qk * std::abs(qm - qk);
    qk *= qv;
  }

  PartialSum out;
  out.value = pairwise_sum(terms, 0, terms.size());
  out.remainder_bound = std::pow(qv, K) * (1.0 + qm) / (1.0 - qv);
  return out;
}

QIntegralResult series_q_integral(const RealFn& f, QParam q, QInterval interval,
                                  double x, double sup_f, int K) {
  if (K < 1) throw std::invalid_argument("series_q_integral: K must be >= 1");
  if (x < interval.a() || x > interval.b()) {
    throw std::domain_error("series_q_integral: upper limit outside [a,b]");
  }

  const double qv = q.value();
  const double a = interval.a();
  const double span = x - a;

  std::vector<double> terms(static_cast<std::size_t>(K));
  double qk = 1.0;
  for (int k = 0; k < K; ++k) {
    terms[static_cast<std::size_t>(k)] = qk * f(a + qk * span);
    qk *= qv;
  }

  QIntegralResult out;
  out.value = (1.0 - qv) * span * pairwise_sum(terms, 0, terms.size());
  out.tail_bound = span * sup_f * std::pow(qv, K);
  out.terms_used = static_cast<std::size_t>(K);
  return out;
}

double grid_sup(const RealFn& f, double lo, double hi, int n) {
  if (!(lo < hi)) throw std::invalid_argument("grid_sup: requires lo < hi");
  if (n < 2) throw std::invalid_argument("grid_sup: n must be >= 2");

  double m = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = lo + (hi - lo) * i / (n - 1);
    m = std::max(m, std::abs(f(t)));
  }
  return m;
}

double riemann_integral(const RealFn& f, QInterval interval, int n) {
  if (n < 1) throw std::invalid_argument("riemann_integral: n must be >= 1");

  const double h = interval.length() / n;
  std::vector<double> cells(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    cells[static_cast<std::size_t>(i)] = f(interval.a() + h * (i + 0.5));
  }
  return h * pairwise_sum(cells, 0, cells.size());
}

}  // namespace qcalc::oracle
