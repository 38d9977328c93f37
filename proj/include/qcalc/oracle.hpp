#ifndef QCALC_ORACLE_HPP
#define QCALC_ORACLE_HPP

#include "qcalc/qcore.hpp"

namespace qcalc::oracle {

// Brute-force reference computations. These deliberately share no code with
// the closed forms they cross-check; agreement between the two routes is the
// evidence the rest of the library leans on.

struct PartialSum {
  double value = 0.0;
  double remainder_bound = 0.0;
};

// Raw partial sum of sum_k q^k |q^m - q^k| over k < K, with the geometric
// remainder bound q^K (1 + q^m) / (1 - q).
PartialSum series_abs_weighted_sum(int m, QParam q, int K);

// Fixed-K Jackson partial sum (1-q)(x-a) sum_{k<K} q^k f(a + q^k (x-a)),
// tail bounded by (x-a) sup_f q^K.
QIntegralResult series_q_integral(const RealFn& f, QParam q, QInterval interval,
                                  double x, double sup_f, int K);

// max |f| over n uniformly spaced points of [lo,hi], endpoints included.
double grid_sup(const RealFn& f, double lo, double hi, int n);

// Composite midpoint rule with n cells; never evaluates f at the endpoints,
// so functions undefined at a are fine.
double riemann_integral(const RealFn& f, QInterval interval, int n);

}  // namespace qcalc::oracle

#endif  // QCALC_ORACLE_HPP
