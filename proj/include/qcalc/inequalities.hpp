#ifndef QCALC_INEQUALITIES_HPP
#define QCALC_INEQUALITIES_HPP

#include <optional>
#include <utility>

#include "qcalc/qcore.hpp"

namespace qcalc {

enum class BoundBranch { Lattice, OffLattice };

/*
 * Outcome of evaluating one inequality on one concrete function. lhs_tail
 * carries the uncertainty inherited from integral truncation, and a check
 * is satisfied when lhs <= rhs + lhs_tail, so truncation alone can never
 * manufacture a violation.
 */
struct BoundCheckReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // rhs - lhs
  bool satisfied = false;
  double lhs_tail = 0.0;
  std::optional<BoundBranch> branch;
};

/*
 * sum_{k>=0} q^k |q^m - q^k|  =  (1/(1-q)) ((1 + 2 q^(2m+1))/(1+q) - q^m).
 * This weighted absolute sum is what turns the lattice mean value inequality
 * into the q-Ostrowski bound.
 */
double abs_weighted_sum_closed(int m, QParam q);

// (b-a) ((1 + 2 q^(2m+1))/(1+q) - q^m): the sharp bound at x = a + q^m (b-a).
double lattice_ostrowski_bound(int m, QParam q, QInterval interval);

// (x-a) + (b-a)/(1+q): the bound valid for every x in [a,b].
double full_ostrowski_bound(double x, QParam q, QInterval interval);

/*
 * The previously published bound
 *   (b-a) ((1 + 2q u^2)/(1+q) - u),   u = (x-a)/(b-a),
 * which coincides with the lattice bound when x is on the q-lattice but is
 * simply false elsewhere. Kept as a first-class formula so the falsifier and
 * the figure data can exhibit where it breaks.
 */
double disproved_bound(double x, QParam q, QInterval interval);

// The sharp two-branch envelope M(x): lattice bound on the lattice, full
// bound everywhere else. Discontinuous at every lattice point.
struct CombinedBound {
  double value = 0.0;
  BoundBranch branch = BoundBranch::OffLattice;
};
CombinedBound combined_bound_M(double x, QParam q, QInterval interval,
                               double log_tol = 1e-9);

// floor(log_q 1/2), clamped at 0: the lattice index minimizing the lattice
// bound, i.e. the q-analogue of evaluating at the midpoint.
int midpoint_index(QParam q);

// Classical Ostrowski right-hand side [1/4 + (x - (a+b)/2)^2/(b-a)^2](b-a),
// used for q->1 comparisons.
double classical_ostrowski_bound(double x, QInterval interval);

/*
 * Mean value inequality on the q-lattice through x:
 *   |f(x) - f(a + q^n (x-a))| <= |x - (a + q^n (x-a))| * norm,
 * valid for arbitrary f whenever norm dominates |D_q^a f| on (a,b].
 */
BoundCheckReport check_mvt(const RealFn& f, double x, int n, QParam q,
                           QInterval interval, double norm);

/*
 * Grid search for a pair violating the unrestricted two-point inequality
 * |f(x) - f(y)| <= norm |x - y|. Returns the first violating (x, y), if any;
 * the q-lattice restriction is exactly what rules these out.
 */
std::optional<std::pair<double, double>> naive_mvt_violation_search(
    const RealFn& f, QInterval interval, double norm, int grid);

/*
 * Lagrange witness: a point c in [y,x], y = a + q^n (x-a), with
 * f(x) - f(y) = D_q^a f(c) (x-y), found by bracketing the residual of the
 * continuous map c -> D_q^a f(c) and bisecting. Requires f continuous.
 * Throws if no candidate meets tol, which signals a broken precondition.
 */
double find_lagrange_witness(const RealFn& f, double x, int n, QParam q,
                             QInterval interval, double tol);

// Which right-hand side check_ostrowski compares against.
struct OstrowskiBound {
  enum class Kind { Lattice, Full, Disproved, Combined };
  Kind kind;
  int m = 0;  // Lattice only

  static OstrowskiBound lattice(int m) { return {Kind::Lattice, m}; }
  static OstrowskiBound full() { return {Kind::Full, 0}; }
  static OstrowskiBound disproved() { return {Kind::Disproved, 0}; }
  static OstrowskiBound combined() { return {Kind::Combined, 0}; }
};

/*
 * Evaluates |f(x) - (1/(b-a)) integral_a^b f d_q^a t| against the selected
 * bound times norm. The Jackson series only samples f on the lattice toward
 * a, where |f| <= |f(b)| + (b-a) norm by the lattice mean value inequality,
 * so the truncation stays certified without a separate sup |f| argument.
 * The Disproved bound is expected to fail for suitable off-lattice x.
 */
BoundCheckReport check_ostrowski(const RealFn& f, double x, QParam q,
                                 QInterval interval, double norm,
                                 OstrowskiBound bound, double tol);

}  // namespace qcalc

#endif  // QCALC_INEQUALITIES_HPP
