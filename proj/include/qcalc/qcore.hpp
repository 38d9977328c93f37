#ifndef QCALC_QCORE_HPP
#define QCALC_QCORE_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

namespace qcalc {

using RealFn = std::function<double(double)>;

// Deformation parameter q, restricted to the open interval (0,1).
class QParam {
 public:
  explicit QParam(double q);
  double value() const { return q_; }

 private:
  double q_;
};

// Closed interval [a,b] with a < b.
class QInterval {
 public:
  QInterval(double a, double b);
  double a() const { return a_; }
  double b() const { return b_; }
  double length() const { return b_ - a_; }
  bool contains(double t) const { return t >= a_ && t <= b_; }

 private:
  double a_;
  double b_;
};

/*
 * Continuous piecewise-linear function given by its breakpoints.
 * Abscissae are strictly increasing and span the whole domain, so every
 * t in [front, back] is covered. Evaluation at a stored abscissa returns
 * the stored ordinate exactly; in between it is the usual interpolation
 *   y_i + (y_{i+1} - y_i) * (t - t_i) / (t_{i+1} - t_i).
 */
class PiecewiseLinearFn {
 public:
  PiecewiseLinearFn(std::vector<double> abscissae, std::vector<double> ordinates);

  double operator()(double t) const;

  const std::vector<double>& abscissae() const { return ts_; }
  const std::vector<double>& ordinates() const { return ys_; }
  QInterval domain() const { return {ts_.front(), ts_.back()}; }

  // sup |f| over the domain; exact for a piecewise-linear function.
  double max_abs_value() const;

 private:
  std::vector<double> ts_;
  std::vector<double> ys_;
};

/*
 * Self-similar lattice function on [0,1] (Lifted: on (0,1]). Values are
 * pinned on the two geometric rays q^n and x*q^n, n >= 0, and linearly
 * interpolated in between:
 *
 *   node value at q^n      = -q^n                       (all kinds)
 *   node value at x q^n    =  x q^n                     (SelfSim)
 *                           =  x q^n - eps   for n <= eps_switch,
 *                             -x q^n         for n  > eps_switch (Smoothed)
 *                           =  x q^n + lift                       (Lifted)
 *
 * Smoothed coincides with -t on all of [0, q^(eps_switch+1)], which is what
 * makes it q-differentiable at 0. Lifted has no limit at 0 and refuses to
 * evaluate there.
 *
 * Plain struct so tests can build deliberately inconsistent fixtures; use
 * the constructors in extremal.hpp for validated instances.
 */
enum class LatticeKind { SelfSim, Smoothed, Lifted };

struct LatticeFn {
  LatticeKind kind = LatticeKind::SelfSim;
  double x = 0.0;
  double q = 0.0;
  double eps = 0.0;     // Smoothed only
  double lift = 0.0;    // Lifted only
  int eps_switch = 0;   // Smoothed: largest n with x q^n >= eps/2

  double operator()(double t) const;

  double lattice_node(int n) const;  // value at q^n
  double x_node(int n) const;        // value at x q^n

  // Certified sup |f| over the domain (node values dominate the lerp).
  double max_abs_value() const;
};

// Truncated Jackson series plus a certified bound on the discarded tail.
struct QIntegralResult {
  double value = 0.0;
  double tail_bound = 0.0;
  std::size_t terms_used = 0;
};

// Outcome of probing D_q^a f along geometric rays toward a.
struct QDerivativeLimit {
  double limit = 0.0;
  bool converged = false;
  double spread = 0.0;
};

struct SupNormEstimate {
  double estimate = 0.0;
  bool exact = false;
};

// Probe layout for the generic sup-norm estimator.
struct SamplingPlan {
  std::vector<double> breakpoints;  // knots of f, if known
  int lattice_generations = 64;
  int grid_points = 4096;
};

/*
 * Shifted q-derivative
 *   D_q^a f(t) = (f(t) - f(a + q(t-a))) / ((1-q)(t-a)),   t in (a,b].
 * The limit point t = a is handled by q_derivative_at_a.
 */
double q_derivative(const RealFn& f, double t, QParam q, double a);

/*
 * Numerical probe for lim_{t->a+} D_q^a f(t). The derivative is sampled at
 * a + q^j (b-a) s for j = 0..depth along a small set of rays s (the full
 * interval, its midpoint, and two log-interior rays q^(1/2), q^(1/4) that can
 * never collide with the q-lattice). converged is true when the last half of
 * the probes agree to within tol; spread is their max-min; limit is the mean
 * of the deepest batch.
 */
QDerivativeLimit q_derivative_at_a(const RealFn& f, QParam q, QInterval interval,
                                   int depth, double tol);

/*
 * Shifted q-integral (Jackson series)
 *   integral_a^x f(t) d_q^a t = (1-q)(x-a) sum_{k>=0} q^k f(a + q^k (x-a)).
 * The series is cut at the first K with (x-a) * sup_f * q^K <= tol, which
 * bounds the discarded tail by that same quantity. sup_f must dominate |f|
 * on the sampled lattice; the result is only certified if it does.
 */
QIntegralResult q_integral(const RealFn& f, QParam q, QInterval interval,
                           double x, double sup_f, double tol);

// integral_c^x f d_q^a t = integral_a^x - integral_a^c, for a <= c <= x <= b.
QIntegralResult q_integral_between(const RealFn& f, QParam q, QInterval interval,
                                   double c, double x, double sup_f, double tol);

// The q-lattice point a + q^m (b-a); m = 0 gives b exactly.
double lattice_point(QInterval interval, QParam q, int m);

/*
 * Inverse of lattice_point, decided in the log domain: x = a + q^m (b-a)
 * iff log((x-a)/(b-a)) / log(q) is within log_tol of a nonnegative integer.
 * x = a (the accumulation point) is never a lattice point.
 */
std::optional<int> lattice_index_of(double x, QInterval interval, QParam q,
                                    double log_tol = 1e-9);

/*
 * sup of |D_q^a f| over (a,b].
 *
 * For a piecewise-linear f this is exact: between consecutive "events"
 * (breakpoints and their q-preimages a + (t_i - a)/q) the derivative is a
 * monotone hyperbola piece, so the supremum is attained on the event set.
 * For the lattice families the closed-form bound is 1. For anything else it
 * is a sampled lower bound and exact stays false.
 */
SupNormEstimate sup_norm_qderiv(const RealFn& f, QParam q, QInterval interval,
                                const SamplingPlan& plan);
SupNormEstimate sup_norm_qderiv(const PiecewiseLinearFn& f, QParam q);
SupNormEstimate sup_norm_qderiv(const LatticeFn& f);

}  // namespace qcalc

#endif  // QCALC_QCORE_HPP
