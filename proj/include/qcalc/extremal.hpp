#ifndef QCALC_EXTREMAL_HPP
#define QCALC_EXTREMAL_HPP

#include "qcalc/inequalities.hpp"
#include "qcalc/qcore.hpp"

namespace qcalc {

/*
 * |t - (a + q^m (b-a))| on [a,b]: the function for which the lattice
 * Ostrowski bound is an equality at x = a + q^m (b-a). Its q-derivative has
 * sup norm exactly 1.
 */
PiecewiseLinearFn make_absdev(int m, QParam q, QInterval interval);

/*
 * The frozen counterexample on [0,1]: t up to 9/10, then -9t + 9. At q = 1/2
 * its q-integral is 1/6, its q-derivative norm is 1, and at x = 9/10 it
 * violates the disproved bound while respecting the full one.
 */
PiecewiseLinearFn make_counterexample();

/*
 * Continuous witness attaining the full bound at an off-lattice x in (q,1):
 * nodes q^n map to -q^n and x q^n to x q^n. Self-similar (f(qt) = q f(t)),
 * hence D_q f(t) = f(t)/t, so it is not q-differentiable at 0 even though
 * |D_q f| <= 1 everywhere on (0,1].
 */
LatticeFn make_selfsim_witness(double x, QParam q);

/*
 * q-differentiable witness coming eps-close to the full bound at x: the
 * x-ray nodes are lowered to max(x q^n - eps, -x q^n), which makes the
 * function coincide with -t near 0. Requires 0 < eps <= 2x.
 */
LatticeFn make_smoothed_witness(double x, QParam q, double eps);

/*
 * Witness with the x-ray lifted by a constant C > 0. It has no limit at 0,
 * still satisfies |D_q g| <= 1 on (0,1], and pushes |g(x) - integral| past
 * every bound as C grows: continuity at a cannot be dropped.
 */
LatticeFn make_lifted_witness(double x, QParam q, double C);

/*
 * Checks the interpolation envelope on [c,d] with 0 < qc < qd < c < d <= 1:
 * if f is linear on [c,d] and on [qc,qd], every D_q f(t) with t in [c,d] is a
 * weighted average of D_q f(c) and D_q f(d), hence inside their envelope.
 * lhs reports the worst sampled excursion beyond the envelope; rhs is the
 * 1e-12 slack it is allowed.
 */
BoundCheckReport check_interpolation_lemma(const RealFn& f, double c, double d,
                                           QParam q, int samples);

/*
 * Certifies |D_q f| <= 1 for the SelfSim and Smoothed families: evaluates the
 * q-derivative at every defining abscissa q^n, x q^n up to the given
 * generation, then runs the interpolation check on each adjacent pair. A
 * failed check returns false rather than throwing. The Lifted family is
 * rejected up front: its difference quotients near 0 are too ill-conditioned
 * (values ~C, differences ~t) for a finite certification tolerance.
 */
bool certify_unit_norm(const LatticeFn& f, int generations);

}  // namespace qcalc

#endif  // QCALC_EXTREMAL_HPP
