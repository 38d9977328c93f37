#include "qcalc/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcalc {

namespace {

constexpr double kLogSnapTol = 1e-9;

// Compensated (Kahan) accumulation; the series loops below add thousands of
// terms when q is close to 1.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;

  void add(double term) {
    const double y = term - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double lerp(double t, double t0, double v0, double t1, double v1) {
  return v0 + (v1 - v0) * ((t - t0) / (t1 - t0));
}

// Nearest integer to r if it is within tol, otherwise nullopt. Indices past
// 2e9 would overflow the int anyway and never correspond to a representable
// lattice point.
std::optional<int> snap_to_int(double r, double tol) {
  const double rounded = std::round(r);
  if (std::abs(rounded) > 2e9) return std::nullopt;
  if (std::abs(r - rounded) <= tol) return static_cast<int>(rounded);
  return std::nullopt;
}

}  // namespace

QParam::QParam(double q) : q_(q) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::invalid_argument("QParam: q must lie strictly inside (0,1)");
  }
}

QInterval::QInterval(double a, double b) : a_(a), b_(b) {
  if (!(a < b)) {
    throw std::invalid_argument("QInterval: requires a < b");
  }
}

PiecewiseLinearFn::PiecewiseLinearFn(std::vector<double> abscissae,
                                     std::vector<double> ordinates)
    : ts_(std::move(abscissae)), ys_(std::move(ordinates)) {
  if (ts_.size() < 2 || ts_.size() != ys_.size()) {
    throw std::invalid_argument("PiecewiseLinearFn: need matching lists with >= 2 breakpoints");
  }
  for (std::size_t i = 1; i < ts_.size(); ++i) {
    if (!(ts_[i - 1] < ts_[i])) {
      throw std::invalid_argument("PiecewiseLinearFn: abscissae must be strictly increasing");
    }
  }
}

double PiecewiseLinearFn::operator()(double t) const {
  if (t < ts_.front() || t > ts_.back()) {
    throw std::domain_error("PiecewiseLinearFn: evaluation outside the domain");
  }
  // First breakpoint with ts_[i] >= t.
  const auto it = std::lower_bound(ts_.begin(), ts_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - ts_.begin());
  if (i < ts_.size() && ts_[i] == t) return ys_[i];
  return lerp(t, ts_[i - 1], ys_[i - 1], ts_[i], ys_[i]);
}

double PiecewiseLinearFn::max_abs_value() const {
  double m = 0.0;
  for (double y : ys_) m = std::max(m, std::abs(y));
  return m;
}

double LatticeFn::lattice_node(int n) const { return -std::pow(q, n); }

double LatticeFn::x_node(int n) const {
  const double xq = x * std::pow(q, n);
  switch (kind) {
    case LatticeKind::SelfSim:
      return xq;
    case LatticeKind::Smoothed:
      return n <= eps_switch ? xq - eps : -xq;
    case LatticeKind::Lifted:
      return xq + lift;
  }
  throw std::logic_error("LatticeFn: unknown kind");
}

double LatticeFn::operator()(double t) const {
  if (t == 0.0) {
    if (kind == LatticeKind::Lifted) {
      throw std::domain_error("LatticeFn: no value at 0 (the limit does not exist)");
    }
    return 0.0;
  }
  if (t < 0.0 || t > 1.0) {
    throw std::domain_error("LatticeFn: evaluation outside [0,1]");
  }

  const double log_q = std::log(q);
  const double ray = std::log(t) / log_q;

  // Defining abscissae are matched in the log domain so that q*t, x*q^n etc.
  // land on their stored values regardless of rounding in t itself.
  if (auto n = snap_to_int(ray, kLogSnapTol); n && *n >= 0) {
    return lattice_node(*n);
  }
  if (auto n = snap_to_int(std::log(t / x) / log_q, kLogSnapTol); n && *n >= 0) {
    return x_node(*n);
  }

  // Below the switch generation the Smoothed family is identically -t.
  if (kind == LatticeKind::Smoothed && t <= std::pow(q, eps_switch + 1)) {
    return -t;
  }

  // Generation n holds q^(n+1) < t < q^n. The clamp keeps the cast defined
  // for q pathologically close to 1, where the index would overflow int.
  const int n = std::max(0, static_cast<int>(std::min(std::floor(ray), 2e9)));
  const double qn = std::pow(q, n);
  const double xqn = x * qn;
  if (t >= xqn) {
    return lerp(t, xqn, x_node(n), qn, lattice_node(n));
  }
  return lerp(t, q * qn, lattice_node(n + 1), xqn, x_node(n));
}

double LatticeFn::max_abs_value() const {
  // Piecewise-linear between nodes, so node values of the outermost
  // generation dominate; deeper generations only shrink (SelfSim/Smoothed)
  // or stay below x + lift (Lifted).
  switch (kind) {
    case LatticeKind::SelfSim:
    case LatticeKind::Smoothed:
      return 1.0;
    case LatticeKind::Lifted:
      return std::max(1.0, x + lift);
  }
  throw std::logic_error("LatticeFn: unknown kind");
}

double q_derivative(const RealFn& f, double t, QParam q, double a) {
  if (!(t > a)) {
    throw std::domain_error("q_derivative: defined for t > a only");
  }
  const double qv = q.value();
  const double shifted = a + qv * (t - a);
  return (f(t) - f(shifted)) / ((1.0 - qv) * (t - a));
}

QDerivativeLimit q_derivative_at_a(const RealFn& f, QParam q, QInterval interval,
                                   int depth, double tol) {
  if (depth < 2) {
    throw std::invalid_argument("q_derivative_at_a: depth must be >= 2");
  }
  const double qv = q.value();
  const double a = interval.a();
  const double len = interval.length();

  // Rays toward a. The fractional powers of q sit strictly between lattice
  // generations for every q, so at least one ray stays off any q-lattice.
  const double rays[] = {1.0, 0.5, std::sqrt(qv), std::pow(qv, 0.25)};
  const int n_rays = static_cast<int>(std::size(rays));

  std::vector<double> probes;
  probes.reserve(static_cast<std::size_t>((depth + 1) * n_rays));
  for (int j = 0; j <= depth; ++j) {
    const double scale = std::pow(qv, j) * len;
    for (double s : rays) {
      probes.push_back(q_derivative(f, a + scale * s, q, a));
    }
  }

  const std::size_t half = probes.size() / 2;
  double lo = probes[half];
  double hi = probes[half];
  for (std::size_t i = half; i < probes.size(); ++i) {
    lo = std::min(lo, probes[i]);
    hi = std::max(hi, probes[i]);
  }

  double deepest = 0.0;
  for (int r = 0; r < n_rays; ++r) {
    deepest += probes[probes.size() - 1 - static_cast<std::size_t>(r)];
  }

  QDerivativeLimit out;
  out.spread = hi - lo;
  out.converged = out.spread < tol;
  out.limit = deepest / n_rays;
  return out;
}

QIntegralResult q_integral(const RealFn& f, QParam q, QInterval interval,
                           double x, double sup_f, double tol) {
  if (x < interval.a() || x > interval.b()) {
    throw std::domain_error("q_integral: upper limit outside [a,b]");
  }
  if (!(tol > 0.0)) {
    throw std::invalid_argument("q_integral: tol must be positive");
  }
  if (sup_f < 0.0) {
    throw std::invalid_argument("q_integral: sup_f must be nonnegative");
  }

  const double qv = q.value();
  const double a = interval.a();
  const double span = x - a;

  QIntegralResult out;
  if (span == 0.0 || sup_f == 0.0) {
    out.tail_bound = 0.0;
    return out;
  }

  // Smallest K with span * sup_f * q^K <= tol; the discarded tail obeys
  //   |(1-q) span sum_{k>=K} q^k f| <= span * sup_f * q^K.
  std::size_t terms = 0;
  if (span * sup_f > tol) {
    const double k_real = std::log(tol / (span * sup_f)) / std::log(qv);
    terms = static_cast<std::size_t>(std::max(0.0, std::ceil(k_real)));
    while (span * sup_f * std::pow(qv, static_cast<double>(terms)) > tol) ++terms;
  }

  KahanSum acc;
  double weight = 1.0;  // q^k
  for (std::size_t k = 0; k < terms; ++k) {
    acc.add(weight * f(a + weight * span));
    weight *= qv;
  }

  out.value = (1.0 - qv) * span * acc.sum;
  out.tail_bound = span * sup_f * std::pow(qv, static_cast<double>(terms));
  out.terms_used = terms;
  return out;
}

QIntegralResult q_integral_between(const RealFn& f, QParam q, QInterval interval,
                                   double c, double x, double sup_f, double tol) {
  if (c < interval.a() || x > interval.b() || c > x) {
    throw std::domain_error("q_integral_between: requires a <= c <= x <= b");
  }
  if (c == x) return {};
  const QIntegralResult upper = q_integral(f, q, interval, x, sup_f, tol);
  if (c == interval.a()) return upper;
  const QIntegralResult lower = q_integral(f, q, interval, c, sup_f, tol);
  return {upper.value - lower.value, upper.tail_bound + lower.tail_bound,
          upper.terms_used + lower.terms_used};
}

double lattice_point(QInterval interval, QParam q, int m) {
  if (m < 0) {
    throw std::invalid_argument("lattice_point: m must be nonnegative");
  }
  if (m == 0) return interval.b();
  return interval.a() + std::pow(q.value(), m) * interval.length();
}

std::optional<int> lattice_index_of(double x, QInterval interval, QParam q,
                                    double log_tol) {
  if (!(log_tol > 0.0)) {
    throw std::invalid_argument("lattice_index_of: log_tol must be positive");
  }
  if (x < interval.a() || x > interval.b()) {
    throw std::domain_error("lattice_index_of: x outside [a,b]");
  }
  if (x == interval.a()) return std::nullopt;  // accumulation point

  const double ratio = (x - interval.a()) / interval.length();
  const double m_real = std::log(ratio) / std::log(q.value());
  const auto m = snap_to_int(m_real, log_tol);
  if (m && *m >= 0) return m;
  return std::nullopt;
}

namespace {

double max_abs_qderiv_over(const RealFn& f, QParam q, QInterval interval,
                           const std::vector<double>& points) {
  double m = 0.0;
  for (double t : points) {
    if (t > interval.a() && t <= interval.b()) {
      m = std::max(m, std::abs(q_derivative(f, t, q, interval.a())));
    }
  }
  return m;
}

}  // namespace

SupNormEstimate sup_norm_qderiv(const RealFn& f, QParam q, QInterval interval,
                                const SamplingPlan& plan) {
  const double a = interval.a();
  const double b = interval.b();
  const double qv = q.value();

  std::vector<double> probes;
  for (double t : plan.breakpoints) {
    probes.push_back(t);
    const double preimage = a + (t - a) / qv;
    if (preimage <= b) probes.push_back(preimage);
  }
  for (int j = 0; j <= plan.lattice_generations; ++j) {
    probes.push_back(a + std::pow(qv, j) * interval.length());
  }
  const int n = std::max(2, plan.grid_points);
  for (int i = 0; i < n; ++i) {
    probes.push_back(a + interval.length() * (i + 1) / n);
  }

  return {max_abs_qderiv_over(f, q, interval, probes), false};
}

SupNormEstimate sup_norm_qderiv(const PiecewiseLinearFn& f, QParam q) {
  const QInterval interval = f.domain();
  const double a = interval.a();
  const double b = interval.b();
  const double qv = q.value();

  // D_q^a f is monotone between events (breakpoints and their q-preimages),
  // so the supremum over (a,b] is attained on this finite set.
  std::vector<double> events;
  for (double t : f.abscissae()) {
    if (t > a) events.push_back(t);
    const double preimage = a + (t - a) / qv;
    if (preimage > a && preimage <= b) events.push_back(preimage);
  }
  events.push_back(b);

  const RealFn fn = [&f](double t) { return f(t); };
  return {max_abs_qderiv_over(fn, q, interval, events), true};
}

SupNormEstimate sup_norm_qderiv(const LatticeFn& f) {
  // All three families have |D_q f| <= 1 with equality on the lattice ray.
  (void)f;
  return {1.0, true};
}

}  // namespace qcalc
