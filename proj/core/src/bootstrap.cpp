#include "sobolab/bootstrap.hpp"

#include "sobolab/errors.hpp"

#include <cmath>
#include <sstream>

namespace sobolab {

namespace {

// Relative tolerance on the one-step reach condition. Ladder points are
// rounded, so a hop to the next ladder point may overshoot by an ulp.
constexpr double kReachTolerance = 1e-12;

template <class Real>
void require_exponent_range(Real n, Real p, const char* where) {
  if (!(p >= Real(1)) || !(p < n)) {
    std::ostringstream msg;
    msg << where << ": need 1 <= p < n, got p=" << static_cast<double>(p)
        << " n=" << static_cast<double>(n);
    throw DomainError(msg.str());
  }
}

template <class Real>
Real p_next_impl(Real n, Real p) {
  require_exponent_range(n, p, "p_next");
  const Real d = n - p;
  return n * n * p / (d * d + n * p);
}

template <class Real>
Real next_log_gap(Real n, Real log_gap) {
  using std::exp;
  using std::log;
  const Real e = exp(log_gap);
  return log(n) + Real(2) * log_gap - log(n * n - n * e + e * e);
}

template <class Real>
Real r_p_impl(Real n, Real p0, Real p) {
  if (!(p < n)) throw DomainError("r_p: need p < n");
  if (!(p >= p0)) throw DomainError("r_p: need p >= p0");
  return p * (n - p0) / (p0 * (n - p));
}

template <class Real>
void step_impl(Real n, Real p0, Real p, Real a, Real b, Real& c1, Real& c2, Real& r) {
  using std::pow;
  require_exponent_range(n, p0, "step_constants");
  if (!(p > p0)) throw DomainError("step_constants: need p > p0");
  if (!(a > Real(0)) || !(b >= Real(0))) throw DomainError("step_constants: need A > 0 and B >= 0");
  // compared on values: near n the gap n - p carries a large relative error
  if (p - p_next_impl(n, p0) > Real(kReachTolerance) * p) {
    std::ostringstream msg;
    msg << "step_constants: p=" << static_cast<double>(p) << " is beyond the one-step reach "
        << static_cast<double>(p_next_impl(n, p0)) << " from p0=" << static_cast<double>(p0);
    throw DomainError(msg.str());
  }
  r = r_p_impl(n, p0, p);
  const Real q = p / p0;
  const Real two = pow(Real(2), (p - p0) / p0);
  c1 = two * pow(a, q) * pow(pow(r, p0) + b, q);
  c2 = b == Real(0) ? Real(0) : two * pow(b, Real(2) * q);
}

// A ladder point counts as reaching p when it is within the reach tolerance of
// p, so that a target given as a rounded ladder point stays in its interval.
template <class Real>
bool reaches(Real n, Real point_gap, Real target_gap) {
  using std::exp;
  if (point_gap <= target_gap) return true;
  const Real point = n - exp(point_gap);
  const Real target = n - exp(target_gap);
  return target - point <= Real(kReachTolerance) * target;
}

template <class Real>
struct LadderPoints {
  std::vector<Real> values;
  std::vector<Real> log_gaps;
};

// Extends until the newest point reaches `target` (or `steps` iterations when target < 0).
template <class Real>
LadderPoints<Real> ladder_impl(Real n, Real p0, Real target, int steps) {
  using std::exp;
  using std::log;
  require_exponent_range(n, p0, "ladder");
  LadderPoints<Real> lp;
  lp.values.push_back(p0);
  lp.log_gaps.push_back(log(n - p0));
  const bool by_target = target > Real(0);
  const Real target_gap = by_target ? log(n - target) : Real(0);
  for (int k = 0;; ++k) {
    if (by_target ? reaches(n, lp.log_gaps.back(), target_gap) : k >= steps) break;
    if (k >= kLadderIterationGuard) {
      throw GuardError("ladder: iteration guard of " + std::to_string(kLadderIterationGuard) +
                       " exceeded");
    }
    const Real lg = next_log_gap(n, lp.log_gaps.back());
    lp.log_gaps.push_back(lg);
    lp.values.push_back(n - exp(lg));
  }
  return lp;
}

template <class Real>
int k_for_impl(const std::vector<Real>& log_gaps, Real n, Real p) {
  using std::log;
  if (!(p > Real(0)) || !(p < n)) throw DomainError("k_for: p must lie below n");
  const Real lg = log(n - p);
  if (!(lg < log_gaps.front())) throw DomainError("k_for: p must exceed p0");
  for (std::size_t k = 0; k + 1 < log_gaps.size(); ++k) {
    if (reaches(n, log_gaps[k + 1], lg)) return static_cast<int>(k);
  }
  throw DomainError("k_for: ladder does not reach p");
}

template <class Real>
void chain_impl(Real n, Real p0, Real a, Real b, Real target, std::vector<StepConstants>* steps,
                Real& c1, Real& c2, int& k, int& m_p) {
  if (!(target > p0) || !(target < n)) throw DomainError("chain_constants: need p0 < target_p < n");
  const auto lp = ladder_impl(n, p0, target, 0);
  k = k_for_impl(lp.log_gaps, n, target);
  Real ca = a;
  Real cb = b;
  for (int j = 0; j <= k; ++j) {
    const Real from = lp.values[static_cast<std::size_t>(j)];
    const Real to = j < k ? lp.values[static_cast<std::size_t>(j) + 1] : target;
    Real n1 = 0;
    Real n2 = 0;
    Real r = 0;
    step_impl(n, from, to, ca, cb, n1, n2, r);
    if (steps != nullptr) {
      steps->push_back({static_cast<double>(from), static_cast<double>(to), static_cast<double>(r),
                        static_cast<double>(n1), static_cast<double>(n2)});
    }
    ca = n1;
    cb = n2;
  }
  c1 = ca;
  c2 = cb;
  m_p = 1 << (k + 1);
}

}  // namespace

double p_next(double n, double p) { return p_next_impl(n, p); }
long double p_next(long double n, long double p) { return p_next_impl(n, p); }

int PLadder::k_for(double p) const { return k_for_impl(log_gaps, n, p); }

bool PLadder::strictly_increasing() const {
  for (std::size_t k = 1; k < log_gaps.size(); ++k) {
    if (!(log_gaps[k] < log_gaps[k - 1])) return false;
  }
  return true;
}

PLadder iterate_ladder(double n, double p0, int steps) {
  if (steps < 0 || steps > kLadderIterationGuard) {
    throw GuardError("iterate_ladder: steps must lie in [0, " + std::to_string(kLadderIterationGuard) + "]");
  }
  const auto lp = ladder_impl(n, p0, -1.0, steps);
  return {n, p0, lp.values, lp.log_gaps};
}

PLadder build_ladder(double n, double p0, double target_p) {
  if (!(target_p < n)) throw DomainError("build_ladder: target_p must be below n");
  if (!(target_p > p0)) throw DomainError("build_ladder: target_p must exceed p0");
  const auto lp = ladder_impl(n, p0, target_p, 0);
  return {n, p0, lp.values, lp.log_gaps};
}

double r_p(double n, double p0, double p) { return r_p_impl(n, p0, p); }

StepConstants step_constants(double n, double p0, double p, double a, double b) {
  StepConstants s;
  s.from_p = p0;
  s.to_p = p;
  step_impl(n, p0, p, a, b, s.c1, s.c2, s.r);
  return s;
}

BootstrapChain chain_constants(double n, double p0, double a, double b, double target_p) {
  BootstrapChain c;
  c.n = n;
  c.p0 = p0;
  c.target_p = target_p;
  c.a = a;
  c.b = b;
  chain_impl(n, p0, a, b, target_p, &c.steps, c.c1, c.c2, c.k, c.m_p);
  return c;
}

ExtendedChainConstants chain_constants_extended(long double n, long double p0, long double a,
                                                long double b, long double target_p) {
  ExtendedChainConstants out;
  int k = 0;
  chain_impl<long double>(n, p0, a, b, target_p, nullptr, out.c1, out.c2, k, out.m_p);
  return out;
}

std::string AlphaScalingRecord::describe() const {
  std::ostringstream s;
  s.precision(17);
  s << "n=" << n << " p0=" << p0 << " p=" << target_p << " A1=" << a1 << " B1=" << b1
    << " alpha=" << alpha << " m=" << m_p << ": C1 " << c1_scaled << " vs " << c1_bound << ", C2 "
    << c2_scaled << " vs " << c2_bound;
  return s.str();
}

AlphaScalingRecord alpha_scaling_bound(double n, double p0, double target_p, double a1, double b1,
                                       double alpha) {
  if (!(alpha >= 1.0)) throw DomainError("alpha_scaling_bound: alpha must be >= 1");
  const BootstrapChain base = chain_constants(n, p0, a1, b1, target_p);
  const BootstrapChain scaled = chain_constants(n, p0, alpha * a1, alpha * b1, target_p);
  AlphaScalingRecord rec;
  rec.n = n;
  rec.p0 = p0;
  rec.target_p = target_p;
  rec.a1 = a1;
  rec.b1 = b1;
  rec.alpha = alpha;
  rec.m_p = base.m_p;
  rec.factor = std::pow(alpha, base.m_p * target_p / p0);
  rec.c1_scaled = scaled.c1;
  rec.c2_scaled = scaled.c2;
  rec.c1_bound = rec.factor * base.c1;
  rec.c2_bound = rec.factor * base.c2;
  rec.holds = rec.c1_scaled <= rec.c1_bound * (1.0 + kAlphaScalingSlack) &&
              rec.c2_scaled <= rec.c2_bound * (1.0 + kAlphaScalingSlack);
  return rec;
}

double theorem_a2_rhs_factor(const DiscreteManifold& m, double p, const BootstrapChain& chain,
                             double base) {
  if (chain.p0 != 2.0) throw DomainError("theorem_a2_rhs_factor: m(p) is defined for the p0 = 2 ladder");
  const GeometricSummary g = geometric_summary(m);
  const double phi = (g.r_max_plus + 1.0) * std::pow(g.vol, 2.0 / m.dim);
  return base * std::pow(phi, chain.m_p * p / 2.0);
}

}  // namespace sobolab
