#pragma once

#include "sobolab/manifold.hpp"

#include <string>
#include <vector>

namespace sobolab {

/// n^2 p / ((n - p)^2 + n p), for 1 <= p < n.
double p_next(double n, double p);
long double p_next(long double n, long double p);

/// Iterates of the exponent recurrence. Convergence to n is quadratic, so
/// after a handful of steps p_k rounds to n in any floating format; the gaps
/// n - p_k are therefore carried as logarithms, which stay exact in shape
/// (log e_{k+1} = ln n + 2 log e_k - ln(n^2 - n e_k + e_k^2)).
struct PLadder {
  double n = 0.0;
  double p0 = 0.0;
  std::vector<double> values;    // p_0, p_1, ...
  std::vector<double> log_gaps;  // ln(n - p_k)

  /// k with p in (p_k, p_{k+1}]; the ladder must already reach p.
  [[nodiscard]] int k_for(double p) const;
  [[nodiscard]] bool strictly_increasing() const;
};

inline constexpr int kLadderIterationGuard = 200;

/// p_0 .. p_steps (steps <= kLadderIterationGuard).
PLadder iterate_ladder(double n, double p0, int steps);
/// Shortest ladder whose last interval contains target_p.
PLadder build_ladder(double n, double p0, double target_p);

/// p (n - p0) / (p0 (n - p))
double r_p(double n, double p0, double p);

struct StepConstants {
  double from_p = 0.0;
  double to_p = 0.0;
  double r = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
};

/// One application of the lower-to-higher exponent step from p0 to p with base (A, B):
/// C1 = 2^{(p-p0)/p0} A^{p/p0} (r_p^{p0} + B)^{p/p0},  C2 = 2^{(p-p0)/p0} B^{2p/p0}.
StepConstants step_constants(double n, double p0, double p, double a, double b);

struct BootstrapChain {
  double n = 0.0;
  double p0 = 0.0;
  double target_p = 0.0;
  double a = 0.0;
  double b = 0.0;
  std::vector<StepConstants> steps;
  double c1 = 0.0;  // cumulative constants at target_p
  double c2 = 0.0;
  int k = 0;        // target_p in (p_k, p_{k+1}]
  int m_p = 0;      // 2^{k+1}
};

/// p0 -> p_1 -> ... -> p_k -> target_p; each hop feeds its (C1, C2) into the next as (A, B).
BootstrapChain chain_constants(double n, double p0, double a, double b, double target_p);

/// Cumulative (C1, C2) computed entirely in long double, for regression baselines.
struct ExtendedChainConstants {
  long double c1 = 0.0L;
  long double c2 = 0.0L;
  int m_p = 0;
};
ExtendedChainConstants chain_constants_extended(long double n, long double p0, long double a,
                                                long double b, long double target_p);

struct AlphaScalingRecord {
  double n = 0.0;
  double p0 = 0.0;
  double target_p = 0.0;
  double a1 = 0.0;
  double b1 = 0.0;
  double alpha = 1.0;
  int m_p = 0;
  double factor = 1.0;       // alpha^{m_p p / p0}
  double c1_scaled = 0.0;    // chain(alpha A1, alpha B1)
  double c2_scaled = 0.0;
  double c1_bound = 0.0;     // factor * chain(A1, B1)
  double c2_bound = 0.0;
  bool holds = false;

  [[nodiscard]] std::string describe() const;
};

inline constexpr double kAlphaScalingSlack = 1e-9;

/// Compares chain(alpha A1, alpha B1) against alpha^{m_p p/p0} chain(A1, B1) componentwise.
AlphaScalingRecord alpha_scaling_bound(double n, double p0, double target_p, double a1, double b1,
                                       double alpha);

/// base * [(max R^+ + 1) vol^{2/n}]^{m_p p / 2}; needs a chain started at p0 = 2.
double theorem_a2_rhs_factor(const DiscreteManifold& m, double p, const BootstrapChain& chain,
                             double base = 1.0);

}  // namespace sobolab
