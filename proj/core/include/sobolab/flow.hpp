#pragma once

#include "sobolab/constants.hpp"
#include "sobolab/ensemble.hpp"
#include "sobolab/manifold.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sobolab {

/// g(t) = (1 - 2t/r0^2) g(0) on the round sphere of radius r0; singular at t = r0^2/2.
struct ShrinkingSphere2 {
  double r0 = 1.0;
  int subdivision_level = 3;
};

/// Flat (Ricci-flat) torus, a fixed point of the flow.
struct StaticTorus {
  int n = 3;
  std::vector<double> side_lengths{1.0};
  int resolution = 10;
};

struct ExactFlow {
  std::variant<ShrinkingSphere2, StaticTorus> variant;
  double t_max = 0.0;

  [[nodiscard]] ModelSpec base_mesh() const;
  /// Metric scale factor s(t) with g(t) = s(t)^2 g(0).
  [[nodiscard]] double scale_at(double t) const;
  /// Infinite for the static torus.
  [[nodiscard]] double singular_time() const;
  [[nodiscard]] std::string label() const;
};

/// "sphere:r0=1[,subdiv=3][,tmax=0.45]" or "torus:n=3,res=10,L=1[,T=1]".
/// The default horizon is 0.9 of the singular time (sphere) or 1 (torus).
ExactFlow parse_flow(const std::string& text);

/// g(t) from an already built g(0).
DiscreteManifold metric_at(const ExactFlow& flow, const DiscreteManifold& base, double t);
DiscreteManifold metric_at(const ExactFlow& flow, double t);

enum class TheoremSelector { A2, A3, B2, B3, D2, D3, E2, E3 };

std::string to_string(TheoremSelector s);
TheoremSelector selector_from_string(const std::string& name);
/// The "2" selectors need lambda0(g0) > 0; the "3" selectors only a finite horizon.
bool requires_positive_lambda0(TheoremSelector s);

struct TrackOptions {
  TheoremSelector selector = TheoremSelector::A2;
  double p = 1.5;
  double p0 = 1.2;                   // base exponent of the bootstrap selectors
  EnsembleSpec ensemble;
  std::vector<double> b_grid = default_b_grid();
  double eps = 1.0;                  // E selectors
};

struct FlowRecord {
  double t = 0.0;
  double scale = 1.0;
  double vol = 0.0;
  double r_max_plus = 0.0;
  double kappa = 0.0;
  double lambda0 = 0.0;
  double phi = 0.0;          // (max R^+ + 1) vol^{2/n}
  double gamma = 0.0;        // E selectors
  double rhs_factor = 1.0;   // time-dependent factor on the inequality's right side
  double worst_ratio = 0.0;
  int violations = 0;
  std::string witness;
};

struct FlowTrajectory {
  std::string flow_label;
  TheoremSelector selector = TheoremSelector::A2;
  double p = 0.0;
  double p0 = 0.0;
  int n = 0;
  // Constants fixed at t = 0.
  std::optional<SobolevEstimate> base_estimate;  // A selectors
  double alpha_ref = 1.0;                        // A selectors
  double c1 = 0.0;                               // chain C1* (A) or the calibrated C (B, D, E)
  double c2 = 0.0;                               // chain C2* (A)
  int m_p = 0;
  double ratio_at_start = 0.0;                   // B, D, E: sup ratio at t = 0
  std::vector<FlowRecord> records;
  int total_violations = 0;
  double worst_ratio = 0.0;
};

/// Evaluates the selected inequality at each time with constants determined
/// once from g(0). Throws HypothesisError when lambda0(g0) <= 0 for a "2" selector.
FlowTrajectory track(const ExactFlow& flow, const std::vector<double>& times, const TrackOptions& options);

/// lambda0(g(t)) for each time; diagnostic only.
std::vector<double> lambda0_monotonicity_probe(const ExactFlow& flow, const std::vector<double>& times);

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj);

}  // namespace sobolab
