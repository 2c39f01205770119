#pragma once

#include "sobolab/ensemble.hpp"
#include "sobolab/manifold.hpp"
#include "sobolab/spectral.hpp"

#include <optional>
#include <string>

namespace sobolab {

enum class InequalityKind {
  /// ||u||_{np/(n-p)}^p <= factor (c1 ||grad u||_p^p + c2 vol^{-p/n} ||u||_p^p)
  Sobolev,
  /// ||u||_{np/(n-p)}^p <= factor c1 (||grad u||_p^p + ||u||_p^p)
  LiteralA2,
  /// ||u||_{mu p/(mu-p)} <= factor c1 ||(-Delta + 1)^{1/2} u||_p   (needs the Psi = 1 decomposition)
  Bessel,
  /// ||u||_{mu p/(mu-p)} <= factor c1 ||H^{1/2} u||_p                (needs the H decomposition)
  NonlocalH,
  /// ||u||_{mu p/(mu-p)} <= factor c1 (||grad u||_p + (1 + shift) ||u||_p)
  Riesz,
  /// ||u||_{mu p/(mu-2p)} <= factor c1 ||H u||_p                      (needs Psi)
  W2p,
  /// ||e^{-tH} u||_inf <= factor c1 ||u||_2                          (needs the H decomposition)
  Heat1,
  /// ||e^{-tH} u||_inf <= factor c1 ||u||_1
  Heat2,
};

std::string to_string(InequalityKind kind);
InequalityKind inequality_from_string(const std::string& name);

struct InequalitySpec {
  InequalityKind kind = InequalityKind::Sobolev;
  double p = 2.0;
  std::optional<double> mu;  // defaults to the manifold dimension
  double c1 = 1.0;
  double c2 = 0.0;
  double factor = 1.0;
  double shift = 0.0;        // a, kappa or gamma in the Riesz form
  double t = 0.0;            // heat forms
};

/// Data an inequality may draw on; which fields are needed depends on the kind.
struct InequalityContext {
  const DiscreteManifold* manifold = nullptr;
  const SpectralDecomposition* bessel = nullptr;     // -Delta + 1
  const SpectralDecomposition* operator_h = nullptr; // -Delta + Psi
  const Vector* psi = nullptr;
};

struct MemberValues {
  Vector lhs;
  Vector rhs;
};

inline constexpr double kViolationSlack = 1e-9;

struct InequalityCheck {
  int violations = 0;
  double worst_ratio = 0.0;
  std::string witness;
  double witness_lhs = 0.0;
  double witness_rhs = 0.0;
  Eigen::Index evaluated = 0;
};

/// LHS and RHS per member (RHS with the spec's constants).
MemberValues evaluate_inequality(const InequalityContext& ctx, const InequalitySpec& spec,
                                 const Ensemble& e);

/// Counts members with LHS > RHS (1 + kViolationSlack). The worst ratio is
/// max LHS/RHS; ties go to the lowest member index.
InequalityCheck verify_inequality(const InequalityContext& ctx, const InequalitySpec& spec,
                                  const Ensemble& e);

/// Smallest c1 making the inequality hold on the ensemble (factor = 1, c2 fixed at spec.c2 = 0).
/// Only meaningful for kinds whose RHS is linear in c1.
double minimal_constant(const InequalityContext& ctx, InequalitySpec spec, const Ensemble& e,
                        std::string* witness = nullptr);

/// Reduction shared by all checks: ratios with 0/0 = 0 and x/0 = inf.
InequalityCheck summarize(const MemberValues& values, const Ensemble& e);

}  // namespace sobolab
