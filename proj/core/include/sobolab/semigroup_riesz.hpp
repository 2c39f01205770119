#pragma once

#include "sobolab/ensemble.hpp"
#include "sobolab/inequality.hpp"
#include "sobolab/manifold.hpp"
#include "sobolab/spectral.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace sobolab {

struct ContractionReport {
  int violations = 0;
  double worst_ratio = 0.0;
  std::string witness;
  double worst_t = 0.0;
  double worst_p = 0.0;
  Eigen::Index evaluated = 0;
};

inline constexpr double kContractionSlack = 1e-8;

/// ||e^{-tH} u||_p <= ||u||_p (1 + 1e-8) over every (t, p, member); dec must have Psi >= 0.
ContractionReport heat_contraction_check(const DiscreteManifold& m, const SpectralDecomposition& dec,
                                         const std::vector<double>& t_list,
                                         const std::vector<double>& p_list, const Ensemble& e);

struct UltracontractivityFit {
  std::vector<double> times;
  std::vector<double> norms;  // ||e^{-tH}||_{2->inf}
  double slope = 0.0;
  double intercept = 0.0;
  double mu_hat = 0.0;        // -4 slope
  double c_hat = 0.0;         // exp(intercept)
  double t_floor = 0.0;       // 4 / lambda_max
};

/// Least-squares fit of log ||e^{-tH}||_{2->inf} against log t on `samples`
/// log-spaced times in [t_lo, t_hi]. GuardError if t_lo < 4/lambda_max.
UltracontractivityFit ultracontractivity_fit(const SpectralDecomposition& dec, double t_lo, double t_hi,
                                             int samples = 16);

struct Theorem31Row {
  double t = 0.0;
  double tau = 0.0;
  double bound_l2 = 0.0;       // exp(tau(t) - (3t/4) inf Psi^-)
  double bound_l1 = 0.0;       // exp(2 tau(t/2) - (3t/4) inf Psi^-)
  double exact_l2 = 0.0;       // ||e^{-tH}||_{2->inf}
  double exact_l1 = 0.0;       // ||e^{-tH}||_{1->inf}
  InequalityCheck heat1;
  InequalityCheck heat2;
};

struct Theorem31Report {
  std::vector<Theorem31Row> rows;
  double inf_psi_minus = 0.0;
  int violations = 0;          // ensemble violations of both bounds
  int operator_violations = 0; // exact operator norms above the bounds
};

/// Checks both heat bounds of the log-Sobolev route member-wise and against the
/// exact operator norms. `tau` maps t to tau(t). With a finite sigma_star
/// every t must satisfy t < sigma_star / 4.
Theorem31Report check_theorem_31(const DiscreteManifold& m, const SpectralDecomposition& dec,
                                 const std::function<double(double)>& tau,
                                 const std::vector<double>& t_list, const Ensemble& e,
                                 std::optional<double> sigma_star = std::nullopt);

/// H^power, optionally followed by the discrete gradient.
struct MappingOperator {
  double power = 0.0;
  bool gradient = false;

  [[nodiscard]] std::string label() const;
};

/// "H^{-1/2}", "H^-0.5", "H^{-1}", "grad H^{-1/2}", "identity".
MappingOperator parse_operator(const std::string& label);

/// mu p / (mu - order p) for order 1 (H^{-1/2}) or 2 (H^{-1}).
double advertised_output_exponent(double mu, double p, int order);

struct MappingNormScan {
  std::string operator_label;
  double p_in = 0.0;
  double p_out = 0.0;
  double estimate = 0.0;       // max of the ensemble sup and the refined iterate
  double ensemble_sup = 0.0;   // plain sup over members (monotone in ensemble size)
  std::string witness;
  int refine_iterations = 0;
  Eigen::Index mesh_nodes = 0;
  EnsembleSpec ensemble_meta;
  Eigen::Index ensemble_size = 0;
};

/// sup ||Op u||_{p_out} / ||u||_{p_in}, sharpened by adjoint power iterations
/// started from the worst member.
MappingNormScan mapping_norm(const DiscreteManifold& m, const SpectralDecomposition& dec,
                             const MappingOperator& op, double p_in, double p_out, const Ensemble& e,
                             int refine_iterations = 5);

/// sup ||grad H^{-1/2} u||_p / ||u||_p.
MappingNormScan riesz_ratio(const DiscreteManifold& m, const SpectralDecomposition& dec, double p,
                            const Ensemble& e, int refine_iterations = 5);

/// Smallest C with ||grad v||_q <= C (||(-Delta+1)^{1/2} v||_q + a ||v||_q) on the ensemble.
double bakry_constant(const DiscreteManifold& m, const SpectralDecomposition& bessel, double a, double q,
                      const Ensemble& e, std::string* witness = nullptr);

struct BesselEquivalence {
  double c1_hat = 0.0;
  double c2_hat = 0.0;
  Eigen::Index used = 0;
  Eigen::Index excluded = 0;  // members with a vanishing outer norm
};

/// Extremal ratios ||(-Delta + a^2)^{1/2} u||_p / (a ||u||_p + ||(-Delta)^{1/2} u||_p);
/// `laplace` must be the decomposition of -Delta (Psi = 0).
BesselEquivalence bessel_equivalence_constants(const DiscreteManifold& m,
                                               const SpectralDecomposition& laplace, double a, double p,
                                               const Ensemble& e);

struct ScalingTransferReport {
  double lambda = 1.0;
  double max_lp_defect = 0.0;     // max |‖u‖_{q,gbar} / (lambda^{n/q} ‖u‖_q) - 1|
  double max_grad_defect = 0.0;   // same for gradient norms with lambda^{n/q - 1}
  double c_bar = 0.0;             // measured constant on gbar
  InequalityCheck transfer;       // the g-inequality with lambda c_bar
};

/// Exact norm scalings under g -> lambda^2 g, then transfer of the Bessel-form
/// Sobolev constant from gbar back to g. `bessel` is the -Delta + 1
/// decomposition on m.
ScalingTransferReport scaling_transfer_check(const DiscreteManifold& m, double lambda, double mu, double p,
                                             const SpectralDecomposition& bessel, const Ensemble& e,
                                             const std::vector<double>& q_list = {1.0, 1.5, 2.0, 3.0, 6.0});

struct LiRegimeReport {
  double gamma = 0.0;
  double c_hat = 0.0;
  std::string witness;
};

/// gamma from the integral Ricci bound, then the smallest C in
/// ||u||_{np/(n-p)} <= C (||grad u||_p + (1 + gamma) ||u||_p).
LiRegimeReport li_regime_check(const DiscreteManifold& m, double c, double eps, double p, const Ensemble& e);

}  // namespace sobolab
