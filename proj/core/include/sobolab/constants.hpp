#pragma once

#include "sobolab/ensemble.hpp"
#include "sobolab/manifold.hpp"

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace sobolab {

/// Feasible (A, B) for ||u||_{p*}^p <= A ||grad u||_p^p + B vol^{-p/n} ||u||_p^p on an ensemble.
struct SobolevEstimate {
  int n = 0;
  double p = 0.0;
  double p_star = 0.0;
  double a_est = 0.0;
  double b_est = 0.0;
  double max_ratio = 0.0;        // worst LHS/RHS under (a_est, b_est)
  std::string witness;           // member attaining max_ratio
  std::string a_witness;         // member that fixed a_est
  double volume = 0.0;
  EnsembleSpec ensemble_meta;
  Eigen::Index ensemble_size = 0;
};

/// Per-member pieces of the Sobolev inequality at exponent p.
struct SobolevTerms {
  Vector lhs;        // ||u||_{p*}^p
  Vector gradient;   // ||grad u||_p^p
  Vector lower;      // vol^{-p/n} ||u||_p^p
};

SobolevTerms sobolev_terms(const DiscreteManifold& m, double p, const Ensemble& e);

/// Geometric grid 1, 1.1, 1.1^2, ... (61 points up to about 300).
std::vector<double> default_b_grid();

/// For each B on the grid takes the smallest A feasible on every member and
/// returns the pair minimizing A + B. B values that some gradient-free member
/// rules out are skipped.
SobolevEstimate estimate_sobolev_AB(const DiscreteManifold& m, double p, const Ensemble& e,
                                    const std::vector<double>& b_grid = default_b_grid());

enum class ProfileSource { Measured, DerivedFromSobolev };

struct LogSobolevProfile {
  std::vector<double> sigma_grid;
  std::vector<double> beta_values;
  ProfileSource source = ProfileSource::Measured;
  std::vector<std::string> witnesses;  // measured profiles only

  /// Piecewise-linear interpolant. Measured profiles are convex in sigma, so
  /// the interpolant is an upper bound between grid points; the grid must
  /// start at 0 for it to cover (0, t].
  [[nodiscard]] std::function<double(double)> as_function() const;
};

/// Entropy int u^2 ln u^2 with 0 ln 0 = 0.
double entropy(const DiscreteManifold& m, const Vector& u);

/// beta(sigma) = max over unit-L^2 members of (int u^2 ln u^2 - sigma Q(u)).
LogSobolevProfile measure_log_sobolev_beta(const DiscreteManifold& m, const Vector& psi,
                                           const std::vector<double>& sigma_grid, const Ensemble& e);

/// -(mu/2) ln sigma + (mu/2) ln(mu/2) + (mu/2) ln A - 1
double beta_from_sobolev(double a, double mu, double sigma);
LogSobolevProfile derived_profile(double a, double mu, const std::vector<double>& sigma_grid);

/// (mu/2) ln(mu/2) + (mu/2) ln A - 1
double log_sobolev_offset(double a, double mu);

/// tau(t) = (1/2t) int_0^t beta, closed form for the Sobolev-derived beta.
double tau_closed_form(double a, double mu, double t);
/// Same integral by double-exponential quadrature (handles the log endpoint singularity).
double tau_quadrature(const std::function<double(double)>& beta, double t);

struct UltracontractivityConstant {
  double c = 0.0;
  double exponent = 0.0;  // mu/4
};

/// ||e^{-tH}||_{2->inf} <= c t^{-mu/4} with c = exp(mu/4 + A0/2).
UltracontractivityConstant ultracontractivity_constant(double a, double mu);

/// A of int |u|^{2mu/(mu-2)} ... <= A int (|grad u|^2 + u^2) from
/// ||u||^2 <= A ||grad u||^2 + B vol^{-2/n} ||u||^2, i.e. max(A, B vol^{-2/n}).
double bessel_form_constant(double a, double b, double volume, int n);

void write_profile_csv(std::ostream& out, const LogSobolevProfile& profile);

}  // namespace sobolab
