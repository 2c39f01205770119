#pragma once

#include "sobolab/manifold.hpp"

#include <functional>
#include <iosfwd>
#include <string>

namespace sobolab {

/// Per-node potential Psi of H = -Delta + Psi.
struct PotentialField {
  Vector values;
  std::string label;

  static PotentialField constant(const DiscreteManifold& m, double c);
  /// R/4, the conformal-Laplacian potential.
  static PotentialField quarter_scalar_curvature(const DiscreteManifold& m);
  /// Psi - inf Psi^- + 1, the shifted operator H_0 of the general-sign case.
  [[nodiscard]] PotentialField shifted_positive() const;

  [[nodiscard]] bool is_nonnegative() const { return (values.array() >= 0.0).all(); }
  [[nodiscard]] double inf_minus() const;
};

inline constexpr Eigen::Index kDenseNodeGuard = 4000;
inline constexpr double kEigenClipRelative = 1e-10;

/// Eigenpairs of (S + M Psi) phi = lambda M phi with M-orthonormal phi.
struct SpectralDecomposition {
  Vector eigenvalues;     // ascending
  Matrix eigenvectors;    // column k is phi_k
  Vector mass;
  Vector potential;
  std::string potential_label;
  std::string manifold_label;

  [[nodiscard]] Eigen::Index size() const { return eigenvalues.size(); }
  [[nodiscard]] double lambda_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

using SpectralFunction = std::function<double(double)>;

SpectralDecomposition decompose(const DiscreteManifold& m, const PotentialField& psi);

/// f(lambda_k) for every eigenvalue; SingularOperatorError if any value is not finite.
Vector evaluate_multiplier(const SpectralDecomposition& dec, const SpectralFunction& f,
                           const std::string& what = "f");

/// f(H) u = sum_k f(lambda_k) <u, phi_k>_M phi_k
Vector apply_function(const SpectralDecomposition& dec, const SpectralFunction& f, const Vector& u);
/// Column-wise f(H) U.
Matrix apply_function(const SpectralDecomposition& dec, const SpectralFunction& f, const Matrix& u);
Matrix apply_multiplier(const SpectralDecomposition& dec, const Vector& multiplier, const Matrix& u);

/// H^s via its spectrum (s may be negative; the zero mode then raises).
SpectralFunction power_function(double s);
SpectralFunction heat_function(double t);

/// Smallest eigenvalue of -Delta + R/4.
double lambda0(const DiscreteManifold& m);

/// Exact L^2 -> L^infty norm of f(H): max_x sqrt(sum_k f_k^2 phi_k(x)^2).
double op_norm_2_to_inf(const SpectralDecomposition& dec, const SpectralFunction& f);
/// Exact L^1 -> L^infty norm of f(H): max_{x,y} |K_f(x,y)|.
double op_norm_1_to_inf(const SpectralDecomposition& dec, const SpectralFunction& f);

/// Largest mass-norm residual ||(S + M Psi) phi_k - lambda_k M phi_k||_M / (1 + |lambda_k|).
double max_relative_residual(const DiscreteManifold& m, const SpectralDecomposition& dec);
/// max |Phi^T M Phi - I|.
double orthonormality_defect(const SpectralDecomposition& dec);

/// "k,lambda_k" rows with a header line.
void write_spectrum_csv(std::ostream& out, const SpectralDecomposition& dec);

}  // namespace sobolab
