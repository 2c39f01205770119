#include "sobolab/spectral.hpp"

#include "sobolab/errors.hpp"

#include <lapacke.h>

#include <cmath>
#include <ostream>
#include <sstream>

namespace sobolab {

PotentialField PotentialField::constant(const DiscreteManifold& m, double c) {
  std::ostringstream label;
  label << "const:" << c;
  return {Vector::Constant(m.num_nodes(), c), label.str()};
}

PotentialField PotentialField::quarter_scalar_curvature(const DiscreteManifold& m) {
  return {0.25 * m.scalar_curvature, "R/4"};
}

PotentialField PotentialField::shifted_positive() const {
  return {values.array() - inf_minus() + 1.0, label + " - inf(psi^-) + 1"};
}

double PotentialField::inf_minus() const { return std::min(0.0, values.minCoeff()); }

SpectralDecomposition decompose(const DiscreteManifold& m, const PotentialField& psi) {
  const Eigen::Index n = m.num_nodes();
  if (n > kDenseNodeGuard) {
    throw GuardError("decompose: " + std::to_string(n) + " nodes exceeds the dense guard of " +
                     std::to_string(kDenseNodeGuard));
  }
  if (psi.values.size() != n) throw DomainError("decompose: potential size does not match manifold");
  if (!psi.values.allFinite()) throw DomainError("decompose: potential has non-finite values");

  const Vector inv_sqrt_mass = m.mass.cwiseSqrt().cwiseInverse();
  Matrix a = Matrix(m.stiffness);
  a.diagonal() += m.mass.cwiseProduct(psi.values);
  a = inv_sqrt_mass.asDiagonal() * a * inv_sqrt_mass.asDiagonal();
  // Symmetrize exactly; LAPACK only reads the lower triangle anyway.
  a = 0.5 * (a + a.transpose()).eval();

  Vector w(n);
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                                         a.data(), static_cast<lapack_int>(n), w.data());
  if (info != 0) {
    throw GuardError("decompose: LAPACK dsyevd failed with info=" + std::to_string(info));
  }

  SpectralDecomposition dec;
  const double scale = w.cwiseAbs().maxCoeff();
  for (Eigen::Index k = 0; k < n; ++k) {
    if (std::abs(w(k)) <= kEigenClipRelative * scale) w(k) = 0.0;
  }
  dec.eigenvalues = std::move(w);
  dec.eigenvectors = inv_sqrt_mass.asDiagonal() * a;
  // Fix the sign of each eigenvector so that reruns agree: largest |entry| positive.
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index arg = 0;
    dec.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (dec.eigenvectors(arg, k) < 0.0) dec.eigenvectors.col(k) *= -1.0;
  }
  dec.mass = m.mass;
  dec.potential = psi.values;
  dec.potential_label = psi.label;
  dec.manifold_label = m.label;
  return dec;
}

Vector evaluate_multiplier(const SpectralDecomposition& dec, const SpectralFunction& f,
                           const std::string& what) {
  Vector out(dec.size());
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    out(k) = f(dec.eigenvalues(k));
    if (!std::isfinite(out(k))) {
      std::ostringstream msg;
      msg << what << " is undefined at eigenvalue lambda_" << k << " = " << dec.eigenvalues(k)
          << " of -Delta + " << dec.potential_label << " on " << dec.manifold_label;
      throw SingularOperatorError(msg.str());
    }
  }
  return out;
}

Matrix apply_multiplier(const SpectralDecomposition& dec, const Vector& multiplier, const Matrix& u) {
  if (u.rows() != dec.size()) throw DomainError("apply_function: function size does not match spectrum");
  Matrix coeffs = dec.eigenvectors.transpose() * (dec.mass.asDiagonal() * u);
  coeffs = multiplier.asDiagonal() * coeffs;
  return dec.eigenvectors * coeffs;
}

Matrix apply_function(const SpectralDecomposition& dec, const SpectralFunction& f, const Matrix& u) {
  return apply_multiplier(dec, evaluate_multiplier(dec, f), u);
}

Vector apply_function(const SpectralDecomposition& dec, const SpectralFunction& f, const Vector& u) {
  const Matrix out = apply_function(dec, f, Matrix(u));
  return out.col(0);
}

SpectralFunction power_function(double s) {
  if (s == 1.0) return [](double x) { return x; };
  if (s == 0.0) return [](double) { return 1.0; };
  if (s == 0.5) return [](double x) { return std::sqrt(x); };
  return [s](double x) {
    if (x == 0.0) return s > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::pow(x, s);
  };
}

SpectralFunction heat_function(double t) {
  return [t](double x) { return std::exp(-t * x); };
}

double lambda0(const DiscreteManifold& m) {
  const auto dec = decompose(m, PotentialField::quarter_scalar_curvature(m));
  return dec.eigenvalues(0);
}

double op_norm_2_to_inf(const SpectralDecomposition& dec, const SpectralFunction& f) {
  const Vector mult = evaluate_multiplier(dec, f);
  const Vector row_sq = dec.eigenvectors.array().square().matrix() * mult.array().square().matrix();
  return std::sqrt(row_sq.maxCoeff());
}

double op_norm_1_to_inf(const SpectralDecomposition& dec, const SpectralFunction& f) {
  const Vector mult = evaluate_multiplier(dec, f);
  if ((mult.array() >= 0.0).all()) {
    // A positive semidefinite kernel attains its largest entry on the diagonal.
    const Vector diag = dec.eigenvectors.array().square().matrix() * mult;
    return diag.maxCoeff();
  }
  const Matrix kernel = dec.eigenvectors * mult.asDiagonal() * dec.eigenvectors.transpose();
  return kernel.cwiseAbs().maxCoeff();
}

double max_relative_residual(const DiscreteManifold& m, const SpectralDecomposition& dec) {
  const Matrix hphi = m.stiffness * dec.eigenvectors +
                      (m.mass.cwiseProduct(dec.potential)).asDiagonal() * dec.eigenvectors;
  double worst = 0.0;
  const Vector inv_mass = m.mass.cwiseInverse();
  for (Eigen::Index k = 0; k < dec.size(); ++k) {
    // The residual vector r lives in the dual space; its mass norm is sqrt(r^T M^{-1} r).
    const Vector r = hphi.col(k) - dec.eigenvalues(k) * m.mass.cwiseProduct(dec.eigenvectors.col(k));
    const double norm = std::sqrt(r.cwiseProduct(inv_mass).dot(r));
    worst = std::max(worst, norm / (1.0 + std::abs(dec.eigenvalues(k))));
  }
  return worst;
}

double orthonormality_defect(const SpectralDecomposition& dec) {
  const Matrix gram = dec.eigenvectors.transpose() * dec.mass.asDiagonal() * dec.eigenvectors;
  return (gram - Matrix::Identity(dec.size(), dec.size())).cwiseAbs().maxCoeff();
}

void write_spectrum_csv(std::ostream& out, const SpectralDecomposition& dec) {
  out << "k,lambda_k\n";
  out.precision(17);
  for (Eigen::Index k = 0; k < dec.size(); ++k) out << k << ',' << dec.eigenvalues(k) << '\n';
}

}  // namespace sobolab
