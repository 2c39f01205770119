#include "sobolab/norms.hpp"

#include "sobolab/errors.hpp"

#include <cmath>

namespace sobolab {

namespace {

void require_exponent(double p, const char* where) {
  if (!(p >= 1.0)) throw DomainError(std::string(where) + ": exponent p must be >= 1");
}

double weighted_power_sum(const Vector& weights, const Vector& values, double p) {
  if (p == 2.0) return weights.dot(values.cwiseAbs2());
  if (p == 1.0) return weights.dot(values.cwiseAbs());
  double s = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double a = std::abs(values(i));
    if (a > 0.0) s += weights(i) * std::pow(a, p);
  }
  return s;
}

double root(double integral, double p) {
  if (p == 1.0) return integral;
  if (p == 2.0) return std::sqrt(integral);
  return std::pow(integral, 1.0 / p);
}

}  // namespace

double lp_integral(const DiscreteManifold& m, const Vector& u, double p) {
  require_exponent(p, "lp_integral");
  if (std::isinf(p)) throw DomainError("lp_integral: p must be finite");
  return weighted_power_sum(m.mass, u, p);
}

double lp_norm(const DiscreteManifold& m, const Vector& u, double p) {
  require_exponent(p, "lp_norm");
  if (u.size() != m.num_nodes()) throw DomainError("lp_norm: function size does not match manifold");
  if (std::isinf(p)) return u.cwiseAbs().maxCoeff();
  return root(weighted_power_sum(m.mass, u, p), p);
}

Vector element_gradient_magnitudes(const DiscreteManifold& m, const Vector& u) {
  if (u.size() != m.num_nodes()) throw DomainError("gradient: function size does not match manifold");
  const Vector g = m.gradient.matrix * u;
  const int c = m.gradient.components;
  Vector out(m.gradient.num_elements());
  for (Eigen::Index e = 0; e < out.size(); ++e) out(e) = g.segment(e * c, c).norm();
  return out;
}

double grad_lp_integral(const DiscreteManifold& m, const Vector& u, double p) {
  require_exponent(p, "grad_lp_integral");
  if (std::isinf(p)) throw DomainError("grad_lp_integral: p must be finite");
  return weighted_power_sum(m.gradient.weights, element_gradient_magnitudes(m, u), p);
}

double grad_lp_norm(const DiscreteManifold& m, const Vector& u, double p) {
  require_exponent(p, "grad_lp_norm");
  const Vector mags = element_gradient_magnitudes(m, u);
  if (std::isinf(p)) return mags.size() ? mags.maxCoeff() : 0.0;
  return root(weighted_power_sum(m.gradient.weights, mags, p), p);
}

double w1p_norm(const DiscreteManifold& m, const Vector& u, double p) {
  return lp_norm(m, u, p) + grad_lp_norm(m, u, p);
}

void require_bessel_decomposition(const SpectralDecomposition& dec) {
  if (dec.potential.size() == 0 || (dec.potential.array() != 1.0).any()) {
    throw DomainError("Bessel norm requires the decomposition of -Delta + 1, got potential '" +
                      dec.potential_label + "'");
  }
}

double bessel_norm(const DiscreteManifold& m, const SpectralDecomposition& bessel, const Vector& u,
                   double p) {
  require_bessel_decomposition(bessel);
  return lp_norm(m, apply_function(bessel, power_function(0.5), u), p);
}

double dirichlet_energy(const DiscreteManifold& m, const Vector& u) { return u.dot(m.stiffness * u); }

double mass_inner(const DiscreteManifold& m, const Vector& u, const Vector& v) {
  return u.dot(m.mass.cwiseProduct(v));
}

double q_energy(const DiscreteManifold& m, const Vector& psi, const Vector& u) {
  return dirichlet_energy(m, u) + u.dot(m.mass.cwiseProduct(psi).cwiseProduct(u));
}

NormReport norm_report(const DiscreteManifold& m, const Vector& u, const std::vector<double>& exponents,
                       const SpectralDecomposition* bessel, const Vector* psi) {
  NormReport r;
  for (double p : exponents) {
    r.lp[p] = lp_norm(m, u, p);
    r.grad_lp[p] = grad_lp_norm(m, u, p);
    r.w1p[p] = r.lp[p] + r.grad_lp[p];
    if (bessel != nullptr) r.bessel_1p[p] = bessel_norm(m, *bessel, u, p);
  }
  if (psi != nullptr) r.q_energy = q_energy(m, *psi, u);
  return r;
}

}  // namespace sobolab
