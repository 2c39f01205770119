#pragma once

#include "sobolab/manifold.hpp"
#include "sobolab/spectral.hpp"

#include <map>
#include <optional>
#include <vector>

namespace sobolab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// (sum_i mass_i |u_i|^p)^{1/p}; p = infinity gives max |u_i|.
double lp_norm(const DiscreteManifold& m, const Vector& u, double p);
/// ||u||_p^p (the integral itself, without the root); p must be finite.
double lp_integral(const DiscreteManifold& m, const Vector& u, double p);

/// |grad u| on every element.
Vector element_gradient_magnitudes(const DiscreteManifold& m, const Vector& u);
double grad_lp_norm(const DiscreteManifold& m, const Vector& u, double p);
double grad_lp_integral(const DiscreteManifold& m, const Vector& u, double p);

/// ||u||_p + ||grad u||_p
double w1p_norm(const DiscreteManifold& m, const Vector& u, double p);

/// ||(-Delta + 1)^{1/2} u||_p; `bessel` must be the decomposition of -Delta + 1.
double bessel_norm(const DiscreteManifold& m, const SpectralDecomposition& bessel, const Vector& u,
                   double p);

/// int |grad u|^2 + Psi u^2
double q_energy(const DiscreteManifold& m, const Vector& psi, const Vector& u);
double dirichlet_energy(const DiscreteManifold& m, const Vector& u);
double mass_inner(const DiscreteManifold& m, const Vector& u, const Vector& v);

/// Throws DomainError unless dec was built for Psi == 1.
void require_bessel_decomposition(const SpectralDecomposition& dec);

struct NormReport {
  std::map<double, double> lp;
  std::map<double, double> grad_lp;
  std::map<double, double> w1p;
  std::map<double, double> bessel_1p;
  std::optional<double> q_energy;
};

NormReport norm_report(const DiscreteManifold& m, const Vector& u, const std::vector<double>& exponents,
                       const SpectralDecomposition* bessel = nullptr, const Vector* psi = nullptr);

}  // namespace sobolab
