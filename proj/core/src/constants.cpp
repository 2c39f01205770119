#include "sobolab/constants.hpp"

#include "sobolab/errors.hpp"
#include "sobolab/norms.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace sobolab {

namespace {

constexpr double kGradientFreeRelative = 1e-14;
constexpr double kConstantSlack = 1e-12;

bool gradient_free(double lhs, double gradient) {
  return !(gradient > kGradientFreeRelative * lhs);
}

}  // namespace

SobolevTerms sobolev_terms(const DiscreteManifold& m, double p, const Ensemble& e) {
  const int n = m.dim;
  const double p_star = n * p / (n - p);
  const double vol_factor = std::pow(m.volume(), -p / n);
  SobolevTerms t;
  t.lhs.resize(e.size());
  t.gradient.resize(e.size());
  t.lower.resize(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const Vector u = e.members.col(k);
    t.lhs(k) = std::pow(lp_norm(m, u, p_star), p);
    t.gradient(k) = grad_lp_integral(m, u, p);
    t.lower(k) = vol_factor * lp_integral(m, u, p);
  }
  return t;
}

std::vector<double> default_b_grid() {
  std::vector<double> grid;
  double b = 1.0;
  for (int k = 0; k <= 60; ++k) {
    grid.push_back(b);
    b *= 1.1;
  }
  return grid;
}

SobolevEstimate estimate_sobolev_AB(const DiscreteManifold& m, double p, const Ensemble& e,
                                    const std::vector<double>& b_grid) {
  if (e.size() == 0) throw DomainError("estimate_sobolev_AB: empty ensemble");
  if (!(p >= 1.0) || !(p < m.dim)) throw DomainError("estimate_sobolev_AB: need 1 <= p < n");
  if (b_grid.empty()) throw DomainError("estimate_sobolev_AB: empty B grid");

  const SobolevTerms terms = sobolev_terms(m, p, e);
  double best_a = 0.0;
  double best_b = 0.0;
  Eigen::Index best_witness = -1;
  bool found = false;
  for (double b : b_grid) {
    if (!(b >= 0.0)) throw DomainError("estimate_sobolev_AB: B grid values must be nonnegative");
    bool feasible = true;
    double a = 0.0;
    Eigen::Index witness = -1;
    for (Eigen::Index k = 0; k < e.size(); ++k) {
      const double excess = terms.lhs(k) - b * terms.lower(k);
      if (gradient_free(terms.lhs(k), terms.gradient(k))) {
        if (excess > kConstantSlack * terms.lhs(k)) {
          feasible = false;
          break;
        }
        continue;
      }
      const double need = excess / terms.gradient(k);
      if (need > a) {
        a = need;
        witness = k;
      }
    }
    if (!feasible) continue;
    if (!found || a + b < best_a + best_b) {
      best_a = a;
      best_b = b;
      best_witness = witness;
      found = true;
    }
  }
  if (!found) throw DomainError("estimate_sobolev_AB: no B on the grid is feasible for constant members");

  SobolevEstimate est;
  est.n = m.dim;
  est.p = p;
  est.p_star = m.dim * p / (m.dim - p);
  est.a_est = best_a;
  est.b_est = best_b;
  est.a_witness = best_witness >= 0 ? e.ids[static_cast<std::size_t>(best_witness)] : "";
  est.volume = m.volume();
  est.ensemble_meta = e.spec;
  est.ensemble_size = e.size();
  Eigen::Index worst = 0;
  est.max_ratio = 0.0;
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const double rhs = best_a * terms.gradient(k) + best_b * terms.lower(k);
    const double ratio = rhs > 0.0 ? terms.lhs(k) / rhs : (terms.lhs(k) > 0.0 ? kInfinity : 0.0);
    if (ratio > est.max_ratio) {
      est.max_ratio = ratio;
      worst = k;
    }
  }
  est.witness = e.ids[static_cast<std::size_t>(worst)];
  return est;
}

double entropy(const DiscreteManifold& m, const Vector& u) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double u2 = u(i) * u(i);
    if (u2 > 0.0) s += m.mass(i) * u2 * std::log(u2);
  }
  return s;
}

LogSobolevProfile measure_log_sobolev_beta(const DiscreteManifold& m, const Vector& psi,
                                           const std::vector<double>& sigma_grid, const Ensemble& e) {
  if (e.size() == 0) throw DomainError("measure_log_sobolev_beta: empty ensemble");
  if (!std::is_sorted(sigma_grid.begin(), sigma_grid.end()) || sigma_grid.empty() ||
      sigma_grid.front() < 0.0) {
    throw DomainError("measure_log_sobolev_beta: sigma grid must be ascending and nonnegative");
  }
  Vector ent(e.size());
  Vector q(e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) {
    const Vector u = e.members.col(k);
    const double l2 = lp_norm(m, u, 2.0);
    if (std::abs(l2 - 1.0) > 1e-8) {
      throw DomainError("measure_log_sobolev_beta: member " + e.ids[static_cast<std::size_t>(k)] +
                        " is not unit L^2 (norm " + std::to_string(l2) + ")");
    }
    ent(k) = entropy(m, u);
    q(k) = q_energy(m, psi, u);
  }
  LogSobolevProfile prof;
  prof.sigma_grid = sigma_grid;
  prof.source = ProfileSource::Measured;
  for (double sigma : sigma_grid) {
    Eigen::Index arg = 0;
    double best = -kInfinity;
    for (Eigen::Index k = 0; k < e.size(); ++k) {
      const double v = ent(k) - sigma * q(k);
      if (v > best) {
        best = v;
        arg = k;
      }
    }
    prof.beta_values.push_back(best);
    prof.witnesses.push_back(e.ids[static_cast<std::size_t>(arg)]);
  }
  return prof;
}

std::function<double(double)> LogSobolevProfile::as_function() const {
  if (sigma_grid.empty() || sigma_grid.front() != 0.0) {
    throw DomainError("profile interpolation needs a sigma grid starting at 0");
  }
  return [grid = sigma_grid, vals = beta_values](double s) {
    if (s <= grid.front()) return vals.front();
    if (s >= grid.back()) {
      // Beyond the grid only monotonicity is known; hold the last value.
      return vals.back();
    }
    const auto it = std::upper_bound(grid.begin(), grid.end(), s);
    const auto hi = static_cast<std::size_t>(it - grid.begin());
    const double w = (s - grid[hi - 1]) / (grid[hi] - grid[hi - 1]);
    return (1.0 - w) * vals[hi - 1] + w * vals[hi];
  };
}

double log_sobolev_offset(double a, double mu) {
  if (!(a > 0.0)) throw DomainError("log-Sobolev offset: A must be positive");
  if (!(mu > 1.0)) throw DomainError("log-Sobolev offset: mu must exceed 1");
  return 0.5 * mu * std::log(0.5 * mu) + 0.5 * mu * std::log(a) - 1.0;
}

double beta_from_sobolev(double a, double mu, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("beta_from_sobolev: sigma must be positive");
  return -0.5 * mu * std::log(sigma) + log_sobolev_offset(a, mu);
}

LogSobolevProfile derived_profile(double a, double mu, const std::vector<double>& sigma_grid) {
  LogSobolevProfile prof;
  prof.sigma_grid = sigma_grid;
  prof.source = ProfileSource::DerivedFromSobolev;
  for (double s : sigma_grid) prof.beta_values.push_back(beta_from_sobolev(a, mu, s));
  return prof;
}

double tau_closed_form(double a, double mu, double t) {
  if (!(t > 0.0)) throw DomainError("tau: t must be positive");
  return -0.25 * mu * std::log(t) + 0.25 * mu + 0.5 * log_sobolev_offset(a, mu);
}

double tau_quadrature(const std::function<double(double)>& beta, double t) {
  if (!(t > 0.0)) throw DomainError("tau: t must be positive");
  boost::math::quadrature::tanh_sinh<double> integrator;
  double error = 0.0;
  double l1 = 0.0;
  const double integral = integrator.integrate(beta, 0.0, t, 1e-12, &error, &l1);
  if (!std::isfinite(integral)) throw DomainError("tau: quadrature did not converge");
  return integral / (2.0 * t);
}

UltracontractivityConstant ultracontractivity_constant(double a, double mu) {
  return {std::exp(0.25 * mu + 0.5 * log_sobolev_offset(a, mu)), 0.25 * mu};
}

double bessel_form_constant(double a, double b, double volume, int n) {
  return std::max(a, b * std::pow(volume, -2.0 / n));
}

void write_profile_csv(std::ostream& out, const LogSobolevProfile& profile) {
  out << "sigma,beta\n";
  out.precision(17);
  for (std::size_t k = 0; k < profile.sigma_grid.size(); ++k) {
    out << profile.sigma_grid[k] << ',' << profile.beta_values[k] << '\n';
  }
}

}  // namespace sobolab
