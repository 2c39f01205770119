#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sobolab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Piecewise-constant gradient on elements.
///
/// Row block e of `matrix` (rows e*components .. e*components+components-1)
/// maps nodal values to the gradient of u on element e, written in an
/// orthonormal frame of that element. `weights(e)` is the element volume.
/// The stiffness form of a manifold is exactly matrix^T diag(weights) matrix.
struct ElementGradient {
  int components = 0;
  SparseRowMatrix matrix;
  Vector weights;

  [[nodiscard]] Eigen::Index num_elements() const { return weights.size(); }
};

enum class Topology { Torus, Sphere, Box, Custom };

/// Discretized compact Riemannian model: lumped mass, Dirichlet form,
/// element gradients, and analytically assigned curvature data.
struct DiscreteManifold {
  int dim = 0;
  Topology topology = Topology::Custom;
  std::vector<double> extent;    // side lengths (torus, box) or {radius} (sphere)
  Matrix positions;              // num_nodes x ambient dimension
  std::vector<double> period;    // per ambient coordinate; 0 means not periodic
  Vector mass;
  SparseMatrix stiffness;
  ElementGradient gradient;
  std::vector<std::uint8_t> boundary;
  Vector scalar_curvature;
  Vector ric_min;
  double ricci_lower = 0.0;      // a^2 with Ric >= -a^2 g
  double scale = 1.0;            // accumulated metric scale factor lambda (g = lambda^2 g_built)
  std::string label;

  [[nodiscard]] Eigen::Index num_nodes() const { return mass.size(); }
  [[nodiscard]] double volume() const { return mass.sum(); }
  [[nodiscard]] bool has_boundary() const;
};

struct FlatTorus {
  int n = 2;
  std::vector<double> side_lengths{1.0};
  int resolution = 16;
};

struct RoundSphere2 {
  double radius = 1.0;
  int subdivision_level = 3;
};

struct NeumannBox {
  int n = 2;
  std::vector<double> side_lengths{1.0};
  int resolution = 16;
};

struct ModelSpec {
  std::variant<FlatTorus, RoundSphere2, NeumannBox> variant;
  double scale = 1.0;
};

/// Parses "torus:n=2,res=32,L=6.2831853", "sphere:r=1,subdiv=3",
/// "box:n=3,res=8,L=1x2x1". A trailing "scale=<lambda>" key applies to all.
ModelSpec parse_model_spec(const std::string& text);
std::string to_string(const ModelSpec& spec);

DiscreteManifold build(const ModelSpec& spec);

/// Metric g -> lambda^2 g.
DiscreteManifold scale_metric(const DiscreteManifold& m, double lambda);

struct GeometricSummary {
  double vol = 0.0;
  double r_max_plus = 0.0;
  double kappa = 0.0;
  std::optional<double> inf_psi_minus;
};

GeometricSummary geometric_summary(const DiscreteManifold& m,
                                   const Vector* psi = nullptr);

/// (int [(Ric_min + c)^-]^{n/2+eps} dvol)^{1/(2 eps)}
double gamma_integral(const DiscreteManifold& m, double c, double eps);

/// Throws DomainError describing the first failed invariant.
void validate(const DiscreteManifold& m);

/// Distance used by the ensemble generators: periodic on tori, Euclidean
/// (chordal) otherwise. Both points are in the manifold's ambient coordinates.
double ambient_distance(const DiscreteManifold& m, const Eigen::Ref<const Eigen::VectorXd>& a,
                        const Eigen::Ref<const Eigen::VectorXd>& b);

}  // namespace sobolab
