#include "sobolab/manifold.hpp"

#include "sobolab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

namespace sobolab {

namespace {

using Triplet = Eigen::Triplet<double>;

std::vector<double> expand_sides(const std::vector<double>& sides, int n) {
  if (sides.size() == 1) return std::vector<double>(static_cast<std::size_t>(n), sides.front());
  if (static_cast<int>(sides.size()) != n) {
    throw DomainError("side_lengths must have 1 or n entries");
  }
  return sides;
}

SparseMatrix assemble_stiffness(const ElementGradient& g) {
  SparseMatrix gt = SparseMatrix(g.matrix.transpose());
  Vector row_weights(g.matrix.rows());
  for (Eigen::Index e = 0; e < g.num_elements(); ++e) {
    row_weights.segment(e * g.components, g.components).setConstant(g.weights(e));
  }
  SparseMatrix s = gt * row_weights.asDiagonal() * SparseMatrix(g.matrix);
  s.prune(0.0);
  return s;
}

// Tensor-product grid with "corner elements": every cell contributes 2^n
// elements, one per corner, whose gradient is the vector of the n edge
// differences incident to that corner. Each element carries cellvol / 2^n.
// On the torus this gives the standard (2n+1)-point Laplacian; on the box
// boundary edges receive the reduced weight of the Neumann problem.
DiscreteManifold build_grid(int n, const std::vector<double>& sides_in, int res, bool periodic) {
  if (n < 1) throw DomainError("grid dimension must be >= 1");
  if (res < 2) throw DomainError("resolution must be >= 2");
  if (periodic && res < 3) {
    throw DomainError("torus resolution " + std::to_string(res) +
                      " is too small to support the difference stencil (need >= 3)");
  }
  const auto sides = expand_sides(sides_in, n);
  for (double L : sides) {
    if (!(L > 0.0) || !std::isfinite(L)) throw DomainError("side lengths must be positive");
  }

  const int nodes_per_dir = periodic ? res : res + 1;
  std::vector<double> h(static_cast<std::size_t>(n));
  double cell_vol = 1.0;
  for (int d = 0; d < n; ++d) {
    h[d] = sides[d] / res;
    cell_vol *= h[d];
  }

  Eigen::Index num_nodes = 1;
  Eigen::Index num_cells = 1;
  for (int d = 0; d < n; ++d) {
    num_nodes *= nodes_per_dir;
    num_cells *= res;
  }
  auto node_index = [&](const std::vector<int>& idx) {
    Eigen::Index flat = 0;
    for (int d = n - 1; d >= 0; --d) {
      int i = idx[d];
      if (periodic) i = ((i % res) + res) % res;
      flat = flat * nodes_per_dir + i;
    }
    return flat;
  };

  DiscreteManifold m;
  m.dim = n;
  m.topology = periodic ? Topology::Torus : Topology::Box;
  m.extent = sides;
  m.positions.resize(num_nodes, n);
  m.period.assign(static_cast<std::size_t>(n), 0.0);
  if (periodic) m.period = sides;
  m.boundary.assign(static_cast<std::size_t>(num_nodes), 0);
  m.mass = Vector::Zero(num_nodes);

  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (Eigen::Index flat = 0; flat < num_nodes; ++flat) {
    Eigen::Index rem = flat;
    bool on_boundary = false;
    for (int d = 0; d < n; ++d) {
      idx[d] = static_cast<int>(rem % nodes_per_dir);
      rem /= nodes_per_dir;
      m.positions(flat, d) = idx[d] * h[d];
      if (!periodic && (idx[d] == 0 || idx[d] == res)) on_boundary = true;
    }
    m.boundary[flat] = on_boundary ? 1 : 0;
  }

  const int corners = 1 << n;
  const double element_weight = cell_vol / corners;
  const Eigen::Index num_elements = num_cells * corners;
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(num_elements * n * 2));
  Vector weights = Vector::Constant(num_elements, element_weight);

  std::vector<int> cell(static_cast<std::size_t>(n), 0);
  std::vector<int> corner(static_cast<std::size_t>(n), 0);
  std::vector<int> other(static_cast<std::size_t>(n), 0);
  Eigen::Index element = 0;
  for (Eigen::Index c = 0; c < num_cells; ++c) {
    Eigen::Index rem = c;
    for (int d = 0; d < n; ++d) {
      cell[d] = static_cast<int>(rem % res);
      rem /= res;
    }
    for (int k = 0; k < corners; ++k) {
      for (int d = 0; d < n; ++d) corner[d] = cell[d] + ((k >> d) & 1);
      const Eigen::Index here = node_index(corner);
      m.mass(here) += element_weight;
      for (int d = 0; d < n; ++d) {
        other = corner;
        const bool upper = ((k >> d) & 1) != 0;
        other[d] += upper ? -1 : 1;
        const Eigen::Index there = node_index(other);
        // The edge difference is taken in the +e_d direction for either endpoint.
        const Eigen::Index lo = upper ? there : here;
        const Eigen::Index hi = upper ? here : there;
        const Eigen::Index row = element * n + d;
        triplets.emplace_back(row, hi, 1.0 / h[d]);
        triplets.emplace_back(row, lo, -1.0 / h[d]);
      }
      ++element;
    }
  }
  m.gradient.components = n;
  m.gradient.matrix.resize(num_elements * n, num_nodes);
  m.gradient.matrix.setFromTriplets(triplets.begin(), triplets.end());
  m.gradient.weights = std::move(weights);
  m.stiffness = assemble_stiffness(m.gradient);

  m.scalar_curvature = Vector::Zero(num_nodes);
  m.ric_min = Vector::Zero(num_nodes);
  m.ricci_lower = 0.0;

  std::ostringstream label;
  label << (periodic ? "torus" : "box") << ":n=" << n << ",res=" << res << ",L=";
  for (int d = 0; d < n; ++d) label << (d ? "x" : "") << sides[d];
  m.label = label.str();
  return m;
}

struct IcoMesh {
  std::vector<Eigen::Vector3d> vertices;
  std::vector<std::array<int, 3>> faces;
};

IcoMesh icosahedron() {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  IcoMesh mesh;
  mesh.vertices = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                   {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
  for (auto& v : mesh.vertices) v.normalize();
  mesh.faces = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  return mesh;
}

IcoMesh subdivide(const IcoMesh& in) {
  IcoMesh out;
  out.vertices = in.vertices;
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    const int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back((in.vertices[a] + in.vertices[b]).normalized());
    midpoint.emplace(key, id);
    return id;
  };
  out.faces.reserve(in.faces.size() * 4);
  for (const auto& f : in.faces) {
    const int ab = mid(f[0], f[1]);
    const int bc = mid(f[1], f[2]);
    const int ca = mid(f[2], f[0]);
    out.faces.push_back({f[0], ab, ca});
    out.faces.push_back({f[1], bc, ab});
    out.faces.push_back({f[2], ca, bc});
    out.faces.push_back({ab, bc, ca});
  }
  return out;
}

// P1 elements on a triangle mesh: the element gradient is written in the
// triangle's own orthonormal frame, so G^T W G is the cotangent Laplacian.
DiscreteManifold build_sphere(double radius, int level) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("sphere radius must be positive");
  if (level < 0) throw DomainError("subdivision level must be >= 0");
  if (level > 5) throw DomainError("subdivision level > 5 exceeds the dense node guard");

  IcoMesh mesh = icosahedron();
  for (int i = 0; i < level; ++i) mesh = subdivide(mesh);

  const auto num_nodes = static_cast<Eigen::Index>(mesh.vertices.size());
  const auto num_faces = static_cast<Eigen::Index>(mesh.faces.size());

  DiscreteManifold m;
  m.dim = 2;
  m.topology = Topology::Sphere;
  m.extent = {radius};
  m.positions.resize(num_nodes, 3);
  for (Eigen::Index i = 0; i < num_nodes; ++i) {
    m.positions.row(i) = radius * mesh.vertices[static_cast<std::size_t>(i)].transpose();
  }
  m.period.assign(3, 0.0);
  m.boundary.assign(static_cast<std::size_t>(num_nodes), 0);
  m.mass = Vector::Zero(num_nodes);

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(num_faces * 6));
  Vector weights(num_faces);
  for (Eigen::Index f = 0; f < num_faces; ++f) {
    const auto& face = mesh.faces[static_cast<std::size_t>(f)];
    const Eigen::Vector3d a = m.positions.row(face[0]).transpose();
    const Eigen::Vector3d b = m.positions.row(face[1]).transpose();
    const Eigen::Vector3d c = m.positions.row(face[2]).transpose();
    const Eigen::Vector3d ab = b - a;
    const Eigen::Vector3d ac = c - a;
    const Eigen::Vector3d normal = ab.cross(ac);
    const double area = 0.5 * normal.norm();
    const Eigen::Vector3d e1 = ab.normalized();
    const Eigen::Vector3d e2 = normal.normalized().cross(e1);
    // Local coordinates: a = (0,0), b = (x1,0), c = (x2,y2).
    const double x1 = ab.norm();
    const double x2 = ac.dot(e1);
    const double y2 = ac.dot(e2);
    const double twice_area = x1 * y2;
    const Eigen::Vector2d grad_b(y2 / twice_area, -x2 / twice_area);
    const Eigen::Vector2d grad_c(0.0, x1 / twice_area);
    const Eigen::Vector2d grad_a = -(grad_b + grad_c);
    const std::array<Eigen::Vector2d, 3> grads{grad_a, grad_b, grad_c};
    for (int k = 0; k < 3; ++k) {
      for (int d = 0; d < 2; ++d) triplets.emplace_back(f * 2 + d, face[k], grads[k](d));
      m.mass(face[k]) += area / 3.0;
    }
    weights(f) = area;
  }
  m.gradient.components = 2;
  m.gradient.matrix.resize(num_faces * 2, num_nodes);
  m.gradient.matrix.setFromTriplets(triplets.begin(), triplets.end());
  m.gradient.weights = std::move(weights);
  m.stiffness = assemble_stiffness(m.gradient);

  m.scalar_curvature = Vector::Constant(num_nodes, 2.0 / (radius * radius));
  m.ric_min = Vector::Constant(num_nodes, 1.0 / (radius * radius));
  m.ricci_lower = 0.0;
  std::ostringstream label;
  label << "sphere:r=" << radius << ",subdiv=" << level;
  m.label = label.str();
  return m;
}

}  // namespace

bool DiscreteManifold::has_boundary() const {
  return std::any_of(boundary.begin(), boundary.end(), [](std::uint8_t b) { return b != 0; });
}

DiscreteManifold build(const ModelSpec& spec) {
  if (!(spec.scale >= 1.0) || !std::isfinite(spec.scale)) {
    throw DomainError("model post-scaling must satisfy lambda >= 1");
  }
  DiscreteManifold m = std::visit(
      [](const auto& v) -> DiscreteManifold {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FlatTorus>) {
          if (v.n < 2) throw DomainError("torus dimension must be >= 2");
          return build_grid(v.n, v.side_lengths, v.resolution, true);
        } else if constexpr (std::is_same_v<T, NeumannBox>) {
          return build_grid(v.n, v.side_lengths, v.resolution, false);
        } else {
          return build_sphere(v.radius, v.subdivision_level);
        }
      },
      spec.variant);
  if (spec.scale != 1.0) {
    m = scale_metric(m, spec.scale);
  }
  validate(m);
  return m;
}

DiscreteManifold scale_metric(const DiscreteManifold& m, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("scale factor must be positive");
  DiscreteManifold out = m;
  if (lambda == 1.0) return out;

  const double vol_factor = std::pow(lambda, m.dim);
  const double stiff_factor = std::pow(lambda, m.dim - 2);
  const double inv_sq = 1.0 / (lambda * lambda);
  out.positions *= lambda;
  for (double& p : out.period) p *= lambda;
  for (double& e : out.extent) e *= lambda;
  out.mass *= vol_factor;
  out.stiffness *= stiff_factor;
  out.gradient.matrix *= 1.0 / lambda;
  out.gradient.weights *= vol_factor;
  out.scalar_curvature *= inv_sq;
  out.ric_min *= inv_sq;
  out.ricci_lower *= inv_sq;
  out.scale *= lambda;
  std::ostringstream label;
  label << m.label << "|scale=" << lambda;
  out.label = label.str();
  return out;
}

GeometricSummary geometric_summary(const DiscreteManifold& m, const Vector* psi) {
  GeometricSummary s;
  s.vol = m.volume();
  s.r_max_plus = m.num_nodes() > 0 ? std::max(0.0, m.scalar_curvature.maxCoeff()) : 0.0;
  const double ric_lo = m.num_nodes() > 0 ? m.ric_min.minCoeff() : 0.0;
  s.kappa = std::sqrt(std::max(0.0, -ric_lo));
  if (psi != nullptr) {
    if (psi->size() != m.num_nodes()) throw DomainError("potential size does not match manifold");
    s.inf_psi_minus = std::min(0.0, psi->minCoeff());
  }
  return s;
}

double gamma_integral(const DiscreteManifold& m, double c, double eps) {
  if (!(eps > 0.0)) throw DomainError("gamma_integral requires eps > 0");
  const double exponent = 0.5 * m.dim + eps;
  double integral = 0.0;
  for (Eigen::Index i = 0; i < m.num_nodes(); ++i) {
    const double neg = std::max(0.0, -(m.ric_min(i) + c));
    if (neg > 0.0) integral += m.mass(i) * std::pow(neg, exponent);
  }
  if (integral == 0.0) return 0.0;
  return std::pow(integral, 1.0 / (2.0 * eps));
}

void validate(const DiscreteManifold& m) {
  const Eigen::Index n = m.num_nodes();
  if (n == 0) throw DomainError(m.label + ": manifold has no nodes");
  if (m.dim < 1) throw DomainError(m.label + ": dimension must be positive");
  if (m.stiffness.rows() != n || m.stiffness.cols() != n) {
    throw DomainError(m.label + ": stiffness shape mismatch");
  }
  if (m.gradient.matrix.cols() != n ||
      m.gradient.matrix.rows() != m.gradient.num_elements() * m.gradient.components) {
    throw DomainError(m.label + ": gradient operator shape mismatch");
  }
  if (static_cast<Eigen::Index>(m.boundary.size()) != n || m.scalar_curvature.size() != n ||
      m.ric_min.size() != n) {
    throw DomainError(m.label + ": per-node field size mismatch");
  }
  if ((m.mass.array() <= 0.0).any() || !m.mass.allFinite()) {
    throw DomainError(m.label + ": mass weights must be positive and finite");
  }
  double max_diag = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(m.stiffness.coeff(i, i)));
  const Vector ones = Vector::Ones(n);
  if ((m.stiffness * ones).cwiseAbs().maxCoeff() > 1e-10 * max_diag) {
    throw DomainError(m.label + ": stiffness does not annihilate constants");
  }
  const SparseMatrix asym = m.stiffness - SparseMatrix(m.stiffness.transpose());
  if (asym.nonZeros() > 0 && asym.coeffs().cwiseAbs().maxCoeff() > 1e-12 * max_diag) {
    throw DomainError(m.label + ": stiffness is not symmetric");
  }
  const double max_grad =
      m.gradient.matrix.nonZeros() > 0 ? m.gradient.matrix.coeffs().cwiseAbs().maxCoeff() : 0.0;
  if (m.gradient.matrix.rows() > 0 && (m.gradient.matrix * ones).cwiseAbs().maxCoeff() > 1e-12 * max_grad) {
    throw DomainError(m.label + ": element gradient of a constant is not zero");
  }
  if ((m.ric_min.array() < -m.ricci_lower - 1e-12).any()) {
    throw DomainError(m.label + ": ric_min violates the Ricci lower bound");
  }
}

double ambient_distance(const DiscreteManifold& m, const Eigen::Ref<const Eigen::VectorXd>& a,
                        const Eigen::Ref<const Eigen::VectorXd>& b) {
  double sq = 0.0;
  for (Eigen::Index d = 0; d < a.size(); ++d) {
    double diff = std::abs(a(d) - b(d));
    const double period = m.period[static_cast<std::size_t>(d)];
    if (period > 0.0) {
      diff = std::fmod(diff, period);
      diff = std::min(diff, period - diff);
    }
    sq += diff * diff;
  }
  return std::sqrt(sq);
}

}  // namespace sobolab
