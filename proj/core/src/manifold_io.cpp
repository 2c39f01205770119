#include "sobolab/manifold_io.hpp"

#include "sobolab/errors.hpp"

namespace sobolab {

namespace {

using nlohmann::json;

std::string topology_name(Topology t) {
  switch (t) {
    case Topology::Torus: return "torus";
    case Topology::Sphere: return "sphere";
    case Topology::Box: return "box";
    case Topology::Custom: return "custom";
  }
  return "custom";
}

Topology topology_from(const std::string& s) {
  if (s == "torus") return Topology::Torus;
  if (s == "sphere") return Topology::Sphere;
  if (s == "box") return Topology::Box;
  return Topology::Custom;
}

json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

Vector vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

template <typename Sparse>
json triplets_json(const Sparse& s) {
  std::vector<Eigen::Index> rows;
  std::vector<Eigen::Index> cols;
  std::vector<double> vals;
  for (Eigen::Index k = 0; k < s.outerSize(); ++k) {
    for (typename Sparse::InnerIterator it(s, k); it; ++it) {
      rows.push_back(it.row());
      cols.push_back(it.col());
      vals.push_back(it.value());
    }
  }
  return json{{"rows", s.rows()}, {"cols", s.cols()}, {"i", rows}, {"j", cols}, {"v", vals}};
}

template <typename Sparse>
Sparse sparse_from(const json& j) {
  const auto rows = j.at("i").get<std::vector<Eigen::Index>>();
  const auto cols = j.at("j").get<std::vector<Eigen::Index>>();
  const auto vals = j.at("v").get<std::vector<double>>();
  if (rows.size() != cols.size() || rows.size() != vals.size()) {
    throw DomainError("manifold JSON: triplet arrays differ in length");
  }
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(vals.size());
  for (std::size_t k = 0; k < vals.size(); ++k) t.emplace_back(rows[k], cols[k], vals[k]);
  Sparse s(j.at("rows").get<Eigen::Index>(), j.at("cols").get<Eigen::Index>());
  s.setFromTriplets(t.begin(), t.end());
  return s;
}

}  // namespace

nlohmann::json to_json(const DiscreteManifold& m) {
  json positions = json::array();
  for (Eigen::Index i = 0; i < m.positions.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.positions.cols()));
    for (Eigen::Index d = 0; d < m.positions.cols(); ++d) row[static_cast<std::size_t>(d)] = m.positions(i, d);
    positions.push_back(row);
  }
  std::vector<int> boundary(m.boundary.begin(), m.boundary.end());
  return json{
      {"format", "sobolab.manifold"},
      {"version", kManifoldFormatVersion},
      {"label", m.label},
      {"dim", m.dim},
      {"topology", topology_name(m.topology)},
      {"extent", m.extent},
      {"nodes", m.num_nodes()},
      {"scale", m.scale},
      {"positions", positions},
      {"period", m.period},
      {"mass", vector_json(m.mass)},
      {"stiffness", triplets_json(m.stiffness)},
      {"grad",
       {{"components", m.gradient.components},
        {"weights", vector_json(m.gradient.weights)},
        {"matrix", triplets_json(m.gradient.matrix)}}},
      {"boundary", boundary},
      {"scalar_curvature", vector_json(m.scalar_curvature)},
      {"ric_min", vector_json(m.ric_min)},
      {"ricci_lower", m.ricci_lower},
  };
}

DiscreteManifold manifold_from_json(const nlohmann::json& doc) {
  if (doc.value("format", std::string{}) != "sobolab.manifold") {
    throw DomainError("manifold JSON: missing or wrong 'format' tag");
  }
  const int version = doc.at("version").get<int>();
  if (version != kManifoldFormatVersion) {
    throw DomainError("manifold JSON: unsupported version " + std::to_string(version));
  }
  DiscreteManifold m;
  m.label = doc.at("label").get<std::string>();
  m.dim = doc.at("dim").get<int>();
  m.topology = topology_from(doc.value("topology", std::string("custom")));
  m.extent = doc.value("extent", std::vector<double>{});
  m.scale = doc.value("scale", 1.0);
  const auto& pos = doc.at("positions");
  const auto rows = static_cast<Eigen::Index>(pos.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(pos.front().size()) : 0;
  m.positions.resize(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index d = 0; d < cols; ++d) m.positions(i, d) = pos[static_cast<std::size_t>(i)][static_cast<std::size_t>(d)].get<double>();
  }
  m.period = doc.at("period").get<std::vector<double>>();
  m.mass = vector_from(doc.at("mass"));
  m.stiffness = sparse_from<SparseMatrix>(doc.at("stiffness"));
  const auto& grad = doc.at("grad");
  m.gradient.components = grad.at("components").get<int>();
  m.gradient.weights = vector_from(grad.at("weights"));
  m.gradient.matrix = sparse_from<SparseRowMatrix>(grad.at("matrix"));
  const auto boundary = doc.at("boundary").get<std::vector<int>>();
  m.boundary.assign(boundary.begin(), boundary.end());
  m.scalar_curvature = vector_from(doc.at("scalar_curvature"));
  m.ric_min = vector_from(doc.at("ric_min"));
  m.ricci_lower = doc.at("ricci_lower").get<double>();
  if (doc.at("nodes").get<Eigen::Index>() != m.num_nodes()) {
    throw DomainError("manifold JSON: node count does not match mass array");
  }
  validate(m);
  return m;
}

}  // namespace sobolab
