#pragma once

#include "sobolab/manifold.hpp"

#include <nlohmann/json.hpp>

namespace sobolab {

inline constexpr int kManifoldFormatVersion = 1;

/// Versioned JSON document: dim, nodes, mass, stiffness triplets, gradient
/// elements, boundary flags, curvature fields, label.
nlohmann::json to_json(const DiscreteManifold& m);
DiscreteManifold manifold_from_json(const nlohmann::json& doc);

}  // namespace sobolab
