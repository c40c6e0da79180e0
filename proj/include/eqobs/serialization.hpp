#pragma once

// JSON forms. Matrices are flat row-major arrays; algebra elements are
// coordinate vectors in the group's basis order.
//
//   group descriptor: {"name", "n", "basis": [[n*n], ...], "constraint"}
//   symmetry element: {"A": [n*n], "a": [d]}
//   observer state:   {"group", "Ahat": [n*n], "ahat_coords": [d],
//                      "origin": {"P0": [n*n], "V0": [d]}, "k1", "k2"}

#include <json.hpp>

#include <string>

#include "eqobs/observer.hpp"
#include "eqobs/scenario.hpp"

namespace eqobs {

using json = nlohmann::json;

json matrix_to_json(const Matrix& m);
/// Throws Error unless `j` is an array of rows*cols numbers.
Matrix matrix_from_json(const json& j, int rows, int cols);
json vector_to_json(const Vector& v);
Vector vector_from_json(const json& j, int size);

GroupPtr group_from_json(const json& j);
json group_to_json(const GroupDescriptor& group);
/// A registered name ("se2", ...) or a path to a JSON descriptor file.
GroupPtr resolve_group(const std::string& name_or_path);

json symmetry_to_json(const SymmetryElement& x);
SymmetryElement symmetry_from_json(const json& j, const GroupPtr& group);

json observer_to_json(const ObserverState& obs);
ObserverState observer_from_json(const json& j);

json config_to_json(const ScenarioConfig& cfg);
ScenarioConfig config_from_json(const json& j);
ScenarioConfig load_config(const std::string& path);

/// 16 hex digits of FNV-1a over the canonical JSON dump of the config.
std::string config_hash(const ScenarioConfig& cfg);

}  // namespace eqobs
