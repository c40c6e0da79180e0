#include "eqobs/serialization.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

namespace eqobs {

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw Error(std::string("field '") + key + "' must be a number");
  return v.get<double>();
}

void reject_unknown(const json& j, const std::set<std::string>& known, const char* where) {
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw Error(std::string(where) + ": unknown field '" + key + "'");
  }
}

const char* constraint_name(Constraint c) {
  switch (c) {
    case Constraint::kNone:
      return "none";
    case Constraint::kSpecialOrthogonal:
      return "special_orthogonal";
    case Constraint::kSpecialEuclidean:
      return "special_euclidean";
  }
  return "none";
}

Constraint parse_constraint(const std::string& s) {
  if (s == "none") return Constraint::kNone;
  if (s == "special_orthogonal") return Constraint::kSpecialOrthogonal;
  if (s == "special_euclidean") return Constraint::kSpecialEuclidean;
  throw Error("unknown constraint '" + s + "'");
}

}  // namespace

json matrix_to_json(const Matrix& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) out.push_back(m(r, c));
  }
  return out;
}

Matrix matrix_from_json(const json& j, int rows, int cols) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows * cols)) {
    throw Error("expected a row-major array of " + std::to_string(rows * cols) + " numbers");
  }
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const json& v = j[static_cast<std::size_t>(r * cols + c)];
      if (!v.is_number()) throw Error("matrix entries must be numbers");
      m(r, c) = v.get<double>();
    }
  }
  return m;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vector vector_from_json(const json& j, int size) {
  return matrix_from_json(j, size, 1);
}

GroupPtr group_from_json(const json& j) {
  reject_unknown(j, {"name", "n", "dim", "basis", "constraint"}, "group descriptor");
  const std::string name = require(j, "name").get<std::string>();
  const int n = require(j, "n").get<int>();
  const json& basis_json = require(j, "basis");
  if (!basis_json.is_array()) throw Error("group descriptor: basis must be an array");
  if (j.contains("dim") && j.at("dim").get<std::size_t>() != basis_json.size()) {
    throw Error("group descriptor: dim does not match the number of basis matrices");
  }
  std::vector<Matrix> basis;
  for (const auto& b : basis_json) basis.push_back(matrix_from_json(b, n, n));
  const Constraint c = parse_constraint(j.value("constraint", std::string("none")));
  return std::make_shared<const GroupDescriptor>(name, n, std::move(basis), c);
}

json group_to_json(const GroupDescriptor& group) {
  json basis = json::array();
  for (const auto& b : group.basis()) basis.push_back(matrix_to_json(b));
  return {{"name", group.name()},
          {"n", group.n()},
          {"dim", group.dim()},
          {"basis", basis},
          {"constraint", constraint_name(group.constraint())}};
}

GroupPtr resolve_group(const std::string& name_or_path) {
  for (const auto& name : registered_groups()) {
    if (name == name_or_path) return make_group(name);
  }
  if (!std::filesystem::exists(name_or_path)) {
    throw Error("unknown group '" + name_or_path + "' (not registered and no such file)");
  }
  std::ifstream in(name_or_path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("cannot parse group descriptor '" + name_or_path + "': " + e.what());
  }
  return group_from_json(j);
}

json symmetry_to_json(const SymmetryElement& x) {
  return {{"A", matrix_to_json(x.A.mat())}, {"a", vector_to_json(x.a.coords())}};
}

SymmetryElement symmetry_from_json(const json& j, const GroupPtr& group) {
  return {GroupElement(group, matrix_from_json(require(j, "A"), group->n(), group->n())),
          AlgebraElement::from_coords(group, vector_from_json(require(j, "a"), group->dim()))};
}

json observer_to_json(const ObserverState& obs) {
  return {{"group", obs.Ahat.group()->name()},
          {"Ahat", matrix_to_json(obs.Ahat.mat())},
          {"ahat_coords", vector_to_json(obs.ahat.coords())},
          {"origin",
           {{"P0", matrix_to_json(obs.origin.P0.mat())},
            {"V0", vector_to_json(obs.origin.V0.coords())}}},
          {"k1", obs.gains.k1},
          {"k2", obs.gains.k2}};
}

ObserverState observer_from_json(const json& j) {
  const GroupPtr group = resolve_group(require(j, "group").get<std::string>());
  const int n = group->n();
  const int d = group->dim();
  const json& origin = require(j, "origin");
  const SymmetryElement xhat{
      GroupElement(group, matrix_from_json(require(j, "Ahat"), n, n)),
      AlgebraElement::from_coords(group, vector_from_json(require(j, "ahat_coords"), d))};
  const OriginPoint o{GroupElement(group, matrix_from_json(require(origin, "P0"), n, n)),
                      AlgebraElement::from_coords(group, vector_from_json(require(origin, "V0"), d))};
  return ObserverState::make(xhat, o, {number(j, "k1"), number(j, "k2")});
}

json config_to_json(const ScenarioConfig& cfg) {
  json j;
  j["group"] = cfg.group;
  j["dt"] = cfg.dt;
  j["duration"] = cfg.duration;
  j["integrator"] = to_string(cfg.integrator);
  j["gains"] = {{"k1", cfg.gains.k1}, {"k2", cfg.gains.k2}};
  json origin = json::object();
  if (cfg.origin_P) origin["P0"] = matrix_to_json(*cfg.origin_P);
  if (cfg.origin_V) origin["V0"] = vector_to_json(*cfg.origin_V);
  j["origin"] = origin;
  json truth = json::object();
  if (cfg.true_P) truth["P"] = matrix_to_json(*cfg.true_P);
  if (cfg.true_V) truth["V"] = vector_to_json(*cfg.true_V);
  j["true_init"] = truth;
  json init = json::object();
  switch (cfg.observer_init.kind) {
    case ObserverInitKind::kExplicit:
      init["type"] = "explicit";
      if (cfg.observer_init.Ahat) init["Ahat"] = matrix_to_json(*cfg.observer_init.Ahat);
      if (cfg.observer_init.ahat) init["ahat"] = vector_to_json(*cfg.observer_init.ahat);
      break;
    case ObserverInitKind::kZeroError:
      init["type"] = "zero_error";
      break;
    case ObserverInitKind::kRandom:
      init["type"] = "random";
      init["scale"] = cfg.observer_init.random_scale;
      break;
  }
  j["observer_init"] = init;
  json input;
  switch (cfg.input.kind) {
    case InputKind::kHovercraftLissajous:
      input["type"] = "hovercraft_lissajous";
      break;
    case InputKind::kConstant:
      input["type"] = "constant";
      input["U1"] = vector_to_json(cfg.input.U1);
      input["U2"] = vector_to_json(cfg.input.U2);
      break;
    case InputKind::kZero:
      input["type"] = "zero";
      break;
  }
  j["input_source"] = input;
  j["seed"] = cfg.seed;
  j["log_every"] = cfg.log_every;
  j["max_constraint_residual"] = cfg.max_constraint_residual;
  return j;
}

ScenarioConfig config_from_json(const json& j) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  reject_unknown(j,
                 {"group", "dt", "duration", "integrator", "gains", "origin", "true_init",
                  "observer_init", "input_source", "seed", "log_every",
                  "max_constraint_residual", "description"},
                 "config");
  ScenarioConfig cfg;
  try {
    cfg.group = j.value("group", cfg.group);
    const GroupPtr group = resolve_group(cfg.group);
    const int n = group->n();
    const int d = group->dim();
    cfg.dt = j.value("dt", cfg.dt);
    cfg.duration = j.value("duration", cfg.duration);
    cfg.integrator = parse_integrator(j.value("integrator", to_string(cfg.integrator)));
    if (j.contains("gains")) {
      const json& g = j.at("gains");
      cfg.gains = {number(g, "k1"), number(g, "k2")};
    }
    if (j.contains("origin")) {
      const json& o = j.at("origin");
      reject_unknown(o, {"P0", "V0"}, "origin");
      if (o.contains("P0")) cfg.origin_P = matrix_from_json(o.at("P0"), n, n);
      if (o.contains("V0")) cfg.origin_V = vector_from_json(o.at("V0"), d);
    }
    if (j.contains("true_init")) {
      const json& t = j.at("true_init");
      reject_unknown(t, {"P", "V"}, "true_init");
      if (t.contains("P")) cfg.true_P = matrix_from_json(t.at("P"), n, n);
      if (t.contains("V")) cfg.true_V = vector_from_json(t.at("V"), d);
    }
    if (j.contains("observer_init")) {
      const json& o = j.at("observer_init");
      reject_unknown(o, {"type", "Ahat", "ahat", "scale"}, "observer_init");
      const std::string type = o.value("type", std::string("explicit"));
      if (type == "explicit") {
        cfg.observer_init.kind = ObserverInitKind::kExplicit;
        if (o.contains("Ahat")) cfg.observer_init.Ahat = matrix_from_json(o.at("Ahat"), n, n);
        if (o.contains("ahat")) cfg.observer_init.ahat = vector_from_json(o.at("ahat"), d);
      } else if (type == "zero_error") {
        cfg.observer_init.kind = ObserverInitKind::kZeroError;
      } else if (type == "random") {
        cfg.observer_init.kind = ObserverInitKind::kRandom;
        cfg.observer_init.random_scale = o.value("scale", cfg.observer_init.random_scale);
      } else {
        throw Error("observer_init: unknown type '" + type + "'");
      }
    }
    if (j.contains("input_source")) {
      const json& in = j.at("input_source");
      const std::string type =
          in.is_string() ? in.get<std::string>() : require(in, "type").get<std::string>();
      if (type == "hovercraft_lissajous") {
        cfg.input.kind = InputKind::kHovercraftLissajous;
      } else if (type == "zero") {
        cfg.input.kind = InputKind::kZero;
      } else if (type == "constant") {
        cfg.input.kind = InputKind::kConstant;
        cfg.input.U1 = vector_from_json(require(in, "U1"), d);
        cfg.input.U2 = vector_from_json(require(in, "U2"), d);
      } else {
        throw Error("input_source: unknown type '" + type + "'");
      }
    }
    cfg.seed = j.value("seed", cfg.seed);
    cfg.log_every = j.value("log_every", cfg.log_every);
    cfg.max_constraint_residual = j.value("max_constraint_residual", cfg.max_constraint_residual);
  } catch (const json::exception& e) {
    throw Error(std::string("config: ") + e.what());
  }
  validate(cfg);
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error("cannot parse config '" + path + "': " + e.what());
  }
  return config_from_json(j);
}

std::string config_hash(const ScenarioConfig& cfg) {
  const std::string canonical = config_to_json(cfg).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace eqobs
