#include "lamharm/config.hpp"

#include <array>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lamharm/errors.hpp"

namespace lamharm {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path.empty() ? "document must be an object" : path + ": expected an object");
}

void allow_keys(const json& j, std::initializer_list<const char*> keys, const std::string& path) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : j.items())
    if (!allowed.count(item.key()))
      throw SchemaError((path.empty() ? "" : path + ".") + item.key() + ": unknown field");
}

const json& field(const json& j, const char* key, const std::string& path) {
  const auto it = j.find(key);
  if (it == j.end()) throw SchemaError((path.empty() ? "" : path + ".") + key + ": missing field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& path) {
  if (!j.is_number()) throw SchemaError(path + ": expected a number");
  return j.get<double>();
}

Vector vector_of(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path + ": expected an array of numbers");
  Vector out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Matrix matrix_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path + ": expected a non-empty array of rows");
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < j.size(); ++i) rows.push_back(vector_of(j[i], path + "[" + std::to_string(i) + "]"));
  for (const auto& row : rows)
    if (row.size() != rows.front().size()) throw ValidationError(path, "ragged matrix rows");
  try {
    return Matrix::from_rows(rows);
  } catch (const Error& e) {
    throw ValidationError(path, e.what());
  }
}

RadialBoundaryOp op_of(const json& j, const std::string& path) {
  require_object(j, path);
  allow_keys(j, {"A", "B"}, path);
  return {matrix_of(field(j, "A", path), join(path, "A")), matrix_of(field(j, "B", path), join(path, "B"))};
}

SurfaceData data_of(const json& j, int dimension, std::size_t m, const std::string& path) {
  require_object(j, path);
  allow_keys(j, {"modes"}, path);
  SurfaceData out;
  const auto it = j.find("modes");
  if (it == j.end()) return out;
  const std::string mpath = join(path, "modes");
  if (!it->is_array()) throw SchemaError(mpath + ": expected an array");
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& e = (*it)[i];
    const std::string p = mpath + "[" + std::to_string(i) + "]";
    require_object(e, p);
    SurfaceMode mode;
    const json& l = field(e, "l", p);
    if (!l.is_number_integer()) throw SchemaError(join(p, "l") + ": expected an integer");
    mode.l = l.get<int>();
    if (dimension == 2) {
      allow_keys(e, {"l", "cos", "sin"}, p);
      mode.cos = e.contains("cos") ? vector_of(e["cos"], join(p, "cos")) : Vector(m, 0.0);
      mode.sin = e.contains("sin") ? vector_of(e["sin"], join(p, "sin")) : Vector(m, 0.0);
    } else {
      allow_keys(e, {"l", "legendre"}, p);
      mode.cos = e.contains("legendre") ? vector_of(e["legendre"], join(p, "legendre")) : Vector(m, 0.0);
    }
    out.modes.push_back(std::move(mode));
  }
  return out;
}

json matrix_json(const Matrix& a) { return a.to_rows(); }

json op_json(const RadialBoundaryOp& op) { return {{"A", matrix_json(op.A)}, {"B", matrix_json(op.B)}}; }

json data_json(const SurfaceData& data, int dimension) {
  json modes = json::array();
  for (const SurfaceMode& mode : data.modes) {
    json e;
    e["l"] = mode.l;
    if (dimension == 2) {
      e["cos"] = mode.cos;
      e["sin"] = mode.sin;
    } else {
      e["legendre"] = mode.cos;
    }
    modes.push_back(std::move(e));
  }
  return {{"modes", modes}};
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
}

std::array<std::array<double, 2>, 2> coupling_side(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw SchemaError(path + ": expected two [alpha, beta] rows");
  std::array<std::array<double, 2>, 2> out{};
  for (std::size_t m = 0; m < 2; ++m) {
    const std::string p = path + "[" + std::to_string(m) + "]";
    const Vector row = vector_of(j[m], p);
    if (row.size() != 2) throw SchemaError(p + ": expected [alpha, beta]");
    out[m] = {row[0], row[1]};
  }
  return out;
}

}  // namespace

ProblemSpec parse_config(std::string_view text) {
  const json doc = parse_json(text);
  require_object(doc, "");
  allow_keys(doc, {"dimension", "components", "radii", "boundary", "interfaces"}, "");

  ProblemSpec spec;
  const json& dim = field(doc, "dimension", "");
  if (!dim.is_number_integer()) throw SchemaError("dimension: expected an integer");
  spec.dimension = dim.get<int>();
  if (spec.dimension != 2 && spec.dimension != 3) throw ValidationError("dimension", "must be 2 or 3");
  const json& comp = field(doc, "components", "");
  if (!comp.is_number_integer()) throw SchemaError("components: expected an integer");
  if (comp.get<long long>() < 1) throw ValidationError("components", "must be >= 1");
  spec.components = comp.get<std::size_t>();
  spec.radii = vector_of(field(doc, "radii", ""), "radii");

  const json& boundary = field(doc, "boundary", "");
  require_object(boundary, "boundary");
  allow_keys(boundary, {"A", "B", "data"}, "boundary");
  spec.boundary = {matrix_of(field(boundary, "A", "boundary"), "boundary.A"),
                   matrix_of(field(boundary, "B", "boundary"), "boundary.B")};
  if (boundary.contains("data"))
    spec.boundary_data = data_of(boundary["data"], spec.dimension, spec.components, "boundary.data");

  if (doc.contains("interfaces")) {
    const json& ifs = doc["interfaces"];
    if (!ifs.is_array()) throw SchemaError("interfaces: expected an array");
    for (std::size_t k = 0; k < ifs.size(); ++k) {
      const std::string p = "interfaces[" + std::to_string(k) + "]";
      const json& e = ifs[k];
      require_object(e, p);
      allow_keys(e, {"j1", "j2", "data1", "data2"}, p);
      InterfacePair pair;
      for (const char* side : {"j1", "j2"}) {
        const json& ops = field(e, side, p);
        const std::string sp = join(p, side);
        if (!ops.is_array() || ops.size() != 2) throw SchemaError(sp + ": expected two operators");
        auto& target = std::string(side) == "j1" ? pair.outer_side : pair.inner_side;
        for (std::size_t j = 0; j < 2; ++j) target[j] = op_of(ops[j], sp + "[" + std::to_string(j) + "]");
      }
      spec.interfaces.push_back(pair);
      InterfaceData d;
      if (e.contains("data1")) d.first = data_of(e["data1"], spec.dimension, spec.components, join(p, "data1"));
      if (e.contains("data2")) d.second = data_of(e["data2"], spec.dimension, spec.components, join(p, "data2"));
      spec.interface_data.push_back(std::move(d));
    }
  }
  check_structure(spec);
  return spec;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ProblemSpec load_config(const std::filesystem::path& path) { return parse_config(read_text_file(path)); }

std::string serialize_config(const ProblemSpec& spec) {
  json doc;
  doc["dimension"] = spec.dimension;
  doc["components"] = spec.components;
  doc["radii"] = spec.radii;
  json boundary = op_json(spec.boundary);
  boundary["data"] = data_json(spec.boundary_data, spec.dimension);
  doc["boundary"] = std::move(boundary);
  json ifs = json::array();
  for (std::size_t k = 0; k < spec.interfaces.size(); ++k) {
    const InterfacePair& pair = spec.interfaces[k];
    json e;
    e["j1"] = {op_json(pair.outer_side[0]), op_json(pair.outer_side[1])};
    e["j2"] = {op_json(pair.inner_side[0]), op_json(pair.inner_side[1])};
    const InterfaceData d = k < spec.interface_data.size() ? spec.interface_data[k] : InterfaceData{};
    e["data1"] = data_json(d.first, spec.dimension);
    e["data2"] = data_json(d.second, spec.dimension);
    ifs.push_back(std::move(e));
  }
  doc["interfaces"] = std::move(ifs);
  return doc.dump(2) + "\n";
}

AxisSpec parse_axis_config(std::string_view text) {
  const json doc = parse_json(text);
  require_object(doc, "");
  allow_keys(doc, {"breakpoints", "speeds", "couplings"}, "");
  AxisSpec spec;
  if (doc.contains("breakpoints")) spec.breakpoints = vector_of(doc["breakpoints"], "breakpoints");
  spec.speeds = vector_of(field(doc, "speeds", ""), "speeds");
  if (doc.contains("couplings")) {
    const json& cs = doc["couplings"];
    if (!cs.is_array()) throw SchemaError("couplings: expected an array");
    for (std::size_t k = 0; k < cs.size(); ++k) {
      const std::string p = "couplings[" + std::to_string(k) + "]";
      require_object(cs[k], p);
      allow_keys(cs[k], {"m1", "m2"}, p);
      AxisCoupling c;
      c.side1 = coupling_side(field(cs[k], "m1", p), join(p, "m1"));
      c.side2 = coupling_side(field(cs[k], "m2", p), join(p, "m2"));
      spec.couplings.push_back(c);
    }
  }
  validate_axis(spec);
  return spec;
}

AxisSpec load_axis_config(const std::filesystem::path& path) { return parse_axis_config(read_text_file(path)); }

std::string serialize_axis_config(const AxisSpec& spec) {
  json doc;
  doc["breakpoints"] = spec.breakpoints;
  doc["speeds"] = spec.speeds;
  json cs = json::array();
  for (const AxisCoupling& c : spec.couplings) {
    json side1 = json::array(), side2 = json::array();
    for (int m = 0; m < 2; ++m) {
      side1.push_back({c.side1[m][0], c.side1[m][1]});
      side2.push_back({c.side2[m][0], c.side2[m][1]});
    }
    cs.push_back({{"m1", side1}, {"m2", side2}});
  }
  doc["couplings"] = std::move(cs);
  return doc.dump(2) + "\n";
}

}  // namespace lamharm
