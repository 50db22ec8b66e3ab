#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "kscolor/error.hpp"
#include "kscolor/formats.hpp"

namespace ks::formats {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kFormatName = "kscolor-system";

[[noreturn]] void field_error(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::ParseError, "field '" + field + "': " + what);
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

// Unit vectors already normalized are kept bit-for-bit so that a written
// document reads back identically.
ProjPoint load_vector(const Vec3& raw, const std::string& where) {
  if (!std::isfinite(raw.x) || !std::isfinite(raw.y) || !std::isfinite(raw.z)) {
    field_error(where, "components must be finite");
  }
  const double n = norm(raw);
  if (n == 0.0) throw Error(ErrorKind::ZeroVector, where + " is the zero vector");
  const Vec3 v = std::abs(n - 1.0) <= 1e-14 ? raw : raw * (1.0 / n);
  return canonicalize(UnitVec::checked(v, 1e-12));
}

struct IdTable {
  std::map<std::string, std::size_t> index;

  std::size_t at(const json& j, const std::string& where) const {
    if (!j.is_string()) field_error(where, "expected a point id string");
    const auto it = index.find(j.get<std::string>());
    if (it == index.end()) field_error(where, "unknown point id '" + j.get<std::string>() + "'");
    return it->second;
  }
};

template <std::size_t N>
std::array<std::size_t, N> id_list(const json& j, const IdTable& ids, const std::string& where) {
  if (!j.is_array() || j.size() != N) field_error(where, "expected " + std::to_string(N) + " point ids");
  std::array<std::size_t, N> out{};
  for (std::size_t k = 0; k < N; ++k) out[k] = ids.at(j[k], where + "[" + std::to_string(k) + "]");
  return out;
}

const json& member(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) field_error(where, std::string("missing '") + key + "'");
  return *it;
}

bool get_bool(const json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) return false;
  if (!it->is_boolean()) field_error(where + "." + key, "expected true or false");
  return it->get<bool>();
}

void read_tolerance(const json& obj, const char* key, double& slot) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number() || !(it->get<double>() > 0.0)) {
    field_error(std::string("tolerances.") + key, "expected a positive number");
  }
  slot = it->get<double>();
}

}  // namespace

bool operator==(const SystemDoc& a, const SystemDoc& b) {
  const auto& x = a.system;
  const auto& y = b.system;
  return x.points == y.points && x.labels == y.labels && x.triples == y.triples && x.pairs == y.pairs &&
         x.spans == y.spans && a.derive == b.derive && a.tolerances == b.tolerances && a.circuit == b.circuit &&
         a.corners == b.corners;
}

SystemDoc parse_system(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  if (!root.is_object()) throw Error(ErrorKind::ParseError, "line 1: document must be a JSON object");

  const json& format = member(root, "format", "format");
  if (!format.is_string() || format.get<std::string>() != kFormatName) {
    field_error("format", std::string("expected \"") + kFormatName + "\"");
  }
  const json& version = member(root, "version", "version");
  if (!version.is_number_integer() || version.get<int>() != kSystemSchemaVersion) {
    field_error("version", "unsupported schema version (expected " + std::to_string(kSystemSchemaVersion) + ")");
  }

  SystemDoc doc;
  auto& sys = doc.system;
  IdTable ids;
  const json& points = member(root, "points", "points");
  if (!points.is_array()) field_error("points", "expected an array");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::string where = "points[" + std::to_string(i) + "]";
    const json& p = points[i];
    if (!p.is_object()) field_error(where, "expected an object with 'id' and 'v'");
    const json& id = member(p, "id", where);
    if (!id.is_string() || id.get<std::string>().empty()) field_error(where + ".id", "expected a non-empty string");
    const json& v = member(p, "v", where);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number()) {
      field_error(where + ".v", "expected 3 numbers");
    }
    const std::string name = id.get<std::string>();
    if (!ids.index.emplace(name, i).second) throw Error(ErrorKind::DuplicateId, "point id '" + name + "' repeats");
    sys.points.push_back(load_vector({v[0].get<double>(), v[1].get<double>(), v[2].get<double>()}, where + ".v"));
    sys.labels.push_back(name);
  }

  auto list = [&](const char* key) -> const json* {
    const auto it = root.find(key);
    if (it == root.end()) return nullptr;
    if (!it->is_array()) field_error(key, "expected an array");
    return &*it;
  };
  if (const json* t = list("triples")) {
    for (std::size_t i = 0; i < t->size(); ++i) {
      sys.triples.push_back({id_list<3>((*t)[i], ids, "triples[" + std::to_string(i) + "]")});
    }
  }
  if (const json* p = list("pairs")) {
    for (std::size_t i = 0; i < p->size(); ++i) {
      sys.pairs.push_back({id_list<2>((*p)[i], ids, "pairs[" + std::to_string(i) + "]")});
    }
  }
  if (const json* s = list("spans")) {
    for (std::size_t i = 0; i < s->size(); ++i) {
      const std::string where = "spans[" + std::to_string(i) + "]";
      const json& rec = (*s)[i];
      if (!rec.is_object()) field_error(where, "expected an object with 'c', 'a', 'b'");
      sys.spans.push_back({ids.at(member(rec, "c", where), where + ".c"), ids.at(member(rec, "a", where), where + ".a"),
                           ids.at(member(rec, "b", where), where + ".b")});
    }
  }
  try {
    sys.check();
  } catch (const Error& e) {
    throw Error(ErrorKind::ParseError, std::string("constraints: ") + e.what());
  }

  if (const auto it = root.find("derive"); it != root.end()) {
    if (!it->is_object()) field_error("derive", "expected an object");
    doc.derive = {get_bool(*it, "triples", "derive"), get_bool(*it, "pairs", "derive"),
                  get_bool(*it, "spans", "derive")};
  }
  if (const auto it = root.find("tolerances"); it != root.end()) {
    if (!it->is_object()) field_error("tolerances", "expected an object");
    Tolerances tol;
    read_tolerance(*it, "norm", tol.norm);
    read_tolerance(*it, "orth", tol.orth);
    read_tolerance(*it, "plane", tol.plane);
    read_tolerance(*it, "ang", tol.ang);
    read_tolerance(*it, "lat_band_deg", tol.lat_band_deg);
    read_tolerance(*it, "canon", tol.canon);
    read_tolerance(*it, "merge", tol.merge);
    doc.tolerances = tol;
  }
  if (const json* c = list("circuit")) {
    for (std::size_t i = 0; i < c->size(); ++i) doc.circuit.push_back(ids.at((*c)[i], "circuit[" + std::to_string(i) + "]"));
  }
  if (const auto it = root.find("corners"); it != root.end()) doc.corners = id_list<3>(*it, ids, "corners");
  return doc;
}

std::string write_system(const SystemDoc& doc) {
  const auto& sys = doc.system;
  auto id = [&](std::size_t i) { return sys.label(i); };

  json root;
  root["format"] = kFormatName;
  root["version"] = kSystemSchemaVersion;
  json points = json::array();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    const Vec3& v = sys.points[i].vec();
    points.push_back({{"id", id(i)}, {"v", {v.x, v.y, v.z}}});
  }
  root["points"] = std::move(points);
  json triples = json::array();
  for (const auto& t : sys.triples) triples.push_back({id(t.p[0]), id(t.p[1]), id(t.p[2])});
  root["triples"] = std::move(triples);
  json pairs = json::array();
  for (const auto& p : sys.pairs) pairs.push_back({id(p.p[0]), id(p.p[1])});
  root["pairs"] = std::move(pairs);
  json spans = json::array();
  for (const auto& s : sys.spans) spans.push_back({{"c", id(s.c)}, {"a", id(s.a)}, {"b", id(s.b)}});
  root["spans"] = std::move(spans);
  root["derive"] = {{"triples", doc.derive.triples}, {"pairs", doc.derive.pairs}, {"spans", doc.derive.spans}};
  if (doc.tolerances) {
    const Tolerances& t = *doc.tolerances;
    root["tolerances"] = {{"norm", t.norm},   {"orth", t.orth},   {"plane", t.plane}, {"ang", t.ang},
                          {"lat_band_deg", t.lat_band_deg}, {"canon", t.canon}, {"merge", t.merge}};
  }
  if (!doc.circuit.empty()) {
    json c = json::array();
    for (auto i : doc.circuit) c.push_back(id(i));
    root["circuit"] = std::move(c);
  }
  if (doc.corners) root["corners"] = {id((*doc.corners)[0]), id((*doc.corners)[1]), id((*doc.corners)[2])};
  return root.dump(1) + "\n";
}

csp::ConstraintSystem materialize(const SystemDoc& doc) {
  if (!doc.derive.any()) return doc.system;
  csp::ConstraintSystem derived = derive_constraints(doc.system.points, doc.system.labels, doc.derive, doc.tol());
  csp::ConstraintSystem out = doc.system;
  out.triples.insert(out.triples.end(), derived.triples.begin(), derived.triples.end());
  out.pairs.insert(out.pairs.end(), derived.pairs.begin(), derived.pairs.end());
  out.spans.insert(out.spans.end(), derived.spans.begin(), derived.spans.end());
  out.dedup_constraints();
  return out;
}

SystemDoc parse_vector_list(std::string_view text) {
  SystemDoc doc;
  std::map<std::string, std::size_t> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string id;
    if (!(fields >> id)) continue;
    Vec3 v;
    std::string extra;
    if (!(fields >> v.x >> v.y >> v.z) || (fields >> extra)) {
      throw Error(ErrorKind::ParseError, "line " + std::to_string(lineno) + ": expected 'id x y z'");
    }
    if (!seen.emplace(id, doc.system.size()).second) {
      throw Error(ErrorKind::DuplicateId, "line " + std::to_string(lineno) + ": point id '" + id + "' repeats");
    }
    doc.system.points.push_back(load_vector(v, "line " + std::to_string(lineno)));
    doc.system.labels.push_back(id);
  }
  return doc;
}

}  // namespace ks::formats
