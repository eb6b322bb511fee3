#include "rbq/group_spec.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rbq/errors.hpp"

namespace rbq {

namespace {

Complex parse_complex(const nlohmann::json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw Error(ErrorKind::BadSpec, "complex numbers are written [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Mat2 parse_matrix(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorKind::BadSpec, "matrix must have two rows");
  Mat2 m;
  for (int i = 0; i < 2; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.size() != 2) throw Error(ErrorKind::BadSpec, "matrix rows must have two entries");
    for (int k = 0; k < 2; ++k) m(i, k) = parse_complex(row[static_cast<std::size_t>(k)]);
  }
  return m;
}

int get_int(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_integer())
    throw Error(ErrorKind::BadSpec, std::string("missing integer field '") + key + "'");
  return doc[key].get<int>();
}

ReflectionGroup from_generators(const nlohmann::json& gens_json) {
  if (!gens_json.is_array()) throw Error(ErrorKind::BadSpec, "'generators' must be an array");
  std::vector<GroupElement> gens;
  for (const auto& g : gens_json) gens.emplace_back(parse_matrix(g));
  if (gens.empty()) return close_generators({GroupElement::exact_identity(1)}, kDefaultClosureCap, "trivial");
  const ReflectionGroup numeric = close_generators(gens, kDefaultClosureCap, "generators");
  for (int factor : {1, 2, 4}) {
    std::vector<GroupElement> exact;
    for (const auto& g : gens) {
      auto e = recognize_exact(g, numeric.exponent() * factor);
      if (!e) break;
      exact.push_back(std::move(*e));
    }
    if (exact.size() == gens.size()) return close_generators(exact, kDefaultClosureCap, "generators");
  }
  return numeric;
}

}  // namespace

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string GroupSpec::hash_hex() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

GroupSpec group_from_json(const nlohmann::json& document) {
  if (!document.is_object()) throw Error(ErrorKind::BadSpec, "group spec must be a JSON object");
  GroupSpec spec;
  spec.document = document;
  spec.hash = fnv1a(document.dump());

  if (document.contains("generators")) {
    spec.group = from_generators(document["generators"]);
  } else if (document.contains("family")) {
    const std::string family = document["family"].get<std::string>();
    if (family == "G") {
      spec.group = family_G(get_int(document, "m"), get_int(document, "l"));
    } else if (family == "cyclic") {
      Vec2 root(1.0, 0.0);
      if (document.contains("root")) {
        const auto& r = document["root"];
        if (!r.is_array() || r.size() != 2) throw Error(ErrorKind::BadSpec, "root must be [[re,im],[re,im]]");
        root = Vec2(parse_complex(r[0]), parse_complex(r[1]));
      }
      spec.group = cyclic_reflection_group(get_int(document, "m"), root);
    } else if (family == "trivial") {
      spec.group = close_generators({GroupElement::exact_identity(1)}, kDefaultClosureCap, "trivial");
    } else {
      throw Error(ErrorKind::BadSpec, "unknown family '" + family + "'");
    }
  } else {
    throw Error(ErrorKind::BadSpec, "spec needs 'family' or 'generators'");
  }
  if (!spec.group.generated_by_reflections())
    throw Error(ErrorKind::BadSpec, "group is not generated by reflections");
  return spec;
}

GroupSpec load_group_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::BadSpec, "cannot open spec file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::BadSpec, std::string("invalid JSON: ") + e.what());
  }
  return group_from_json(doc);
}

}  // namespace rbq
