#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "json.hpp"

#include "rbq/groups.hpp"

namespace rbq {

/// A group together with the JSON document it was built from.
struct GroupSpec {
  nlohmann::json document;
  ReflectionGroup group;
  std::uint64_t hash = 0;  // FNV-1a of the canonical JSON dump

  std::string hash_hex() const;
};

/// Accepted documents:
///   {"family":"G","m":int,"l":int}
///   {"family":"cyclic","m":int,"root":[[re,im],[re,im]]}   (root defaults to (1,0))
///   {"family":"trivial"}
///   {"generators":[ [[[re,im],[re,im]],[[re,im],[re,im]]], ... ]}
/// Numeric generators are promoted to exact cyclotomic form when every entry
/// is recognizably q * zeta_N^k.
GroupSpec group_from_json(const nlohmann::json& document);
GroupSpec load_group_spec(const std::filesystem::path& path);

std::uint64_t fnv1a(const std::string& data);

}  // namespace rbq
