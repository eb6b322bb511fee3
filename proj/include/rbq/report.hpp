#pragma once

// JSON and CSV rendering of every report type. JSON keys keep insertion
// order so identical runs produce identical bytes.

#include <cstdint>
#include <string>

#include "json.hpp"

#include "rbq/group_spec.hpp"
#include "rbq/regions.hpp"
#include "rbq/symbolic.hpp"
#include "rbq/verify.hpp"

namespace rbq {

using ojson = nlohmann::ordered_json;

inline constexpr const char* kVersion = "0.1.0";
inline constexpr std::uint64_t kDefaultSeed = 42;

/// Provenance header: tool, version, command, spec hash, seed and the
/// parameters in effect (defaults included).
ojson report_header(const std::string& command, const std::string& spec_hash, std::uint64_t seed, ojson params);

ojson to_json(const Complex& c);
ojson to_json(const Vec2& v);
ojson to_json(const std::optional<PointPair>& pair);

ojson group_summary(const ReflectionGroup& group);
ojson to_json(const RegionCheck& check);
ojson to_json(const RegionReport& report);
ojson to_json(const DisjointnessResult& result);
ojson to_json(const DisplacementConstants& constants);
ojson to_json(const BoundReport& report);
ojson to_json(const InvarianceReport& report);
ojson to_json(const SeriesResidual& result);
ojson to_json(const RegionBoundAudit& audit);
ojson to_json(const QuadratureResult& result);
ojson to_json(const ScanTable& table);
ojson to_json(const SymmetryReport& report);
ojson to_json(const MResult& result);
ojson to_json(const BFactorization& result);
/// Terms as {exps: [z1, z2, u1, u2], coeff: rationals in the power basis of
/// Q(zeta_N), N}.
ojson to_json(const MPoly& poly);

/// Columns: stratum, count, sup_ratio, argmax_z, argmax_w. Points are written
/// as "re1 im1 re2 im2" with 17 significant digits.
std::string bound_csv(const BoundReport& report);
std::string scan_csv(const ScanTable& table);

std::string format_double(double x);
/// JSON has no infinities; non-finite values become "inf", "-inf" or "nan".
ojson json_number(double x);

}  // namespace rbq
