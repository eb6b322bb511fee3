#include "rbq/errors.hpp"

namespace rbq {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotUnitary: return "NotUnitary";
    case ErrorKind::NotFinite: return "NotFinite";
    case ErrorKind::BadDivisor: return "BadDivisor";
    case ErrorKind::BadSpec: return "BadSpec";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::JacobianZero: return "JacobianZero";
    case ErrorKind::OutsideRegion: return "OutsideRegion";
    case ErrorKind::NotConverged: return "NotConverged";
    case ErrorKind::NotCyclotomic: return "NotCyclotomic";
    case ErrorKind::ZeroForm: return "ZeroForm";
    case ErrorKind::DivisionFailed: return "DivisionFailed";
    case ErrorKind::NotReflection: return "NotReflection";
    case ErrorKind::NotSubgroup: return "NotSubgroup";
    case ErrorKind::IsReflection: return "IsReflection";
    case ErrorKind::IsIdentity: return "IsIdentity";
    case ErrorKind::NoReflections: return "NoReflections";
    case ErrorKind::EmptySample: return "EmptySample";
    case ErrorKind::QuadratureUnstable: return "QuadratureUnstable";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace rbq
