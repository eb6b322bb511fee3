#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rbq {

enum class ErrorKind {
  NotUnitary,
  NotFinite,
  BadDivisor,
  BadSpec,
  SingularPoint,
  JacobianZero,
  OutsideRegion,
  NotConverged,
  NotCyclotomic,
  ZeroForm,
  DivisionFailed,
  NotReflection,
  NotSubgroup,
  IsReflection,
  IsIdentity,
  NoReflections,
  EmptySample,
  QuadratureUnstable,
  InvalidArgument,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so the
/// CLI can report it in machine-readable form.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

}  // namespace rbq
