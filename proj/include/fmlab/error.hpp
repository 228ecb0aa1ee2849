#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fmlab {

enum class ErrorKind {
  InvalidOrder,
  Shape,
  Symmetry,
  Divergence,
  SingularDeterminant,
  SingularTransform,
  ChartSingularity,
  InternalConsistency,
  Size,
  CoverMembership,
  Gap,
  Scalarness,
  ActionAxiom,
  Domain,
  ExtensionIllDefined,
  Descent,
  Cocycle,
  Capacity,
  UnsupportedCoefficients,
  Callable,
  Format,
};

constexpr std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidOrder: return "invalid-order";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Symmetry: return "symmetry";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::SingularDeterminant: return "singular-determinant";
    case ErrorKind::SingularTransform: return "singular-transform";
    case ErrorKind::ChartSingularity: return "chart-singularity";
    case ErrorKind::InternalConsistency: return "internal-consistency";
    case ErrorKind::Size: return "size";
    case ErrorKind::CoverMembership: return "cover-membership";
    case ErrorKind::Gap: return "gap";
    case ErrorKind::Scalarness: return "scalarness";
    case ErrorKind::ActionAxiom: return "action-axiom";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::ExtensionIllDefined: return "extension-ill-defined";
    case ErrorKind::Descent: return "descent";
    case ErrorKind::Cocycle: return "cocycle";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::UnsupportedCoefficients: return "unsupported-coefficients";
    case ErrorKind::Callable: return "callable";
    case ErrorKind::Format: return "format";
  }
  return "unknown";
}

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + " error: " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fmlab
