#pragma once

#include <stdexcept>
#include <string>

namespace nilcover {

enum class ErrorKind {
  malformed_field,
  dimension,
  enumeration_too_large,
  containment,
  domain,
  classification,
  precondition,
  not_on_w,
  amalgam_invalid,
  budget_exceeded,
  internal_inconsistency,
  parse,
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::malformed_field: return "malformed-field";
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::enumeration_too_large: return "enumeration-too-large";
    case ErrorKind::containment: return "containment";
    case ErrorKind::domain: return "domain";
    case ErrorKind::classification: return "classification";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::not_on_w: return "not-on-W";
    case ErrorKind::amalgam_invalid: return "amalgam-invalid";
    case ErrorKind::budget_exceeded: return "budget-exceeded";
    case ErrorKind::internal_inconsistency: return "internal-inconsistency";
    case ErrorKind::parse: return "parse";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace nilcover
