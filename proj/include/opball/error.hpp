#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opball {

enum class ErrorKind {
  NotHermitian,
  NoConvergence,
  EigenvalueBelowFloor,
  Singular,
  ShapeMismatch,
  OutOfDisc,
  OutsideBall,
  BadDims,
  BadDepth,
  NotSymmetric,
  InvalidPair,
  NonFinite,
  Parse,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::EigenvalueBelowFloor: return "EigenvalueBelowFloor";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::OutOfDisc: return "OutOfDisc";
    case ErrorKind::OutsideBall: return "OutsideBall";
    case ErrorKind::BadDims: return "BadDims";
    case ErrorKind::BadDepth: return "BadDepth";
    case ErrorKind::NotSymmetric: return "NotSymmetric";
    case ErrorKind::InvalidPair: return "InvalidPair";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::Parse: return "Parse";
  }
  return "Unknown";
}

/// Single exception type for the library; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Thrown by herm_fun; carries the eigenvalue that violated the floor.
class EigenvalueBelowFloorError : public Error {
 public:
  EigenvalueBelowFloorError(double eigenvalue, double floor)
      : Error(ErrorKind::EigenvalueBelowFloor,
              "eigenvalue " + std::to_string(eigenvalue) + " below floor " + std::to_string(floor)),
        eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

}  // namespace opball
