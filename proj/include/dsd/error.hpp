#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dsd {

enum class Errc {
  NotSquare,
  NotHermitian,
  NoConvergence,
  NotPSD,
  BadShape,
  TraceNotOne,
  ZeroTrace,
  NotComplete,
  DimensionMismatch,
  InvalidParameter,
  AlphaOutOfRange,
  AlreadyPpt,
  CoverageError,
  InvalidCoefficients,
  NoBracket,
  Budget,
};

inline std::string_view to_string(Errc e) {
  switch (e) {
    case Errc::NotSquare: return "NotSquare";
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotPSD: return "NotPSD";
    case Errc::BadShape: return "BadShape";
    case Errc::TraceNotOne: return "TraceNotOne";
    case Errc::ZeroTrace: return "ZeroTrace";
    case Errc::NotComplete: return "NotComplete";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::InvalidParameter: return "InvalidParameter";
    case Errc::AlphaOutOfRange: return "AlphaOutOfRange";
    case Errc::AlreadyPpt: return "AlreadyPpt";
    case Errc::CoverageError: return "CoverageError";
    case Errc::InvalidCoefficients: return "InvalidCoefficients";
    case Errc::NoBracket: return "NoBracket";
    case Errc::Budget: return "Budget";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace dsd
