#pragma once

#include <stdexcept>
#include <string>

namespace kawahara {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParameterOutOfRange : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct EigSolveFailure : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct ModeMismatch : Error { using Error::Error; };
struct TailTooFat : Error { using Error::Error; };
struct LinearSolveFailure : Error { using Error::Error; };
struct BlowupDetected : Error { using Error::Error; };
struct NonpositiveD : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct SeriesTooShort : Error { using Error::Error; };

struct ParseError : Error {
  int line = 0;
  ParseError(const std::string& msg, int line_no)
      : Error("parse error at line " + std::to_string(line_no) + ": " + msg), line(line_no) {}
};
struct UnknownKey : Error { using Error::Error; };
struct MissingRequired : Error { using Error::Error; };

}  // namespace kawahara
