#pragma once

#include <stdexcept>
#include <string>

namespace stpatc {

/// Base class for all pipeline errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// -- parsing / project loading --------------------------------------------

struct SchemaError : Error {
  std::string path;  // element/attribute path inside the document
  SchemaError(std::string p, const std::string& msg)
      : Error(p + ": " + msg), path(std::move(p)) {}
};

struct ReferenceError : Error {
  std::string id;
  ReferenceError(std::string dangling, const std::string& msg)
      : Error(msg), id(std::move(dangling)) {}
};

struct DuplicateIdError : Error {
  std::string id;
  DuplicateIdError(std::string dup, const std::string& msg)
      : Error(msg), id(std::move(dup)) {}
};

// -- expression language ---------------------------------------------------

struct ExprSyntaxError : Error {
  std::size_t column;  // 0-based offset into the source text
  ExprSyntaxError(std::size_t col, const std::string& msg)
      : Error(msg + " (column " + std::to_string(col) + ")"), column(col) {}
};

struct ExprTypeError : Error {
  using Error::Error;
};

struct EvalError : Error {
  using Error::Error;
};

// -- statechart ------------------------------------------------------------

struct UnknownStateRefError : Error {
  using Error::Error;
};

struct DecompositionError : Error {
  using Error::Error;
};

struct NoDefaultChildError : Error {
  using Error::Error;
};

struct NonterminationError : Error {
  using Error::Error;
};

// -- context tables / requirements ----------------------------------------

struct UnboundedDomainError : Error {
  using Error::Error;
};

struct NotHazardousError : Error {
  using Error::Error;
};

struct UnsupportedTimingError : Error {
  using Error::Error;
};

// -- smv backend -----------------------------------------------------------

struct ConsistencyError : Error {
  using Error::Error;
};

struct UnsupportedTypeError : Error {
  using Error::Error;
};

struct CheckerNotFoundError : Error {
  using Error::Error;
};

struct CheckerOutputParseError : Error {
  std::string raw_output;
  CheckerOutputParseError(const std::string& msg, std::string raw)
      : Error(msg), raw_output(std::move(raw)) {}
};

struct InfiniteDomainError : Error {
  using Error::Error;
};

// -- traceability / testgen ------------------------------------------------

struct ThresholdRangeError : Error {
  using Error::Error;
};

struct EmptyModelError : Error {
  using Error::Error;
};

// -- cli -------------------------------------------------------------------

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace stpatc
