#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace holme {

enum class ErrorCode {
  kInvalidArgument,
  kDegenerateCorners,
  kDegenerateSegment,
  kEmptyMesh,
  kDegenerateBounds,
  kDegenerateInput,
  kEmptySketch,
  kGenerationFailed,
  kBindFailed,
  kProtocolError,
  kUnknownId,
  kUnknownKey,
  kEmptyScene,
  kDegenerateCorrespondence,
  kNoFeasibleMatching,
  kTooFewPairs,
  kEmptyInput,
  kParseError,
  kSchemaError,
  kUnknownWeather,
  kIoError,
};

std::string_view to_string(ErrorCode code);

// Base error for every failure the library reports. Callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// OBJ reader failure, 1-based line number of the offending line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& reason)
      : Error(ErrorCode::kParseError,
              "line " + std::to_string(line) + ": " + reason),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// JSON document failure located by a path such as "strokes[0].points".
class SchemaError : public Error {
 public:
  SchemaError(std::string path, const std::string& reason,
              ErrorCode code = ErrorCode::kSchemaError)
      : Error(code, path + ": " + reason), path_(std::move(path)) {}

  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace holme
