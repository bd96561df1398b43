#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace depthgrid {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition or type invariant was violated by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure (missing file, unwritable path).
class IoError : public Error {
 public:
  IoError(const std::string& path, const std::string& what)
      : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed input data. Byte offset is reported when known.
class ParseError : public Error {
 public:
  enum class Kind { MalformedHeader, BadMaxval, TruncatedPayload, SampleOutOfRange, BadRecord };

  ParseError(Kind kind, std::size_t offset, const std::string& detail, const std::string& context = "")
      : Error(context + kind_name(kind) + " at byte " + std::to_string(offset) + ": " + detail),
        kind_(kind),
        offset_(offset),
        detail_(detail) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

  static const char* kind_name(Kind k) noexcept {
    switch (k) {
      case Kind::MalformedHeader: return "malformed header";
      case Kind::BadMaxval: return "bad maxval";
      case Kind::TruncatedPayload: return "truncated payload";
      case Kind::SampleOutOfRange: return "sample out of range";
      case Kind::BadRecord: return "bad record";
    }
    return "parse error";
  }

 private:
  Kind kind_;
  std::size_t offset_;
  std::string detail_;
};

/// Numerical breakdown: degenerate firing strengths, divergent training, overflow.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace depthgrid
