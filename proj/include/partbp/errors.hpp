#pragma once

#include <stdexcept>
#include <string>

namespace partbp {

// Malformed input documents (XML, OBJ, raster headers).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Joint type outside the fixed/revolute/prismatic subset.
class UnsupportedJointError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Link graph is not a tree, duplicate names, dangling references.
class StructureError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Binary file format violations (bad magic, truncation, range).
class FormatError : public ParseError {
 public:
  using ParseError::ParseError;
};

// No usable observation to seed the belief from.
class InitializationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Estimation could not produce a pose for every part.
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace partbp
