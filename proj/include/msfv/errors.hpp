#pragma once

#include <stdexcept>
#include <string>

namespace msfv {

struct GridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SingularMatrixError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FactorizationError : std::runtime_error {
  explicit FactorizationError(const std::string& msg, int row_index = -1)
      : std::runtime_error(msg), row(row_index) {}
  int row;
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace msfv
