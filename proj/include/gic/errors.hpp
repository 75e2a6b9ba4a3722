#pragma once

#include <stdexcept>
#include <string>

namespace gic {

struct SingularMatrix : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NotExpandable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DatumInvalid : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct OracleMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A solvability or certification step that the theory guarantees has failed.
struct AlgorithmBroken : std::runtime_error {
  std::string step;
  AlgorithmBroken(const std::string& step_, const std::string& context)
      : std::runtime_error(step_ + ": " + context), step(step_) {}
};

}  // namespace gic
