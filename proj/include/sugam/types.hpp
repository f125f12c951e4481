#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sugam {

inline constexpr const char* kVersion = "0.1.0";

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using IndexVector = Eigen::VectorXi;

// Malformed user input (files, flags, out-of-range values). The CLI maps
// this to exit code 2; anything else that escapes is an internal error
// and exits 1.
class UserError : public std::runtime_error {
 public:
  explicit UserError(const std::string& what) : std::runtime_error(what) {}
};

class InternalError : public std::runtime_error {
 public:
  explicit InternalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sugam
