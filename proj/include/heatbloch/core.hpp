#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace heatbloch {

/// Space-time point z = (x_1, ..., x_m, t). The time coordinate is always last.
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Largest spatial dimension accepted anywhere in the library.
inline constexpr int kMaxSpatialDim = 8;

/// Base of all library errors. `module()` names the component that raised it
/// so the CLI can attribute diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Violated precondition on user-supplied data.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A computation that could not produce a meaningful value.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

inline void require(bool cond, const char* module, const std::string& what) {
  if (!cond) throw InvalidInput(module, what);
}

/// Spatial dimension of a space-time point.
inline int spatial_dim(const Vector& z) { return static_cast<int>(z.size()) - 1; }

inline Vector make_point(const std::vector<double>& x, double t) {
  Vector z(static_cast<Eigen::Index>(x.size()) + 1);
  for (std::size_t i = 0; i < x.size(); ++i) z(static_cast<Eigen::Index>(i)) = x[i];
  z(z.size() - 1) = t;
  return z;
}

}  // namespace heatbloch
