#pragma once

#include "heatbloch/caloric.hpp"
#include "heatbloch/serialize.hpp"

#include <functional>
#include <random>
#include <string>

#ifndef HEATBLOCH_DATA_DIR
#define HEATBLOCH_DATA_DIR "data"
#endif

namespace testing_support {

using heatbloch::CaloricComponent;
using heatbloch::HeatMap;
using heatbloch::KernelTerm;
using heatbloch::Matrix;
using heatbloch::PolyTerm;
using heatbloch::Term;
using heatbloch::Vector;

inline std::string data_path(const std::string& rel) { return std::string(HEATBLOCH_DATA_DIR) + "/" + rel; }

inline HeatMap shipped_map(const std::string& name) {
  return heatbloch::load_heat_map(data_path("maps/" + name + ".json"));
}

inline std::vector<std::string> shipped_map_names() {
  return {"cubic", "identity_m1", "identity_m2", "vardet_m1", "vardet_m2", "vardet_m1_steep", "kernel_m1",
          "kernel_m2"};
}

inline std::vector<int> degrees_in(int m, int axis, int n) {
  std::vector<int> d(m, 0);
  d[axis] = n;
  return d;
}

/// F_1 = x_1 + a v_3(x_1, t), F_i = x_i, F_{m+1} = v_2(x_1, t) / 2. det F' = 1 - 3a x_1^2 + 6a t.
inline HeatMap cubic_family(int m, double a) {
  std::vector<CaloricComponent> comps;
  comps.emplace_back(m, std::vector<Term>{PolyTerm{1.0, degrees_in(m, 0, 1)}, PolyTerm{a, degrees_in(m, 0, 3)}});
  for (int i = 1; i < m; ++i) comps.emplace_back(m, std::vector<Term>{PolyTerm{1.0, degrees_in(m, i, 1)}});
  comps.emplace_back(m, std::vector<Term>{PolyTerm{0.5, degrees_in(m, 0, 2)}});
  return HeatMap(m, std::move(comps));
}

inline HeatMap cubic_map() { return cubic_family(1, 0.1); }
inline HeatMap identity_like(int m) { return cubic_family(m, 0.0); }

/// Sixth-order central difference of f along direction e at z.
inline double fd_partial(const std::function<double(const Vector&)>& f, const Vector& z, int axis, double h = 1e-3) {
  Vector e = Vector::Zero(z.size());
  e(axis) = h;
  const double d1 = f(z + e) - f(z - e);
  const double d2 = f(z + 2 * e) - f(z - 2 * e);
  const double d3 = f(z + 3 * e) - f(z - 3 * e);
  return (45.0 * d1 - 9.0 * d2 + d3) / (60.0 * h);
}

/// Sixth-order central second difference.
inline double fd_second(const std::function<double(const Vector&)>& f, const Vector& z, int axis, double h = 1e-3) {
  Vector e = Vector::Zero(z.size());
  e(axis) = h;
  const double f0 = f(z);
  const double s1 = f(z + e) + f(z - e);
  const double s2 = f(z + 2 * e) + f(z - 2 * e);
  const double s3 = f(z + 3 * e) + f(z - 3 * e);
  return (2.0 * s3 - 27.0 * s2 + 270.0 * s1 - 490.0 * f0) / (180.0 * h * h);
}

/// Delta u - du/dt by finite differences.
inline double fd_heat_residual(const std::function<double(const Vector&)>& u, const Vector& z, double h = 1e-3) {
  const int m = static_cast<int>(z.size()) - 1;
  double lap = 0.0;
  for (int i = 0; i < m; ++i) lap += fd_second(u, z, i, h);
  return lap - fd_partial(u, z, m, h);
}

/// Uniform point in the closed ball of radius r, by rejection from the cube.
inline Vector random_in_ball(std::mt19937_64& rng, int dim, double r) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    Vector z(dim);
    for (int i = 0; i < dim; ++i) z(i) = u(rng);
    if (z.norm() <= 1.0) return r * z;
  }
}

inline Matrix random_matrix(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix A(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = u(rng);
  return A;
}

}  // namespace testing_support
