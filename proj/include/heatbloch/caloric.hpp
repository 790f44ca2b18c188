#pragma once

#include "heatbloch/core.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <variant>
#include <vector>

namespace heatbloch {

/// Multiindex k = (k_1, ..., k_m, k_{m+1}); the last entry is the time order.
struct MultiIndex {
  std::vector<int> k;

  int order() const;
  int time_order() const { return k.empty() ? 0 : k.back(); }
  int spatial_order() const { return order() - time_order(); }
  double factorial() const;

  /// e_j in dimension `dim` (= m+1).
  static MultiIndex unit(int dim, int j);
  static MultiIndex zero(int dim) { return MultiIndex{std::vector<int>(dim, 0)}; }
  /// All multiindices of total order `order` in dimension `dim`, in lexicographic order.
  static std::vector<MultiIndex> of_order(int dim, int order);
};

/// Fundamental solution (4 pi t)^{-m/2} exp(-|x|^2 / 4t) for t > 0, zero for t <= 0.
template <typename Derived>
typename Derived::Scalar heat_kernel(const Eigen::MatrixBase<Derived>& x,
                                     typename Derived::Scalar t) {
  using Scalar = typename Derived::Scalar;
  const auto m = x.size();
  require(m >= 1, "caloric", "heat_kernel needs m >= 1");
  require(t != Scalar(0) || x.squaredNorm() != Scalar(0), "caloric",
          "heat_kernel evaluated at its singularity (0,0)");
  if (t <= Scalar(0)) return Scalar(0);
  using std::exp;
  using std::pow;
  const Scalar four_pi_t = Scalar(4) * std::numbers::pi_v<Scalar> * t;
  return pow(four_pi_t, -Scalar(m) / Scalar(2)) * exp(-x.squaredNorm() / (Scalar(4) * t));
}

/// Integer coefficient n! / (k! (n-2k)!) of x^{n-2k} t^k in the heat polynomial v_n.
double heat_polynomial_coefficient(int n, int k);

/// 1-D heat polynomial v_n(x,t) = n! sum_k x^{n-2k} t^k / (k! (n-2k)!).
template <typename Scalar>
Scalar heat_polynomial_1d(int n, Scalar x, Scalar t) {
  require(n >= 0, "caloric", "heat polynomial degree must be >= 0");
  Scalar sum(0);
  for (int k = 0; 2 * k <= n; ++k) {
    Scalar term(heat_polynomial_coefficient(n, k));
    for (int i = 0; i < n - 2 * k; ++i) term *= x;
    for (int i = 0; i < k; ++i) term *= t;
    sum += term;
  }
  return sum;
}

/// Sparse multivariate polynomial with exact (integer-valued) monomial coefficients.
class Polynomial {
 public:
  using Exponents = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  const std::map<Exponents, double>& monomials() const { return monomials_; }

  void add(const Exponents& e, double coef);
  Polynomial operator*(const Polynomial& other) const;
  Polynomial differentiate(const MultiIndex& k) const;
  double evaluate(const Vector& z) const;
  /// d^k p at z without materialising the differentiated polynomial.
  double derivative_at(const MultiIndex& k, const Vector& z) const;
  double max_abs_coefficient() const;

 private:
  int dim_ = 0;
  std::map<Exponents, double> monomials_;
};

/// coef * prod_i v_{degrees[i]}(x_i, t).
struct PolyTerm {
  double coef = 1.0;
  std::vector<int> degrees;
};

/// coef * H(x - y, t - s) with source (y, s) outside the closed unit ball.
struct KernelTerm {
  double coef = 1.0;
  Vector source;
};

using Term = std::variant<PolyTerm, KernelTerm>;

/// Exact solution of the heat equation, a finite linear combination of basis terms.
class CaloricComponent {
 public:
  CaloricComponent() = default;
  CaloricComponent(int m, std::vector<Term> terms);

  int dim() const { return m_; }
  const std::vector<Term>& terms() const { return terms_; }

  double value(const Vector& z) const;
  double derivative(const MultiIndex& k, const Vector& z) const;
  CaloricComponent scaled(double c) const;

  /// Polynomial part expanded into monomials of (x_1, ..., x_m, t).
  Polynomial polynomial_part() const;

 private:
  int m_ = 0;
  std::vector<Term> terms_;
  // Expanded monomials for each PolyTerm (coefficient excluded); empty for kernel terms.
  std::vector<Polynomial> expanded_;
};

/// Highest total derivative order served by `derivative`.
inline constexpr int kMaxDerivativeOrder = 3;

double evaluate(const CaloricComponent& c, const Vector& z);
double derivative(const CaloricComponent& c, const MultiIndex& k, const Vector& z);

/// Largest |coefficient| of Delta p - d/dt p over the polynomial part. Zero iff exactly caloric.
double symbolic_heat_residual(const CaloricComponent& c);

/// Closed-form derivative of the kernel H at (x, tau), directions given as
/// coordinate indices (0..m-1 spatial, m for time).
double heat_kernel_derivative(const Vector& x, double tau, const std::vector<int>& directions);

/// F = (F_1, ..., F_{m+1}) with caloric components.
class HeatMap {
 public:
  HeatMap() = default;
  HeatMap(int m, std::vector<CaloricComponent> components, bool normalized = false);

  int dim() const { return m_; }
  int size() const { return m_ + 1; }
  const std::vector<CaloricComponent>& components() const { return components_; }
  bool normalized() const { return normalized_; }

  Vector operator()(const Vector& z) const;
  Matrix jacobian(const Vector& z) const;
  HeatMap scaled(double c) const;

 private:
  int m_ = 0;
  std::vector<CaloricComponent> components_;
  bool normalized_ = false;
};

Vector evaluate(const HeatMap& F, const Vector& z);
Matrix jacobian(const HeatMap& F, const Vector& z);

/// Non-owning view of a differentiable map R^{m+1} -> R^{m+1}. Heat maps convert
/// implicitly; `linear` wraps z -> A z, which is not caloric unless A's time column vanishes.
class MapView {
 public:
  MapView(const HeatMap& F);  // NOLINT(google-explicit-constructor)
  static MapView linear(const Matrix& A);

  int dim() const { return m_; }
  int size() const { return m_ + 1; }
  Vector operator()(const Vector& z) const { return value_(z); }
  Matrix jacobian(const Vector& z) const { return jacobian_(z); }

 private:
  MapView(int m, std::function<Vector(const Vector&)> value, std::function<Matrix(const Vector&)> jacobian)
      : m_(m), value_(std::move(value)), jacobian_(std::move(jacobian)) {}

  int m_ = 0;
  std::function<Vector(const Vector&)> value_;
  std::function<Matrix(const Vector&)> jacobian_;
};

/// Rescales every component by |det F'(0)|^{-1/(m+1)}.
HeatMap normalize(const HeatMap& F);

/// Scale factor applied by `normalize`.
double normalization_factor(const HeatMap& F);

namespace detail {

/// Order-independent compensated sum: sorts, then Neumaier accumulation.
double stable_sum(std::vector<double>& values);

}  // namespace detail

}  // namespace heatbloch
