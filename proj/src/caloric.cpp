#include "heatbloch/caloric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

namespace heatbloch {

namespace {

constexpr int kMaxHeatDegree = 20;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// n (n-1) ... (n-k+1)
double falling_factorial(int n, int k) {
  double f = 1.0;
  for (int i = 0; i < k; ++i) f *= n - i;
  return f;
}

double int_pow(double x, int e) {
  double r = 1.0;
  while (e > 0) {
    if (e & 1) r *= x;
    x *= x;
    e >>= 1;
  }
  return r;
}

Polynomial heat_polynomial_in(int dim, int var, int n) {
  // v_n(z_var, t) as a polynomial of the full (dim)-vector; time is the last slot.
  Polynomial p(dim);
  for (int k = 0; 2 * k <= n; ++k) {
    Polynomial::Exponents e(dim, 0);
    e[var] = n - 2 * k;
    e[dim - 1] = k;
    p.add(e, heat_polynomial_coefficient(n, k));
  }
  return p;
}

Polynomial expand(const PolyTerm& term, int m) {
  const int dim = m + 1;
  Polynomial p(dim);
  p.add(Polynomial::Exponents(dim, 0), 1.0);
  for (int i = 0; i < m; ++i) p = p * heat_polynomial_in(dim, i, term.degrees[i]);
  return p;
}

std::vector<int> directions_of(const MultiIndex& k) {
  std::vector<int> dirs;
  for (int j = 0; j < static_cast<int>(k.k.size()); ++j)
    for (int c = 0; c < k.k[j]; ++c) dirs.push_back(j);
  return dirs;
}

// Derivative of phi = log H = -(m/2) log(4 pi tau) - |x|^2 / (4 tau) along `dirs`.
double log_kernel_derivative(const Vector& x, double tau, const std::vector<int>& dirs) {
  const int m = static_cast<int>(x.size());
  std::vector<int> spatial;
  int nt = 0;
  for (int d : dirs) {
    if (d == m)
      ++nt;
    else
      spatial.push_back(d);
  }
  const double sign = (nt % 2 == 0) ? 1.0 : -1.0;
  // d^nt/dtau^nt (1/tau) = (-1)^nt nt! tau^{-1-nt}
  const double inv_tau_deriv = sign * factorial(nt) * std::pow(tau, -1.0 - nt);
  double r2_deriv = 0.0;
  switch (spatial.size()) {
    case 0:
      r2_deriv = x.squaredNorm();
      break;
    case 1:
      r2_deriv = 2.0 * x(spatial[0]);
      break;
    case 2:
      r2_deriv = spatial[0] == spatial[1] ? 2.0 : 0.0;
      break;
    default:
      r2_deriv = 0.0;
  }
  double value = -0.25 * r2_deriv * inv_tau_deriv;
  if (spatial.empty()) {
    // d^nt/dtau^nt log tau = (-1)^{nt-1} (nt-1)! tau^{-nt}
    value += -0.5 * m * (-sign) * factorial(nt - 1) * std::pow(tau, -static_cast<double>(nt));
  }
  return value;
}

// Sum over set partitions of {0..n-1} of the product of log-kernel derivatives per block:
// the multivariate Faa di Bruno formula for exp(phi).
double exp_chain_factor(const Vector& x, double tau, const std::vector<int>& dirs) {
  const int n = static_cast<int>(dirs.size());
  if (n == 0) return 1.0;
  std::vector<std::vector<int>> blocks;
  double total = 0.0;
  std::function<void(int)> recurse = [&](int i) {
    if (i == n) {
      double prod = 1.0;
      for (const auto& b : blocks) {
        std::vector<int> d;
        for (int idx : b) d.push_back(dirs[idx]);
        prod *= log_kernel_derivative(x, tau, d);
      }
      total += prod;
      return;
    }
    // index access: deeper levels append to `blocks`
    for (std::size_t j = 0; j < blocks.size(); ++j) {
      blocks[j].push_back(i);
      recurse(i + 1);
      blocks[j].pop_back();
    }
    blocks.push_back({i});
    recurse(i + 1);
    blocks.pop_back();
  };
  recurse(0);
  return total;
}

}  // namespace

// --- MultiIndex -----------------------------------------------------------

int MultiIndex::order() const { return std::accumulate(k.begin(), k.end(), 0); }

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int v : k) f *= heatbloch::factorial(v);
  return f;
}

MultiIndex MultiIndex::unit(int dim, int j) {
  MultiIndex e = zero(dim);
  e.k[j] = 1;
  return e;
}

std::vector<MultiIndex> MultiIndex::of_order(int dim, int order) {
  std::vector<MultiIndex> out;
  std::vector<int> cur(dim, 0);
  std::function<void(int, int)> fill = [&](int pos, int left) {
    if (pos == dim - 1) {
      cur[pos] = left;
      out.push_back(MultiIndex{cur});
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[pos] = v;
      fill(pos + 1, left - v);
    }
  };
  fill(0, order);
  return out;
}

// --- heat polynomials -----------------------------------------------------

double heat_polynomial_coefficient(int n, int k) {
  return factorial(n) / (factorial(k) * factorial(n - 2 * k));
}

// --- Polynomial -----------------------------------------------------------

void Polynomial::add(const Exponents& e, double coef) {
  if (coef == 0.0) return;
  auto [it, inserted] = monomials_.try_emplace(e, coef);
  if (!inserted) {
    it->second += coef;
    if (it->second == 0.0) monomials_.erase(it);
  }
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  Polynomial out(dim_);
  for (const auto& [ea, ca] : monomials_) {
    for (const auto& [eb, cb] : other.monomials_) {
      Exponents e(dim_);
      for (int i = 0; i < dim_; ++i) e[i] = ea[i] + eb[i];
      out.add(e, ca * cb);
    }
  }
  return out;
}

Polynomial Polynomial::differentiate(const MultiIndex& k) const {
  Polynomial out(dim_);
  for (const auto& [e, c] : monomials_) {
    Exponents d(dim_);
    double coef = c;
    bool vanishes = false;
    for (int i = 0; i < dim_; ++i) {
      if (e[i] < k.k[i]) {
        vanishes = true;
        break;
      }
      coef *= falling_factorial(e[i], k.k[i]);
      d[i] = e[i] - k.k[i];
    }
    if (!vanishes) out.add(d, coef);
  }
  return out;
}

double Polynomial::evaluate(const Vector& z) const { return derivative_at(MultiIndex::zero(dim_), z); }

double Polynomial::derivative_at(const MultiIndex& k, const Vector& z) const {
  std::vector<double> parts;
  parts.reserve(monomials_.size());
  for (const auto& [e, c] : monomials_) {
    double v = c;
    for (int i = 0; i < dim_; ++i) {
      if (e[i] < k.k[i]) {
        v = 0.0;
        break;
      }
      v *= falling_factorial(e[i], k.k[i]) * int_pow(z(i), e[i] - k.k[i]);
    }
    if (v != 0.0) parts.push_back(v);
  }
  return detail::stable_sum(parts);
}

double Polynomial::max_abs_coefficient() const {
  double mx = 0.0;
  for (const auto& [e, c] : monomials_) mx = std::max(mx, std::abs(c));
  return mx;
}

// --- kernel derivatives ---------------------------------------------------

double heat_kernel_derivative(const Vector& x, double tau, const std::vector<int>& directions) {
  if (tau <= 0.0) {
    require(x.squaredNorm() > 0.0, "caloric", "kernel derivative at its singularity");
    return 0.0;
  }
  const double h = heat_kernel(x, tau);
  if (h == 0.0) return 0.0;
  return h * exp_chain_factor(x, tau, directions);
}

// --- CaloricComponent -----------------------------------------------------

CaloricComponent::CaloricComponent(int m, std::vector<Term> terms) : m_(m), terms_(std::move(terms)) {
  require(m >= 1 && m <= kMaxSpatialDim, "caloric", "spatial dimension must be in [1, 8]");
  expanded_.reserve(terms_.size());
  for (const auto& term : terms_) {
    if (const auto* p = std::get_if<PolyTerm>(&term)) {
      require(std::isfinite(p->coef), "caloric", "non-finite polynomial coefficient");
      require(static_cast<int>(p->degrees.size()) == m, "caloric",
              "polynomial term needs one degree per spatial variable");
      for (int d : p->degrees)
        require(d >= 0 && d <= kMaxHeatDegree, "caloric", "heat polynomial degree out of range [0, 20]");
      expanded_.push_back(expand(*p, m));
    } else {
      const auto& k = std::get<KernelTerm>(term);
      require(std::isfinite(k.coef), "caloric", "non-finite kernel coefficient");
      require(k.source.size() == m + 1, "caloric", "kernel source must have m+1 coordinates");
      require(k.source.norm() > 1.0, "caloric", "kernel source must lie outside the closed unit ball");
      expanded_.emplace_back(m + 1);
    }
  }
}

double CaloricComponent::value(const Vector& z) const {
  require(z.size() == m_ + 1, "caloric", "point dimension mismatch");
  std::vector<double> parts;
  parts.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (const auto* p = std::get_if<PolyTerm>(&terms_[i])) {
      parts.push_back(p->coef * expanded_[i].evaluate(z));
    } else {
      const auto& k = std::get<KernelTerm>(terms_[i]);
      const Vector x = z.head(m_) - k.source.head(m_);
      const double tau = z(m_) - k.source(m_);
      parts.push_back(k.coef * heat_kernel(x, tau));
    }
  }
  return detail::stable_sum(parts);
}

double CaloricComponent::derivative(const MultiIndex& k, const Vector& z) const {
  require(z.size() == m_ + 1, "caloric", "point dimension mismatch");
  require(static_cast<int>(k.k.size()) == m_ + 1, "caloric", "multiindex dimension mismatch");
  require(k.order() <= kMaxDerivativeOrder, "caloric", "derivative order above 3 is not supported");
  const std::vector<int> dirs = directions_of(k);
  std::vector<double> parts;
  parts.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (const auto* p = std::get_if<PolyTerm>(&terms_[i])) {
      parts.push_back(p->coef * expanded_[i].derivative_at(k, z));
    } else {
      const auto& kt = std::get<KernelTerm>(terms_[i]);
      const Vector x = z.head(m_) - kt.source.head(m_);
      const double tau = z(m_) - kt.source(m_);
      parts.push_back(kt.coef * heat_kernel_derivative(x, tau, dirs));
    }
  }
  return detail::stable_sum(parts);
}

CaloricComponent CaloricComponent::scaled(double c) const {
  std::vector<Term> terms = terms_;
  for (auto& t : terms) std::visit([c](auto& term) { term.coef *= c; }, t);
  return CaloricComponent(m_, std::move(terms));
}

Polynomial CaloricComponent::polynomial_part() const {
  Polynomial out(m_ + 1);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (const auto* p = std::get_if<PolyTerm>(&terms_[i]))
      for (const auto& [e, c] : expanded_[i].monomials()) out.add(e, p->coef * c);
  }
  return out;
}

double evaluate(const CaloricComponent& c, const Vector& z) { return c.value(z); }

double derivative(const CaloricComponent& c, const MultiIndex& k, const Vector& z) {
  return c.derivative(k, z);
}

double symbolic_heat_residual(const CaloricComponent& c) {
  const int dim = c.dim() + 1;
  const Polynomial p = c.polynomial_part();
  Polynomial residual(dim);
  for (int i = 0; i < c.dim(); ++i) {
    MultiIndex k = MultiIndex::zero(dim);
    k.k[i] = 2;
    const Polynomial d2 = p.differentiate(k);
    for (const auto& [e, coef] : d2.monomials()) residual.add(e, coef);
  }
  const Polynomial dt = p.differentiate(MultiIndex::unit(dim, dim - 1));
  for (const auto& [e, coef] : dt.monomials()) residual.add(e, -coef);
  return residual.max_abs_coefficient();
}

// --- HeatMap --------------------------------------------------------------

HeatMap::HeatMap(int m, std::vector<CaloricComponent> components, bool normalized)
    : m_(m), components_(std::move(components)), normalized_(normalized) {
  require(m >= 1 && m <= kMaxSpatialDim, "caloric", "spatial dimension must be in [1, 8]");
  require(static_cast<int>(components_.size()) == m + 1, "caloric", "a heat map needs m+1 components");
  for (const auto& c : components_) require(c.dim() == m, "caloric", "component dimension mismatch");
}

Vector HeatMap::operator()(const Vector& z) const {
  Vector out(size());
  for (int i = 0; i < size(); ++i) out(i) = components_[i].value(z);
  return out;
}

Matrix HeatMap::jacobian(const Vector& z) const {
  Matrix J(size(), size());
  for (int j = 0; j < size(); ++j) {
    const MultiIndex e = MultiIndex::unit(size(), j);
    for (int i = 0; i < size(); ++i) J(i, j) = components_[i].derivative(e, z);
  }
  return J;
}

HeatMap HeatMap::scaled(double c) const {
  std::vector<CaloricComponent> comps;
  comps.reserve(components_.size());
  for (const auto& comp : components_) comps.push_back(comp.scaled(c));
  return HeatMap(m_, std::move(comps), normalized_ && c == 1.0);
}

Vector evaluate(const HeatMap& F, const Vector& z) { return F(z); }

Matrix jacobian(const HeatMap& F, const Vector& z) { return F.jacobian(z); }

MapView::MapView(const HeatMap& F)
    : MapView(F.dim(), [&F](const Vector& z) { return F(z); }, [&F](const Vector& z) { return F.jacobian(z); }) {}

MapView MapView::linear(const Matrix& A) {
  require(A.rows() == A.cols() && A.rows() >= 2 && A.rows() <= kMaxSpatialDim + 1, "caloric",
          "linear map needs a square matrix of size 2..9");
  return MapView(static_cast<int>(A.rows()) - 1, [A](const Vector& z) -> Vector { return A * z; },
                 [A](const Vector&) -> Matrix { return A; });
}

double normalization_factor(const HeatMap& F) {
  if (F.normalized()) return 1.0;
  const double det = F.jacobian(Vector::Zero(F.size())).determinant();
  if (!(std::abs(det) > 0.0) || !std::isfinite(det))
    throw NumericalFailure("caloric", "singular Jacobian at the origin; cannot normalize");
  double factor = std::pow(std::abs(det), -1.0 / F.size());
  if (std::abs(factor - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) factor = 1.0;
  return factor;
}

HeatMap normalize(const HeatMap& F) {
  if (F.normalized()) return F;
  const double factor = normalization_factor(F);
  HeatMap scaled = F.scaled(factor);
  return HeatMap(scaled.dim(), scaled.components(), true);
}

namespace detail {

double stable_sum(std::vector<double>& values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  double comp = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  return sum + comp;
}

}  // namespace detail

}  // namespace heatbloch
