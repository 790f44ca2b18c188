#include "heatbloch/linalg.hpp"

#include <sstream>

namespace heatbloch {

namespace {

std::string singular_message(double lambda_min, double det) {
  std::ostringstream os;
  os.precision(17);
  os << "near-singular matrix (|det| = " << std::abs(det) << ", lambda = " << lambda_min << ")";
  return os.str();
}

}  // namespace

SpectralSummary spectral_summary(const Eigen::Ref<const Matrix>& a) {
  require(a.rows() == a.cols() && a.rows() >= 1, "linalg", "spectral_summary needs a square matrix");
  require(a.allFinite(), "linalg", "matrix has non-finite entries");
  const Vector sv = singular_values(a);
  SpectralSummary s;
  s.lambda_max = sv(0);
  s.lambda_min = sv(sv.size() - 1);
  s.operator_norm = s.lambda_max;
  s.det = a.determinant();
  s.frobenius = a.norm();
  return s;
}

SingularMatrix::SingularMatrix(double lambda_min, double det)
    : NumericalFailure("linalg", singular_message(lambda_min, det)), lambda_min_(lambda_min), det_(det) {}

Matrix invert(const Eigen::Ref<const Matrix>& a) {
  require(a.rows() == a.cols() && a.rows() >= 1, "linalg", "invert needs a square matrix");
  const double det = a.determinant();
  if (!(std::abs(det) > kSingularDetThreshold)) throw SingularMatrix(singular_values(a).minCoeff(), det);
  return a.fullPivLu().inverse();
}

}  // namespace heatbloch
