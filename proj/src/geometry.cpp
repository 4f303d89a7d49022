#include "swarmsafe/geometry.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace swarmsafe {

VecD::VecD(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw DimensionError(fmt::format("unsupported vector dimension {}", dim));
  }
}

VecD::VecD(std::initializer_list<double> values) : VecD(static_cast<int>(values.size())) {
  std::copy(values.begin(), values.end(), c_.begin());
}

void requireSameDim(const VecD& a, const VecD& b) {
  if (a.dim() != b.dim()) {
    throw DimensionError(fmt::format("dimension mismatch: {} vs {}", a.dim(), b.dim()));
  }
}

VecD& VecD::operator+=(const VecD& o) {
  requireSameDim(*this, o);
  for (int k = 0; k < dim_; ++k) c_[k] += o.c_[k];
  return *this;
}

VecD& VecD::operator-=(const VecD& o) {
  requireSameDim(*this, o);
  for (int k = 0; k < dim_; ++k) c_[k] -= o.c_[k];
  return *this;
}

VecD& VecD::operator*=(double s) {
  for (int k = 0; k < dim_; ++k) c_[k] *= s;
  return *this;
}

bool VecD::operator==(const VecD& o) const {
  if (dim_ != o.dim_) return false;
  for (int k = 0; k < dim_; ++k) {
    if (c_[k] != o.c_[k]) return false;
  }
  return true;
}

double VecD::dot(const VecD& o) const {
  requireSameDim(*this, o);
  double s = 0.0;
  for (int k = 0; k < dim_; ++k) s += c_[k] * o.c_[k];
  return s;
}

double VecD::maxAbs() const {
  double m = 0.0;
  for (int k = 0; k < dim_; ++k) m = std::max(m, std::abs(c_[k]));
  return m;
}

bool VecD::allFinite() const {
  return std::all_of(begin(), end(), [](double x) { return std::isfinite(x); });
}

VecD VecD::padded3() const {
  VecD out(3);
  for (int k = 0; k < dim_; ++k) out.c_[k] = c_[k];
  return out;
}

VecD VecD::truncated(int dim) const {
  VecD out(dim);
  for (int k = 0; k < std::min(dim, dim_); ++k) out.c_[k] = c_[k];
  return out;
}

std::string VecD::str() const {
  std::string s = "(";
  for (int k = 0; k < dim_; ++k) {
    if (k) s += ", ";
    s += fmt::format("{}", c_[k]);
  }
  return s + ")";
}

VecD crossPlanar(const VecD& a, const VecD& b) {
  requireSameDim(a, b);
  if (a.dim() < 2) throw DimensionError("cross product needs dim 2 or 3");
  const VecD u = a.padded3();
  const VecD v = b.padded3();
  return VecD{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

VecD clampNorm(const VecD& v, double limit) {
  const double n = v.norm();
  if (n <= limit || n == 0.0) return v;
  return v * (limit / n);
}

}  // namespace swarmsafe
