#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace swarmsafe {

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/**
 * @brief Fixed-capacity Euclidean vector of dimension 2 or 3.
 *
 * Positions, velocities and accelerations all share this type. Every vector in
 * one simulation has the same dimension; mixing dimensions in arithmetic
 * throws DimensionError.
 */
class VecD {
 public:
  static constexpr int kMaxDim = 3;

  VecD() = default;

  /// Zero vector of the given dimension.
  explicit VecD(int dim);

  VecD(std::initializer_list<double> values);

  static VecD zero(int dim) { return VecD(dim); }

  int dim() const { return dim_; }

  double operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  double& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

  const double* begin() const { return c_.data(); }
  const double* end() const { return c_.data() + dim_; }

  VecD& operator+=(const VecD& o);
  VecD& operator-=(const VecD& o);
  VecD& operator*=(double s);

  friend VecD operator+(VecD a, const VecD& b) { return a += b; }
  friend VecD operator-(VecD a, const VecD& b) { return a -= b; }
  friend VecD operator*(VecD a, double s) { return a *= s; }
  friend VecD operator*(double s, VecD a) { return a *= s; }
  friend VecD operator/(VecD a, double s) { return a *= 1.0 / s; }
  VecD operator-() const { return *this * -1.0; }

  bool operator==(const VecD& o) const;

  double dot(const VecD& o) const;
  double squaredNorm() const { return dot(*this); }
  /// Euclidean norm; zero for the zero vector.
  double norm() const { return std::sqrt(squaredNorm()); }
  double maxAbs() const;

  bool allFinite() const;

  /// Zero-pads a 2D vector to 3D; 3D vectors pass through.
  VecD padded3() const;
  /// Keeps the first `dim` components.
  VecD truncated(int dim) const;

  std::string str() const;

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

void requireSameDim(const VecD& a, const VecD& b);

/// 3D cross product of the zero-padded inputs. Always returns a 3D vector.
VecD crossPlanar(const VecD& a, const VecD& b);

/// Scales `v` down radially so that its norm does not exceed `limit`.
VecD clampNorm(const VecD& v, double limit);

}  // namespace swarmsafe
