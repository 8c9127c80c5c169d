#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace aklt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

/// Half-integer spin stored as 2S to keep arithmetic exact.
struct Spin {
  int twice = 0;

  constexpr Spin() = default;
  constexpr explicit Spin(int twice_value) : twice(twice_value) {}
  static Spin from_double(double s) {
    int t = static_cast<int>(std::lround(2.0 * s));
    if (std::abs(2.0 * s - t) > 1e-12 || t < 0)
      throw std::invalid_argument("spin must be a non-negative half-integer");
    return Spin(t);
  }
  double value() const { return 0.5 * twice; }
  int dim() const { return twice + 1; }
  bool operator==(const Spin&) const = default;
  auto operator<=>(const Spin&) const = default;
};

enum class Axis { X, Y, Z };

inline char axis_name(Axis a) {
  switch (a) {
    case Axis::X: return 'x';
    case Axis::Y: return 'y';
    case Axis::Z: return 'z';
  }
  return '?';
}

inline Axis axis_from_name(char c) {
  switch (c) {
    case 'x': return Axis::X;
    case 'y': return Axis::Y;
    case 'z': return Axis::Z;
  }
  throw std::invalid_argument(std::string("unknown axis: ") + c);
}

struct DimensionCaps {
  std::int64_t dense = 4096;
  std::int64_t sparse = 20'000'000;
};

}  // namespace aklt
