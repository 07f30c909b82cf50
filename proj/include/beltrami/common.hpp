#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace beltrami {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Point at infinity on the Riemann sphere.
inline const cplx kInfinity{std::numeric_limits<double>::infinity(), 0.0};

inline bool is_infinite(cplx z) { return std::isinf(z.real()) || std::isinf(z.imag()); }

enum class ErrorCode {
  invalid_argument = 1,
  unknown_id = 2,
  domain_error = 3,
  not_converged = 4,
  io_error = 5,
  internal = 6,
};

/// Exception carried by every failing operation; the C layer maps `code` to its status enum.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline bool is_power_of_two(long n) { return n > 0 && (n & (n - 1)) == 0; }

/// Uniform cell-centred square lattice.
struct Grid {
  int n = 0;
  double length = 0.0;
  cplx center{0.0, 0.0};

  double h() const { return length / n; }
  double x0() const { return center.real() - 0.5 * length; }
  double y0() const { return center.imag() - 0.5 * length; }
  cplx point(int i, int j) const { return {x0() + (i + 0.5) * h(), y0() + (j + 0.5) * h()}; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n + i; }
  std::size_t size() const { return static_cast<std::size_t>(n) * n; }
  bool contains(cplx z) const {
    return z.real() >= x0() && z.real() <= x0() + length && z.imag() >= y0() &&
           z.imag() <= y0() + length;
  }
};

/// Bilinear interpolation of cell-centred samples; clamps to the outermost cell centres.
template <class T>
T bilinear(const Grid& g, const std::vector<T>& v, cplx z) {
  double fx = (z.real() - g.x0()) / g.h() - 0.5;
  double fy = (z.imag() - g.y0()) / g.h() - 0.5;
  fx = std::clamp(fx, 0.0, g.n - 1.000000001);
  fy = std::clamp(fy, 0.0, g.n - 1.000000001);
  int i = static_cast<int>(fx);
  int j = static_cast<int>(fy);
  double tx = fx - i;
  double ty = fy - j;
  return (1 - tx) * (1 - ty) * v[g.index(i, j)] + tx * (1 - ty) * v[g.index(i + 1, j)] +
         (1 - tx) * ty * v[g.index(i, j + 1)] + tx * ty * v[g.index(i + 1, j + 1)];
}

}  // namespace beltrami
