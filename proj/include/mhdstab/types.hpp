#ifndef MHDSTAB_TYPES_HPP
#define MHDSTAB_TYPES_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>

namespace mhdstab {

using Cplx = std::complex<double>;
using Mat4 = Eigen::Matrix4cd;
using Mat2 = Eigen::Matrix2cd;
using Mat42 = Eigen::Matrix<Cplx, 4, 2>;
using Vec4 = Eigen::Vector4cd;
using Vec6 = Eigen::Matrix<Cplx, 6, 1>;

enum class Side { plus, minus };

/// Complex value kept in log-polar form so that quantities spanning
/// hundreds of orders of magnitude survive multiplication and ratio tests.
struct LogComplex {
  double log_abs = 0.0;  // ln |z|
  double arg = 0.0;      // arg z; not reduced mod 2*pi

  static LogComplex from(Cplx z) {
    return {std::log(std::abs(z)), std::arg(z)};
  }
  static LogComplex one() { return {0.0, 0.0}; }

  Cplx value() const {
    return std::exp(log_abs) * Cplx(std::cos(arg), std::sin(arg));
  }
  double abs() const { return std::exp(log_abs); }

  LogComplex operator*(const LogComplex& o) const {
    return {log_abs + o.log_abs, arg + o.arg};
  }
  LogComplex operator/(const LogComplex& o) const {
    return {log_abs - o.log_abs, arg - o.arg};
  }
};

inline LogComplex pow(const LogComplex& z, double p) {
  return {p * z.log_abs, p * z.arg};
}

}  // namespace mhdstab

#endif
