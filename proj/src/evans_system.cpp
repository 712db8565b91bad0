#include "mhdstab/evans_system.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace mhdstab {

Mat4 evans_matrix(Cplx lambda, double v, const PhysicalParams& p) {
  const double mu = p.mu, sg = p.sigma, m0 = p.mu0, b1 = p.b1;
  Mat4 a = Mat4::Zero();
  a(0, 1) = 1.0 / mu;
  a(1, 0) = lambda * v;
  a(1, 1) = v / mu;
  a(1, 3) = -sg * b1 * v;
  a(2, 3) = sg * m0 * v;
  a(3, 1) = -b1 * v / mu;
  a(3, 2) = lambda * v;
  a(3, 3) = sg * m0 * v * v;
  return a;
}

Mat4 assemble(double x, Cplx lambda, const PhysicalParams& p,
              const Profile& profile) {
  return evans_matrix(lambda, profile.value(x), p);
}

Mat4 limit_matrix(Side side, Cplx lambda, const PhysicalParams& p) {
  return evans_matrix(lambda, side == Side::plus ? p.v_plus : 1.0, p);
}

Vec4 canonical_phase(Vec4 v) {
  const double n = v.norm();
  for (int i = 0; i < 4; ++i) {
    if (std::abs(v(i)) > 1e-12 * n) {
      v *= std::conj(v(i)) / std::abs(v(i));
      break;
    }
  }
  return v / v.norm();
}

SpectralSplit spectral_split(const Mat4& m, Side side, double tol) {
  Eigen::ComplexEigenSolver<Mat4> ces;
  ces.compute(m, true);
  std::array<int, 4> idx = {0, 1, 2, 3};
  const auto& w = ces.eigenvalues();
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    if (w(i).real() != w(j).real()) return w(i).real() < w(j).real();
    return w(i).imag() < w(j).imag();
  });
  double min_re = 1e300, scale = 0.0;
  for (int i = 0; i < 4; ++i) {
    min_re = std::min(min_re, std::abs(w(i).real()));
    scale = std::max(scale, std::abs(w(i)));
  }
  // a vanishing real part means the 2/2 hyperbolic split is breaking down
  if (min_re < tol * std::max(1.0, scale)) throw SplitFailure(Cplx(0, 0));
  if (w(idx[1]).real() >= 0.0 || w(idx[2]).real() <= 0.0)
    throw SplitFailure(Cplx(0, 0));

  SpectralSplit out;
  const bool stable = (side == Side::plus);
  for (int k = 0; k < 2; ++k) {
    const int i = stable ? idx[k] : idx[2 + k];
    const int c = stable ? idx[2 + k] : idx[k];
    out.selected[k].value = w(i);
    out.selected[k].vector = canonical_phase(ces.eigenvectors().col(i));
    out.complement[k] = w(c);
  }
  return out;
}

}  // namespace mhdstab
