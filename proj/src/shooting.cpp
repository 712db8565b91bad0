#include "mhdstab/shooting.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace mhdstab {

PolarState polar_factorize(const Mat42& r, double x) {
  Vec4 q1 = r.col(0);
  const double t00 = q1.norm();
  if (!(t00 > 0)) throw std::runtime_error("polar_factorize: zero column");
  q1 /= t00;
  const Cplx t01 = q1.dot(r.col(1));  // conjugate-linear in q1
  Vec4 q2 = r.col(1) - q1 * t01;
  const double t11 = q2.norm();
  if (!(t11 > 1e-13 * t00))
    throw std::runtime_error("polar_factorize: rank-deficient frame");
  q2 /= t11;
  PolarState st;
  st.omega.col(0) = q1;
  st.omega.col(1) = q2;
  st.log_rho = Cplx(std::log(t00) + std::log(t11), 0.0);
  st.x = x;
  return st;
}

PolarState polar_integrate(const Mat42& init, double from_x, double to_x,
                           Cplx lambda, const PhysicalParams& p,
                           const Profile& profile, const IntegOptions& opt) {
  return polar_integrate_field(
      [&profile](double x) { return profile.value(x); }, init, from_x, to_x,
      lambda, p, opt);
}

LogComplex select(const EvansValue& v, EvansVariant which) {
  switch (which) {
    case EvansVariant::raw: return v.raw;
    case EvansVariant::check: return v.check;
    case EvansVariant::hat: return v.hat;
    case EvansVariant::tilde: return v.tilde;
    case EvansVariant::unit: return v.unit;
  }
  return v.raw;
}

namespace {

Cplx sum_pair_sign_split(const Mat4& a, bool stable) {
  Eigen::ComplexEigenSolver<Mat4> ces;
  ces.compute(a, false);
  std::array<int, 4> idx = {0, 1, 2, 3};
  const auto& w = ces.eigenvalues();
  std::sort(idx.begin(), idx.end(),
            [&](int i, int j) { return w(i).real() < w(j).real(); });
  return stable ? w(idx[0]) + w(idx[1]) : w(idx[2]) + w(idx[3]);
}

LogComplex quartic_root_factor(Cplx radicand, double continued_arg,
                               double radicand_at_one) {
  LogComplex f;
  f.log_abs = 0.25 * (std::log(std::abs(radicand)) - std::log(radicand_at_one));
  f.arg = continued_arg / 4.0;
  return f;
}

}  // namespace

EvansValue evans_eval(Cplx lambda, const PhysicalParams& p,
                      const Profile& profile, const KatoFrame& plus_frame,
                      const KatoFrame& minus_frame, const IntegOptions& opt,
                      const EvansContext* ctx) {
  const double lp = profile.l_plus;
  const double lm = profile.l_minus;
  const PolarState sp =
      polar_integrate(plus_frame.basis, lp, 0.0, lambda, p, profile, opt);
  const PolarState sm =
      polar_integrate(minus_frame.basis, -lm, 0.0, lambda, p, profile, opt);

  Mat4 w;
  w.col(0) = sp.omega.col(0);
  w.col(1) = sp.omega.col(1);
  w.col(2) = sm.omega.col(0);
  w.col(3) = sm.omega.col(1);
  const Cplx det = w.determinant();

  EvansContext local;
  if (ctx == nullptr) {
    local.mu_plus_sum =
        sum_pair_sign_split(limit_matrix(Side::plus, lambda, p), true);
    local.mu_minus_sum =
        sum_pair_sign_split(limit_matrix(Side::minus, lambda, p), false);
    local.arg_minus = std::arg(reg_radicand(Side::minus, lambda, p));
    local.arg_mid = std::arg(Cplx(p.v_plus / 4.0, 0.0) + lambda);
    local.arg_plus = std::arg(reg_radicand(Side::plus, lambda, p));
    ctx = &local;
  }

  // remove the expected endstate growth so values stay O(1) on contours
  const Cplx growth =
      sp.log_rho + sm.log_rho + ctx->mu_plus_sum * lp - ctx->mu_minus_sum * lm;

  EvansValue ev;
  ev.lambda = lambda;
  ev.raw.log_abs = growth.real() + std::log(std::abs(det));
  ev.raw.arg = growth.imag() + std::arg(det);

  const LogComplex f_minus =
      quartic_root_factor(reg_radicand(Side::minus, lambda, p), ctx->arg_minus,
                          reg_radicand(Side::minus, 1.0, p).real());
  const LogComplex f_mid = quartic_root_factor(
      Cplx(p.v_plus / 4.0, 0.0) + lambda, ctx->arg_mid, p.v_plus / 4.0 + 1.0);
  const LogComplex f_plus =
      quartic_root_factor(reg_radicand(Side::plus, lambda, p), ctx->arg_plus,
                          reg_radicand(Side::plus, 1.0, p).real());

  ev.check = ev.raw * f_minus * f_mid * f_plus;
  ev.hat = ev.raw * f_minus;
  ev.tilde = ev.raw * f_minus * f_plus;
  ev.unit.log_abs = std::log(std::abs(det));
  ev.unit.arg = ev.raw.arg;
  return ev;
}

}  // namespace mhdstab
