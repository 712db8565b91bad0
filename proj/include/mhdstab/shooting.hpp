#ifndef MHDSTAB_SHOOTING_HPP
#define MHDSTAB_SHOOTING_HPP

#include "mhdstab/evans_system.hpp"
#include "mhdstab/kato.hpp"
#include "mhdstab/ode.hpp"
#include "mhdstab/params.hpp"
#include "mhdstab/profile.hpp"
#include "mhdstab/types.hpp"

namespace mhdstab {

struct IntegOptions {
  double rtol = 1e-8;          // RelTol of the shooting protocol
  double atol = 1e-6;          // AbsTol
  double ortho_tol = 1e-8;     // orthonormality invariant threshold
  long max_reortho = 1000000;  // OrthonormalityLoss beyond this
};

struct OrthonormalityLoss : std::runtime_error {
  OrthonormalityLoss() : std::runtime_error("polar: reorthonormalization ran away") {}
};

/// Shooting state: orthonormal 4x2 frame plus complex log-radius.  The
/// encoded wedge is exp(log_rho) * (omega_1 ^ omega_2).
struct PolarState {
  Mat42 omega;
  Cplx log_rho{0.0, 0.0};
  double x = 0.0;
  long reorthos = 0;
};

/// Modified Gram-Schmidt factorization R = Q T with positive real diagonal;
/// log_rho = log det T.  Throws on rank loss.
PolarState polar_factorize(const Mat42& r, double x);

/// Integrates Drury's flow Omega' = A Omega - Omega (Omega* A Omega) and
/// (log rho)' = tr(Omega* A Omega) from from_x to to_x.
PolarState polar_integrate(const Mat42& init, double from_x, double to_x,
                           Cplx lambda, const PhysicalParams& p,
                           const Profile& profile,
                           const IntegOptions& opt = {});

/// Same flow with an arbitrary density field v(x) (used for the limiting
/// tanh profile).
template <class VFun>
PolarState polar_integrate_field(VFun&& v_of_x, const Mat42& init,
                                 double from_x, double to_x, Cplx lambda,
                                 const PhysicalParams& p,
                                 const IntegOptions& opt = {});

/// Evans function value with its renormalizations, kept in log-polar form.
/// raw removes the expected endstate growth exp(-mu_+ L_+ + mu_- L_-), where
/// mu_+/- are the sums of the initializing eigenvalue pairs, so contour
/// values stay O(1) and ratio tests across lambda are meaningful.
struct EvansValue {
  Cplx lambda;
  LogComplex raw;    // D
  LogComplex check;  // D-check: three quartic-root factors
  LogComplex hat;    // D-hat: minus-side factor only
  LogComplex tilde;  // D-tilde: minus- and plus-side factors
  LogComplex unit;   // D / (|P R|+ |P R|-): modulus in (0, 1]

  Cplx d_raw() const { return raw.value(); }
  Cplx d_check() const { return check.value(); }
  Cplx d_hat() const { return hat.value(); }
  Cplx d_tilde() const { return tilde.value(); }
  Cplx d_unit() const { return unit.value(); }
};

enum class EvansVariant { raw, check, hat, tilde, unit };

LogComplex select(const EvansValue& v, EvansVariant which);

/// Continuation context threaded along a contour: the tracked eigenvalue
/// sums and the continued arguments of the prefactor radicands.  Without it
/// evans_eval uses a sign-based split and principal branches (fine for an
/// isolated point with Re lambda > 0 away from degeneracies).
struct EvansContext {
  Cplx mu_plus_sum{0, 0};
  Cplx mu_minus_sum{0, 0};
  double arg_minus = 0;  // arg of reg_radicand(minus)
  double arg_mid = 0;    // arg of (v+/4 + lambda)
  double arg_plus = 0;   // arg of reg_radicand(plus)
};

EvansValue evans_eval(Cplx lambda, const PhysicalParams& p,
                      const Profile& profile, const KatoFrame& plus_frame,
                      const KatoFrame& minus_frame,
                      const IntegOptions& opt = {},
                      const EvansContext* ctx = nullptr);

// ---------------------------------------------------------------------------

template <class VFun>
PolarState polar_integrate_field(VFun&& v_of_x, const Mat42& init,
                                 double from_x, double to_x, Cplx lambda,
                                 const PhysicalParams& p,
                                 const IntegOptions& opt) {
  using State = Eigen::Matrix<Cplx, 9, 1>;
  PolarState st = polar_factorize(init, from_x);
  if (from_x == to_x) return st;

  auto pack = [](const PolarState& s) {
    State y;
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 4; ++r) y(4 * c + r) = s.omega(r, c);
    y(8) = s.log_rho;
    return y;
  };
  auto unpack = [](const State& y, PolarState& s) {
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 4; ++r) s.omega(r, c) = y(4 * c + r);
    s.log_rho = y(8);
  };

  auto rhs = [&](double x, const State& y) {
    Mat42 om;
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 4; ++r) om(r, c) = y(4 * c + r);
    const Mat4 a = evans_matrix(lambda, v_of_x(x), p);
    const Mat42 ao = a * om;
    const Mat2 m = om.adjoint() * ao;
    const Mat42 dom = ao - om * m;
    State d;
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 4; ++r) d(4 * c + r) = dom(r, c);
    d(8) = m(0, 0) + m(1, 1);
    return d;
  };

  State y = pack(st);
  long reorthos = 0;
  auto obs = [&](double, State& yy) {
    Mat42 om;
    for (int c = 0; c < 2; ++c)
      for (int r = 0; r < 4; ++r) om(r, c) = yy(4 * c + r);
    const Mat2 g = om.adjoint() * om;
    if ((g - Mat2::Identity()).norm() > opt.ortho_tol) {
      PolarState tmp = polar_factorize(om, 0.0);
      for (int c = 0; c < 2; ++c)
        for (int r = 0; r < 4; ++r) yy(4 * c + r) = tmp.omega(r, c);
      yy(8) += tmp.log_rho;
      if (++reorthos > opt.max_reortho) throw OrthonormalityLoss();
    }
    return true;
  };

  OdeOptions oo;
  oo.rtol = opt.rtol;
  oo.atol = opt.atol;
  oo.h_init = 1e-2;
  ode45(rhs, y, from_x, to_x, oo, obs);
  unpack(y, st);
  st.x = to_x;
  st.reorthos = reorthos;
  return st;
}

}  // namespace mhdstab

#endif
