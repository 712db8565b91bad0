#include "mhdstab/limits.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mhdstab {

namespace detail {
EvansValue limiting_value(Cplx lambda, const PhysicalParams& p,
                          double arg_lambda, double arg_minus,
                          Cplx mu_minus_sum, const Mat42& minus_basis,
                          double l_plus, double l_minus,
                          const IntegOptions& integ);
}

SpectralBound hf_radius(const PhysicalParams& p) {
  SpectralBound b;
  b.term_parabolic = 0.5 * std::max(1.0 / p.mu, p.mu0 * p.sigma);
  b.term_field = p.b1 * p.b1 * std::sqrt(p.sigma / (p.mu * p.mu0));
  b.radius = b.term_parabolic + b.term_field;
  return b;
}

double re_lambda_bound(const PhysicalParams& p) {
  return p.b1 * p.b1 / 4.0 * std::sqrt(p.sigma / (p.mu * p.mu0));
}

namespace {

double principal_delta(Cplx to, Cplx from) {
  return std::remainder(std::arg(to) - std::arg(from), 2.0 * std::numbers::pi);
}

// Continuation of the minus basis from a real anchor straight to lambda,
// together with the continued arguments needed by the prefactors.
struct MinusAtLambda {
  Mat42 basis;
  Cplx mu_sum;
  double arg_minus;
  double arg_lambda;
};

MinusAtLambda continue_minus(Cplx lambda, const PhysicalParams& p,
                             const KatoOptions& kato) {
  const Cplx anchor(std::max(1.0, std::abs(lambda)), 0.0);
  KatoContinuation c(p, Side::minus, anchor, kato);
  double arg_minus = std::arg(reg_radicand(Side::minus, anchor, p));
  double arg_lambda = 0.0;
  if (lambda != anchor) {
    c.advance(lambda);
    arg_minus += principal_delta(reg_radicand(Side::minus, lambda, p),
                                 reg_radicand(Side::minus, anchor, p));
    arg_lambda += principal_delta(lambda, anchor);
  }
  return {c.frame().basis, c.selected_sum(), arg_minus, arg_lambda};
}

}  // namespace

EvansValue strong_shock_eval(Cplx lambda, const PhysicalParams& p,
                             const StrongShockOptions& opt) {
  if (!(lambda.real() >= 0.0) || lambda == Cplx(0.0, 0.0))
    throw std::domain_error("strong_shock_eval: need Re lambda >= 0, lambda != 0");
  const MinusAtLambda m = continue_minus(lambda, p, opt.kato);
  const double w = 2.0 * p.two_mu_eta();
  const double x0 = -w * std::atanh(5.0 / 6.0);
  const double l_plus = std::max(20.0, x0 + w * std::atanh(1.0 - 2e-8));
  const double l_minus =
      std::max(20.0, w * std::atanh(1.0 - 2.0 * opt.profile_tol) - x0);
  return detail::limiting_value(lambda, p, m.arg_lambda, m.arg_minus, m.mu_sum,
                                m.basis, l_plus, l_minus, opt.integ);
}

Cplx r_infinity_eval(Cplx lambda, const PhysicalParams& p,
                     const KatoOptions& opt) {
  const Cplx anchor(std::max(1.0, std::abs(lambda)), 0.0);
  KatoContinuation cp(p, Side::plus, anchor, opt);
  KatoContinuation cm(p, Side::minus, anchor, opt);
  if (lambda != anchor) {
    cp.advance(lambda);
    cm.advance(lambda);
  }
  Mat4 w;
  const Mat42 bp = cp.frame().basis;
  const Mat42 bm = cm.frame().basis;
  w.col(0) = bp.col(0);
  w.col(1) = bp.col(1);
  w.col(2) = bm.col(0);
  w.col(3) = bm.col(1);
  return w.determinant();
}

std::vector<double> convergence_error(std::span<const double> v_plus_list,
                                      const PhysicalParams& base,
                                      EvansVariant which,
                                      const ConvergenceOptions& opt) {
  double radius = opt.radius;
  if (radius <= 0.0) radius = std::max(hf_radius(base).radius, 4.5);

  // upper-half mesh: quarter arc plus the axis leg truncated at lambda_min,
  // with the last axis sample exactly on the cutoff where the deviation from
  // the limit peaks
  Contour cut = build_semicircle(radius, opt.n_points, 0.0);
  cut.ts.clear();
  cut.points.clear();
  const int n_arc = opt.n_points / 4, n_axis = opt.n_points / 4;
  const double ta = 0.5 * std::numbers::pi / (std::numbers::pi + 2.0);
  for (int j = 0; j <= n_arc; ++j) cut.ts.push_back(ta * j / n_arc);
  const double s_min = std::sqrt(opt.lambda_min / radius);
  for (int k = 1; k <= n_axis; ++k) {
    const double s = 1.0 + (s_min - 1.0) * k / n_axis;
    cut.ts.push_back(ta + (1.0 - s) * (0.5 - ta));  // inverse of the axis map
  }
  for (double t : cut.ts) cut.points.push_back(cut.map(t));

  DriverOptions dopt;
  dopt.integ = opt.integ;
  dopt.kato = opt.kato;
  dopt.conjugate_sym = false;  // the mesh already stops at the upper half

  EvansDriver limit(EvansDriver::Mode::limiting, base, cut, dopt);
  std::vector<Cplx> lim_vals(cut.ts.size());
  for (size_t i = 0; i < cut.ts.size(); ++i)
    lim_vals[i] = select(limit.value_at(cut.ts[i]), which).value();

  std::vector<double> out;
  for (double vp : v_plus_list) {
    PhysicalParams p = base;
    p.v_plus = vp;
    p.a = rh_coefficient(vp, p.gamma);
    DriverOptions fo = dopt;
    fo.limit_matched_init = true;
    EvansDriver fin(EvansDriver::Mode::finite, p, cut, fo);
    double err = 0.0;
    for (size_t i = 0; i < cut.ts.size(); ++i) {
      const Cplx f = select(fin.value_at(cut.ts[i]), which).value();
      err = std::max(err, std::abs(f - lim_vals[i]) / std::abs(lim_vals[i]));
    }
    out.push_back(err);
  }
  return out;
}

std::string convergence_table_csv(std::span<const double> v_plus_list,
                                  std::span<const double> b1_list,
                                  const PhysicalParams& base,
                                  EvansVariant which,
                                  const ConvergenceOptions& opt) {
  std::ostringstream os;
  os << "v_plus";
  for (double b : b1_list) os << ",b1=" << b;
  os << '\n';
  std::vector<std::vector<double>> cols;
  for (double b : b1_list) {
    PhysicalParams p = base;
    p.b1 = b;
    cols.push_back(convergence_error(v_plus_list, p, which, opt));
  }
  os.precision(6);
  for (size_t i = 0; i < v_plus_list.size(); ++i) {
    os << v_plus_list[i];
    for (const auto& c : cols) os << ',' << c[i];
    os << '\n';
  }
  return os.str();
}

namespace {

// ascending-coefficient polynomial helpers for the elimination below
using Poly = std::vector<Cplx>;

Poly pmul(const Poly& a, const Poly& b) {
  Poly r(a.size() + b.size() - 1, Cplx(0, 0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

Poly padd(const Poly& a, const Poly& b, Cplx bscale = 1.0) {
  Poly r = a;
  if (r.size() < b.size()) r.resize(b.size(), Cplx(0, 0));
  for (size_t j = 0; j < b.size(); ++j) r[j] += bscale * b[j];
  return r;
}

Cplx peval(const Poly& a, Cplx z) {
  Cplx r(0, 0);
  for (size_t i = a.size(); i-- > 0;) r = r * z + a[i];
  return r;
}

std::vector<Cplx> proots(Poly a) {
  while (!a.empty() && std::abs(a.back()) < 1e-300) a.pop_back();
  const int n = static_cast<int>(a.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -a[i] / a[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces;
  ces.compute(comp, false);
  std::vector<Cplx> out(n);
  for (int i = 0; i < n; ++i) out[i] = ces.eigenvalues()(i);
  return out;
}

}  // namespace

std::vector<Cplx> branch_point_diagnostic(const PhysicalParams& p) {
  // frequencies where the characteristic polynomial of A+ has a double root:
  // eliminate alpha from p = 0, dp/dalpha = 0.  dp/dalpha = 0 is linear in
  // lambda, lambda = N(alpha)/M(alpha); substituting into p and clearing the
  // denominator gives a degree-6 polynomial in alpha.
  const double vp = p.v_plus;
  const double c = p.sigma * p.mu0 * vp * vp;
  const double kk = p.sigma * p.b1 * p.b1 * vp * vp;
  const Poly p1 = {Cplx(0, 0), Cplx(-vp, 0), Cplx(1, 0)};  // alpha^2 - vp alpha
  const Poly p2 = {Cplx(0, 0), Cplx(-c, 0), Cplx(1, 0)};
  const Poly d1 = {Cplx(-vp, 0), Cplx(2, 0)};
  const Poly d2 = {Cplx(-c, 0), Cplx(2, 0)};
  // N = p1' p2 + p1 p2' - 2 K alpha, M = c p1' + vp p2'
  const Poly nn = padd(padd(pmul(d1, p2), pmul(p1, d2)),
                       Poly{Cplx(0, 0), Cplx(1, 0)}, Cplx(-2.0 * kk, 0));
  const Poly mm = padd(pmul(Poly{Cplx(c, 0)}, d1), pmul(Poly{Cplx(vp, 0)}, d2));
  // p M^2 = (p1 M - vp N)(p2 M - c N) - K alpha^2 M^2
  const Poly f1 = padd(pmul(p1, mm), nn, Cplx(-vp, 0));
  const Poly f2 = padd(pmul(p2, mm), nn, Cplx(-c, 0));
  const Poly s = padd(pmul(f1, f2),
                      pmul(Poly{Cplx(0, 0), Cplx(0, 0), Cplx(1, 0)}, pmul(mm, mm)),
                      Cplx(-kk, 0));

  std::vector<Cplx> out;
  for (const Cplx al : proots(s)) {
    const Cplx m = peval(mm, al);
    if (std::abs(m) < 1e-12) continue;  // spurious denominator root
    const Cplx lam = peval(nn, al) / m;
    bool dup = false;
    for (const Cplx& z : out)
      if (std::abs(z - lam) < 1e-8 * std::max(1.0, std::abs(lam))) dup = true;
    if (!dup) out.push_back(lam);
  }
  std::sort(out.begin(), out.end(),
            [](Cplx a, Cplx b) { return std::abs(a) < std::abs(b); });
  return out;
}

}  // namespace mhdstab
