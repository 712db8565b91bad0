#include "mhdstab/evans_driver.hpp"

#include <cmath>
#include <numbers>

namespace mhdstab {

namespace {

double principal_delta(Cplx to, Cplx from) {
  return std::remainder(std::arg(to) - std::arg(from), 2.0 * std::numbers::pi);
}

LogComplex quartic_factor(Cplx radicand, double continued_arg, double at_one) {
  return {0.25 * (std::log(std::abs(radicand)) - std::log(at_one)),
          continued_arg / 4.0};
}

EvansValue conjugated(EvansValue v) {
  v.lambda = std::conj(v.lambda);
  for (LogComplex* f : {&v.raw, &v.check, &v.hat, &v.tilde, &v.unit})
    f->arg = -f->arg;
  return v;
}

}  // namespace

namespace detail {

EvansValue limiting_value(Cplx lambda, const PhysicalParams& p,
                          double arg_lambda, double arg_minus,
                          Cplx mu_minus_sum, const Mat42& minus_basis,
                          double l_plus, double l_minus,
                          const IntegOptions& integ) {
  if (lambda == Cplx(0.0, 0.0))
    throw std::domain_error("strong shock evaluation undefined at lambda = 0");
  const double r = std::abs(lambda);
  const Cplx ei4(std::cos(arg_lambda / 4.0), std::sin(arg_lambda / 4.0));
  const Cplx lam_m14 = std::pow(r, -0.25) / ei4;
  const Cplx lam_p14 = std::pow(r, 0.25) * ei4;

  Mat42 plus_basis = Mat42::Zero();
  plus_basis(0, 0) = lam_m14;
  plus_basis(2, 1) = lam_m14;
  plus_basis(3, 1) = -lam_p14 / std::sqrt(p.sigma * p.mu0);

  auto v0 = [&p](double x) { return limiting_profile(x, p); };
  const PolarState sp =
      polar_integrate_field(v0, plus_basis, l_plus, 0.0, lambda, p, integ);
  const PolarState sm =
      polar_integrate_field(v0, minus_basis, -l_minus, 0.0, lambda, p, integ);

  Mat4 w;
  w.col(0) = sp.omega.col(0);
  w.col(1) = sp.omega.col(1);
  w.col(2) = sm.omega.col(0);
  w.col(3) = sm.omega.col(1);
  const Cplx det = w.determinant();

  // the limiting A+ has nilpotent structure (zero trace on the tracked
  // pair); only the minus-side growth is removed
  const Cplx growth = sp.log_rho + sm.log_rho - mu_minus_sum * l_minus;

  EvansValue ev;
  ev.lambda = lambda;
  ev.raw.log_abs = growth.real() + std::log(std::abs(det));
  ev.raw.arg = growth.imag() + std::arg(det);

  const LogComplex f_minus =
      quartic_factor(reg_radicand(Side::minus, lambda, p), arg_minus,
                     reg_radicand(Side::minus, 1.0, p).real());
  const LogComplex sqrt_lambda{0.5 * std::log(r), arg_lambda / 2.0};
  ev.check = ev.raw * f_minus * sqrt_lambda;
  ev.hat = ev.raw * f_minus;
  ev.tilde = ev.check;  // the mid and plus factors merge into sqrt(lambda)
  ev.unit.log_abs = std::log(std::abs(det));
  ev.unit.arg = ev.raw.arg;
  return ev;
}

}  // namespace detail

EvansDriver::EvansDriver(Mode mode, const PhysicalParams& p,
                         const Contour& contour, const DriverOptions& opt)
    : mode_(mode), params_(p), contour_(&contour), opt_(opt) {
  if (mode_ == Mode::finite) profile_ = compute_profile(p, opt_.profile);
  if (mode_ == Mode::limiting) {
    const double w = 2.0 * p.two_mu_eta();
    const double x0 = -w * std::atanh(5.0 / 6.0);
    // v0(l_plus) < 1e-8 and |v0(-l_minus) - 1| <= profile tol, with the
    // same minimum truncation as the finite-amplitude rule
    lim_l_plus_ = std::max(opt_.profile.l_init, x0 + w * std::atanh(1.0 - 2e-8));
    lim_l_minus_ = std::max(opt_.profile.l_init,
                            w * std::atanh(1.0 - 2.0 * opt_.profile.tol) - x0);
  }
  prepare();
}

EvansDriver::EvansDriver(const PhysicalParams& p, Profile profile,
                         const Contour& contour, const DriverOptions& opt)
    : mode_(Mode::finite),
      params_(p),
      contour_(&contour),
      opt_(opt),
      profile_(std::move(profile)) {
  prepare();
}

void EvansDriver::prepare() {
  const bool sym = opt_.conjugate_sym &&
                   contour_->kind == Contour::Kind::semicircle;
  const double half = contour_->period() / 2.0;

  Node n0;
  n0.t = contour_->ts.front();
  n0.lambda = contour_->points.front();
  if (!(n0.lambda.real() > 0.0))
    throw std::domain_error("contour anchor must satisfy Re lambda > 0");
  if (mode_ != Mode::limiting) {
    n0.plus.emplace(params_, Side::plus, n0.lambda, opt_.kato);
    if (opt_.limit_matched_init && mode_ == Mode::finite) {
      // scale the eigenvectors to the limiting-basis formulas at the anchor
      Mat42 b = n0.plus->frame().basis;
      const int c0 = std::abs(b(0, 0)) >= std::abs(b(0, 1)) ? 0 : 1;
      const int c1 = 1 - c0;
      const double l0 = n0.lambda.real();
      const double vp = params_.v_plus, sm = params_.sigma * params_.mu0;
      const double s1 = std::pow((vp / 4.0 + 1.0) / (vp / 4.0 + l0), 0.25);
      const double s2 = std::pow((vp * vp / 4.0 + 1.0 / sm) /
                                     (vp * vp / 4.0 + l0 / sm),
                                 0.25);
      Mat42 scaled;
      scaled.col(0) = b.col(c0) * (s1 / b(0, c0));
      scaled.col(1) = b.col(c1) * (s2 / b(2, c1));
      n0.plus->set_frame(scaled);
    }
  }
  n0.minus.emplace(params_, Side::minus, n0.lambda, opt_.kato);
  n0.arg_minus = std::arg(reg_radicand(Side::minus, n0.lambda, params_));
  n0.arg_mid = std::arg(Cplx(params_.v_plus / 4.0, 0.0) + n0.lambda);
  n0.arg_plus = std::arg(reg_radicand(Side::plus, n0.lambda, params_));
  n0.arg_lambda = std::arg(n0.lambda);
  nodes_.push_back(std::move(n0));

  for (size_t i = 1; i < contour_->ts.size(); ++i) {
    const double t = contour_->ts[i];
    if (sym && t > half + 1e-12) break;
    nodes_.push_back(advance_node(nodes_.back(), t, contour_->points[i]));
  }
}

EvansDriver::Node EvansDriver::advance_node(const Node& from, double t,
                                            Cplx lambda) const {
  Node to = from;
  to.t = t;
  to.lambda = lambda;
  if (to.plus) to.plus->advance(lambda);
  if (to.minus) to.minus->advance(lambda);
  to.arg_minus += principal_delta(reg_radicand(Side::minus, lambda, params_),
                                  reg_radicand(Side::minus, from.lambda, params_));
  to.arg_mid += principal_delta(Cplx(params_.v_plus / 4.0, 0.0) + lambda,
                                Cplx(params_.v_plus / 4.0, 0.0) + from.lambda);
  to.arg_plus += principal_delta(reg_radicand(Side::plus, lambda, params_),
                                 reg_radicand(Side::plus, from.lambda, params_));
  if (lambda != Cplx(0.0, 0.0) && from.lambda != Cplx(0.0, 0.0))
    to.arg_lambda += principal_delta(lambda, from.lambda);
  return to;
}

EvansValue EvansDriver::eval_node(const Node& node) const {
  if (mode_ == Mode::limiting) {
    return detail::limiting_value(
        node.lambda, params_, node.arg_lambda, node.arg_minus,
        node.minus->selected_sum(), node.minus->frame().basis, lim_l_plus_,
        lim_l_minus_, opt_.integ);
  }
  if (mode_ == Mode::r_infinity) {
    Mat4 w;
    const Mat42 bp = node.plus->frame().basis;
    const Mat42 bm = node.minus->frame().basis;
    w.col(0) = bp.col(0);
    w.col(1) = bp.col(1);
    w.col(2) = bm.col(0);
    w.col(3) = bm.col(1);
    const Cplx det = w.determinant();
    EvansValue ev;
    ev.lambda = node.lambda;
    ev.raw = LogComplex::from(det);
    const LogComplex f_minus = quartic_factor(
        reg_radicand(Side::minus, node.lambda, params_), node.arg_minus,
        reg_radicand(Side::minus, 1.0, params_).real());
    const LogComplex f_mid =
        quartic_factor(Cplx(params_.v_plus / 4.0, 0.0) + node.lambda,
                       node.arg_mid, params_.v_plus / 4.0 + 1.0);
    const LogComplex f_plus = quartic_factor(
        reg_radicand(Side::plus, node.lambda, params_), node.arg_plus,
        reg_radicand(Side::plus, 1.0, params_).real());
    ev.check = ev.raw * f_minus * f_mid * f_plus;
    ev.hat = ev.raw * f_minus;
    ev.tilde = ev.raw * f_minus * f_plus;
    ev.unit = ev.raw;
    return ev;
  }
  EvansContext ctx;
  ctx.mu_plus_sum = node.plus->selected_sum();
  ctx.mu_minus_sum = node.minus->selected_sum();
  ctx.arg_minus = node.arg_minus;
  ctx.arg_mid = node.arg_mid;
  ctx.arg_plus = node.arg_plus;
  return evans_eval(node.lambda, params_, *profile_, node.plus->frame(),
                    node.minus->frame(), opt_.integ, &ctx);
}

EvansValue EvansDriver::value_at(double t) {
  const bool sym = opt_.conjugate_sym &&
                   contour_->kind == Contour::Kind::semicircle;
  const double half = contour_->period() / 2.0;
  if (sym && t > half + 1e-12) {
    return conjugated(value_at(contour_->period() - t));
  }
  ++evals_;
  // nearest prepared node at or below t
  size_t lo = 0;
  for (size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].t <= t + 1e-15) lo = i;
    else break;
  }
  if (std::abs(nodes_[lo].t - t) < 1e-15) return eval_node(nodes_[lo]);
  const Node tmp = advance_node(nodes_[lo], t, contour_->map(t));
  return eval_node(tmp);
}

ContourEvaluator EvansDriver::evaluator() {
  return [this](double t, Cplx) { return select(value_at(t), opt_.variant); };
}

}  // namespace mhdstab
