#include "mhdstab/kato.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "mhdstab/ode.hpp"

namespace mhdstab {
namespace kato_detail {

namespace {

std::vector<Cplx> eigenvalues_of(const Eigen::MatrixXcd& a) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces;
  ces.compute(a, false);
  std::vector<Cplx> w(a.rows());
  for (int i = 0; i < a.rows(); ++i) w[i] = ces.eigenvalues()(i);
  return w;
}

}  // namespace

bool cluster_projector(const Eigen::MatrixXcd& a,
                       const std::vector<Cplx>* prev_sel, bool stable, int k,
                       double gap_tol, Eigen::MatrixXcd& proj_out,
                       std::vector<Cplx>& sel_out) {
  const int n = static_cast<int>(a.rows());
  const auto w = eigenvalues_of(a);

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::vector<int> idx;
  if (prev_sel == nullptr) {
    std::sort(order.begin(), order.end(), [&](int i, int j) {
      if (w[i].real() != w[j].real()) return w[i].real() < w[j].real();
      return w[i].imag() < w[j].imag();
    });
    if (stable)
      idx.assign(order.begin(), order.begin() + k);
    else
      idx.assign(order.end() - k, order.end());
  } else {
    // greedy matching by minimal distance to the previously tracked pair
    std::vector<bool> used(n, false);
    for (const Cplx& p : *prev_sel) {
      int best = -1;
      double bd = 1e300;
      for (int i = 0; i < n; ++i) {
        if (used[i]) continue;
        const double d = std::abs(w[i] - p);
        if (d < bd) {
          bd = d;
          best = i;
        }
      }
      used[best] = true;
      idx.push_back(best);
    }
  }
  std::vector<int> com;
  for (int i = 0; i < n; ++i)
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) com.push_back(i);

  double spread = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      spread = std::max(spread, std::abs(w[i] - w[j]));
  double gap = 1e300;
  for (int i : idx)
    for (int j : com) gap = std::min(gap, std::abs(w[i] - w[j]));
  sel_out.clear();
  for (int i : idx) sel_out.push_back(w[i]);
  if (gap < gap_tol * std::max(spread, 1e-300)) return false;

  // m(z): complement polynomial; l(z): linear (or constant) interpolant of
  // 1/m on the cluster, Hermite when the cluster nodes nearly coincide.
  auto m_of = [&](Cplx z) {
    Cplx r = 1.0;
    for (int j : com) r *= (z - w[j]);
    return r;
  };
  Eigen::MatrixXcd mA = Eigen::MatrixXcd::Identity(n, n);
  for (int j : com) mA = mA * (a - w[j] * Eigen::MatrixXcd::Identity(n, n));

  if (k == 1) {
    proj_out = mA / m_of(w[idx[0]]);
    return true;
  }
  const Cplx a1 = w[idx[0]], a2 = w[idx[1]];
  Cplx u, v;
  if (std::abs(a1 - a2) > 1e-8 * std::max(spread, 1e-300)) {
    u = (1.0 / m_of(a1) - 1.0 / m_of(a2)) / (a1 - a2);
    v = 1.0 / m_of(a1) - u * a1;
  } else {
    const Cplx am = (a1 + a2) / 2.0;
    Cplx mp = 0.0;  // m'(am)
    for (int j : com) {
      Cplx t = 1.0;
      for (int j2 : com)
        if (j2 != j) t *= (am - w[j2]);
      mp += t;
    }
    const Cplx mm = m_of(am);
    u = -mp / (mm * mm);
    v = 1.0 / mm - u * am;
  }
  proj_out = mA * (u * a + v * Eigen::MatrixXcd::Identity(n, n));
  return true;
}

Continuation::Continuation(MatrixFn a_of_lambda, int cluster_size, bool stable,
                           Cplx lambda0, KatoOptions opt)
    : a_(std::move(a_of_lambda)), k_(cluster_size), opt_(opt), lambda_(lambda0) {
  if (!cluster_projector(a_(lambda0), nullptr, stable, k_, opt_.gap_tol, proj_,
                         sel_))
    throw SplitFailure(lambda0);
  rate_.assign(sel_.size(), Cplx(0.0, 0.0));
  // default basis: eigenvectors of the tracked cluster with canonical phase
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces;
  const Eigen::MatrixXcd a0 = a_(lambda0);
  ces.compute(a0, true);
  const int n = static_cast<int>(a0.rows());
  basis_ = Eigen::MatrixXcd(n, k_);
  std::vector<bool> used(n, false);
  for (int c = 0; c < k_; ++c) {
    // distinct columns even for repeated eigenvalues
    int best = -1;
    double bd = 1e300;
    for (int i = 0; i < n; ++i) {
      if (used[i]) continue;
      const double d = std::abs(ces.eigenvalues()(i) - sel_[c]);
      if (d < bd) {
        bd = d;
        best = i;
      }
    }
    used[best] = true;
    Eigen::VectorXcd v = ces.eigenvectors().col(best);
    const double nm = v.norm();
    for (int i = 0; i < n; ++i) {
      if (std::abs(v(i)) > 1e-12 * nm) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    }
    basis_.col(c) = v / v.norm();
  }
}

Cplx Continuation::selected_sum() const {
  Cplx s = 0.0;
  for (const Cplx& z : sel_) s += z;
  return s;
}

void Continuation::step_once(Cplx next) {
  Eigen::MatrixXcd p1;
  std::vector<Cplx> sel1;
  // match against the secant-predicted eigenvalue positions; the tracked
  // values cross their complement partners at the origin
  const Cplx dl = next - lambda_;
  std::vector<Cplx> pred(sel_.size());
  for (size_t i = 0; i < sel_.size(); ++i) pred[i] = sel_[i] + rate_[i] * dl;
  // retreat slightly toward the current point when the clusters collide at
  // the target (continuous extension; happens at lambda = 0 exactly)
  bool ok = cluster_projector(a_(next), &pred, false, k_, opt_.gap_tol, p1, sel1);
  for (double d = 1e-4; !ok && d < 0.5; d *= 10.0) {
    const Cplx probe = next + d * (lambda_ - next);
    ok = cluster_projector(a_(probe), &pred, false, k_, opt_.gap_tol, p1, sel1);
  }
  if (!ok) throw SplitFailure(next);
  const Eigen::MatrixXcd dp = p1 - proj_;
  if (dp.norm() > opt_.proj_jump_max) throw StepTooLarge();
  basis_ = p1 * (basis_ + dp * (basis_ + 0.5 * (dp * basis_)));
  proj_ = p1;
  if (std::abs(dl) > 0.0)
    for (size_t i = 0; i < sel_.size(); ++i) rate_[i] = (sel1[i] - sel_[i]) / dl;
  sel_ = sel1;
  lambda_ = next;
}

void Continuation::move_to(Cplx next, int depth) {
  const Cplx from = lambda_;
  try {
    step_once(next);
    return;
  } catch (const StepTooLarge&) {
    if (depth >= opt_.substep_depth) throw;
    if (++steps_taken_ > 200000)
      throw IntegrationFailure("kato advance: sub-step budget exhausted");
  }
  move_to(from + (next - from) / 2.0, depth + 1);
  // the remaining half starts from the new current point with a fresh
  // bisection budget; progress along the chord keeps this terminating
  move_to(next, 0);
}

void Continuation::advance(Cplx next) {
  steps_taken_ = 0;
  move_to(next, 0);
}

}  // namespace kato_detail

namespace {

Eigen::MatrixXcd balanced_limit(const PhysicalParams& p, Side side,
                                const Vec4& s, const Vec4& si, Cplx lambda) {
  const Mat4 a = limit_matrix(side, lambda, p);
  return (s.asDiagonal() * a * si.asDiagonal()).eval();
}

Vec4 balance_scale(const PhysicalParams& p, Side side) {
  Vec4 s = Vec4::Ones();
  if (side == Side::plus) s(0) = std::sqrt(p.v_plus);
  return s;
}

}  // namespace

KatoContinuation::KatoContinuation(const PhysicalParams& p, Side side,
                                   Cplx lambda0, const KatoOptions& opt)
    : params_(p),
      side_(side),
      scale_(balance_scale(p, side)),
      scale_inv_(balance_scale(p, side).cwiseInverse()),
      core_(
          // captured by value so the continuation stays copyable
          [p, side, s = balance_scale(p, side),
           si = balance_scale(p, side).cwiseInverse().eval()](Cplx l) {
            return balanced_limit(p, side, s, si, l);
          },
          2, side == Side::plus, lambda0, opt) {}

KatoFrame KatoContinuation::frame() const {
  KatoFrame f;
  f.lambda = core_.lambda();
  f.side = side_;
  f.basis = (scale_inv_.asDiagonal() * core_.basis()).eval();
  return f;
}

void KatoContinuation::set_frame(const Mat42& basis) {
  core_.set_basis((scale_.asDiagonal() * basis).eval());
}

void KatoContinuation::advance(Cplx next) { core_.advance(next); }
void KatoContinuation::step_once(Cplx next) { core_.step_once(next); }

Mat4 KatoContinuation::projector() const {
  return (scale_inv_.asDiagonal() * core_.projector() *
          scale_.asDiagonal())
      .eval();
}

KatoFrame kato_init(Side side, Cplx lambda0, const PhysicalParams& p) {
  if (!(lambda0.real() > 0.0))
    throw std::domain_error("kato_init: need Re lambda0 > 0");
  KatoContinuation c(p, side, lambda0);
  KatoFrame f = c.frame();
  // canonical phase in the original coordinates
  for (int k = 0; k < 2; ++k) f.basis.col(k) = canonical_phase(f.basis.col(k));
  return f;
}

KatoFrame kato_step(const KatoFrame& frame, Cplx lambda_next,
                    const PhysicalParams& p, const KatoOptions& opt) {
  KatoContinuation c(p, frame.side, frame.lambda, opt);
  c.set_frame(frame.basis);
  c.step_once(lambda_next);
  return c.frame();
}

std::vector<KatoFrame> kato_along_contour(Side side,
                                          std::span<const Cplx> contour,
                                          const PhysicalParams& p,
                                          const KatoOptions& opt) {
  if (contour.empty()) return {};
  KatoContinuation c(p, side, contour.front(), opt);
  std::vector<KatoFrame> out;
  out.reserve(contour.size());
  out.push_back(c.frame());
  for (size_t i = 1; i < contour.size(); ++i) {
    c.advance(contour[i]);
    out.push_back(c.frame());
  }
  return out;
}

Vec6 wedge2(const Mat42& r) {
  Vec6 w;
  int k = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      w(k++) = r(i, 0) * r(j, 1) - r(j, 0) * r(i, 1);
  return w;
}

Cplx reg_radicand(Side side, Cplx lambda, const PhysicalParams& p) {
  const double v = side == Side::plus ? p.v_plus : 1.0;
  const double c = p.mu / (2.0 * v) + 1.0 / (2.0 * p.sigma * p.mu0 * v * v);
  const double b = 1.0 - p.b1 / std::sqrt(p.mu0 * v);
  return b * b + 4.0 * lambda * c;
}

RegularizedProduct regularized_product(const KatoFrame& frame,
                                       const PhysicalParams& p,
                                       double radicand_arg) {
  RegularizedProduct out;
  out.lambda = frame.lambda;
  out.wedge = wedge2(frame.basis);
  const Cplx psi = reg_radicand(frame.side, frame.lambda, p);
  const double den = std::pow(reg_radicand(frame.side, 1.0, p).real(), 0.25);
  const double mag = std::pow(std::abs(psi), 0.25) / den;
  const Cplx prefactor = mag * Cplx(std::cos(radicand_arg / 4.0),
                                    std::sin(radicand_arg / 4.0));
  out.regularized = prefactor * out.wedge;
  return out;
}

RegularizedProduct regularized_product(const KatoFrame& frame,
                                       const PhysicalParams& p) {
  const Cplx psi = reg_radicand(frame.side, frame.lambda, p);
  return regularized_product(frame, p, std::arg(psi));
}

}  // namespace mhdstab
