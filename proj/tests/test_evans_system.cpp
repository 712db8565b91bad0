#include <doctest.h>

#include <random>

#include "mhdstab/evans_system.hpp"
#include "mhdstab/profile.hpp"

using namespace mhdstab;

namespace {

// independent re-derivation of the first-order system from the two
// second-order equations, used as a template oracle for assemble():
// W = (w, mu w', alpha, alpha'/(sigma mu0 v)) and
//   mu w''  = lambda v w + v w' - (B1 v / mu0) * (alpha' / v)   [x mu0 scaling]
//   (alpha'/(sigma mu0 v))' = lambda v alpha - B1 v w' + sigma mu0 v^2 * W4
Mat4 template_matrix(Cplx lambda, double v, const PhysicalParams& p) {
  Mat4 a = Mat4::Zero();
  // w' = W2 / mu
  a(0, 1) = 1.0 / p.mu;
  // (mu w')' = mu w'' = lambda v w + v (W2/mu) - sigma B1 v W4
  a(1, 0) = lambda * v;
  a(1, 1) = v / p.mu;
  a(1, 3) = -p.sigma * p.b1 * v;
  // alpha' = sigma mu0 v W4
  a(2, 3) = p.sigma * p.mu0 * v;
  // W4' = lambda v alpha - B1 v (W2/mu) + sigma mu0 v^2 W4
  a(3, 1) = -p.b1 * v / p.mu;
  a(3, 2) = lambda * v;
  a(3, 3) = p.sigma * p.mu0 * v * v;
  return a;
}

std::mt19937 rng(12345);

PhysicalParams random_params() {
  std::uniform_real_distribution<double> uv(0.05, 0.95), ub(0.0, 3.0),
      um(0.2, 3.0), ug(1.0, 3.0);
  return PhysicalParams::make(ug(rng), uv(rng), ub(rng), um(rng), um(rng));
}

Cplx random_lambda(double re_min, double re_max) {
  std::uniform_real_distribution<double> ur(re_min, re_max), ui(-3.0, 3.0);
  return {ur(rng), ui(rng)};
}

}  // namespace

TEST_CASE("matrix sparsity pattern and lambda = 0 kernel columns") {
  const PhysicalParams p = random_params();
  const Profile prof = compute_profile(p);
  const Mat4 a = assemble(0.7, Cplx(1.2, 0.4), p, prof);

  CHECK(a(0, 0) == Cplx(0, 0));
  CHECK(a(0, 1) == Cplx(1.0 / p.mu, 0));
  CHECK(a(0, 2) == Cplx(0, 0));
  CHECK(a(0, 3) == Cplx(0, 0));
  CHECK(a(2, 0) == Cplx(0, 0));
  CHECK(a(2, 1) == Cplx(0, 0));
  CHECK(a(3, 0) == Cplx(0, 0));

  // constant w, alpha solve the lambda = 0 equations
  const Mat4 a0 = assemble(-0.3, Cplx(0, 0), p, prof);
  CHECK((a0 * Vec4::Unit(0)).norm() == 0.0);
  CHECK((a0 * Vec4::Unit(2)).norm() == 0.0);
}

TEST_CASE("assemble matches the independently derived template") {
  for (int k = 0; k < 20; ++k) {
    const PhysicalParams p = random_params();
    const Profile prof = compute_profile(p);
    const Cplx lam = random_lambda(0.0, 3.0);
    std::uniform_real_distribution<double> ux(-prof.l_minus, prof.l_plus);
    const double x = ux(rng);
    const Mat4 got = assemble(x, lam, p, prof);
    const Mat4 want = template_matrix(lam, prof.value(x), p);
    CHECK((got - want).norm() < 1e-14 * want.norm());
  }
}

TEST_CASE("clamping outside the domain reproduces the limits") {
  const PhysicalParams p = random_params();
  const Profile prof = compute_profile(p);
  const Cplx lam(0.9, -0.7);
  CHECK((assemble(prof.l_plus + 10.0, lam, p, prof) -
         limit_matrix(Side::plus, lam, p))
            .norm() == 0.0);
  CHECK((assemble(-prof.l_minus - 5.0, lam, p, prof) -
         limit_matrix(Side::minus, lam, p))
            .norm() == 0.0);
}

TEST_CASE("B1 = 0 decouples into the two quadratic blocks") {
  const PhysicalParams p = PhysicalParams::make(5.0 / 3.0, 0.5, 0.0, 1.0, 1.0);
  const Cplx lam(1.0, 0.0);
  const Mat4 a = limit_matrix(Side::plus, lam, p);
  const auto split = spectral_split(a, Side::plus);

  // alpha^2 - v+ alpha - lambda v+ = 0 and
  // alpha^2 - sigma mu0 v+^2 alpha - lambda sigma mu0 v+^2 = 0
  const double vp = p.v_plus, c = p.sigma * p.mu0 * vp * vp;
  auto roots = [](double b, Cplx q) {  // z^2 - b z - q
    const Cplx d = std::sqrt(Cplx(b * b, 0) + 4.0 * q);
    return std::array<Cplx, 2>{(b + d) / 2.0, (b - d) / 2.0};
  };
  const auto r1 = roots(vp, lam * vp);
  const auto r2 = roots(c, lam * c);
  for (const auto& ep : split.selected) {
    const double d = std::min(std::min(std::abs(ep.value - r1[0]),
                                       std::abs(ep.value - r1[1])),
                              std::min(std::abs(ep.value - r2[0]),
                                       std::abs(ep.value - r2[1])));
    CHECK(d < 1e-12);
  }
}

TEST_CASE("characteristic polynomial identity") {
  for (int k = 0; k < 30; ++k) {
    const PhysicalParams p = random_params();
    const Cplx lam = random_lambda(0.1, 3.0);
    std::uniform_real_distribution<double> ua(-2.0, 2.0);
    const Cplx al(ua(rng), ua(rng));
    const Mat4 a = limit_matrix(Side::plus, lam, p);
    const Cplx lhs = (a - al * Mat4::Identity()).determinant();
    const double vp = p.v_plus, c = p.sigma * p.mu0 * vp * vp;
    const Cplx rhs = (al * al - vp * al - lam * vp) * (al * al - c * al - lam * c) -
                     p.sigma * p.b1 * p.b1 * vp * vp * al * al;
    CHECK(std::abs(lhs - rhs) < 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("conjugation symmetry of the limit matrices") {
  const PhysicalParams p = random_params();
  const Cplx lam = random_lambda(0.0, 2.0);
  for (Side s : {Side::plus, Side::minus}) {
    const Mat4 a = limit_matrix(s, lam, p);
    const Mat4 b = limit_matrix(s, std::conj(lam), p);
    CHECK((b - a.conjugate()).norm() == 0.0);
  }
}

TEST_CASE("hyperbolicity: 2/2 split over the sampled right half plane") {
  std::uniform_real_distribution<double> umod(-3.0, 3.0), uph(-1.5, 1.5);
  int ok = 0;
  for (int k = 0; k < 200; ++k) {
    PhysicalParams p = random_params();
    // keep away from the characteristic boundaries
    const double fast = std::sqrt(p.mu0 * p.v_plus), slow = std::sqrt(p.mu0);
    if (std::abs(p.b1 - fast) < 0.05 || std::abs(p.b1 - slow) < 0.05) {
      --k;
      continue;
    }
    const double mod = std::pow(10.0, umod(rng));
    const double ph = uph(rng);
    const Cplx lam = mod * Cplx(std::cos(ph), std::sin(ph));
    for (Side s : {Side::plus, Side::minus}) {
      const auto split = spectral_split(limit_matrix(s, lam, p), s);
      const bool stable = s == Side::plus;
      for (const auto& ep : split.selected)
        CHECK((stable ? ep.value.real() < 0 : ep.value.real() > 0));
      ++ok;
    }
  }
  CHECK(ok == 400);
}

TEST_CASE("spectral split: eigenpairs satisfy the eigenvalue equation") {
  const PhysicalParams p = PhysicalParams::make(5.0 / 3.0, 0.5, 1.5, 1.0, 1.0);
  const Cplx lam(1.0, 0.3);
  for (Side s : {Side::plus, Side::minus}) {
    const Mat4 a = limit_matrix(s, lam, p);
    const auto split = spectral_split(a, s);
    for (const auto& ep : split.selected) {
      CHECK((a * ep.vector - ep.value * ep.vector).norm() < 1e-10);
      CHECK(ep.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("split failure at lambda = 0") {
  const PhysicalParams p = PhysicalParams::make(5.0 / 3.0, 0.5, 1.5, 1.0, 1.0);
  CHECK_THROWS_AS(
      spectral_split(limit_matrix(Side::plus, Cplx(0, 0), p), Side::plus),
      SplitFailure);
}

TEST_CASE("real lambda gives a conjugation-closed eigenvalue set") {
  const PhysicalParams p = PhysicalParams::make(5.0 / 3.0, 0.3, 2.0, 1.0, 1.0);
  const auto split = spectral_split(limit_matrix(Side::minus, Cplx(2.0, 0.0), p),
                                    Side::minus);
  // eigenvalues of a real matrix: each selected value's conjugate is also
  // an eigenvalue (either its partner or itself)
  for (const auto& ep : split.selected) {
    const Cplx cj = std::conj(ep.value);
    const double d = std::min({std::abs(cj - split.selected[0].value),
                               std::abs(cj - split.selected[1].value),
                               std::abs(cj - split.complement[0]),
                               std::abs(cj - split.complement[1])});
    CHECK(d < 1e-10);
  }
}
