#include <doctest.h>

#include <cmath>
#include <numbers>

#include "mhdstab/contour.hpp"
#include "mhdstab/evans_driver.hpp"
#include "mhdstab/kato.hpp"

using namespace mhdstab;

namespace {
constexpr double kPi = std::numbers::pi;

LogComplex lc(Cplx z) { return LogComplex::from(z); }
}  // namespace

TEST_CASE("semicircle geometry") {
  const Contour c = build_semicircle(4.5, 120);
  CHECK(c.points.size() == 120);
  CHECK(c.points.front() == Cplx(4.5, 0.0));

  // passes through the origin exactly once
  int zeros = 0;
  for (const Cplx& z : c.points)
    if (z == Cplx(0.0, 0.0)) ++zeros;
  CHECK(zeros == 1);

  // all points on the boundary of the half-disk
  for (const Cplx& z : c.points) {
    const bool on_arc = std::abs(std::abs(z) - 4.5) < 1e-12;
    const bool on_axis = std::abs(z.real()) < 1e-12 && std::abs(z.imag()) <= 4.5;
    CHECK((on_arc || on_axis));
    CHECK(z.real() >= -1e-12);
  }

  // max gap between consecutive arc points below 2 pi R / 60
  double max_gap = 0.0;
  for (size_t i = 0; i + 1 < c.points.size(); ++i) {
    const Cplx a = c.points[i], b = c.points[i + 1];
    if (std::abs(std::abs(a) - 4.5) < 1e-12 && std::abs(std::abs(b) - 4.5) < 1e-12)
      max_gap = std::max(max_gap, std::abs(a - b));
  }
  CHECK(max_gap < 2.0 * kPi * 4.5 / 60.0);

  // quadratic concentration on the axis: spacing shrinks toward the origin
  std::vector<double> axis;
  for (const Cplx& z : c.points)
    if (std::abs(z.real()) < 1e-12 && z.imag() > 0) axis.push_back(z.imag());
  std::sort(axis.begin(), axis.end());
  CHECK(axis.front() < 0.01 * axis.back());

  // conjugation symmetry of the parametrization
  for (double t : {0.1, 0.33, 0.41}) {
    CHECK(std::abs(c.map(1.0 - t) - std::conj(c.map(t))) < 1e-12);
  }
}

TEST_CASE("offset semicircle detours around the origin") {
  const double eps = 1e-3;
  const Contour c = build_semicircle(4.5, 120, eps);
  for (const Cplx& z : c.points) CHECK(std::abs(z) >= eps - 1e-15);
  // the closest approach is exactly the offset point
  CHECK(std::abs(c.map(0.5) - Cplx(eps, 0.0)) < 1e-15);
}

TEST_CASE("winding of elementary evaluators") {
  SUBCASE("constant on a semicircle") {
    const Contour c = build_semicircle(2.0, 64);
    const auto res = winding_number(
        c, [](double, Cplx) { return lc(Cplx(0.7, -0.4)); });
    CHECK(res.winding == 0);
    CHECK(res.residual < 1e-12);
  }
  SUBCASE("identity on a circle about the origin") {
    const Contour c = build_circle(Cplx(0, 0), 1.5, 64);
    const auto res =
        winding_number(c, [](double, Cplx lam) { return lc(lam); });
    CHECK(res.winding == 1);
    CHECK(res.residual < 1e-10);
  }
  SUBCASE("shifted circle not enclosing the root") {
    const Contour c = build_circle(Cplx(5, 0), 1.0, 64);
    const auto res =
        winding_number(c, [](double, Cplx lam) { return lc(lam); });
    CHECK(res.winding == 0);
  }
  SUBCASE("zero on contour is detected") {
    const Contour c = build_semicircle(1.0, 32);
    CHECK_THROWS_AS(
        winding_number(c, [](double, Cplx lam) { return lc(lam); }),
        ZeroOnContour);  // the contour passes through 0
  }
}

TEST_CASE("winding additivity for products") {
  const Contour c = build_circle(Cplx(0, 0), 2.0, 96);
  auto f = [](double, Cplx lam) { return lc(lam - Cplx(0.3, 0.1)); };
  auto g = [](double, Cplx lam) {
    return lc((lam - Cplx(-0.5, 0.2)) * (lam - Cplx(0.1, -0.9)));
  };
  auto fg = [&](double t, Cplx lam) { return f(t, lam) * g(t, lam); };
  const long wf = winding_number(c, f).winding;
  const long wg = winding_number(c, g).winding;
  const long wfg = winding_number(c, fg).winding;
  CHECK(wf == 1);
  CHECK(wg == 2);
  CHECK(wfg == wf + wg);
}

TEST_CASE("refinement brings every argument step below the threshold") {
  // a function with rapid phase variation near the origin
  const Contour c = build_semicircle(1.0, 24, 1e-2);
  auto f = [](double, Cplx lam) { return lc(lam * lam * lam); };
  const auto res = winding_number(c, f);
  CHECK(res.max_arg_step < 0.2);
  CHECK(res.refinements > 0);
}

TEST_CASE("refinement limit is enforced") {
  const Contour c = build_semicircle(1.0, 8, 1e-2);
  auto f = [](double, Cplx lam) { return lc(lam * lam * lam); };
  WindingOptions opt;
  opt.refine_limit = 2;
  CHECK_THROWS_AS(winding_number(c, f, opt), RefinementExhausted);
}

TEST_CASE("riemann double loop of sqrt(lambda) winds once") {
  // sqrt continued through both sheets: arg(lambda)/2 follows t directly
  auto f = [](double t, Cplx lam) {
    LogComplex v;
    v.log_abs = 0.5 * std::log(std::abs(lam));
    v.arg = kPi * t * 2.0 / 2.0;  // theta/2 with theta = 2 pi t
    return v;
  };
  CHECK(riemann_winding(Cplx(0, 0), 0.7, 2, f) == 1);
}

TEST_CASE("conjugate completion reproduces the direct evaluation") {
  const PhysicalParams p = PhysicalParams::make(5.0 / 3.0, 0.4, 2.0, 1.0, 1.0);
  const Contour c = build_semicircle(4.5, 60);

  DriverOptions direct;
  direct.conjugate_sym = false;
  EvansDriver drv_direct(EvansDriver::Mode::finite, p, c, direct);

  DriverOptions sym;
  sym.conjugate_sym = true;
  EvansDriver drv_sym(EvansDriver::Mode::finite, p, c, sym);

  const auto res_direct = winding_number(c, drv_direct.evaluator());
  const auto res_sym = winding_number(c, drv_sym.evaluator());
  CHECK(res_direct.winding == res_sym.winding);

  // mirror symmetry of the track: values at t and 1 - t are conjugate
  for (double t : {0.1, 0.25, 0.4}) {
    const EvansValue a = drv_sym.value_at(t);
    const EvansValue b = drv_sym.value_at(1.0 - t);
    CHECK(std::abs(a.d_raw() - std::conj(b.d_raw())) <
          1e-10 * std::abs(a.d_raw()));
  }
}

TEST_CASE("renormalization preserves the winding when the prefactor closes") {
  // on a closed contour in {Re >= 0} the quartic-root prefactors have zero
  // winding (their radicand roots sit on the negative real axis), so check
  // and raw windings agree
  const PhysicalParams p = PhysicalParams::make(5.0 / 3.0, 0.3, 1.5, 1.0, 1.0);
  const Contour c = build_semicircle(3.5, 80);
  DriverOptions opt;
  EvansDriver driver(EvansDriver::Mode::finite, p, c, opt);
  ContourResult raw, check;
  {
    DriverOptions o = opt;
    o.variant = EvansVariant::raw;
    EvansDriver d(EvansDriver::Mode::finite, p, c, o);
    raw = winding_number(c, d.evaluator());
  }
  {
    DriverOptions o = opt;
    o.variant = EvansVariant::check;
    EvansDriver d(EvansDriver::Mode::finite, p, c, o);
    check = winding_number(c, d.evaluator());
  }
  CHECK(raw.winding == check.winding);
}

TEST_CASE("contour result export") {
  const Contour c = build_circle(Cplx(0, 0), 1.0, 16);
  const auto res = winding_number(c, [](double, Cplx lam) { return lc(lam); });
  const std::string csv = res.to_csv();
  CHECK(csv.find("lambda_re,lambda_im,D_re,D_im,arg_unwound") == 0);
  const std::string json = res.to_json();
  CHECK(json.find("\"winding\"") != std::string::npos);
}

TEST_CASE("conjugate completion wrapper reflects the upper half") {
  // a rational function with real coefficients evaluated only on the upper
  // half; the wrapper supplies the mirrored lower half
  const Contour c = build_semicircle(2.0, 64, 1e-3);
  long upper_calls = 0;
  auto upper = [&upper_calls](double, Cplx lam) {
    ++upper_calls;
    return LogComplex::from((lam + 1.5) * (lam + Cplx(0.2, 0.0)));
  };
  const auto wrapped = conjugate_completion(c, upper);
  const auto res = winding_number(c, wrapped);
  CHECK(res.winding == 0);
  // direct evaluation agrees
  const auto direct = winding_number(c, [](double, Cplx lam) {
    return LogComplex::from((lam + 1.5) * (lam + Cplx(0.2, 0.0)));
  });
  CHECK(direct.winding == res.winding);
  CHECK(upper_calls > 0);

  // mirrored sample values match the direct ones
  for (double t : {0.6, 0.75, 0.9}) {
    const Cplx lam = c.map(t);
    const Cplx a = wrapped(t, lam).value();
    const Cplx b = ((lam + 1.5) * (lam + Cplx(0.2, 0.0)));
    CHECK(std::abs(a - b) < 1e-12 * std::abs(b));
  }
}

TEST_CASE("zero-free certification: endpoint signs agree on a zero-winding contour") {
  const PhysicalParams p = PhysicalParams::make(5.0 / 3.0, 0.4, 2.0, 1.0, 1.0);
  const Contour c = build_semicircle(4.5, 80, 1e-4);
  DriverOptions opt;
  opt.variant = EvansVariant::raw;
  EvansDriver d(EvansDriver::Mode::finite, p, c, opt);
  const ContourResult res = winding_number(c, d.evaluator());
  REQUIRE(res.winding == 0);
  // the two real contour points: the anchor and the origin-offset point
  const Cplx at_anchor = d.value_at(0.0).d_raw();
  const Cplx at_origin = d.value_at(0.5).d_raw();
  CHECK(std::abs(at_anchor.imag()) < 1e-8 * std::abs(at_anchor));
  // realness near the origin is limited by continuation accuracy through the
  // eigenvalue-collision region; the certified quantity is the sign
  CHECK(std::abs(at_origin.imag()) < 1e-3 * std::abs(at_origin));
  CHECK(at_anchor.real() * at_origin.real() > 0.0);
}

TEST_CASE("two-sheeted winding of the extended Evans function near the origin") {
  // small-amplitude circle around the origin traversed twice: the raw
  // function winds -1 below the slow-characteristic boundary and 0 above it
  // (assuming the limit value at the origin stays nonzero); the renormalized
  // variant differs by the closed-form prefactor winding
  const double vp = 1e-3, r = 0.05;
  for (double b1 : {0.5, 2.0}) {
    const PhysicalParams p = PhysicalParams::make(5.0 / 3.0, vp, b1, 1.0, 1.0);
    const Contour circ = build_circle(Cplx(0, 0), r, 96, 2);

    DriverOptions raw_opt;
    raw_opt.variant = EvansVariant::raw;
    EvansDriver draw(EvansDriver::Mode::finite, p, circ, raw_opt);
    const ContourResult wraw = winding_number(circ, draw.evaluator());

    DriverOptions chk_opt;
    chk_opt.variant = EvansVariant::check;
    EvansDriver dchk(EvansDriver::Mode::finite, p, circ, chk_opt);
    const ContourResult wchk = winding_number(circ, dchk.evaluator());

    CHECK(wraw.residual < 0.05);  // closes on the double cover
    CHECK(wchk.residual < 0.05);
    CHECK(wraw.winding == (b1 < 1.0 ? -1 : 0));

    // prefactor winding in closed form: radicand roots on the negative real
    // axis enclosed by the circle, a quarter turn each per sheet
    int roots_inside = 0;
    if (vp / 4.0 < r) ++roots_inside;  // mid factor root at -v+/4
    auto root_of = [&](Side s) {
      const Cplx psi0 = reg_radicand(s, Cplx(0, 0), p);
      const Cplx psi1 = reg_radicand(s, Cplx(1, 0), p);
      return -psi0.real() / (psi1.real() - psi0.real());
    };
    if (std::abs(root_of(Side::plus)) < r) ++roots_inside;
    if (std::abs(root_of(Side::minus)) < r) ++roots_inside;
    const long pref_winding = roots_inside * 2 / 4;  // 2 sheets, quartic root
    CHECK(wchk.winding == wraw.winding + pref_winding);
  }
}
