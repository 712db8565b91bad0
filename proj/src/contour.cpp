#include "mhdstab/contour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace mhdstab {

namespace {
constexpr double kPi = std::numbers::pi;
// arc fraction of the semicircle parameter: two quarter arcs of total length
// pi R against an axis leg of length 2R
const double kArcFrac = (kPi / 2.0) / (kPi + 2.0);
}  // namespace

Cplx Contour::map(double t) const {
  if (kind == Kind::circle) {
    const double th = 2.0 * kPi * t;
    return center + radius * Cplx(std::cos(th), std::sin(th));
  }
  t -= std::floor(t);
  const double ta = kArcFrac, tb = 1.0 - kArcFrac;
  const double yr = std::sqrt(std::max(radius * radius -
                                       origin_offset * origin_offset, 0.0));
  if (t <= ta) {
    const double th = (t / ta) * (kPi / 2.0);
    return radius * Cplx(std::cos(th), std::sin(th));
  }
  if (t < tb) {
    const double s = 1.0 - 2.0 * (t - ta) / (tb - ta);  // 1 -> -1
    const double y = (s >= 0 ? 1.0 : -1.0) * s * s * yr;
    return Cplx(origin_offset, y);
  }
  const double th = -kPi / 2.0 + ((t - tb) / ta) * (kPi / 2.0);
  return radius * Cplx(std::cos(th), std::sin(th));
}

Contour build_semicircle(double radius, int n_points, double origin_offset) {
  if (!(radius > origin_offset && origin_offset >= 0.0))
    throw std::domain_error("build_semicircle: need radius > offset >= 0");
  Contour c;
  c.kind = Contour::Kind::semicircle;
  c.radius = radius;
  c.origin_offset = origin_offset;
  c.ts.reserve(n_points);
  c.points.reserve(n_points);
  // even count keeps t = 1/2 (the closest approach to the origin) on the mesh
  for (int j = 0; j < n_points; ++j) {
    const double t = static_cast<double>(j) / n_points;
    c.ts.push_back(t);
    c.points.push_back(c.map(t));
  }
  return c;
}

Contour build_circle(Cplx center, double radius, int n_per_sheet, int sheets) {
  Contour c;
  c.kind = Contour::Kind::circle;
  c.center = center;
  c.radius = radius;
  c.sheets = sheets;
  const int total = n_per_sheet * sheets;
  for (int j = 0; j < total; ++j) {
    const double t = static_cast<double>(j) * sheets / total;
    c.ts.push_back(t);
    c.points.push_back(c.map(t));
  }
  return c;
}

namespace {

double wrap_delta(double a_next, double a_prev) {
  return std::remainder(a_next - a_prev, 2.0 * kPi);
}

}  // namespace

ContourResult winding_number(const Contour& contour, const ContourEvaluator& f,
                             const WindingOptions& opt) {
  ContourResult res;
  res.samples.reserve(contour.ts.size() + 16);
  for (size_t i = 0; i < contour.ts.size(); ++i) {
    const double t = contour.ts[i];
    const Cplx lam = contour.points[i];
    const LogComplex v = f(t, lam);
    if (v.log_abs < opt.zero_log_abs) throw ZeroOnContour(lam);
    res.samples.push_back({t, lam, v});
  }

  long inserted = 0;
  while (true) {
    bool refined = false;
    for (size_t i = 0; i < res.samples.size(); ++i) {
      const bool closing = (i + 1 == res.samples.size());
      const ContourSample& a = res.samples[i];
      const LogComplex& vb =
          closing ? res.samples.front().value : res.samples[i + 1].value;
      const double d = wrap_delta(vb.arg, a.value.arg);
      if (std::abs(d) < opt.arg_threshold) {
        if (closing) break;
        continue;
      }
      if (inserted >= opt.refine_limit) throw RefinementExhausted();
      const double tb =
          closing ? contour.period() : res.samples[i + 1].t;
      const double tm = 0.5 * (a.t + tb);
      const Cplx lam = contour.map(tm);
      const LogComplex v = f(tm, lam);
      if (v.log_abs < opt.zero_log_abs) throw ZeroOnContour(lam);
      res.samples.insert(res.samples.begin() + i + 1, {tm, lam, v});
      ++inserted;
      refined = true;
      break;
    }
    if (!refined) break;
  }
  res.refinements = inserted;

  res.arg_track.resize(res.samples.size());
  double total = 0.0;
  res.arg_track[0] = res.samples[0].value.arg;
  for (size_t i = 0; i + 1 < res.samples.size(); ++i) {
    const double d =
        wrap_delta(res.samples[i + 1].value.arg, res.samples[i].value.arg);
    res.max_arg_step = std::max(res.max_arg_step, std::abs(d));
    total += d;
    res.arg_track[i + 1] = res.arg_track[i] + d;
  }
  const double dclose =
      wrap_delta(res.samples.front().value.arg, res.samples.back().value.arg);
  res.max_arg_step = std::max(res.max_arg_step, std::abs(dclose));
  total += dclose;

  res.winding = std::lround(total / (2.0 * kPi));
  res.residual = std::abs(total - res.winding * 2.0 * kPi) / (2.0 * kPi);
  return res;
}

long riemann_winding(Cplx center, double radius, int sheets,
                     const ContourEvaluator& f, int n_per_sheet,
                     const WindingOptions& opt) {
  const Contour c = build_circle(center, radius, n_per_sheet, sheets);
  return winding_number(c, f, opt).winding;
}

ContourEvaluator conjugate_completion(const Contour& contour,
                                      ContourEvaluator upper) {
  const double period = contour.period();
  return [period, up = std::move(upper)](double t, Cplx lam) {
    if (t <= period / 2.0) return up(t, lam);
    LogComplex v = up(period - t, std::conj(lam));
    v.arg = -v.arg;
    return v;
  };
}

std::string ContourResult::to_csv() const {
  std::ostringstream os;
  os << "lambda_re,lambda_im,D_re,D_im,arg_unwound\n";
  os.precision(17);
  for (size_t i = 0; i < samples.size(); ++i) {
    const Cplx v = samples[i].value.value();
    os << samples[i].lambda.real() << ',' << samples[i].lambda.imag() << ','
       << v.real() << ',' << v.imag() << ',' << arg_track[i] << '\n';
  }
  return os.str();
}

std::string ContourResult::to_json() const {
  nlohmann::json j;
  j["winding"] = winding;
  j["residual"] = residual;
  j["max_arg_step"] = max_arg_step;
  j["refinements"] = refinements;
  auto& arr = j["samples"] = nlohmann::json::array();
  for (size_t i = 0; i < samples.size(); ++i) {
    const Cplx v = samples[i].value.value();
    arr.push_back({{"t", samples[i].t},
                   {"lambda_re", samples[i].lambda.real()},
                   {"lambda_im", samples[i].lambda.imag()},
                   {"D_re", v.real()},
                   {"D_im", v.imag()},
                   {"log_abs", samples[i].value.log_abs},
                   {"arg", arg_track[i]}});
  }
  return j.dump(2);
}

}  // namespace mhdstab
