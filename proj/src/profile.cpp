#include "mhdstab/profile.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "mhdstab/ode.hpp"

namespace mhdstab {

double profile_h(double v, const PhysicalParams& p) {
  return v * (v - 1.0 + p.a * (std::pow(v, -p.gamma) - 1.0));
}

double profile_rhs(double v, const PhysicalParams& p) {
  return profile_h(v, p) / p.two_mu_eta();
}

namespace {

using Scalar1 = Eigen::Matrix<double, 1, 1>;

// Integrate one side from the anchor, appending accepted steps, until the
// distance to the endstate is <= tol (but at least to l_init) or the cap is
// reached.  dir = +1 integrates toward v+, dir = -1 toward 1.
void integrate_side(const PhysicalParams& p, const ProfileOptions& opt,
                    double anchor, int dir, std::vector<double>& xs,
                    std::vector<double>& vs) {
  const double endstate = dir > 0 ? p.v_plus : 1.0;
  const double cap = opt.l_init * opt.l_cap_factor;
  auto f = [&p](double, const Scalar1& y) {
    Scalar1 d;
    d(0) = profile_rhs(y(0), p);
    return d;
  };
  OdeOptions oo;
  oo.rtol = opt.rtol;
  oo.atol = opt.atol;
  oo.h_init = 1e-3;
  oo.h_max = 1.0;  // keeps node spacing bounded for interpolation

  Scalar1 y;
  y(0) = anchor;
  double reached = 0.0;
  bool done = false;
  auto obs = [&](double x, Scalar1& yy) {
    xs.push_back(dir * x);
    vs.push_back(yy(0));
    reached = x;
    if (x >= opt.l_init && std::abs(yy(0) - endstate) <= opt.tol) {
      done = true;
      return false;
    }
    return true;
  };
  // ode45 integrates in increasing x; fold the direction into the RHS sign
  auto fdir = [&](double x, const Scalar1& yy) {
    Scalar1 d = f(x, yy);
    d(0) *= dir;
    return d;
  };
  ode45(fdir, y, 0.0, cap, oo, obs);
  if (!done && std::abs(y(0) - endstate) > opt.tol)
    throw std::runtime_error(
        "compute_profile: domain cap reached before endpoint tolerance");
  (void)reached;
}

}  // namespace

Profile compute_profile(const PhysicalParams& p, const ProfileOptions& opt) {
  if (!(p.v_plus > 0.0 && p.v_plus < 1.0))
    throw std::domain_error("compute_profile: need 0 < v_plus < 1");

  const double anchor = p.v_plus + std::min(1.0 / 12.0, (1.0 - p.v_plus) / 2.0);

  std::vector<double> xr, vr, xl, vl;
  integrate_side(p, opt, anchor, +1, xr, vr);
  integrate_side(p, opt, anchor, -1, xl, vl);

  Profile prof;
  prof.params = p;
  prof.grid.reserve(xl.size() + xr.size() + 1);
  prof.values.reserve(xl.size() + xr.size() + 1);
  for (size_t i = xl.size(); i-- > 0;) {
    prof.grid.push_back(xl[i]);
    prof.values.push_back(vl[i]);
  }
  prof.grid.push_back(0.0);
  prof.values.push_back(anchor);
  for (size_t i = 0; i < xr.size(); ++i) {
    prof.grid.push_back(xr[i]);
    prof.values.push_back(vr[i]);
  }
  prof.l_minus = -prof.grid.front();
  prof.l_plus = prof.grid.back();
  prof.endpoint_error = std::max(std::abs(prof.values.front() - 1.0),
                                 std::abs(prof.values.back() - p.v_plus));
  for (size_t i = 1; i < prof.values.size(); ++i)
    if (!(prof.values[i] < prof.values[i - 1]))
      throw std::runtime_error("compute_profile: monotonicity lost");
  return prof;
}

double Profile::value(double x) const {
  if (x <= grid.front()) return 1.0;
  if (x >= grid.back()) return params.v_plus;
  const auto it = std::upper_bound(grid.begin(), grid.end(), x);
  const size_t j = static_cast<size_t>(it - grid.begin());
  const double x0 = grid[j - 1], x1 = grid[j];
  const double v0 = values[j - 1], v1 = values[j];
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double m0 = profile_rhs(v0, params);
  const double m1 = profile_rhs(v1, params);
  // cubic Hermite on [x0, x1]
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * v0 + (t3 - 2 * t2 + t) * h * m0 +
         (-2 * t3 + 3 * t2) * v1 + (t3 - t2) * h * m1;
}

double Profile::derivative(double x) const {
  if (x <= grid.front() || x >= grid.back()) return 0.0;
  return profile_rhs(value(x), params);
}

Profile Profile::translated(double dx) const {
  Profile t = *this;
  for (auto& x : t.grid) x += dx;
  t.l_minus = -t.grid.front();
  t.l_plus = t.grid.back();
  return t;
}

std::string Profile::to_json() const {
  nlohmann::json j;
  j["params"] = {{"gamma", params.gamma}, {"v_plus", params.v_plus},
                 {"b1", params.b1},       {"mu0", params.mu0},
                 {"sigma", params.sigma}, {"mu", params.mu},
                 {"eta", params.eta},     {"a", params.a}};
  j["l_minus"] = l_minus;
  j["l_plus"] = l_plus;
  j["grid"] = grid;
  j["values"] = values;
  j["endpoint_error"] = endpoint_error;
  return j.dump(2);
}

Profile Profile::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  Profile p;
  const auto& jp = j.at("params");
  p.params.gamma = jp.at("gamma");
  p.params.v_plus = jp.at("v_plus");
  p.params.b1 = jp.at("b1");
  p.params.mu0 = jp.at("mu0");
  p.params.sigma = jp.at("sigma");
  p.params.mu = jp.at("mu");
  p.params.eta = jp.at("eta");
  p.params.a = jp.at("a");
  p.l_minus = j.at("l_minus");
  p.l_plus = j.at("l_plus");
  p.grid = j.at("grid").get<std::vector<double>>();
  p.values = j.at("values").get<std::vector<double>>();
  p.endpoint_error = j.at("endpoint_error");
  return p;
}

double limiting_profile(double x, const PhysicalParams& p) {
  const double w = 2.0 * p.two_mu_eta();
  const double x0 = -w * std::atanh(5.0 / 6.0);
  return (1.0 - std::tanh((x - x0) / w)) / 2.0;
}

}  // namespace mhdstab
