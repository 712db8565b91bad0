#include "mhdstab/params.hpp"

#include <cmath>
#include <stdexcept>

namespace mhdstab {

namespace {
// phi(z) = (1 - exp(-z))/z, phi(0) = 1; smooth and positive for z >= 0.
double phi(double z) {
  if (std::abs(z) < 1e-12) return 1.0 - z / 2.0;
  return -std::expm1(-z) / z;
}
}  // namespace

double rh_coefficient(double v_plus, double gamma) {
  if (v_plus <= 0.0) throw std::domain_error("rh_coefficient: v_plus <= 0");
  if (gamma < 1.0) throw std::domain_error("rh_coefficient: gamma < 1");
  // (1-v)/(1-v^g) = phi(u)/(g phi(g u)) with u = -log v; exact at v=1, g=1.
  const double u = -std::log(v_plus);
  return std::pow(v_plus, gamma) * phi(u) / (gamma * phi(gamma * u));
}

PhysicalParams PhysicalParams::make(double gamma, double v_plus, double b1,
                                    double mu0, double sigma) {
  PhysicalParams p;
  p.gamma = gamma;
  p.v_plus = v_plus;
  p.b1 = b1;
  p.mu0 = mu0;
  p.sigma = sigma;
  p.a = rh_coefficient(v_plus, gamma);
  p.validate();
  return p;
}

void PhysicalParams::validate() const {
  if (!(gamma >= 1.0)) throw std::domain_error("params: gamma < 1");
  if (!(v_plus > 0.0 && v_plus <= 1.0))
    throw std::domain_error("params: v_plus outside (0, 1]");
  if (!(b1 >= 0.0)) throw std::domain_error("params: b1 < 0");
  if (!(mu0 > 0.0)) throw std::domain_error("params: mu0 <= 0");
  if (!(sigma > 0.0)) throw std::domain_error("params: sigma <= 0");
  if (!(two_mu_eta() > 0.0)) throw std::domain_error("params: 2*mu+eta <= 0");
}

double sound_speed(double v, const PhysicalParams& p) {
  if (v <= 0.0) throw std::domain_error("sound_speed: v <= 0");
  return std::sqrt(p.gamma * p.a * std::pow(v, -p.gamma - 1.0));
}

std::string ShockType::name() const {
  switch (kind) {
    case ShockKind::Lax1: return "lax1";
    case ShockKind::Overcompressive: return "overcompressive";
    case ShockKind::Lax3: return "lax3";
    case ShockKind::Degenerate:
      return boundary == DegenerateBoundary::fast ? "degenerate-fast"
                                                  : "degenerate-slow";
  }
  return "?";
}

ShockType classify_shock(const PhysicalParams& p, double tol) {
  const double fast = std::sqrt(p.mu0 * p.v_plus);
  const double slow = std::sqrt(p.mu0);
  ShockType t;
  if (std::abs(p.b1 - fast) <= tol * std::max(1.0, fast)) {
    t.kind = ShockKind::Degenerate;
    t.boundary = DegenerateBoundary::fast;
  } else if (std::abs(p.b1 - slow) <= tol * std::max(1.0, slow)) {
    t.kind = ShockKind::Degenerate;
    t.boundary = DegenerateBoundary::slow;
  } else if (p.b1 < fast) {
    t.kind = ShockKind::Lax1;
  } else if (p.b1 < slow) {
    t.kind = ShockKind::Overcompressive;
  } else {
    t.kind = ShockKind::Lax3;
  }
  return t;
}

}  // namespace mhdstab
