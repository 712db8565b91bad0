#ifndef MHDSTAB_PARAMS_HPP
#define MHDSTAB_PARAMS_HPP

#include <string>

namespace mhdstab {

/// The five free parameters of the rescaled problem plus the fixed
/// viscosities and the derived pressure coefficient a.  After rescaling the
/// left endstate is v=1 and the shock speed is -1; both are implicit here.
struct PhysicalParams {
  double gamma = 5.0 / 3.0;  // gas constant, >= 1
  double v_plus = 0.5;       // right endstate, in (0, 1]
  double b1 = 1.0;           // imposed magnetic field B1*, >= 0
  double mu0 = 1.0;          // magnetic permeability, > 0
  double sigma = 1.0;        // electrical resistivity, > 0
  double mu = 1.0;           // shear viscosity, fixed 1 by rescaling
  double eta = -2.0 / 3.0;   // second viscosity, default -2*mu/3
  double a = 0.0;            // pressure coefficient from the RH condition

  double two_mu_eta() const { return 2.0 * mu + eta; }

  static PhysicalParams make(double gamma, double v_plus, double b1,
                             double mu0, double sigma);
  void validate() const;  // throws std::domain_error on bad input
};

/// a = v+^gamma (1 - v+)/(1 - v+^gamma), with the analytic limits at the
/// removable singularities v+ = 1 and gamma = 1.
double rh_coefficient(double v_plus, double gamma);

/// Gas-dynamical sound speed c(v) = sqrt(gamma a v^(-gamma-1)).
double sound_speed(double v, const PhysicalParams& p);

enum class ShockKind { Lax1, Overcompressive, Lax3, Degenerate };
enum class DegenerateBoundary { none, fast, slow };

struct ShockType {
  ShockKind kind = ShockKind::Lax1;
  DegenerateBoundary boundary = DegenerateBoundary::none;
  std::string name() const;
};

/// Classification by B1* against sqrt(mu0 v+) (fast) and sqrt(mu0) (slow).
ShockType classify_shock(const PhysicalParams& p, double tol = 1e-12);

}  // namespace mhdstab

#endif
