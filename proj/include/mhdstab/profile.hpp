#ifndef MHDSTAB_PROFILE_HPP
#define MHDSTAB_PROFILE_HPP

#include <string>
#include <vector>

#include "mhdstab/params.hpp"

namespace mhdstab {

/// Right side of the profile ODE: H(v, v+) = v (v - 1 + a (v^-gamma - 1)).
double profile_h(double v, const PhysicalParams& p);

/// v'(x) = H(v)/(2 mu + eta).
double profile_rhs(double v, const PhysicalParams& p);

struct ProfileOptions {
  double tol = 1e-3;        // endpoint tolerance |v(+-L) - endstate|
  double rtol = 1e-8;       // integrator tolerances (profile is reused
  double atol = 1e-8;       //   everywhere, keep them tight)
  double l_init = 20.0;     // initial truncation both sides
  double l_cap_factor = 10; // non-convergence beyond l_init * factor
};

/// Traveling-wave density profile on a truncated domain.  Strictly
/// decreasing, sandwiched between the endstates, clamped to the endstates
/// outside [-l_minus, l_plus].  Dense node storage with cubic Hermite
/// interpolation; slopes come from the ODE itself, not from differencing.
class Profile {
 public:
  PhysicalParams params;
  std::vector<double> grid;    // strictly increasing, spans [-l_minus, l_plus]
  std::vector<double> values;  // v at each node, strictly decreasing
  double l_minus = 0.0;
  double l_plus = 0.0;
  double endpoint_error = 0.0;

  double value(double x) const;       // v(x); clamps to 1 / v+ outside
  double derivative(double x) const;  // H(v(x))/(2mu+eta); 0 outside

  Profile translated(double dx) const;  // same orbit, shifted anchor

  std::string to_json() const;
  static Profile from_json(const std::string& text);
};

/// Integrates the scalar autonomous ODE forward and backward from the
/// interior anchor v(0) = v+ + min(1/12, (1-v+)/2), extending the domain
/// until both endpoint errors are within tol.
Profile compute_profile(const PhysicalParams& p, const ProfileOptions& opt = {});

/// Closed-form strong-shock profile (1 - tanh((x - x0)/(2(2mu+eta))))/2 with
/// the translate fixed so that the value at x = 0 is 1/12, matching the
/// v+ -> 0 limit of the compute_profile anchor.
double limiting_profile(double x, const PhysicalParams& p);

}  // namespace mhdstab

#endif
