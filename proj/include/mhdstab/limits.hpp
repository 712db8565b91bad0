#ifndef MHDSTAB_LIMITS_HPP
#define MHDSTAB_LIMITS_HPP

#include <span>
#include <vector>

#include "mhdstab/evans_driver.hpp"

namespace mhdstab {

/// High-frequency confinement region Re + |Im| < radius, with the two
/// summands (1/2) max{1/mu, mu0 sigma} and B1^2 sqrt(sigma/(mu mu0)).
struct SpectralBound {
  double radius = 0.0;
  double term_parabolic = 0.0;
  double term_field = 0.0;
};

SpectralBound hf_radius(const PhysicalParams& p);

/// Sharper bound on the real part alone: (B1^2/4) sqrt(sigma/(mu mu0)).
double re_lambda_bound(const PhysicalParams& p);

struct StrongShockOptions {
  IntegOptions integ;
  KatoOptions kato;
  double profile_tol = 1e-3;
};

/// Limiting Evans values at a single frequency: shooting over the tanh
/// profile with the closed-form + basis and Kato-continued - basis, anchored
/// at max(1, |lambda|) on the real axis.
EvansValue strong_shock_eval(Cplx lambda, const PhysicalParams& p,
                             const StrongShockOptions& opt = {});

/// Rapidly-varying-coefficient limit: determinant of the two Kato bases at
/// lambda, no shooting.
Cplx r_infinity_eval(Cplx lambda, const PhysicalParams& p,
                     const KatoOptions& opt = {});

struct ConvergenceOptions {
  double lambda_min = 1e-2;  // contour samples below this modulus are skipped
  int n_points = 120;        // full-contour point budget
  double radius = 0.0;       // 0: max(hf_radius, 4.5)
  IntegOptions integ;
  KatoOptions kato;
};

/// Max relative distance between the renormalized Evans function and its
/// strong-shock limit over contour samples with |lambda| >= lambda_min, one
/// value per requested v_plus.  The finite-amplitude runs use the
/// limit-matched anchor initialization, so no residual constant is divided
/// out.
std::vector<double> convergence_error(std::span<const double> v_plus_list,
                                      const PhysicalParams& base,
                                      EvansVariant which,
                                      const ConvergenceOptions& opt = {});

/// CSV table of convergence errors, rows v_plus, columns b1.
std::string convergence_table_csv(std::span<const double> v_plus_list,
                                  std::span<const double> b1_list,
                                  const PhysicalParams& base,
                                  EvansVariant which,
                                  const ConvergenceOptions& opt = {});

/// Frequencies near the origin at which the + coefficient matrix has a
/// double eigenvalue (fourth-root singularities of the Kato product for
/// small v_plus): roots of the resultant of the characteristic polynomial
/// and its eigenvalue derivative, smallest moduli first.
std::vector<Cplx> branch_point_diagnostic(const PhysicalParams& p);

}  // namespace mhdstab

#endif
