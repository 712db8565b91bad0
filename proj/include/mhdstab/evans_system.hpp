#ifndef MHDSTAB_EVANS_SYSTEM_HPP
#define MHDSTAB_EVANS_SYSTEM_HPP

#include <array>
#include <stdexcept>

#include "mhdstab/params.hpp"
#include "mhdstab/profile.hpp"
#include "mhdstab/types.hpp"

namespace mhdstab {

/// Coefficient matrix of the first-order reduced eigenvalue system in the
/// variables (w, mu w', alpha, alpha'/(sigma mu0 v)), evaluated at density v.
Mat4 evans_matrix(Cplx lambda, double v, const PhysicalParams& p);

/// A(x, lambda) along the profile; v clamps to the endstates outside the
/// truncated domain.
Mat4 assemble(double x, Cplx lambda, const PhysicalParams& p,
              const Profile& profile);

/// Constant limits A+ / A- (v = v_plus resp. 1).
Mat4 limit_matrix(Side side, Cplx lambda, const PhysicalParams& p);

struct SplitFailure : std::runtime_error {
  Cplx lambda;
  explicit SplitFailure(Cplx l)
      : std::runtime_error("spectral split failure"), lambda(l) {}
};

struct Eigenpair {
  Cplx value;
  Vec4 vector;  // unit norm, first nonzero coordinate real positive
};

/// Stable (side = plus) or unstable (side = minus) eigenpair of a limiting
/// matrix, ordered by real part (ties by imaginary part).  Fails when the
/// smallest |Re alpha| drops below tol, which signals lambda too close to 0
/// at a characteristic value of B1*.
struct SpectralSplit {
  std::array<Eigenpair, 2> selected;
  std::array<Cplx, 2> complement;
};

SpectralSplit spectral_split(const Mat4& m, Side side, double tol = 1e-10);

/// Canonical phase: rotate so the first coordinate with |v_i| above a
/// relative threshold is real positive, then normalize.
Vec4 canonical_phase(Vec4 v);

}  // namespace mhdstab

#endif
