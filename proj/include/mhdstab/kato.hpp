#ifndef MHDSTAB_KATO_HPP
#define MHDSTAB_KATO_HPP

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "mhdstab/evans_system.hpp"
#include "mhdstab/params.hpp"
#include "mhdstab/types.hpp"

namespace mhdstab {

struct StepTooLarge : std::runtime_error {
  StepTooLarge() : std::runtime_error("kato step: projection change > 0.5") {}
};

struct KatoOptions {
  double proj_jump_max = 0.5;  // ||P_next - P_cur|| triggering refinement
  int substep_depth = 12;      // bisection depth inside advance()
  double gap_tol = 1e-9;       // relative cluster/complement separation
};

struct KatoFrame {
  Cplx lambda;
  Mat42 basis;  // columns span the continued subspace
  Side side;
};

namespace kato_detail {

/// Analytic continuation of a k-dimensional eigenspace basis along lambda
/// paths by a projector-only second-order step.  Dimension-generic so the
/// scalar model problems in the tests run through the identical code path.
class Continuation {
 public:
  using MatrixFn = std::function<Eigen::MatrixXcd(Cplx)>;

  /// stable = true tracks the k most negative real parts at lambda0,
  /// afterwards the cluster follows by eigenvalue matching.
  Continuation(MatrixFn a_of_lambda, int cluster_size, bool stable,
               Cplx lambda0, KatoOptions opt = {});

  const Eigen::MatrixXcd& basis() const { return basis_; }
  void set_basis(const Eigen::MatrixXcd& r) { basis_ = r; }
  Cplx lambda() const { return lambda_; }
  const Eigen::MatrixXcd& projector() const { return proj_; }
  const std::vector<Cplx>& selected() const { return sel_; }
  Cplx selected_sum() const;

  /// Single second-order step; throws StepTooLarge on a large projection jump.
  void step_once(Cplx next);
  /// Step with automatic bisection sub-stepping.
  void advance(Cplx next);

 private:
  void move_to(Cplx next, int depth);
  MatrixFn a_;
  int k_;
  KatoOptions opt_;
  Cplx lambda_;
  Eigen::MatrixXcd proj_;
  Eigen::MatrixXcd basis_;
  std::vector<Cplx> sel_;
  std::vector<Cplx> rate_;  // d(sel)/d(lambda) secant estimates; the tracked
                            // eigenvalues cross their partners at lambda = 0,
                            // where nearest-value matching alone would flip
  long steps_taken_ = 0;
};

/// Spectral projector onto an eigenvalue cluster via the interpolation
/// polynomial that is 1 on the cluster and 0 on the complement (Hermite form
/// when cluster nodes nearly coincide).  Returns false when the cluster and
/// complement are not separated relative to gap_tol.
bool cluster_projector(const Eigen::MatrixXcd& a,
                       const std::vector<Cplx>* prev_sel, bool stable, int k,
                       double gap_tol, Eigen::MatrixXcd& proj_out,
                       std::vector<Cplx>& sel_out);

}  // namespace kato_detail

/// Continuation of the 4x2 stable(+)/unstable(-) bases.  The plus side runs
/// internally in the balanced coordinates diag(sqrt(v+),1,1,1) which keep the
/// projector well conditioned in the strong-shock regime; frames are exposed
/// in the original coordinates.
class KatoContinuation {
 public:
  KatoContinuation(const PhysicalParams& p, Side side, Cplx lambda0,
                   const KatoOptions& opt = {});

  KatoFrame frame() const;
  void set_frame(const Mat42& basis);
  void advance(Cplx next);    // sub-steps as needed
  void step_once(Cplx next);  // throws StepTooLarge
  Cplx selected_sum() const { return core_.selected_sum(); }
  Cplx lambda() const { return core_.lambda(); }
  Mat4 projector() const;  // eigenprojection in the original coordinates

 private:
  PhysicalParams params_;
  Side side_;
  Vec4 scale_, scale_inv_;  // balancing diagonal
  kato_detail::Continuation core_;
};

/// Initializing frame: eigenvectors of the limiting matrix with canonical
/// phase, columns ordered by eigenvalue real part.
KatoFrame kato_init(Side side, Cplx lambda0, const PhysicalParams& p);

/// One second-order step of R' = Pi' R; throws StepTooLarge (caller refines).
KatoFrame kato_step(const KatoFrame& frame, Cplx lambda_next,
                    const PhysicalParams& p, const KatoOptions& opt = {});

/// Initializes at contour.front() and continues through every point with
/// automatic sub-stepping.
std::vector<KatoFrame> kato_along_contour(Side side,
                                          std::span<const Cplx> contour,
                                          const PhysicalParams& p,
                                          const KatoOptions& opt = {});

/// Exterior product of the two columns in the basis e_i ^ e_j, i < j,
/// ordered (12, 13, 14, 23, 24, 34).
Vec6 wedge2(const Mat42& r);

/// Radicand of the regularizing quartic root for one side:
/// (1 - B1/sqrt(mu0 v))^2 + 4 lambda (mu/(2v) + 1/(2 sigma mu0 v^2)).
Cplx reg_radicand(Side side, Cplx lambda, const PhysicalParams& p);

struct RegularizedProduct {
  Cplx lambda;
  Vec6 wedge;
  Vec6 regularized;
};

/// Wedge of the frame and its regularized version: the quartic-root
/// prefactor normalized to 1 at lambda = 1.  radicand_arg is the continued
/// argument of reg_radicand along the path (pass the principal argument for
/// an isolated evaluation).
RegularizedProduct regularized_product(const KatoFrame& frame,
                                       const PhysicalParams& p,
                                       double radicand_arg);
RegularizedProduct regularized_product(const KatoFrame& frame,
                                       const PhysicalParams& p);

}  // namespace mhdstab

#endif
