#ifndef MHDSTAB_EVANS_DRIVER_HPP
#define MHDSTAB_EVANS_DRIVER_HPP

#include <map>
#include <optional>

#include "mhdstab/contour.hpp"
#include "mhdstab/shooting.hpp"

namespace mhdstab {

struct DriverOptions {
  IntegOptions integ;
  KatoOptions kato;
  EvansVariant variant = EvansVariant::check;
  /// evaluate only the upper half of a conjugation-symmetric contour and
  /// reflect (semicircles only)
  bool conjugate_sym = true;
  /// scale the + initializing eigenvectors to the limiting-basis formulas at
  /// the anchor, so finite and limiting runs share one normalization
  bool limit_matched_init = false;
  ProfileOptions profile;
};

/// Evaluates Evans values along one contour.  Kato frames, tracked
/// eigenvalue sums and the continued radicand arguments are prepared
/// sequentially on the contour's initial mesh; refinement points continue
/// deterministically from the nearest mesh node below, so results do not
/// depend on evaluation order.
///
/// Modes: finite-amplitude shooting along a computed profile, the
/// strong-shock limiting system (tanh profile, closed-form + basis), and the
/// rapid-coefficient limit where the value is the plain determinant of the
/// two initializing bases (no shooting).
class EvansDriver {
 public:
  enum class Mode { finite, limiting, r_infinity };

  EvansDriver(Mode mode, const PhysicalParams& p, const Contour& contour,
              const DriverOptions& opt = {});
  EvansDriver(const PhysicalParams& p, Profile profile, const Contour& contour,
              const DriverOptions& opt = {});

  EvansValue value_at(double t);
  ContourEvaluator evaluator();   // applies opt.variant
  long eval_count() const { return evals_; }
  Cplx anchor() const { return contour_->map(0.0); }
  const Profile* profile() const {
    return profile_ ? &*profile_ : nullptr;
  }

 private:
  struct Node {
    double t = 0.0;
    Cplx lambda;
    std::optional<KatoContinuation> plus;
    std::optional<KatoContinuation> minus;
    double arg_minus = 0.0;   // continued args of the prefactor radicands
    double arg_mid = 0.0;
    double arg_plus = 0.0;
    double arg_lambda = 0.0;  // continued arg of lambda (limiting branches)
  };

  void prepare();
  Node advance_node(const Node& from, double t, Cplx lambda) const;
  EvansValue eval_node(const Node& node) const;

  Mode mode_;
  PhysicalParams params_;
  const Contour* contour_;
  DriverOptions opt_;
  std::optional<Profile> profile_;
  double lim_l_plus_ = 0.0, lim_l_minus_ = 0.0;
  std::vector<Node> nodes_;
  long evals_ = 0;
};

}  // namespace mhdstab

#endif
