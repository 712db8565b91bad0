#ifndef MHDSTAB_CONTOUR_HPP
#define MHDSTAB_CONTOUR_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhdstab/types.hpp"

namespace mhdstab {

struct ZeroOnContour : std::runtime_error {
  Cplx lambda;
  explicit ZeroOnContour(Cplx l)
      : std::runtime_error("winding: evaluator vanished on the contour"),
        lambda(l) {}
};

struct RefinementExhausted : std::runtime_error {
  RefinementExhausted()
      : std::runtime_error("winding: refinement limit reached") {}
};

/// Closed counterclockwise contour, parametrized over t in [0, period).
/// Semicircle: boundary of B(0, radius) in {Re >= 0}, starting at
/// lambda = radius, arc to +i radius, axis leg down through the origin (or
/// through Re = origin_offset when offset), arc back to the start.  The axis
/// leg has quadratic concentration toward the origin.  Circle: |z - center| =
/// radius traversed `sheets` times.
struct Contour {
  enum class Kind { semicircle, circle };
  Kind kind = Kind::semicircle;
  double radius = 1.0;
  Cplx center{0.0, 0.0};
  int sheets = 1;
  double origin_offset = 0.0;

  std::vector<double> ts;    // strictly increasing in [0, period)
  std::vector<Cplx> points;  // map(ts[i])

  double period() const {
    return kind == Kind::circle ? static_cast<double>(sheets) : 1.0;
  }
  Cplx map(double t) const;
};

Contour build_semicircle(double radius, int n_points = 120,
                         double origin_offset = 0.0);
Contour build_circle(Cplx center, double radius, int n_per_sheet,
                     int sheets = 1);

/// Evaluators receive the contour parameter (for continuation bookkeeping)
/// and the mapped point.
using ContourEvaluator = std::function<LogComplex(double t, Cplx lambda)>;

struct ContourSample {
  double t;
  Cplx lambda;
  LogComplex value;
};

struct ContourResult {
  std::vector<ContourSample> samples;   // ordered by t
  std::vector<double> arg_track;        // unwound argument per sample
  long winding = 0;
  double residual = 0.0;                // |total - winding 2 pi| / 2 pi
  double max_arg_step = 0.0;            // after refinement
  long refinements = 0;

  std::string to_csv() const;   // lambda_re, lambda_im, D_re, D_im, arg
  std::string to_json() const;
};

struct WindingOptions {
  double arg_threshold = 0.2;
  long refine_limit = 1024;
  double zero_log_abs = -644.0;  // ~log(1e-280)
};

/// Argument-principle winding with a posteriori mesh refinement: midpoints
/// are inserted until every consecutive argument change is below the
/// threshold.
ContourResult winding_number(const Contour& contour, const ContourEvaluator& f,
                             const WindingOptions& opt = {});

/// Winding accumulated over a multi-sheet traversal of a circle; the
/// evaluator must continue its branch state through t in [0, sheets).
long riemann_winding(Cplx center, double radius, int sheets,
                     const ContourEvaluator& f, int n_per_sheet = 64,
                     const WindingOptions& opt = {});

/// Wraps an evaluator defined on the upper half (t <= period/2) of a
/// conjugation-symmetric contour; the lower half is filled by reflection.
ContourEvaluator conjugate_completion(const Contour& contour,
                                      ContourEvaluator upper);

}  // namespace mhdstab

#endif
