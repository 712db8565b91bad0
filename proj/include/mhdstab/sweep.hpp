#ifndef MHDSTAB_SWEEP_HPP
#define MHDSTAB_SWEEP_HPP

#include <map>
#include <string>
#include <vector>

#include "mhdstab/evans_driver.hpp"

namespace mhdstab {

struct SweepSpec {
  std::vector<double> gamma;
  std::vector<double> v_plus;
  std::vector<double> b1;
  std::vector<double> mu0;
  std::vector<double> sigma;
  int n_points = 120;
  double fixed_radius = 0.0;  // 0: auto, max(hf_radius, 1.05)
  EvansVariant variant = EvansVariant::check;
  std::string output_path;
  int worker_count = 1;
  IntegOptions integ;
  KatoOptions kato;

  size_t tuple_count() const {
    return gamma.size() * v_plus.size() * b1.size() * mu0.size() *
           sigma.size();
  }
};

struct SweepRecord {
  std::string key;
  std::string shock_type;
  double radius = 0.0;
  double offset = 0.0;  // origin detour applied near characteristic B1
  long winding = 0;
  double max_arg_step = 0.0;
  long n_evals = 0;
  double wall_time = 0.0;
  std::string status;  // "ok" or "error:<kind>"

  std::string to_json_line() const;
  static SweepRecord from_json_line(const std::string& line);
};

struct SweepSummary {
  long total = 0;
  long completed = 0;  // newly evaluated in this run
  long skipped = 0;    // already present in the output file
  long errors = 0;
  std::map<long, long> winding_counts;
};

/// Canonical tuple key "g=..,v=..,b=..,m=..,s=.." with shortest round-trip
/// number formatting.
std::string canonical_key(double g, double v, double b, double m, double s);

/// Runs the cartesian product, appending one JSON line per tuple; tuples
/// already keyed in the output file are skipped, so an interrupted sweep can
/// simply be re-run.  Per-tuple numerical failures are recorded in the
/// record status and never abort the sweep.
SweepSummary run_sweep(const SweepSpec& spec);

}  // namespace mhdstab

#endif
