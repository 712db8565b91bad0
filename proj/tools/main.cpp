#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mhdstab/evans_driver.hpp"
#include "mhdstab/limits.hpp"
#include "mhdstab/sweep.hpp"

using namespace mhdstab;

namespace {

struct ParamFlags {
  double gamma = 5.0 / 3.0;
  double vplus = 0.5;
  double b1 = 1.0;
  double mu0 = 1.0;
  double sigma = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--gamma", gamma, "gas constant");
    app->add_option("--vplus", vplus, "right endstate v+");
    app->add_option("--b1", b1, "magnetic field B1*");
    app->add_option("--mu0", mu0, "magnetic permeability");
    app->add_option("--sigma", sigma, "electrical resistivity");
  }
  PhysicalParams params() const {
    return PhysicalParams::make(gamma, vplus, b1, mu0, sigma);
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

EvansVariant parse_variant(const std::string& name) {
  if (name == "raw") return EvansVariant::raw;
  if (name == "check") return EvansVariant::check;
  if (name == "hat") return EvansVariant::hat;
  if (name == "tilde") return EvansVariant::tilde;
  if (name == "unit") return EvansVariant::unit;
  throw CLI::ValidationError("variant", "unknown variant " + name);
}

void write_or_print(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(path);
    out << text;
  }
}

int default_workers() {
  if (const char* env = std::getenv("MHDSTAB_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Evans-function stability of parallel isentropic MHD shock layers"};
  app.require_subcommand(1);

  // profile
  auto* cmd_profile = app.add_subcommand("profile", "compute and export the density profile");
  ParamFlags pf_profile;
  pf_profile.attach(cmd_profile);
  double profile_tol = 1e-3;
  std::string profile_out;
  cmd_profile->add_option("--tol", profile_tol, "endpoint tolerance");
  cmd_profile->add_option("--out", profile_out, "output JSON path (stdout if omitted)");

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "Evans function values at one frequency");
  ParamFlags pf_eval;
  pf_eval.attach(cmd_eval);
  double eval_re = 1.0, eval_im = 0.0;
  cmd_eval->add_option("--lambda-re", eval_re, "Re lambda");
  cmd_eval->add_option("--lambda-im", eval_im, "Im lambda");

  // contour
  auto* cmd_contour = app.add_subcommand("contour", "Evans values around a semicircular contour");
  ParamFlags pf_contour;
  pf_contour.attach(cmd_contour);
  int contour_n = 120;
  double contour_radius = 0.0, contour_offset = 0.0;
  std::string contour_variant = "check", contour_csv, contour_json, contour_norm;
  cmd_contour->add_option("--npoints", contour_n, "initial mesh size");
  cmd_contour->add_option("--radius", contour_radius, "contour radius (default: high-frequency bound)");
  cmd_contour->add_option("--offset", contour_offset, "origin offset epsilon");
  cmd_contour->add_option("--variant", contour_variant, "raw|check|hat|tilde|unit");
  cmd_contour->add_option("--csv", contour_csv, "CSV output path");
  cmd_contour->add_option("--json", contour_json, "JSON output path");
  cmd_contour->add_option("--normalize", contour_norm, "'anchor' divides by the rightmost value");

  // winding
  auto* cmd_winding = app.add_subcommand("winding", "winding number on the standard contour");
  ParamFlags pf_winding;
  pf_winding.attach(cmd_winding);
  int winding_n = 120;
  double winding_radius = 0.0, winding_offset = 0.0;
  std::string winding_variant = "check";
  cmd_winding->add_option("--npoints", winding_n, "initial mesh size");
  cmd_winding->add_option("--radius", winding_radius, "contour radius (default: high-frequency bound)");
  cmd_winding->add_option("--offset", winding_offset, "origin offset epsilon");
  cmd_winding->add_option("--variant", winding_variant, "raw|check|hat|tilde|unit");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "resumable parameter-grid sweep");
  std::string ax_gamma = "1.0,1.6666666666666667,3.0";
  std::string ax_vplus = "0.8,1e-2,1e-5";
  std::string ax_b1 = "0.2,2.0,3.8";
  std::string ax_mu0 = "0.2,3.8";
  std::string ax_sigma = "0.2,3.8";
  std::string sweep_out = "sweep.jsonl";
  int sweep_workers = default_workers();
  int sweep_n = 120;
  double sweep_radius = 0.0;
  cmd_sweep->add_option("--gamma", ax_gamma, "comma list");
  cmd_sweep->add_option("--vplus", ax_vplus, "comma list");
  cmd_sweep->add_option("--b1", ax_b1, "comma list");
  cmd_sweep->add_option("--mu0", ax_mu0, "comma list");
  cmd_sweep->add_option("--sigma", ax_sigma, "comma list");
  cmd_sweep->add_option("--out", sweep_out, "JSON-lines output path");
  cmd_sweep->add_option("--workers", sweep_workers, "worker threads (env MHDSTAB_WORKERS)");
  cmd_sweep->add_option("--npoints", sweep_n, "contour mesh size");
  cmd_sweep->add_option("--radius", sweep_radius,
                        "fixed contour radius (default: auto from the bound)");

  // limits
  auto* cmd_limits = app.add_subcommand("limits", "strong-shock and r->infinity limits");
  ParamFlags pf_limits;
  pf_limits.attach(cmd_limits);
  double lim_re = 1.0, lim_im = 0.0;
  bool lim_rinf = false, lim_sing = false;
  std::string lim_table_out, lim_vplus_list, lim_b1_list, lim_variant = "check";
  cmd_limits->add_option("--lambda-re", lim_re, "Re lambda");
  cmd_limits->add_option("--lambda-im", lim_im, "Im lambda");
  cmd_limits->add_flag("--rinf", lim_rinf, "evaluate the r->infinity determinant");
  cmd_limits->add_flag("--singularities", lim_sing, "print the near-origin branch points of A+");
  cmd_limits->add_option("--table", lim_table_out, "write the convergence-error CSV here");
  cmd_limits->add_option("--vplus-list", lim_vplus_list, "table rows (comma list)");
  cmd_limits->add_option("--b1-list", lim_b1_list, "table columns (comma list)");
  cmd_limits->add_option("--variant", lim_variant, "check|hat for the table");

  // bounds
  auto* cmd_bounds = app.add_subcommand("bounds", "spectral confinement bounds");
  ParamFlags pf_bounds;
  pf_bounds.attach(cmd_bounds);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (cmd_profile->parsed()) {
      ProfileOptions po;
      po.tol = profile_tol;
      const Profile prof = compute_profile(pf_profile.params(), po);
      write_or_print(profile_out, prof.to_json() + "\n");
      std::fprintf(stderr, "L- = %.3f, L+ = %.3f, endpoint error = %.3e\n",
                   prof.l_minus, prof.l_plus, prof.endpoint_error);
    } else if (cmd_eval->parsed()) {
      const PhysicalParams p = pf_eval.params();
      const Profile prof = compute_profile(p);
      const Cplx lam(eval_re, eval_im);
      const KatoFrame kp = kato_init(Side::plus, Cplx(std::max(1.0, std::abs(lam)), 0), p);
      const KatoFrame km = kato_init(Side::minus, Cplx(std::max(1.0, std::abs(lam)), 0), p);
      KatoContinuation cp(p, Side::plus, kp.lambda);
      KatoContinuation cm(p, Side::minus, km.lambda);
      cp.set_frame(kp.basis);
      cm.set_frame(km.basis);
      if (lam != kp.lambda) {
        cp.advance(lam);
        cm.advance(lam);
      }
      const EvansValue ev = evans_eval(lam, p, prof, cp.frame(), cm.frame());
      std::printf("lambda   = %.9g%+.9gi\n", lam.real(), lam.imag());
      auto pr = [](const char* n, Cplx z) {
        std::printf("%-8s = %.9g%+.9gi\n", n, z.real(), z.imag());
      };
      pr("D", ev.d_raw());
      pr("D_check", ev.d_check());
      pr("D_hat", ev.d_hat());
      pr("D_tilde", ev.d_tilde());
      pr("D_unit", ev.d_unit());
    } else if (cmd_contour->parsed() || cmd_winding->parsed()) {
      const bool is_contour = cmd_contour->parsed();
      const PhysicalParams p = (is_contour ? pf_contour : pf_winding).params();
      double radius = is_contour ? contour_radius : winding_radius;
      if (radius <= 0.0) radius = std::max(hf_radius(p).radius, 1.05);
      const double offset = is_contour ? contour_offset : winding_offset;
      const int n = is_contour ? contour_n : winding_n;
      const Contour contour = build_semicircle(radius, n, offset);
      DriverOptions dopt;
      dopt.variant = parse_variant(is_contour ? contour_variant : winding_variant);
      EvansDriver driver(EvansDriver::Mode::finite, p, contour, dopt);
      ContourResult res = winding_number(contour, driver.evaluator());
      if (is_contour) {
        if (contour_norm == "anchor") {
          const LogComplex anchor = res.samples.front().value;
          for (auto& s : res.samples) {
            s.value.log_abs -= anchor.log_abs;
            s.value.arg -= anchor.arg;
          }
          for (auto& a : res.arg_track) a -= anchor.arg;
        }
        if (!contour_csv.empty()) write_or_print(contour_csv, res.to_csv());
        if (!contour_json.empty()) write_or_print(contour_json, res.to_json());
        if (contour_csv.empty() && contour_json.empty())
          std::cout << res.to_csv();
        std::fprintf(stderr, "winding = %ld, samples = %zu, max step = %.3f\n",
                     res.winding, res.samples.size(), res.max_arg_step);
      } else {
        std::printf("winding        = %ld\n", res.winding);
        std::printf("radius         = %.6g\n", radius);
        std::printf("samples        = %zu\n", res.samples.size());
        std::printf("refinements    = %ld\n", res.refinements);
        std::printf("max_arg_step   = %.4f\n", res.max_arg_step);
        std::printf("round_residual = %.3e\n", res.residual);
      }
    } else if (cmd_sweep->parsed()) {
      SweepSpec spec;
      spec.gamma = parse_list(ax_gamma);
      spec.v_plus = parse_list(ax_vplus);
      spec.b1 = parse_list(ax_b1);
      spec.mu0 = parse_list(ax_mu0);
      spec.sigma = parse_list(ax_sigma);
      spec.output_path = sweep_out;
      spec.worker_count = sweep_workers;
      spec.n_points = sweep_n;
      spec.fixed_radius = sweep_radius;
      const SweepSummary s = run_sweep(spec);
      std::printf("tuples    = %ld\n", s.total);
      std::printf("skipped   = %ld (already in %s)\n", s.skipped, sweep_out.c_str());
      std::printf("completed = %ld\n", s.completed);
      std::printf("errors    = %ld\n", s.errors);
      for (const auto& [w, c] : s.winding_counts)
        std::printf("winding %ld: %ld tuples\n", w, c);
    } else if (cmd_limits->parsed()) {
      const PhysicalParams p = pf_limits.params();
      if (lim_sing) {
        for (const Cplx z : branch_point_diagnostic(p))
          std::printf("branch point near origin: %.6e%+.6ei\n", z.real(), z.imag());
      }
      if (!lim_table_out.empty()) {
        const auto vps = parse_list(lim_vplus_list);
        const auto b1s = parse_list(lim_b1_list);
        if (vps.empty() || b1s.empty())
          throw std::runtime_error("--table needs --vplus-list and --b1-list");
        const std::string csv = convergence_table_csv(
            vps, b1s, p, parse_variant(lim_variant) == EvansVariant::hat
                            ? EvansVariant::hat
                            : EvansVariant::check);
        write_or_print(lim_table_out == "-" ? "" : lim_table_out, csv);
      } else if (lim_rinf) {
        const Cplx v = r_infinity_eval(Cplx(lim_re, lim_im), p);
        std::printf("D0_rinf(%g%+gi) = %.9g%+.9gi\n", lim_re, lim_im, v.real(), v.imag());
      } else if (!lim_sing) {
        const EvansValue ev = strong_shock_eval(Cplx(lim_re, lim_im), p);
        std::printf("D0(%g%+gi)       = %.9g%+.9gi\n", lim_re, lim_im,
                    ev.d_raw().real(), ev.d_raw().imag());
        std::printf("D0_check         = %.9g%+.9gi\n", ev.d_check().real(), ev.d_check().imag());
        std::printf("D0_hat           = %.9g%+.9gi\n", ev.d_hat().real(), ev.d_hat().imag());
      }
    } else if (cmd_bounds->parsed()) {
      const PhysicalParams p = pf_bounds.params();
      const SpectralBound b = hf_radius(p);
      std::printf("hf_radius      = %.9g\n", b.radius);
      std::printf("  parabolic    = %.9g\n", b.term_parabolic);
      std::printf("  field        = %.9g\n", b.term_field);
      std::printf("re_bound       = %.9g\n", re_lambda_bound(p));
      std::printf("shock type     = %s\n", classify_shock(p).name().c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
