#include "mhdstab/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <set>
#include <thread>

#include <json.hpp>

#include "mhdstab/limits.hpp"

#ifdef __unix__
#include <unistd.h>
#endif

namespace mhdstab {

namespace {

std::string shortest(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string canonical_key(double g, double v, double b, double m, double s) {
  return "g=" + shortest(g) + ",v=" + shortest(v) + ",b=" + shortest(b) +
         ",m=" + shortest(m) + ",s=" + shortest(s);
}

std::string SweepRecord::to_json_line() const {
  nlohmann::json j;
  j["key"] = key;
  j["shock_type"] = shock_type;
  j["radius"] = radius;
  if (offset > 0.0) j["offset"] = offset;
  j["winding"] = winding;
  j["max_arg_step"] = max_arg_step;
  j["n_evals"] = n_evals;
  j["wall_time"] = wall_time;
  j["status"] = status;
  return j.dump();
}

SweepRecord SweepRecord::from_json_line(const std::string& line) {
  const auto j = nlohmann::json::parse(line);
  SweepRecord r;
  r.key = j.at("key");
  r.shock_type = j.at("shock_type");
  r.radius = j.at("radius");
  r.offset = j.value("offset", 0.0);
  r.winding = j.at("winding");
  r.max_arg_step = j.at("max_arg_step");
  r.n_evals = j.at("n_evals");
  r.wall_time = j.at("wall_time");
  r.status = j.at("status");
  return r;
}

namespace {

struct Tuple {
  double g, v, b, m, s;
  std::string key;
};

SweepRecord evaluate_tuple(const SweepSpec& spec, const Tuple& t) {
  SweepRecord rec;
  rec.key = t.key;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const PhysicalParams p = PhysicalParams::make(t.g, t.v, t.b, t.m, t.s);
    rec.shock_type = classify_shock(p).name();
    rec.radius = spec.fixed_radius > 0.0
                     ? spec.fixed_radius
                     : std::max(hf_radius(p).radius, 1.05);
    // near a characteristic value of B1 the initializing basis develops a
    // quartic-root feature at the origin; detour around it
    const double rel_fast = std::abs(p.b1 / std::sqrt(p.mu0 * p.v_plus) - 1.0);
    const double rel_slow = std::abs(p.b1 / std::sqrt(p.mu0) - 1.0);
    if (std::min(rel_fast, rel_slow) < 0.05) rec.offset = 1e-4 * rec.radius;
    // contours beyond the standard parameter box need proportionally more
    // samples; the 120-point default is calibrated for radii up to ~22
    const int mesh_scale =
        std::max(1, static_cast<int>(std::ceil(std::sqrt(rec.radius / 25.0))));
    const Contour contour =
        build_semicircle(rec.radius, spec.n_points * mesh_scale, rec.offset);
    DriverOptions dopt;
    dopt.integ = spec.integ;
    dopt.kato = spec.kato;
    dopt.variant = spec.variant;
    EvansDriver driver(EvansDriver::Mode::finite, p, contour, dopt);
    WindingOptions wopt;
    wopt.refine_limit =
        std::max<long>(1024, 4L * spec.n_points * mesh_scale);
    const ContourResult res = winding_number(contour, driver.evaluator(), wopt);
    rec.winding = res.winding;
    rec.max_arg_step = res.max_arg_step;
    rec.n_evals = driver.eval_count();
    rec.status = "ok";
  } catch (const SplitFailure&) {
    rec.status = "error:split";
  } catch (const ZeroOnContour&) {
    rec.status = "error:zero-on-contour";
  } catch (const RefinementExhausted&) {
    rec.status = "error:refinement";
  } catch (const std::exception&) {
    rec.status = "error:numerical";
  }
  rec.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rec;
}

}  // namespace

SweepSummary run_sweep(const SweepSpec& spec) {
  SweepSummary summary;

  std::set<std::string> done;
  if (!spec.output_path.empty()) {
    std::vector<std::string> valid;
    long invalid = 0;
    {
      std::ifstream in(spec.output_path);
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        try {
          done.insert(SweepRecord::from_json_line(line).key);
          valid.push_back(line);
        } catch (const std::exception&) {
          ++invalid;  // torn trailing line from an interrupted run
        }
      }
    }
    if (invalid > 0) {
      std::ofstream rewrite(spec.output_path, std::ios::trunc);
      for (const auto& l : valid) rewrite << l << '\n';
    }
  }

  std::vector<Tuple> todo;
  for (double g : spec.gamma)
    for (double v : spec.v_plus)
      for (double b : spec.b1)
        for (double m : spec.mu0)
          for (double s : spec.sigma) {
            ++summary.total;
            Tuple t{g, v, b, m, s, canonical_key(g, v, b, m, s)};
            if (done.count(t.key)) {
              ++summary.skipped;
              continue;
            }
            todo.push_back(std::move(t));
          }

  std::FILE* out = nullptr;
  if (!spec.output_path.empty()) {
    out = std::fopen(spec.output_path.c_str(), "a");
    if (out == nullptr)
      throw std::runtime_error("run_sweep: cannot open " + spec.output_path);
  }

  std::mutex write_mutex;
  int batch = 0;
  auto emit = [&](const SweepRecord& rec) {
    std::lock_guard<std::mutex> lk(write_mutex);
    ++summary.completed;
    if (rec.status == "ok")
      ++summary.winding_counts[rec.winding];
    else
      ++summary.errors;
    if (out != nullptr) {
      const std::string line = rec.to_json_line() + "\n";
      std::fputs(line.c_str(), out);
      if (++batch % 16 == 0) {
        std::fflush(out);
#ifdef __unix__
        fsync(fileno(out));
#endif
      }
    }
  };

  const int workers =
      std::max(1, std::min<int>(spec.worker_count,
                                static_cast<int>(todo.size() ? todo.size() : 1)));
  std::atomic<size_t> next{0};
  std::exception_ptr io_error;
  std::mutex err_mutex;
  auto work = [&]() {
    while (true) {
      const size_t i = next.fetch_add(1);
      if (i >= todo.size()) break;
      try {
        emit(evaluate_tuple(spec, todo[i]));
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mutex);
        if (!io_error) io_error = std::current_exception();
        break;
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (io_error) std::rethrow_exception(io_error);

  if (out != nullptr) {
    std::fflush(out);
#ifdef __unix__
    fsync(fileno(out));
#endif
    std::fclose(out);
  }
  return summary;
}

}  // namespace mhdstab
