// Acceptance gate for the toolkit: twelve numbered criteria, each printing
// one [PASS]/[FAIL] line with its wall time. Tolerances, trial counts, and
// runtime budgets are pinned here on purpose; run with --criterion N for a
// single criterion or with no arguments for all of them.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <functional>
#include <string>
#include <vector>

#include "rbeam/experiment.hpp"
#include "rbeam/verify.hpp"

namespace {

constexpr std::uint64_t kSeed = 20260819u;

struct Criterion {
  int number;
  const char* label;
  double budget_seconds;  // 0 means no pinned budget
  std::function<std::vector<rbeam::CheckResult>()> run;
};

template <typename... Args>
std::string format_line(const char* fmt, Args... args) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

// Monte-Carlo reproduction of the headline beamforming study: the default
// arc layout (12-microphone ULA, two alternating interferers 6 dB above the
// desired source, moderate reverberation) must show the Riemannian mean
// clearly ahead of the arithmetic one.
std::vector<rbeam::CheckResult> desk_scale_study() {
  using rbeam::BeamformerKind;
  using rbeam::MeanKind;
  rbeam::ArcExperimentConfig cfg;
  cfg.trials = 20;
  const std::vector<rbeam::MetricRow> rows = rbeam::run_arc_experiment(
      cfg, {MeanKind::Riemannian, MeanKind::Euclidean},
      {BeamformerKind::DelaySum, BeamformerKind::Subspace});
  const auto median = [&rows](MeanKind mean, BeamformerKind bf,
                              double rbeam::MetricRow::* field) {
    return rbeam::percentile(rbeam::metric_values(rows, mean, bf, field), 0.5);
  };

  const double ds_gap =
      median(MeanKind::Riemannian, BeamformerKind::DelaySum,
             &rbeam::MetricRow::output_sir_db) -
      median(MeanKind::Euclidean, BeamformerKind::DelaySum,
             &rbeam::MetricRow::output_sir_db);
  const double sbsp_gap =
      median(MeanKind::Riemannian, BeamformerKind::Subspace,
             &rbeam::MetricRow::output_sir_db) -
      median(MeanKind::Euclidean, BeamformerKind::Subspace,
             &rbeam::MetricRow::output_sir_db);
  const double riem_err = median(MeanKind::Riemannian,
                                 BeamformerKind::DelaySum,
                                 &rbeam::MetricRow::doa_error_deg);
  const double euclid_err = median(MeanKind::Euclidean,
                                   BeamformerKind::DelaySum,
                                   &rbeam::MetricRow::doa_error_deg);

  rbeam::CheckResult out;
  out.name = "median gaps over 20 trials";
  out.passed = ds_gap >= 3.0 && sbsp_gap >= 6.0 && riem_err <= 2.0 &&
               euclid_err > 5.0;
  out.detail = format_line(
      "ds gap %.2f dB (>= 3), sbsp gap %.2f dB (>= 6), doa medians "
      "%.2f deg (<= 2) vs %.2f deg (> 5)",
      ds_gap, sbsp_gap, riem_err, euclid_err);
  return {out};
}

// Stress layout: many short-lived interferers with random activity. Only the
// sign of the median output-SIR gap is required.
std::vector<rbeam::CheckResult> multi_interference_study() {
  using rbeam::BeamformerKind;
  using rbeam::MeanKind;
  rbeam::ArcExperimentConfig cfg;
  cfg.n_interference = 14;
  cfg.segments = 10;
  cfg.activation_probability = 0.3;
  cfg.trials = 10;
  const std::vector<rbeam::MetricRow> rows = rbeam::run_arc_experiment(
      cfg, {MeanKind::Riemannian, MeanKind::Euclidean},
      {BeamformerKind::DelaySum});

  const double riem = rbeam::percentile(
      rbeam::metric_values(rows, MeanKind::Riemannian,
                           BeamformerKind::DelaySum,
                           &rbeam::MetricRow::output_sir_db),
      0.5);
  const double euclid = rbeam::percentile(
      rbeam::metric_values(rows, MeanKind::Euclidean,
                           BeamformerKind::DelaySum,
                           &rbeam::MetricRow::output_sir_db),
      0.5);

  rbeam::CheckResult out;
  out.name = "median output sir, 14 interferers";
  out.passed = riem > euclid;
  out.detail = format_line("riemannian %.2f dB vs euclidean %.2f dB", riem,
                           euclid);
  return {out};
}

std::vector<Criterion> criteria() {
  return {
      {1, "worked two-interference example", 10.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_example_closed_form(1e-12),
             rbeam::check_example_population_pipeline(1e-6),
             rbeam::check_example_sampled_pipeline(kSeed, 256, 0.15)};
       }},
      {2, "commuting-family mean oracle", 30.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_commuting_mean_oracle(kSeed, 100, 1e-8)};
       }},
      {3, "two-matrix geodesic midpoint", 0.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_geodesic_midpoint(kSeed, 100, 1e-8)};
       }},
      {4, "parametric mean decomposition", 0.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_parametric_mean_riemannian(kSeed, 50, 1e-6),
             rbeam::check_parametric_mean_euclidean(kSeed, 50, 1e-12)};
       }},
      {5, "per-interference sir ordering", 0.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_sir_ordering(kSeed, 1000, 1e-12)};
       }},
      {6, "sir noise-derivative chain", 0.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_sir_noise_derivatives(kSeed, 500, 1e-4)};
       }},
      {7, "vanishing-noise convergence", 0.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_vanishing_noise_limit(kSeed, 30)};
       }},
      {8, "shared-eigenvector mean ordering", 0.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_mean_ordering(kSeed, 200, 1e-8)};
       }},
      {9, "misalignment sir sweep", 0.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_misalignment_closed_form(kSeed, 1e-9),
             rbeam::check_misalignment_sir_sweep(kSeed, 1e-9)};
       }},
      {10, "streaming vs batch agreement", 0.0,
       [] {
         return std::vector<rbeam::CheckResult>{
             rbeam::check_streaming_batch_agreement(kSeed),
             rbeam::check_streaming_commuting(kSeed, 50, 1e-8)};
       }},
      {11, "desk-scale interference rejection study", 600.0,
       desk_scale_study},
      {12, "multi-interference stress study", 600.0,
       multi_interference_study},
  };
}

bool run_criterion(const Criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<rbeam::CheckResult> results;
  std::string error;
  try {
    results = c.run();
  } catch (const std::exception& e) {
    error = e.what();
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  bool passed = error.empty();
  for (const rbeam::CheckResult& r : results) {
    passed = passed && r.passed;
  }
  const bool in_budget = c.budget_seconds == 0.0 || elapsed < c.budget_seconds;
  passed = passed && in_budget;

  std::printf("[%s] criterion %2d: %s (%.2f s)\n", passed ? "PASS" : "FAIL",
              c.number, c.label, elapsed);
  if (!error.empty()) {
    std::printf("       ! threw: %s\n", error.c_str());
  }
  for (const rbeam::CheckResult& r : results) {
    std::printf("       %s %s: %s\n", r.passed ? "-" : "!", r.name.c_str(),
                r.detail.c_str());
  }
  if (!in_budget) {
    std::printf("       ! runtime %.2f s exceeds the %.0f s budget\n", elapsed,
                c.budget_seconds);
  }
  std::fflush(stdout);
  return passed;
}

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  if (selected < 0 || selected > 12) {
    std::fprintf(stderr, "criterion number must lie in 1..12\n");
    return 2;
  }

  bool all_ok = true;
  int ran = 0;
  for (const Criterion& c : criteria()) {
    if (selected != 0 && c.number != selected) {
      continue;
    }
    all_ok = run_criterion(c) && all_ok;
    ++ran;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no such criterion: %d\n", selected);
    return 2;
  }
  return all_ok ? 0 : 1;
}
