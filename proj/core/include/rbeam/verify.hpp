#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace rbeam {

// One named check with a human-readable summary of the measured worst case.
// The same functions back the command-line verification suites and the
// acceptance tests; counts and tolerances are parameters so both callers can
// pin their own budgets.
struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Manifold geometry.
CheckResult check_log_exp_roundtrip(std::uint64_t seed, int trials = 50,
                                    double tol = 1e-9);
CheckResult check_distance_congruence(std::uint64_t seed, int trials = 50,
                                      double tol = 1e-8);
CheckResult check_commuting_mean_oracle(std::uint64_t seed, int sets = 100,
                                        double tol = 1e-8);
CheckResult check_geodesic_midpoint(std::uint64_t seed, int trials = 100,
                                    double tol = 1e-8);
CheckResult check_mean_ordering(std::uint64_t seed, int sets = 200,
                                double tol = 1e-8);
CheckResult check_streaming_commuting(std::uint64_t seed, int sets = 50,
                                      double tol = 1e-8);

// Parametric mean decomposition.
CheckResult check_parametric_mean_riemannian(std::uint64_t seed, int sets = 50,
                                             double tol = 1e-6);
CheckResult check_parametric_mean_euclidean(std::uint64_t seed, int sets = 50,
                                            double tol = 1e-12);

// Closed-form SIR properties.
CheckResult check_mu_ordering(std::uint64_t seed, int models = 500);
CheckResult check_sir_ordering(std::uint64_t seed, int models = 1000,
                               double margin = 1e-12);
CheckResult check_sir_noise_derivatives(std::uint64_t seed, int models = 500,
                                        double rel_step = 1e-4);
CheckResult check_vanishing_noise_limit(std::uint64_t seed, int sets = 30);
CheckResult check_total_sir_ordering(std::uint64_t seed, int models = 300,
                                     double margin = 1e-12);
CheckResult check_quadratic_sir_ordering(std::uint64_t seed, int sets = 100);

// Worked two-interference example.
CheckResult check_example_closed_form(double tol = 1e-12);
CheckResult check_example_population_pipeline(double tol = 1e-6);
CheckResult check_example_sampled_pipeline(std::uint64_t seed,
                                           int segment_frames = 256,
                                           double rel_tol = 0.15);

// Segment misalignment family.
CheckResult check_misalignment_closed_form(std::uint64_t seed,
                                           double tol = 1e-9);
CheckResult check_misalignment_sir_sweep(std::uint64_t seed,
                                         double equality_tol = 1e-9);

// Streaming versus batch estimation.
CheckResult check_streaming_batch_agreement(std::uint64_t seed);

// Named suites for the command line: geometry, lemma1 (the parametric mean),
// props, example1, misalignment, or all.
std::vector<CheckResult> verify_suite(const std::string& suite,
                                      std::uint64_t seed);

bool all_passed(const std::vector<CheckResult>& results);

}  // namespace rbeam
