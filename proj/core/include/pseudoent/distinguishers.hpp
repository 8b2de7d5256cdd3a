#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pseudoent/entanglement.hpp"
#include "pseudoent/statevector.hpp"

namespace pseudoent {

/// Two-sided critical value at alpha = 0.01 for the two-proportion
/// z-test used to call a distinguishing experiment significant.
inline constexpr double kZCritAlpha01 = 2.575829303548901;

/// Reproducible state ensemble: sample(i) with the same spec and master
/// seed always returns the same state.
struct EnsembleSpec {
  enum class Kind { SubsetPhase, RandomPhase, Haar, MatrixState };
  enum class Construction { HighEntropy, Tunable };

  Kind kind = Kind::Haar;
  int n = 0;
  int k = 0;  // SubsetPhase subset log-size / Tunable hash target
  PhaseMode phase_mode = PhaseMode::Prf;
  Construction construction = Construction::HighEntropy;
  std::uint64_t master_seed = 0;

  static EnsembleSpec subset_phase(int n, int k, std::uint64_t seed,
                                   PhaseMode mode = PhaseMode::Prf);
  static EnsembleSpec random_phase(int n, std::uint64_t seed);
  static EnsembleSpec haar(int n, std::uint64_t seed);
  static EnsembleSpec matrix_state(int n, Construction c, int k,
                                   std::uint64_t seed);

  StateVector sample(std::uint64_t index) const;
  std::string name() const;
  nlohmann::json to_json() const;
};

/// Result of one experiment: enough per-seed data to recompute the
/// summary exactly, plus the verdict against the stated threshold.
struct ExperimentResult {
  std::string name;
  nlohmann::json parameters;
  std::vector<nlohmann::json> per_seed;
  double mean = 0.0;
  double stddev = 0.0;
  double success_fraction = 0.0;
  bool verdict = false;
  std::string threshold_description;

  nlohmann::json to_json() const;
};

/// Recompute mean/stddev/success over a scalar observable.
void summarize(ExperimentResult& result, const std::vector<double>& values,
               const std::vector<bool>& successes);

struct SwapTestSampled {
  int shots = 0;
  std::uint64_t seed = 0;
};

/// Tr(rho_X^2) across the cut, as the squared Frobenius norm of the
/// smaller-side Gram matrix (no eigendecomposition).
double reduced_purity(const StateVector& state, const Cut& cut);

/// SWAP-test success probability between two copies reduced to side X of
/// the cut: exactly 1/2 + Tr(rho_X^2)/2, or the empirical fraction of
/// accepting shots in sampled mode (outcomes are Bernoulli with the
/// exact parameter; gate-level simulation adds nothing here).
double swap_test_success(const StateVector& state, const Cut& cut);
double swap_test_success(const StateVector& state, const Cut& cut,
                         const SwapTestSampled& sampled);

/// Two-proportion z statistic for counts (x1 of n1) vs (x2 of n2).
double two_proportion_z(std::int64_t x1, std::int64_t n1, std::int64_t x2,
                        std::int64_t n2);

/// Per trial: draw a state from each ensemble, run copies/2 SWAP tests
/// against its reduced state, accept when at least 3/4 of them return 0.
/// Reports |P1(accept) - P2(accept)|. Trials share uniforms across the
/// two ensembles (common random numbers), which leaves each acceptance
/// estimate unbiased while shrinking the variance of the difference.
ExperimentResult distinguish_by_purity(const EnsembleSpec& e1,
                                       const EnsembleSpec& e2, const Cut& cut,
                                       int copies_per_trial, int trials,
                                       std::uint64_t seed);

/// Bond-dimension testing separation: subset-phase states with support r
/// have every-cut Schmidt rank <= r (distance 0 to rank-r states), while
/// random phase states sit at distance >= 1/sqrt(2) at the half cut.
ExperimentResult mps_test_experiment(int n, int r, int seeds,
                                     std::uint64_t master_seed);

/// Exact top-t reduced-density eigenvalues per sampled state: the ground
/// truth an eigenvalue estimator would need.
ExperimentResult eigenvalue_estimation_task(const EnsembleSpec& ensemble,
                                            const Cut& cut, int top_t,
                                            int seeds);

/// Classify sampled states by numeric Schmidt rank against a threshold.
ExperimentResult schmidt_rank_task(const EnsembleSpec& ensemble,
                                   const Cut& cut, int threshold_rank,
                                   int seeds);

}  // namespace pseudoent
