#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pseudoent/keys.hpp"
#include "pseudoent/oracles.hpp"

namespace pseudoent {

/// Default cap on qubit count (2^24 complex doubles = 256 MiB).
inline constexpr int kDefaultQubitCap = 24;

/// Dense n-qubit state. Qubit j corresponds to bit (n-1-j) of the
/// amplitude index, i.e. qubit 0 is the leftmost / most significant
/// label of |x>.
struct StateVector {
  int n = 0;
  Eigen::VectorXcd amps;

  std::uint64_t dim() const { return std::uint64_t{1} << n; }
  double norm() const { return amps.norm(); }

  /// Indices of amplitudes with |amp| > tol, ascending.
  std::vector<std::uint64_t> support(double tol = 1e-14) const;

  /// Support count, stopping early once it exceeds `cap`.
  std::uint64_t support_size_capped(std::uint64_t cap,
                                    double tol = 1e-14) const;
};

enum class PhaseMode {
  Prf,              // keyed mixing stand-in
  FourWiseComposed, // h(q(i)) with h degree-3 over GF(2^n), q a permutation
  TrulyRandom,      // lazily sampled random function baseline
};

const char* phase_mode_name(PhaseMode mode);
PhaseMode phase_mode_from_name(const std::string& name);

/// Key material and sizes defining one subset phase state: superposition
/// over the 2^k images p(x || 0^{n-k}) with +/-1 phases from f.
struct SubsetPhaseSpec {
  int n = 0;
  int k = 0;
  SeededKey perm_key;
  SeededKey phase_key;
  PhaseMode phase_mode = PhaseMode::Prf;
  int qubit_cap = kDefaultQubitCap;

  static SubsetPhaseSpec from_seed(int n, int k, std::uint64_t seed,
                                   PhaseMode mode = PhaseMode::Prf);
};

using SignFn = std::function<int(std::uint64_t)>;

/// Bijection on [2^n] with both directions available (the preparation
/// circuit needs the inverse to uncompute).
struct BitPermutation {
  std::function<std::uint64_t(std::uint64_t)> forward;
  std::function<std::uint64_t(std::uint64_t)> inverse;

  static BitPermutation identity();
  static BitPermutation keyed(int width, const SeededKey& key);
};

/// Resolve the spec's keys into the permutation and sign function.
BitPermutation subset_permutation(const SubsetPhaseSpec& spec);
SignFn phase_sign_function(const SubsetPhaseSpec& spec);

/// Amplitude-level construction: amp[p(x || 0^{n-k})] = sign/sqrt(2^k).
StateVector build_subset_phase_direct(const SubsetPhaseSpec& spec);

/// Low-level variant with explicit permutation and phase.
StateVector build_subset_phase_direct(int n, int k, const BitPermutation& perm,
                                      const SignFn& sign,
                                      int qubit_cap = kDefaultQubitCap);

/// Joint-register term of the preparation circuit simulation: `main` is
/// the working register, `ancilla` the scratch register.
struct JointTerm {
  std::uint64_t main = 0;
  std::uint64_t ancilla = 0;
  std::complex<double> amp;
};

/// Prepare by simulating the circuit: Hadamards on the first k qubits,
/// permutation computed into the ancilla register, uncompute via the
/// inverse, then the phase oracle. Must match the direct construction
/// with fidelity 1 within 1e-12; a nonzero garbage register is an
/// internal invariant failure.
StateVector prepare_subset_phase_circuit(const SubsetPhaseSpec& spec);
StateVector prepare_subset_phase_circuit(int n, int k,
                                         const BitPermutation& perm,
                                         const SignFn& sign,
                                         int qubit_cap = kDefaultQubitCap);

/// The raw joint-register terms after the full circuit, for inspecting
/// the scratch register (tests; spec'd exact uncomputation check).
std::vector<JointTerm> simulate_preparation_terms(int n, int k,
                                                  const BitPermutation& perm,
                                                  const SignFn& sign);

/// Full phase state: amp[x] = sign(x) / 2^{n/2} over all x.
StateVector build_phase_state(int n, const SignFn& sign,
                              int qubit_cap = kDefaultQubitCap);

/// Haar sample: i.i.d. standard complex Gaussian amplitudes, normalized.
StateVector haar_sample(int n, std::mt19937_64& rng,
                        int qubit_cap = kDefaultQubitCap);
StateVector haar_sample(int n, std::uint64_t seed,
                        int qubit_cap = kDefaultQubitCap);

/// |<a|b>|^2 in [0,1].
double fidelity(const StateVector& a, const StateVector& b);

/// Binary dump: "PSV1" magic, u32 version, u32 n, then 2^n little-endian
/// (float32 re, float32 im) pairs.
void dump_state(const StateVector& state, const std::string& path);
StateVector load_state(const std::string& path);

}  // namespace pseudoent
