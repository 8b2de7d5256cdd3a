#include "pseudoent/statevector.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>
#include <stdexcept>
#include <unordered_map>

namespace pseudoent {

namespace {

void check_qubit_count(int n, int cap) {
  if (n < 1 || n > cap) {
    throw std::invalid_argument("qubit count " + std::to_string(n) +
                                " outside [1," + std::to_string(cap) + "]");
  }
}

}  // namespace

std::vector<std::uint64_t> StateVector::support(double tol) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t i = 0; i < dim(); ++i) {
    if (std::abs(amps[static_cast<Eigen::Index>(i)]) > tol) {
      out.push_back(i);
    }
  }
  return out;
}

std::uint64_t StateVector::support_size_capped(std::uint64_t cap,
                                               double tol) const {
  std::uint64_t count = 0;
  for (std::uint64_t i = 0; i < dim(); ++i) {
    if (std::abs(amps[static_cast<Eigen::Index>(i)]) > tol) {
      if (++count > cap) {
        return count;
      }
    }
  }
  return count;
}

const char* phase_mode_name(PhaseMode mode) {
  switch (mode) {
    case PhaseMode::Prf:
      return "prf";
    case PhaseMode::FourWiseComposed:
      return "four-wise-composed";
    case PhaseMode::TrulyRandom:
      return "truly-random";
  }
  throw std::invalid_argument("phase_mode_name: unknown mode");
}

PhaseMode phase_mode_from_name(const std::string& name) {
  if (name == "prf") return PhaseMode::Prf;
  if (name == "four-wise-composed") return PhaseMode::FourWiseComposed;
  if (name == "truly-random") return PhaseMode::TrulyRandom;
  throw std::invalid_argument("phase_mode_from_name: unknown mode '" + name +
                              "'");
}

SubsetPhaseSpec SubsetPhaseSpec::from_seed(int n, int k, std::uint64_t seed,
                                           PhaseMode mode) {
  SubsetPhaseSpec spec;
  spec.n = n;
  spec.k = k;
  spec.perm_key = SeededKey(seed, KeyRole::OuterPerm);
  spec.phase_key = SeededKey(prf_mix64(seed, 0x9A5Eull), KeyRole::Phase);
  spec.phase_mode = mode;
  return spec;
}

BitPermutation BitPermutation::identity() {
  return BitPermutation{[](std::uint64_t x) { return x; },
                        [](std::uint64_t x) { return x; }};
}

BitPermutation BitPermutation::keyed(int width, const SeededKey& key) {
  auto perm = std::make_shared<DomainPermutation>(width, key);
  return BitPermutation{
      [perm](std::uint64_t x) { return perm->forward(x); },
      [perm](std::uint64_t y) { return perm->inverse(y); }};
}

BitPermutation subset_permutation(const SubsetPhaseSpec& spec) {
  return BitPermutation::keyed(spec.n, spec.perm_key);
}

SignFn phase_sign_function(const SubsetPhaseSpec& spec) {
  switch (spec.phase_mode) {
    case PhaseMode::Prf: {
      const SeededKey key = spec.phase_key;
      return [key](std::uint64_t x) { return prf_sign(key, x); };
    }
    case PhaseMode::FourWiseComposed: {
      // f(i) = h(q(i)): permutation first, then the 4-wise polynomial.
      auto q = std::make_shared<DomainPermutation>(
          spec.n, spec.phase_key.substream(KeyRole::InnerPerm));
      auto h = std::make_shared<FourWiseHash>(spec.n, spec.phase_key);
      return [q, h](std::uint64_t x) { return h->sign(q->forward(x)); };
    }
    case PhaseMode::TrulyRandom: {
      auto f = std::make_shared<LazyRandomFunction>(spec.n, 1,
                                                    spec.phase_key.seed);
      return [f](std::uint64_t x) { return f->sign(x); };
    }
  }
  throw std::invalid_argument("phase_sign_function: unknown mode");
}

StateVector build_subset_phase_direct(const SubsetPhaseSpec& spec) {
  return build_subset_phase_direct(spec.n, spec.k, subset_permutation(spec),
                                   phase_sign_function(spec), spec.qubit_cap);
}

StateVector build_subset_phase_direct(int n, int k, const BitPermutation& perm,
                                      const SignFn& sign, int qubit_cap) {
  check_qubit_count(n, qubit_cap);
  if (k < 0 || k > n) {
    throw std::invalid_argument("subset phase: require 0 <= k <= n");
  }
  StateVector state;
  state.n = n;
  state.amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(1) << n);
  const double mag = std::pow(2.0, -0.5 * k);
  // x || 0^{n-k}: the k free bits occupy the most significant positions.
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << k); ++x) {
    const std::uint64_t padded = x << (n - k);
    const std::uint64_t target = perm.forward(padded);
    state.amps[static_cast<Eigen::Index>(target)] =
        static_cast<double>(sign(target)) * mag;
  }
  return state;
}

std::vector<JointTerm> simulate_preparation_terms(int n, int k,
                                                  const BitPermutation& perm,
                                                  const SignFn& sign) {
  // The circuit stays inside the span of <= 2^k basis product terms, so
  // the joint register is tracked as a sparse map keyed by
  // (main << n) | ancilla.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::unordered_map<std::uint64_t, std::complex<double>> terms;
  terms.emplace(0, 1.0);

  auto joint_key = [n](std::uint64_t main, std::uint64_t anc) {
    return (main << n) | anc;
  };
  const std::uint64_t anc_mask = (std::uint64_t{1} << n) - 1;

  // Hadamard on qubits 0..k-1 of the main register.
  for (int q = 0; q < k; ++q) {
    const std::uint64_t bit = std::uint64_t{1} << (2 * n - 1 - q);
    std::unordered_map<std::uint64_t, std::complex<double>> next;
    next.reserve(terms.size() * 2);
    for (const auto& [key, amp] : terms) {
      const bool one = key & bit;
      next[key & ~bit] += amp * inv_sqrt2;
      next[key | bit] += (one ? -amp : amp) * inv_sqrt2;
    }
    for (auto it = next.begin(); it != next.end();) {
      it = (it->second == std::complex<double>{0.0, 0.0}) ? next.erase(it)
                                                          : std::next(it);
    }
    terms = std::move(next);
  }

  // Compute p into the ancilla: |u>|t> -> |u>|t ^ p(u)>.
  {
    std::unordered_map<std::uint64_t, std::complex<double>> next;
    next.reserve(terms.size());
    for (const auto& [key, amp] : terms) {
      const std::uint64_t u = key >> n;
      const std::uint64_t t = key & anc_mask;
      next[joint_key(u, t ^ perm.forward(u))] += amp;
    }
    terms = std::move(next);
  }

  // Uncompute the main register: |u>|v> -> |u ^ p^{-1}(v)>|v>.
  {
    std::unordered_map<std::uint64_t, std::complex<double>> next;
    next.reserve(terms.size());
    for (const auto& [key, amp] : terms) {
      const std::uint64_t u = key >> n;
      const std::uint64_t v = key & anc_mask;
      next[joint_key(u ^ perm.inverse(v), v)] += amp;
    }
    terms = std::move(next);
  }

  // Phase oracle on the ancilla register holding p(x || 0^{n-k}).
  std::vector<JointTerm> out;
  out.reserve(terms.size());
  for (const auto& [key, amp] : terms) {
    JointTerm term;
    term.main = key >> n;
    term.ancilla = key & anc_mask;
    term.amp = amp * static_cast<double>(sign(term.ancilla));
    out.push_back(term);
  }
  return out;
}

StateVector prepare_subset_phase_circuit(int n, int k,
                                         const BitPermutation& perm,
                                         const SignFn& sign, int qubit_cap) {
  check_qubit_count(n, qubit_cap);
  if (k < 0 || k > n) {
    throw std::invalid_argument("subset phase: require 0 <= k <= n");
  }
  const auto terms = simulate_preparation_terms(n, k, perm, sign);
  StateVector state;
  state.n = n;
  state.amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(1) << n);
  for (const auto& term : terms) {
    if (term.main != 0 && std::abs(term.amp) > 0.0) {
      throw std::runtime_error(
          "preparation circuit: scratch register failed to uncompute");
    }
    state.amps[static_cast<Eigen::Index>(term.ancilla)] += term.amp;
  }
  return state;
}

StateVector prepare_subset_phase_circuit(const SubsetPhaseSpec& spec) {
  return prepare_subset_phase_circuit(spec.n, spec.k,
                                      subset_permutation(spec),
                                      phase_sign_function(spec),
                                      spec.qubit_cap);
}

StateVector build_phase_state(int n, const SignFn& sign, int qubit_cap) {
  check_qubit_count(n, qubit_cap);
  StateVector state;
  state.n = n;
  state.amps.resize(static_cast<Eigen::Index>(1) << n);
  const double mag = std::pow(2.0, -0.5 * n);
  for (std::uint64_t x = 0; x < state.dim(); ++x) {
    state.amps[static_cast<Eigen::Index>(x)] =
        static_cast<double>(sign(x)) * mag;
  }
  return state;
}

StateVector haar_sample(int n, std::mt19937_64& rng, int qubit_cap) {
  check_qubit_count(n, qubit_cap);
  StateVector state;
  state.n = n;
  state.amps.resize(static_cast<Eigen::Index>(1) << n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Eigen::Index i = 0; i < state.amps.size(); ++i) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    state.amps[i] = std::complex<double>(re, im);
  }
  state.amps.normalize();
  return state;
}

StateVector haar_sample(int n, std::uint64_t seed, int qubit_cap) {
  std::mt19937_64 rng(seed);
  return haar_sample(n, rng, qubit_cap);
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.n != b.n) {
    throw std::invalid_argument("fidelity: qubit count mismatch");
  }
  return std::norm(a.amps.dot(b.amps));
}

namespace {
constexpr char kMagic[4] = {'P', 'S', 'V', '1'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void dump_state(const StateVector& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("dump_state: cannot open " + path);
  }
  out.write(kMagic, 4);
  const std::uint32_t version = kVersion;
  const std::uint32_t n = static_cast<std::uint32_t>(state.n);
  out.write(reinterpret_cast<const char*>(&version), 4);
  out.write(reinterpret_cast<const char*>(&n), 4);
  for (Eigen::Index i = 0; i < state.amps.size(); ++i) {
    const float re = static_cast<float>(state.amps[i].real());
    const float im = static_cast<float>(state.amps[i].imag());
    out.write(reinterpret_cast<const char*>(&re), 4);
    out.write(reinterpret_cast<const char*>(&im), 4);
  }
  if (!out) {
    throw std::runtime_error("dump_state: write failed for " + path);
  }
}

StateVector load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("load_state: cannot open " + path);
  }
  char magic[4];
  std::uint32_t version = 0;
  std::uint32_t n = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kVersion) {
    throw std::runtime_error("load_state: bad header in " + path);
  }
  if (n < 1 || n > 30) {
    throw std::runtime_error("load_state: implausible qubit count");
  }
  StateVector state;
  state.n = static_cast<int>(n);
  state.amps.resize(static_cast<Eigen::Index>(1) << n);
  for (Eigen::Index i = 0; i < state.amps.size(); ++i) {
    float re = 0.0f;
    float im = 0.0f;
    in.read(reinterpret_cast<char*>(&re), 4);
    in.read(reinterpret_cast<char*>(&im), 4);
    state.amps[i] = std::complex<double>(re, im);
  }
  if (!in) {
    throw std::runtime_error("load_state: truncated file " + path);
  }
  return state;
}

}  // namespace pseudoent
