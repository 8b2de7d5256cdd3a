#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <unordered_map>
#include <vector>

#include "pseudoent/gf2m.hpp"
#include "pseudoent/keys.hpp"

namespace pseudoent {

/// Degree-3 polynomial hash over GF(2^m): any 4 distinct inputs have
/// jointly uniform outputs when the coefficients are uniform.
class FourWiseHash {
 public:
  /// Sample coefficients c0..c3 from the hash-coeffs substream of `key`.
  FourWiseHash(int field_degree, const SeededKey& key);

  /// Explicit coefficients (low m bits of each entry are used).
  FourWiseHash(int field_degree, const std::array<std::uint64_t, 4>& coeffs);

  int field_degree() const { return field_.degree(); }
  const std::array<std::uint64_t, 4>& coefficients() const { return coeffs_; }

  /// c0 ^ c1*x ^ c2*x^2 ^ c3*x^3 in GF(2^m).
  std::uint64_t eval(std::uint64_t x) const;

  /// eval truncated to the low `range_bits` bits.
  std::uint64_t eval_bits(std::uint64_t x, int range_bits) const;

  /// +/-1 from the lowest output bit (bit 0 -> +1, bit 1 -> -1).
  int sign(std::uint64_t x) const { return (eval(x) & 1) ? -1 : 1; }

 private:
  GF2m field_;
  std::array<std::uint64_t, 4> coeffs_;
};

/// 4-round Luby-Rackoff (Feistel) permutation on [2^{2w}]. Round functions
/// are PRF stand-ins keyed by the round-1..4 substreams of the master key.
class FeistelPermutation {
 public:
  /// total_width = 2w must be even and in [2, 48].
  FeistelPermutation(int total_width, const SeededKey& key);

  int width() const { return 2 * half_width_; }
  std::uint64_t domain_size() const { return std::uint64_t{1} << width(); }

  std::uint64_t forward(std::uint64_t x) const;
  std::uint64_t inverse(std::uint64_t y) const;

 private:
  std::uint64_t round_fn(int round, std::uint64_t r) const;

  int half_width_;
  std::array<SeededKey, 4> round_keys_;
};

/// Keyed permutation on [2^n] for any width 1..24. Even widths are the
/// Feistel directly; odd widths cycle-walk a Feistel of width n+1 until
/// the output lands back in [2^n] (the documented padding convention).
class DomainPermutation {
 public:
  DomainPermutation(int width, const SeededKey& key);

  int width() const { return width_; }
  std::uint64_t domain_size() const { return std::uint64_t{1} << width_; }

  std::uint64_t forward(std::uint64_t x) const;
  std::uint64_t inverse(std::uint64_t y) const;

 private:
  int width_;
  FeistelPermutation feistel_;
};

/// Truly random function baseline: each point is an independent uniform
/// draw, memoized on first query. Per-point values are derived from
/// (seed, x) so the final memo table does not depend on query order.
/// Queries mutate the memo table; share across workers only after
/// pre-populating the inputs of interest.
class LazyRandomFunction {
 public:
  LazyRandomFunction(int domain_width, int range_width, std::uint64_t seed);

  int domain_width() const { return domain_width_; }
  int range_width() const { return range_width_; }

  std::uint64_t eval(std::uint64_t x) const;
  int sign(std::uint64_t x) const { return (eval(x) & 1) ? -1 : 1; }

  std::size_t memo_size() const { return memo_.size(); }
  const std::unordered_map<std::uint64_t, std::uint64_t>& memo() const {
    return memo_;
  }

 private:
  int domain_width_;
  int range_width_;
  std::uint64_t seed_;
  mutable std::unordered_map<std::uint64_t, std::uint64_t> memo_;
};

/// Truly random permutation baseline over a small domain (width <= 20),
/// realized as a seeded Fisher-Yates shuffle with its inverse table.
class LazyRandomPermutation {
 public:
  LazyRandomPermutation(int width, std::uint64_t seed);

  int width() const { return width_; }
  std::uint64_t forward(std::uint64_t x) const;
  std::uint64_t inverse(std::uint64_t y) const;

 private:
  int width_;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inverse_;
};

/// g(x) = outer(inner(x) mod 2^k) with both maps permutations of [2^w].
/// Every achieved image point has exactly 2^{w-k} preimages.
class KToOneFunction {
 public:
  KToOneFunction(int width, int k, const SeededKey& key);

  int width() const { return width_; }
  int k() const { return k_; }
  std::uint64_t image_size() const { return std::uint64_t{1} << k_; }

  std::uint64_t eval(std::uint64_t x) const;

 private:
  int width_;
  int k_;
  DomainPermutation inner_;
  DomainPermutation outer_;
};

/// Small-range composition f(g(x) mod 2^k); the image has at most 2^k
/// points. f and g are PRF stand-ins on [2^w].
std::uint64_t small_range_eval(const SeededKey& f_key, const SeededKey& g_key,
                               int width, int k, std::uint64_t x);

}  // namespace pseudoent
