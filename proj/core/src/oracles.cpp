#include "pseudoent/oracles.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace pseudoent {

const char* key_role_name(KeyRole role) {
  switch (role) {
    case KeyRole::Phase:
      return "phase";
    case KeyRole::InnerPerm:
      return "inner-perm";
    case KeyRole::OuterPerm:
      return "outer-perm";
    case KeyRole::Round1:
      return "round-1";
    case KeyRole::Round2:
      return "round-2";
    case KeyRole::Round3:
      return "round-3";
    case KeyRole::Round4:
      return "round-4";
    case KeyRole::HashCoeffs:
      return "hash-coeffs";
  }
  throw std::invalid_argument("key_role_name: unknown role");
}

KeyRole key_role_from_name(const std::string& name) {
  for (auto role : {KeyRole::Phase, KeyRole::InnerPerm, KeyRole::OuterPerm,
                    KeyRole::Round1, KeyRole::Round2, KeyRole::Round3,
                    KeyRole::Round4, KeyRole::HashCoeffs}) {
    if (name == key_role_name(role)) {
      return role;
    }
  }
  throw std::invalid_argument("key_role_from_name: unknown role '" + name +
                              "'");
}

FourWiseHash::FourWiseHash(int field_degree, const SeededKey& key)
    : field_(field_degree) {
  const SeededKey ck = key.substream(KeyRole::HashCoeffs);
  for (int i = 0; i < 4; ++i) {
    coeffs_[static_cast<std::size_t>(i)] =
        prf_mix64(ck.seed, static_cast<std::uint64_t>(i)) & field_.mask();
  }
}

FourWiseHash::FourWiseHash(int field_degree,
                           const std::array<std::uint64_t, 4>& coeffs)
    : field_(field_degree), coeffs_(coeffs) {
  for (auto& c : coeffs_) {
    c &= field_.mask();
  }
}

std::uint64_t FourWiseHash::eval(std::uint64_t x) const {
  if (x > field_.mask()) {
    throw std::invalid_argument("FourWiseHash::eval: input outside domain");
  }
  // Horner evaluation of c3 x^3 + c2 x^2 + c1 x + c0.
  std::uint64_t acc = coeffs_[3];
  acc = field_.mul(acc, x) ^ coeffs_[2];
  acc = field_.mul(acc, x) ^ coeffs_[1];
  acc = field_.mul(acc, x) ^ coeffs_[0];
  return acc;
}

std::uint64_t FourWiseHash::eval_bits(std::uint64_t x, int range_bits) const {
  if (range_bits < 1 || range_bits > field_.degree()) {
    throw std::invalid_argument("FourWiseHash::eval_bits: bad range width");
  }
  return eval(x) & ((std::uint64_t{1} << range_bits) - 1);
}

FeistelPermutation::FeistelPermutation(int total_width, const SeededKey& key) {
  if (total_width < 2 || total_width > 48 || total_width % 2 != 0) {
    throw std::invalid_argument(
        "FeistelPermutation: width must be even and in [2,48]; odd domains "
        "go through DomainPermutation, which pads to the next even width");
  }
  half_width_ = total_width / 2;
  round_keys_ = {key.substream(KeyRole::Round1),
                 key.substream(KeyRole::Round2),
                 key.substream(KeyRole::Round3),
                 key.substream(KeyRole::Round4)};
}

std::uint64_t FeistelPermutation::round_fn(int round, std::uint64_t r) const {
  return prf_eval(round_keys_[static_cast<std::size_t>(round)], r,
                  half_width_);
}

std::uint64_t FeistelPermutation::forward(std::uint64_t x) const {
  if (x >= domain_size()) {
    throw std::invalid_argument("FeistelPermutation::forward: out of domain");
  }
  const std::uint64_t half_mask = (std::uint64_t{1} << half_width_) - 1;
  std::uint64_t left = x >> half_width_;
  std::uint64_t right = x & half_mask;
  for (int round = 0; round < 4; ++round) {
    const std::uint64_t next_right = left ^ round_fn(round, right);
    left = right;
    right = next_right;
  }
  return (left << half_width_) | right;
}

std::uint64_t FeistelPermutation::inverse(std::uint64_t y) const {
  if (y >= domain_size()) {
    throw std::invalid_argument("FeistelPermutation::inverse: out of domain");
  }
  const std::uint64_t half_mask = (std::uint64_t{1} << half_width_) - 1;
  std::uint64_t left = y >> half_width_;
  std::uint64_t right = y & half_mask;
  for (int round = 3; round >= 0; --round) {
    const std::uint64_t prev_left = right ^ round_fn(round, left);
    right = left;
    left = prev_left;
  }
  return (left << half_width_) | right;
}

DomainPermutation::DomainPermutation(int width, const SeededKey& key)
    : width_(width),
      feistel_(width % 2 == 0 ? width : width + 1, key) {
  if (width < 1 || width > 24) {
    throw std::invalid_argument("DomainPermutation: width must be in [1,24]");
  }
}

std::uint64_t DomainPermutation::forward(std::uint64_t x) const {
  if (x >= domain_size()) {
    throw std::invalid_argument("DomainPermutation::forward: out of domain");
  }
  std::uint64_t y = feistel_.forward(x);
  while (y >= domain_size()) {
    y = feistel_.forward(y);
  }
  return y;
}

std::uint64_t DomainPermutation::inverse(std::uint64_t y) const {
  if (y >= domain_size()) {
    throw std::invalid_argument("DomainPermutation::inverse: out of domain");
  }
  std::uint64_t x = feistel_.inverse(y);
  while (x >= domain_size()) {
    x = feistel_.inverse(x);
  }
  return x;
}

LazyRandomFunction::LazyRandomFunction(int domain_width, int range_width,
                                       std::uint64_t seed)
    : domain_width_(domain_width), range_width_(range_width), seed_(seed) {
  if (domain_width < 1 || domain_width > 48) {
    throw std::invalid_argument("LazyRandomFunction: bad domain width");
  }
  if (range_width < 1 || range_width > 64) {
    throw std::invalid_argument("LazyRandomFunction: bad range width");
  }
}

std::uint64_t LazyRandomFunction::eval(std::uint64_t x) const {
  if (x >> domain_width_) {
    throw std::invalid_argument("LazyRandomFunction::eval: out of domain");
  }
  auto it = memo_.find(x);
  if (it != memo_.end()) {
    return it->second;
  }
  // Value is a pure function of (seed, x): seed a per-point generator so
  // the memo table restricted to the queried set is query-order invariant.
  std::mt19937_64 gen(prf_mix64(seed_, x ^ 0xA5A5A5A5A5A5A5A5ULL));
  std::uint64_t v = gen();
  if (range_width_ < 64) {
    v &= (std::uint64_t{1} << range_width_) - 1;
  }
  memo_.emplace(x, v);
  return v;
}

LazyRandomPermutation::LazyRandomPermutation(int width, std::uint64_t seed)
    : width_(width) {
  if (width < 1 || width > 20) {
    throw std::invalid_argument(
        "LazyRandomPermutation: width must be in [1,20] (table is "
        "materialized eagerly)");
  }
  const std::size_t size = std::size_t{1} << width;
  table_.resize(size);
  inverse_.resize(size);
  std::iota(table_.begin(), table_.end(), 0u);
  std::mt19937_64 gen(prf_mix64(seed, 0xF15Full));
  for (std::size_t i = size - 1; i > 0; --i) {
    std::uniform_int_distribution<std::size_t> dist(0, i);
    std::swap(table_[i], table_[dist(gen)]);
  }
  for (std::size_t i = 0; i < size; ++i) {
    inverse_[table_[i]] = static_cast<std::uint32_t>(i);
  }
}

std::uint64_t LazyRandomPermutation::forward(std::uint64_t x) const {
  if (x >= table_.size()) {
    throw std::invalid_argument("LazyRandomPermutation: out of domain");
  }
  return table_[x];
}

std::uint64_t LazyRandomPermutation::inverse(std::uint64_t y) const {
  if (y >= inverse_.size()) {
    throw std::invalid_argument("LazyRandomPermutation: out of domain");
  }
  return inverse_[y];
}

KToOneFunction::KToOneFunction(int width, int k, const SeededKey& key)
    : width_(width),
      k_(k),
      inner_(width, key.substream(KeyRole::InnerPerm)),
      outer_(width, key.substream(KeyRole::OuterPerm)) {
  if (k < 0 || k > width) {
    throw std::invalid_argument("KToOneFunction: require 0 <= k <= width");
  }
}

std::uint64_t KToOneFunction::eval(std::uint64_t x) const {
  const std::uint64_t mask = (std::uint64_t{1} << k_) - 1;
  return outer_.forward(inner_.forward(x) & mask);
}

std::uint64_t small_range_eval(const SeededKey& f_key, const SeededKey& g_key,
                               int width, int k, std::uint64_t x) {
  if (k < 0 || k > width) {
    throw std::invalid_argument("small_range_eval: require 0 <= k <= width");
  }
  const std::uint64_t mask = (std::uint64_t{1} << k) - 1;
  return prf_eval(f_key, prf_eval(g_key, x, width) & mask, width);
}

}  // namespace pseudoent
