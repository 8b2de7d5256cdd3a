#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pseudoent {

/// Role tag identifying which function a key substream drives. Distinct
/// roles derived from the same master seed behave as independent streams.
enum class KeyRole : std::uint32_t {
  Phase = 1,
  InnerPerm = 2,
  OuterPerm = 3,
  Round1 = 4,
  Round2 = 5,
  Round3 = 6,
  Round4 = 7,
  HashCoeffs = 8,
};

const char* key_role_name(KeyRole role);
KeyRole key_role_from_name(const std::string& name);

/// Keyed 64-bit mixing primitive (SplitMix64-style finalizer with a key
/// injection between rounds). This is a statistical stand-in for a PRF at
/// toy widths, not a cryptographic construction; experiments that need a
/// ground-truth random function use LazyRandomFunction instead.
inline std::uint64_t prf_mix64(std::uint64_t key, std::uint64_t x) {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z ^= key;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z = (z ^ (z >> 31)) * 0xD6E8FEB86659FD93ULL;
  return z ^ (z >> 29);
}

/// Seeded key for one oracle role. Same (seed, role) always produces the
/// same function; substreams for different roles are derived by hashing
/// the role tag into the master seed with the stand-in PRF.
struct SeededKey {
  std::uint64_t seed = 0;
  KeyRole role = KeyRole::Phase;

  SeededKey() = default;
  SeededKey(std::uint64_t s, KeyRole r) : seed(s), role(r) {}

  /// Derive the key for a sub-role from this key's seed.
  SeededKey substream(KeyRole sub) const {
    return SeededKey(prf_mix64(seed, static_cast<std::uint64_t>(sub)), sub);
  }

  /// Derive an indexed stream (per-trial / per-seed experiment streams).
  SeededKey stream(std::uint64_t index) const {
    return SeededKey(prf_mix64(seed, 0x5EEDull ^ (index << 8)), role);
  }

  bool operator==(const SeededKey&) const = default;
};

/// Keyed PRF stand-in evaluation truncated to range_bits (1..64).
/// Deterministic in (key, x); documented as a statistical stand-in only.
inline std::uint64_t prf_eval(const SeededKey& key, std::uint64_t x,
                              int range_bits) {
  if (range_bits < 1 || range_bits > 64) {
    throw std::invalid_argument("prf_eval: range_bits must be in [1,64]");
  }
  std::uint64_t v = prf_mix64(key.seed, x);
  if (range_bits == 64) {
    return v;
  }
  return v & ((std::uint64_t{1} << range_bits) - 1);
}

/// PRF stand-in mapped to a +/-1 sign via the low output bit.
inline int prf_sign(const SeededKey& key, std::uint64_t x) {
  return prf_eval(key, x, 1) ? -1 : 1;
}

}  // namespace pseudoent
