#pragma once

#include <cstdint>
#include <stdexcept>

namespace pseudoent {

/// Binary field GF(2^m) with a fixed irreducible modulus per supported m.
/// The moduli are the low-weight irreducible polynomials from the standard
/// published table, hard-coded so that every implementation of this code
/// produces identical hash families.
class GF2m {
 public:
  explicit GF2m(int m) : m_(m), modulus_(modulus_for(m)) {}

  int degree() const { return m_; }
  std::uint64_t modulus() const { return modulus_; }
  std::uint64_t mask() const { return (std::uint64_t{1} << m_) - 1; }

  static bool supported(int m) {
    switch (m) {
      case 4:
      case 8:
      case 12:
      case 16:
      case 20:
      case 24:
        return true;
      default:
        return false;
    }
  }

  /// Carry-less multiply followed by reduction mod the field polynomial.
  std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
    std::uint64_t prod = 0;
    while (b != 0) {
      if (b & 1) {
        prod ^= a;
      }
      a <<= 1;
      b >>= 1;
    }
    // degree of prod is < 2m - 1 <= 47 for m <= 24
    for (int bit = 2 * m_ - 2; bit >= m_; --bit) {
      if (prod >> bit & 1) {
        prod ^= modulus_ << (bit - m_);
      }
    }
    return prod;
  }

  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return a ^ b; }

 private:
  static std::uint64_t modulus_for(int m) {
    switch (m) {
      case 4:
        return 0x13;  // x^4 + x + 1
      case 8:
        return 0x11B;  // x^8 + x^4 + x^3 + x + 1
      case 12:
        return 0x1009;  // x^12 + x^3 + 1
      case 16:
        return 0x1002B;  // x^16 + x^5 + x^3 + x + 1
      case 20:
        return 0x100009;  // x^20 + x^3 + 1
      case 24:
        return 0x100001B;  // x^24 + x^4 + x^3 + x + 1
      default:
        throw std::invalid_argument(
            "GF2m: unsupported field degree (supported: 4,8,12,16,20,24)");
    }
  }

  int m_;
  std::uint64_t modulus_;
};

}  // namespace pseudoent
