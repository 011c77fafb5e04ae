#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace nsft {

// Unsigned arbitrary-precision integer. Little-endian 64-bit limbs with no
// trailing zero limb; an empty limb vector is the value zero. Supports the
// operations the transition-count pipeline needs: addition, multiplication,
// ordering, exact comparison against a double, natural log, decimal I/O.
class BigNat {
 public:
  BigNat() = default;
  explicit BigNat(std::uint64_t value);
  static BigNat from_decimal(std::string_view text);

  bool is_zero() const { return limbs_.empty(); }
  std::size_t bit_length() const;

  BigNat& operator+=(const BigNat& rhs);
  friend BigNat operator+(BigNat lhs, const BigNat& rhs) {
    lhs += rhs;
    return lhs;
  }
  friend BigNat operator*(const BigNat& lhs, const BigNat& rhs);

  BigNat shifted_left(std::size_t bits) const;

  friend bool operator==(const BigNat&, const BigNat&) = default;
  friend std::strong_ordering operator<=>(const BigNat& a, const BigNat& b);

  // Exact three-way comparison against a double: -1 below, 0 equal, +1 above.
  // x must not be NaN; comparisons against infinities behave as expected.
  int compare_double(double x) const;
  bool exceeds(double x) const { return compare_double(x) > 0; }

  double to_double() const;  // rounds; +inf once out of double range
  double log() const;        // natural log; log(0) is -infinity
  std::string to_decimal() const;

 private:
  std::vector<std::uint64_t> limbs_;
  void trim();
};

}  // namespace nsft
