#include "nsft/bignat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace nsft {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

constexpr double kLn2 = 0.69314718055994530941723212145817656807;

}  // namespace

BigNat::BigNat(u64 value) {
  if (value != 0) limbs_.push_back(value);
}

void BigNat::trim() {
  while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
}

std::size_t BigNat::bit_length() const {
  if (limbs_.empty()) return 0;
  u64 top = limbs_.back();
  std::size_t bits = 64 * (limbs_.size() - 1);
  while (top != 0) {
    ++bits;
    top >>= 1;
  }
  return bits;
}

BigNat& BigNat::operator+=(const BigNat& rhs) {
  if (rhs.limbs_.size() > limbs_.size()) limbs_.resize(rhs.limbs_.size(), 0);
  u64 carry = 0;
  std::size_t i = 0;
  for (; i < rhs.limbs_.size(); ++i) {
    u64 a = limbs_[i];
    u64 b = rhs.limbs_[i];
    u64 s = a + b;
    u64 c1 = s < a ? 1u : 0u;
    u64 t = s + carry;
    u64 c2 = t < s ? 1u : 0u;
    limbs_[i] = t;
    carry = c1 + c2;
  }
  for (; carry != 0 && i < limbs_.size(); ++i) {
    limbs_[i] += carry;
    carry = limbs_[i] == 0 ? 1u : 0u;
  }
  if (carry != 0) limbs_.push_back(carry);
  return *this;
}

BigNat operator*(const BigNat& lhs, const BigNat& rhs) {
  BigNat out;
  if (lhs.is_zero() || rhs.is_zero()) return out;
  out.limbs_.assign(lhs.limbs_.size() + rhs.limbs_.size(), 0);
  for (std::size_t i = 0; i < lhs.limbs_.size(); ++i) {
    u64 carry = 0;
    for (std::size_t j = 0; j < rhs.limbs_.size(); ++j) {
      u128 cur = (u128)lhs.limbs_[i] * rhs.limbs_[j] + out.limbs_[i + j] + carry;
      out.limbs_[i + j] = (u64)cur;
      carry = (u64)(cur >> 64);
    }
    out.limbs_[i + rhs.limbs_.size()] += carry;
  }
  out.trim();
  return out;
}

BigNat BigNat::shifted_left(std::size_t bits) const {
  if (is_zero() || bits == 0) return *this;
  std::size_t limb_shift = bits / 64;
  std::size_t bit_shift = bits % 64;
  BigNat out;
  out.limbs_.assign(limbs_.size() + limb_shift + 1, 0);
  for (std::size_t i = 0; i < limbs_.size(); ++i) {
    out.limbs_[i + limb_shift] |= bit_shift == 0 ? limbs_[i] : (limbs_[i] << bit_shift);
    if (bit_shift != 0)
      out.limbs_[i + limb_shift + 1] |= limbs_[i] >> (64 - bit_shift);
  }
  out.trim();
  return out;
}

std::strong_ordering operator<=>(const BigNat& a, const BigNat& b) {
  if (a.limbs_.size() != b.limbs_.size())
    return a.limbs_.size() <=> b.limbs_.size();
  for (std::size_t i = a.limbs_.size(); i-- > 0;) {
    if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
  }
  return std::strong_ordering::equal;
}

int BigNat::compare_double(double x) const {
  if (std::isnan(x)) throw std::invalid_argument("BigNat: comparison against NaN");
  if (x < 0.0) return 1;
  if (std::isinf(x)) return -1;
  if (x == 0.0) return is_zero() ? 0 : 1;
  if (is_zero()) return -1;
  // Decompose x = mant * 2^shift with mant a 53-bit integer, compare exactly.
  int e = 0;
  double m = std::frexp(x, &e);
  u64 mant = (u64)std::ldexp(m, 53);
  int shift = e - 53;
  BigNat lhs = *this;
  BigNat rhs(mant);
  if (shift >= 0) {
    rhs = rhs.shifted_left((std::size_t)shift);
  } else {
    lhs = lhs.shifted_left((std::size_t)(-shift));
  }
  auto c = lhs <=> rhs;
  if (c == std::strong_ordering::less) return -1;
  if (c == std::strong_ordering::greater) return 1;
  return 0;
}

double BigNat::to_double() const {
  double out = 0.0;
  for (std::size_t i = limbs_.size(); i-- > 0;) {
    out = out * 18446744073709551616.0 + (double)limbs_[i];
    if (std::isinf(out)) return out;
  }
  return out;
}

double BigNat::log() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  std::size_t bits = bit_length();
  if (bits <= 64) return std::log(to_double());
  // Take the top 64 bits as an integer t so that value = t * 2^(bits-64) * (1 + r)
  // with 0 <= r < 2^-63; log(1+r) is below double resolution of the result.
  std::size_t top_bits = bits % 64 == 0 ? 64 : bits % 64;
  u64 t;
  if (top_bits == 64) {
    t = limbs_.back();
  } else {
    t = (limbs_.back() << (64 - top_bits)) |
        (limbs_[limbs_.size() - 2] >> top_bits);
  }
  return std::log((double)t) + (double)(bits - 64) * kLn2;
}

std::string BigNat::to_decimal() const {
  if (is_zero()) return "0";
  // Repeatedly divide by 10^19, collecting 19-digit chunks.
  constexpr u64 kChunk = 10000000000000000000ull;
  std::vector<u64> work = limbs_;
  std::string out;
  while (!work.empty()) {
    u64 rem = 0;
    for (std::size_t i = work.size(); i-- > 0;) {
      u128 cur = ((u128)rem << 64) | work[i];
      work[i] = (u64)(cur / kChunk);
      rem = (u64)(cur % kChunk);
    }
    while (!work.empty() && work.back() == 0) work.pop_back();
    std::string chunk = std::to_string(rem);
    if (work.empty()) {
      out.insert(0, chunk);
    } else {
      out.insert(0, std::string(19 - chunk.size(), '0') + chunk);
    }
  }
  return out;
}

BigNat BigNat::from_decimal(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("BigNat: empty decimal string");
  BigNat out;
  BigNat ten(10);
  for (char ch : text) {
    if (ch < '0' || ch > '9')
      throw std::invalid_argument("BigNat: bad decimal digit");
    out = out * ten;
    out += BigNat((u64)(ch - '0'));
  }
  return out;
}

}  // namespace nsft
