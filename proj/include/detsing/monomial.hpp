#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>

namespace detsing {

inline constexpr std::size_t kMaxVariables = 52;
inline constexpr unsigned kMaxExponent = 255;

/// Dense exponent vector with cached total degree and support bitmask.
/// Exponents of variables beyond the owning ring's size are zero.
class Monomial {
 public:
  Monomial() = default;

  static Monomial variable(std::size_t v, unsigned power = 1) {
    Monomial m;
    m.set_exponent(v, power);
    return m;
  }

  unsigned exponent(std::size_t v) const { return exp_[v]; }
  unsigned degree() const { return degree_; }
  std::uint64_t support() const { return support_; }
  bool is_one() const { return degree_ == 0; }

  /// Throws ResourceLimit if power exceeds kMaxExponent.
  void set_exponent(std::size_t v, unsigned power);

  /// Sum of exponents over the variables in `mask`.
  unsigned degree_in(std::uint64_t mask) const {
    unsigned d = 0;
    for (std::uint64_t bits = support_ & mask; bits != 0; bits &= bits - 1) {
      d += exp_[std::countr_zero(bits)];
    }
    return d;
  }

  bool divides(const Monomial& other) const {
    if (degree_ > other.degree_ || (support_ & ~other.support_) != 0) return false;
    for (std::uint64_t bits = support_; bits != 0; bits &= bits - 1) {
      const int v = std::countr_zero(bits);
      if (exp_[v] > other.exp_[v]) return false;
    }
    return true;
  }

  /// Throws ResourceLimit on exponent overflow.
  Monomial operator*(const Monomial& other) const;
  /// Precondition: other.divides(*this).
  Monomial operator/(const Monomial& other) const;

  friend Monomial lcm(const Monomial& a, const Monomial& b);
  friend Monomial gcd(const Monomial& a, const Monomial& b);
  /// True iff a and b share no variable.
  friend bool coprime(const Monomial& a, const Monomial& b) { return (a.support_ & b.support_) == 0; }

  bool operator==(const Monomial& other) const {
    return degree_ == other.degree_ && support_ == other.support_ && exp_ == other.exp_;
  }

  std::size_t hash() const;

 private:
  void recompute();

  std::array<std::uint8_t, kMaxVariables> exp_{};
  std::uint32_t degree_ = 0;
  std::uint64_t support_ = 0;
};

/// Graded reverse lexicographic comparison on variable ids (x_0 > x_1 > ...).
/// Returns >0 if a > b, <0 if a < b, 0 if equal.
inline int compare_grevlex(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() > b.degree() ? 1 : -1;
  std::uint64_t bits = a.support() | b.support();
  while (bits != 0) {
    const int v = 63 - std::countl_zero(bits);
    const unsigned ea = a.exponent(v);
    const unsigned eb = b.exponent(v);
    if (ea != eb) return ea < eb ? 1 : -1;
    bits &= ~(std::uint64_t{1} << v);
  }
  return 0;
}

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

}  // namespace detsing
