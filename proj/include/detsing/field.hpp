#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace detsing {

using Scalar = mpq_class;

/// Coefficient field: the rationals or a prime field F_p.
///
/// Elements of F_p are stored as canonical integer representatives in
/// [0, p), so every Scalar flowing through a polynomial is already normalized.
class CoefficientField {
 public:
  enum class Kind { Rationals, PrimeField };

  static CoefficientField rationals() { return CoefficientField(Kind::Rationals, 0); }
  /// Throws BadParameters if p is not prime.
  static CoefficientField prime(std::uint64_t p);
  /// "Q" or "Fp:<p>".
  static CoefficientField parse(const std::string& spec);

  Kind kind() const { return kind_; }
  std::uint64_t characteristic() const { return p_; }
  bool is_prime_field() const { return kind_ == Kind::PrimeField; }

  Scalar from_integer(long v) const;
  Scalar from_rational(const mpz_class& num, const mpz_class& den) const;

  void normalize(Scalar& a) const;
  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  /// Throws DivisionByZero for 0.
  Scalar inv(const Scalar& a) const;

  /// Representative used for printing: symmetric range for F_p.
  Scalar display_value(const Scalar& a) const;

  std::string to_string() const;

  bool operator==(const CoefficientField&) const = default;

 private:
  CoefficientField(Kind kind, std::uint64_t p) : kind_(kind), p_(p) {}

  Kind kind_;
  std::uint64_t p_;
};

bool is_prime(std::uint64_t n);

}  // namespace detsing
