#include "detsing/field.hpp"

#include "detsing/error.hpp"

namespace detsing {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

CoefficientField CoefficientField::prime(std::uint64_t p) {
  if (!is_prime(p) || p >= (std::uint64_t{1} << 31)) {
    throw Error(ErrorCode::BadParameters, "field characteristic " + std::to_string(p) +
                                              " is not a prime below 2^31");
  }
  return CoefficientField(Kind::PrimeField, p);
}

CoefficientField CoefficientField::parse(const std::string& spec) {
  if (spec == "Q" || spec == "QQ") return rationals();
  if (spec.rfind("Fp:", 0) == 0) {
    const std::string digits = spec.substr(3);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos ||
        digits.size() > 12) {
      throw Error(ErrorCode::BadParameters, "bad field spec '" + spec + "'");
    }
    return prime(std::stoull(digits));
  }
  throw Error(ErrorCode::BadParameters, "bad field spec '" + spec + "' (expected Q or Fp:<p>)");
}

void CoefficientField::normalize(Scalar& a) const {
  if (kind_ == Kind::Rationals) return;
  const mpz_class p(static_cast<unsigned long>(p_));
  if (a.get_den() != 1) {
    mpz_class den = a.get_den() % p;
    if (den == 0) throw Error(ErrorCode::DivisionByZero, "denominator divisible by p");
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), p.get_mpz_t());
    mpz_class num = a.get_num() * inv;
    mpz_fdiv_r(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
    a = Scalar(num);
    return;
  }
  mpz_class num = a.get_num();
  if (num >= 0 && num < p) return;
  mpz_fdiv_r(num.get_mpz_t(), num.get_mpz_t(), p.get_mpz_t());
  a = Scalar(num);
}

Scalar CoefficientField::from_integer(long v) const {
  Scalar s(v);
  normalize(s);
  return s;
}

Scalar CoefficientField::from_rational(const mpz_class& num, const mpz_class& den) const {
  if (den == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  Scalar s(num, den);
  s.canonicalize();
  normalize(s);
  return s;
}

Scalar CoefficientField::add(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rationals) return a + b;
  mpz_class s = a.get_num() + b.get_num();
  if (s >= static_cast<unsigned long>(p_)) s -= static_cast<unsigned long>(p_);
  return Scalar(s);
}

Scalar CoefficientField::sub(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rationals) return a - b;
  mpz_class s = a.get_num() - b.get_num();
  if (s < 0) s += static_cast<unsigned long>(p_);
  return Scalar(s);
}

Scalar CoefficientField::mul(const Scalar& a, const Scalar& b) const {
  if (kind_ == Kind::Rationals) return a * b;
  const unsigned long x = a.get_num().get_ui();
  const unsigned long y = b.get_num().get_ui();
  return Scalar(static_cast<unsigned long>((static_cast<unsigned __int128>(x) * y) % p_));
}

Scalar CoefficientField::neg(const Scalar& a) const {
  if (kind_ == Kind::Rationals) return -a;
  if (a == 0) return a;
  return Scalar(static_cast<unsigned long>(p_) - a.get_num());
}

Scalar CoefficientField::inv(const Scalar& a) const {
  if (a == 0) throw Error(ErrorCode::DivisionByZero, "inverse of zero");
  if (kind_ == Kind::Rationals) return 1 / a;
  mpz_class r;
  const mpz_class p(static_cast<unsigned long>(p_));
  mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), p.get_mpz_t());
  return Scalar(r);
}

Scalar CoefficientField::display_value(const Scalar& a) const {
  if (kind_ == Kind::Rationals) return a;
  if (a.get_num() * 2 > static_cast<unsigned long>(p_)) {
    return Scalar(a.get_num() - static_cast<unsigned long>(p_));
  }
  return a;
}

std::string CoefficientField::to_string() const {
  if (kind_ == Kind::Rationals) return "Q";
  return "Fp:" + std::to_string(p_);
}

}  // namespace detsing
