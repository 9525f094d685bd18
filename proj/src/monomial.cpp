#include "detsing/monomial.hpp"

#include <algorithm>
#include <string>

#include "detsing/error.hpp"

namespace detsing {

void Monomial::set_exponent(std::size_t v, unsigned power) {
  if (v >= kMaxVariables) throw Error(ErrorCode::BadIndex, "variable id out of range");
  if (power > kMaxExponent) {
    throw Error(ErrorCode::ResourceLimit, "exponent " + std::to_string(power) + " too large");
  }
  degree_ = degree_ - exp_[v] + power;
  exp_[v] = static_cast<std::uint8_t>(power);
  if (power != 0) {
    support_ |= std::uint64_t{1} << v;
  } else {
    support_ &= ~(std::uint64_t{1} << v);
  }
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r;
  bool overflow = false;
  for (std::size_t v = 0; v < kMaxVariables; ++v) {
    const unsigned e = unsigned{exp_[v]} + other.exp_[v];
    overflow |= e > kMaxExponent;
    r.exp_[v] = static_cast<std::uint8_t>(e);
  }
  if (overflow) throw Error(ErrorCode::ResourceLimit, "exponent overflow in monomial product");
  r.degree_ = degree_ + other.degree_;
  r.support_ = support_ | other.support_;
  return r;
}

Monomial Monomial::operator/(const Monomial& other) const {
  Monomial r;
  for (std::size_t v = 0; v < kMaxVariables; ++v) {
    r.exp_[v] = static_cast<std::uint8_t>(exp_[v] - other.exp_[v]);
  }
  r.recompute();
  return r;
}

Monomial lcm(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t v = 0; v < kMaxVariables; ++v) r.exp_[v] = std::max(a.exp_[v], b.exp_[v]);
  r.recompute();
  return r;
}

Monomial gcd(const Monomial& a, const Monomial& b) {
  Monomial r;
  for (std::size_t v = 0; v < kMaxVariables; ++v) r.exp_[v] = std::min(a.exp_[v], b.exp_[v]);
  r.recompute();
  return r;
}

void Monomial::recompute() {
  degree_ = 0;
  support_ = 0;
  for (std::size_t v = 0; v < kMaxVariables; ++v) {
    degree_ += exp_[v];
    if (exp_[v] != 0) support_ |= std::uint64_t{1} << v;
  }
}

std::size_t Monomial::hash() const {
  std::size_t h = 1469598103934665603ull;
  for (std::uint64_t bits = support_; bits != 0; bits &= bits - 1) {
    const int v = std::countr_zero(bits);
    h = (h ^ (static_cast<std::size_t>(v) * 131 + exp_[v])) * 1099511628211ull;
  }
  return h;
}

}  // namespace detsing
