#pragma once

#include <climits>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detsing/field.hpp"
#include "detsing/monomial.hpp"
#include "detsing/ring.hpp"

namespace detsing {

struct Term {
  Monomial mono;
  Scalar coeff;
};

using VarSet = std::vector<VarId>;

std::uint64_t mask_of(std::span<const VarId> vars);

/// Canonical sparse polynomial. Terms are stored in descending grevlex order
/// with nonzero, field-normalized coefficients, so equality is term-wise.
class Polynomial {
 public:
  explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

  static Polynomial constant(RingPtr ring, const Scalar& c);
  static Polynomial constant(RingPtr ring, long c);
  static Polynomial variable(RingPtr ring, VarId v);
  static Polynomial variable(RingPtr ring, std::string_view name);
  static Polynomial term(RingPtr ring, Monomial mono, const Scalar& c);
  /// Sorts, merges equal monomials, normalizes and drops zero coefficients.
  static Polynomial from_terms(RingPtr ring, std::vector<Term> terms);
  /// Precondition: strictly descending grevlex, nonzero normalized coefficients.
  static Polynomial from_sorted_terms(RingPtr ring, std::vector<Term> terms);

  const RingPtr& ring() const { return ring_; }
  const CoefficientField& field() const { return ring_->field(); }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  /// Leading term in grevlex. Precondition: nonzero.
  const Term& leading_term() const { return terms_.front(); }
  unsigned total_degree() const;
  /// Union of the supports of all terms.
  std::uint64_t support() const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  Polynomial scaled(const Scalar& c) const;
  Polynomial mul_term(const Monomial& m, const Scalar& c) const;
  /// Divides by the leading coefficient. Zero stays zero.
  Polynomial monic() const;

  bool operator==(const Polynomial& other) const;

  std::string to_string() const;

 private:
  RingPtr ring_;
  std::vector<Term> terms_;
};

Polynomial pow(const Polynomial& f, unsigned k);

/// True iff f = c * g for a nonzero scalar c.
bool proportional(const Polynomial& f, const Polynomial& g);

enum class ArithOp { Add, Sub, Mul, Neg, ScalarMul };

/// Uniform entry point for the ring operations. For Neg `b` is ignored;
/// for ScalarMul `b` must be a constant.
Polynomial arith(const Polynomial& a, const Polynomial& b, ArithOp op);

inline constexpr unsigned kInfiniteOrder = UINT_MAX;

/// Largest k with f in <vars>^k; kInfiniteOrder for f = 0.
unsigned order_at(const Polynomial& f, std::span<const VarId> vars);

struct Factored {
  unsigned power;
  Polynomial rest;
};

/// f = v^power * rest with v not dividing rest. Throws ZeroPolynomial.
Factored factor_out(const Polynomial& f, VarId v);

bool is_homogeneous(const Polynomial& f, std::span<const VarId> vars);

/// Exact quotient a / b. Throws DivisionByZero or NotExact.
Polynomial exact_divide(const Polynomial& a, const Polynomial& b);

}  // namespace detsing
