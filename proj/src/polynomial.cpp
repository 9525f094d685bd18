#include "detsing/polynomial.hpp"

#include <algorithm>

#include "detsing/error.hpp"
#include "detsing/poly_io.hpp"

namespace detsing {

namespace {

bool term_greater(const Term& a, const Term& b) { return compare_grevlex(a.mono, b.mono) > 0; }

std::vector<Term> merge(const CoefficientField& field, const std::vector<Term>& a,
                        const std::vector<Term>& b, bool subtract) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    const int c = compare_grevlex(a[i].mono, b[j].mono);
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      out.push_back({b[j].mono, subtract ? field.neg(b[j].coeff) : b[j].coeff});
      ++j;
    } else {
      Scalar s = subtract ? field.sub(a[i].coeff, b[j].coeff) : field.add(a[i].coeff, b[j].coeff);
      if (s != 0) out.push_back({a[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back({b[j].mono, subtract ? field.neg(b[j].coeff) : b[j].coeff});
  return out;
}

}  // namespace

std::uint64_t mask_of(std::span<const VarId> vars) {
  std::uint64_t mask = 0;
  for (VarId v : vars) {
    if (v >= kMaxVariables) throw Error(ErrorCode::BadIndex, "variable id out of range");
    mask |= std::uint64_t{1} << v;
  }
  return mask;
}

Polynomial Polynomial::constant(RingPtr ring, const Scalar& c) {
  Scalar v = c;
  ring->field().normalize(v);
  Polynomial p(std::move(ring));
  if (v != 0) p.terms_.push_back({Monomial(), std::move(v)});
  return p;
}

Polynomial Polynomial::constant(RingPtr ring, long c) { return constant(std::move(ring), Scalar(c)); }

Polynomial Polynomial::variable(RingPtr ring, VarId v) {
  if (v >= ring->size()) throw Error(ErrorCode::BadIndex, "variable id out of range");
  Polynomial p(std::move(ring));
  p.terms_.push_back({Monomial::variable(v), Scalar(1)});
  return p;
}

Polynomial Polynomial::variable(RingPtr ring, std::string_view name) {
  const VarId v = ring->id(name);
  return variable(std::move(ring), v);
}

Polynomial Polynomial::term(RingPtr ring, Monomial mono, const Scalar& c) {
  Scalar v = c;
  ring->field().normalize(v);
  Polynomial p(std::move(ring));
  if (v != 0) p.terms_.push_back({std::move(mono), std::move(v)});
  return p;
}

Polynomial Polynomial::from_terms(RingPtr ring, std::vector<Term> terms) {
  const CoefficientField& field = ring->field();
  for (Term& t : terms) field.normalize(t.coeff);
  std::sort(terms.begin(), terms.end(), term_greater);
  Polynomial p(std::move(ring));
  p.terms_.reserve(terms.size());
  for (std::size_t i = 0; i < terms.size();) {
    Scalar sum = std::move(terms[i].coeff);
    std::size_t j = i + 1;
    while (j < terms.size() && terms[j].mono == terms[i].mono) {
      sum = field.add(sum, terms[j].coeff);
      ++j;
    }
    if (sum != 0) p.terms_.push_back({terms[i].mono, std::move(sum)});
    i = j;
  }
  return p;
}

Polynomial Polynomial::from_sorted_terms(RingPtr ring, std::vector<Term> terms) {
  Polynomial p(std::move(ring));
  p.terms_ = std::move(terms);
  return p;
}

unsigned Polynomial::total_degree() const {
  unsigned d = 0;
  for (const Term& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

std::uint64_t Polynomial::support() const {
  std::uint64_t s = 0;
  for (const Term& t : terms_) s |= t.mono.support();
  return s;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(ring_);
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) r.terms_.push_back({t.mono, field().neg(t.coeff)});
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  require_same_ring(ring_, other.ring_);
  if (other.is_zero()) return *this;
  terms_ = merge(field(), terms_, other.terms_, false);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  require_same_ring(ring_, other.ring_);
  if (other.is_zero()) return *this;
  terms_ = merge(field(), terms_, other.terms_, true);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  require_same_ring(a.ring_, b.ring_);
  if (a.is_zero() || b.is_zero()) return Polynomial(a.ring_);
  if (a.size() == 1) return b.mul_term(a.terms_[0].mono, a.terms_[0].coeff);
  if (b.size() == 1) return a.mul_term(b.terms_[0].mono, b.terms_[0].coeff);
  const CoefficientField& field = a.field();
  // Row-by-row merge keeps intermediate results sorted; cheaper than a global
  // sort when one factor is short.
  const Polynomial& small = a.size() <= b.size() ? a : b;
  const Polynomial& large = a.size() <= b.size() ? b : a;
  if (small.size() <= 8) {
    std::vector<Term> acc;
    for (const Term& t : small.terms_) {
      acc = merge(field, acc, large.mul_term(t.mono, t.coeff).terms_, false);
    }
    Polynomial r(a.ring_);
    r.terms_ = std::move(acc);
    return r;
  }
  std::vector<Term> prods;
  prods.reserve(a.size() * b.size());
  for (const Term& s : a.terms_) {
    for (const Term& t : b.terms_) prods.push_back({s.mono * t.mono, field.mul(s.coeff, t.coeff)});
  }
  return Polynomial::from_terms(a.ring_, std::move(prods));
}

Polynomial Polynomial::scaled(const Scalar& c) const {
  Scalar v = c;
  field().normalize(v);
  Polynomial r(ring_);
  if (v == 0) return r;
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) r.terms_.push_back({t.mono, field().mul(t.coeff, v)});
  return r;
}

Polynomial Polynomial::mul_term(const Monomial& m, const Scalar& c) const {
  Polynomial r(ring_);
  if (c == 0) return r;
  r.terms_.reserve(terms_.size());
  const bool unit = (c == 1);
  for (const Term& t : terms_) {
    r.terms_.push_back({t.mono * m, unit ? t.coeff : field().mul(t.coeff, c)});
  }
  return r;
}

Polynomial Polynomial::monic() const {
  if (is_zero() || terms_[0].coeff == 1) return *this;
  return scaled(field().inv(terms_[0].coeff));
}

bool Polynomial::operator==(const Polynomial& other) const {
  if (!same_ring(ring_, other.ring_) || terms_.size() != other.terms_.size()) return false;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(terms_[i].mono == other.terms_[i].mono) || terms_[i].coeff != other.terms_[i].coeff) {
      return false;
    }
  }
  return true;
}

std::string Polynomial::to_string() const { return format_polynomial(*this); }

Polynomial pow(const Polynomial& f, unsigned k) {
  Polynomial result = Polynomial::constant(f.ring(), 1);
  Polynomial base = f;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

bool proportional(const Polynomial& f, const Polynomial& g) {
  if (f.size() != g.size() || !same_ring(f.ring(), g.ring())) return false;
  return f.monic() == g.monic();
}

Polynomial arith(const Polynomial& a, const Polynomial& b, ArithOp op) {
  switch (op) {
    case ArithOp::Add: return a + b;
    case ArithOp::Sub: return a - b;
    case ArithOp::Mul: return a * b;
    case ArithOp::Neg: return -a;
    case ArithOp::ScalarMul:
      require_same_ring(a.ring(), b.ring());
      if (!b.is_constant()) throw Error(ErrorCode::BadParameters, "scalar_mul needs a constant");
      return b.is_zero() ? Polynomial(a.ring()) : a.scaled(b.terms()[0].coeff);
  }
  throw Error(ErrorCode::BadParameters, "unknown arithmetic op");
}

unsigned order_at(const Polynomial& f, std::span<const VarId> vars) {
  if (f.is_zero()) return kInfiniteOrder;
  const std::uint64_t mask = mask_of(vars);
  unsigned best = kInfiniteOrder;
  for (const Term& t : f.terms()) best = std::min(best, t.mono.degree_in(mask));
  return best;
}

Factored factor_out(const Polynomial& f, VarId v) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "cannot factor the zero polynomial");
  unsigned k = kMaxExponent;
  for (const Term& t : f.terms()) k = std::min(k, t.mono.exponent(v));
  if (k == 0) return {0, f};
  const Monomial divisor = Monomial::variable(v, k);
  std::vector<Term> terms;
  terms.reserve(f.size());
  for (const Term& t : f.terms()) terms.push_back({t.mono / divisor, t.coeff});
  return {k, Polynomial::from_sorted_terms(f.ring(), std::move(terms))};
}

bool is_homogeneous(const Polynomial& f, std::span<const VarId> vars) {
  if (f.is_zero()) return true;
  const std::uint64_t mask = mask_of(vars);
  const unsigned d = f.terms()[0].mono.degree_in(mask);
  for (const Term& t : f.terms()) {
    if (t.mono.degree_in(mask) != d) return false;
  }
  return true;
}

Polynomial exact_divide(const Polynomial& a, const Polynomial& b) {
  require_same_ring(a.ring(), b.ring());
  if (b.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by the zero polynomial");
  const CoefficientField& field = a.field();
  const Term& lead = b.leading_term();
  const Scalar lead_inv = field.inv(lead.coeff);
  std::vector<Term> quotient;
  Polynomial rest = a;
  while (!rest.is_zero()) {
    const Term& t = rest.leading_term();
    if (!lead.mono.divides(t.mono)) {
      throw Error(ErrorCode::NotExact, "polynomial division leaves a remainder");
    }
    const Monomial m = t.mono / lead.mono;
    const Scalar c = field.mul(t.coeff, lead_inv);
    quotient.push_back({m, c});
    rest -= b.mul_term(m, c);
  }
  return Polynomial::from_terms(a.ring(), std::move(quotient));
}

}  // namespace detsing
