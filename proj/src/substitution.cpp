#include "detsing/substitution.hpp"

#include <algorithm>
#include <bit>
#include <optional>

#include "detsing/error.hpp"

namespace detsing {

namespace {

/// powers[v][e] = base_v^e, filled lazily up to the exponents f needs.
class PowerCache {
 public:
  PowerCache(const std::vector<const Polynomial*>& bases, const RingPtr& target)
      : bases_(bases), target_(target), powers_(bases.size()) {}

  const Polynomial& get(VarId v, unsigned e) {
    auto& list = powers_[v];
    if (list.empty()) list.push_back(Polynomial::constant(target_, 1));
    while (list.size() <= e) list.push_back(list.back() * *bases_[v]);
    return list[e];
  }

 private:
  const std::vector<const Polynomial*>& bases_;
  RingPtr target_;
  std::vector<std::vector<Polynomial>> powers_;
};

Polynomial evaluate(const Polynomial& f, const std::vector<const Polynomial*>& bases,
                    const RingPtr& target, const std::vector<const Polynomial*>* dens = nullptr,
                    const std::vector<unsigned>* max_exp = nullptr) {
  PowerCache num_powers(bases, target);
  std::optional<PowerCache> den_powers;
  if (dens) den_powers.emplace(*dens, target);
  std::vector<Term> acc;
  for (const Term& t : f.terms()) {
    Scalar c = t.coeff;
    Polynomial prod = Polynomial::constant(target, c);
    for (std::uint64_t bits = t.mono.support(); bits != 0; bits &= bits - 1) {
      const VarId v = static_cast<VarId>(std::countr_zero(bits));
      prod = prod * num_powers.get(v, t.mono.exponent(v));
      if (prod.is_zero()) break;
    }
    if (dens) {
      for (VarId v = 0; v < dens->size(); ++v) {
        const unsigned missing = (*max_exp)[v] - t.mono.exponent(v);
        if (missing > 0) prod = prod * den_powers->get(v, missing);
      }
    }
    for (const Term& p : prod.terms()) acc.push_back(p);
  }
  return Polynomial::from_terms(target, std::move(acc));
}

}  // namespace

Substitution::Substitution(RingPtr source, RingPtr target, std::vector<Polynomial> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_->size()) {
    throw Error(ErrorCode::BadParameters, "substitution needs one image per source variable");
  }
  for (const Polynomial& p : images_) require_same_ring(p.ring(), target_);
}

Substitution Substitution::by_name(RingPtr source, RingPtr target) {
  std::vector<Polynomial> images;
  images.reserve(source->size());
  for (VarId v = 0; v < source->size(); ++v) {
    images.push_back(Polynomial::variable(target, source->name(v)));
  }
  return Substitution(std::move(source), std::move(target), std::move(images));
}

Polynomial transfer_by_name(const Polynomial& f, const RingPtr& target) {
  if (!(f.field() == target->field())) throw Error(ErrorCode::RingMismatch, "coefficient fields differ");
  const RingPtr& src = f.ring();
  std::vector<VarId> map(src->size(), 0);
  for (std::uint64_t bits = f.support(); bits != 0; bits &= bits - 1) {
    const VarId v = static_cast<VarId>(std::countr_zero(bits));
    map[v] = target->id(src->name(v));
  }
  std::vector<Term> terms;
  terms.reserve(f.size());
  for (const Term& t : f.terms()) {
    Monomial m;
    for (std::uint64_t bits = t.mono.support(); bits != 0; bits &= bits - 1) {
      const VarId v = static_cast<VarId>(std::countr_zero(bits));
      m.set_exponent(map[v], t.mono.exponent(v));
    }
    terms.push_back({m, t.coeff});
  }
  return Polynomial::from_terms(target, std::move(terms));
}

Substitution Substitution::then(const Substitution& next) const {
  require_same_ring(target_, next.source());
  std::vector<Polynomial> images;
  images.reserve(images_.size());
  for (const Polynomial& p : images_) images.push_back(substitute(p, next));
  return Substitution(source_, next.target(), std::move(images));
}

Polynomial substitute(const Polynomial& f, const Substitution& s) {
  require_same_ring(f.ring(), s.source());
  std::vector<const Polynomial*> bases;
  bases.reserve(s.images().size());
  for (const Polynomial& p : s.images()) bases.push_back(&p);
  return evaluate(f, bases, s.target());
}

LocalizedSubstitution::LocalizedSubstitution(RingPtr source, RingPtr target,
                                             std::vector<Fraction> images)
    : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
  if (images_.size() != source_->size()) {
    throw Error(ErrorCode::BadParameters, "substitution needs one image per source variable");
  }
  for (const Fraction& q : images_) {
    require_same_ring(q.num.ring(), target_);
    require_same_ring(q.den.ring(), target_);
    if (q.den.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator in image");
  }
}

LocalizedSubstitution LocalizedSubstitution::from(const Substitution& s) {
  std::vector<Fraction> images;
  images.reserve(s.images().size());
  for (const Polynomial& p : s.images()) images.push_back({p, Polynomial::constant(s.target(), 1)});
  return LocalizedSubstitution(s.source(), s.target(), std::move(images));
}

Fraction LocalizedSubstitution::apply(const Polynomial& f) const {
  require_same_ring(f.ring(), source_);
  std::vector<const Polynomial*> nums;
  std::vector<const Polynomial*> dens;
  std::vector<unsigned> max_exp(images_.size(), 0);
  for (const Term& t : f.terms()) {
    for (VarId v = 0; v < images_.size(); ++v) max_exp[v] = std::max(max_exp[v], t.mono.exponent(v));
  }
  for (const Fraction& q : images_) {
    nums.push_back(&q.num);
    dens.push_back(&q.den);
  }
  Polynomial den = Polynomial::constant(target_, 1);
  bool trivial = true;
  for (VarId v = 0; v < images_.size(); ++v) {
    if (!(images_[v].den.is_constant() && images_[v].den == Polynomial::constant(target_, 1))) {
      trivial = false;
      if (max_exp[v] > 0) den = den * pow(images_[v].den, max_exp[v]);
    }
  }
  if (trivial) return {evaluate(f, nums, target_), den};
  return {evaluate(f, nums, target_, &dens, &max_exp), den};
}

LocalizedSubstitution LocalizedSubstitution::then(const LocalizedSubstitution& next) const {
  require_same_ring(target_, next.source());
  std::vector<Fraction> images;
  images.reserve(images_.size());
  for (const Fraction& q : images_) {
    const Fraction a = next.apply(q.num);
    const Fraction b = next.apply(q.den);
    images.push_back({a.num * b.den, b.num * a.den});
  }
  return LocalizedSubstitution(source_, next.target(), std::move(images));
}

}  // namespace detsing
