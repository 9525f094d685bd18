#include "detsing/verify.hpp"

#include <algorithm>

#include "detsing/error.hpp"
#include "detsing/matrix.hpp"
#include "detsing/poly_io.hpp"
#include "detsing/substitution.hpp"

namespace detsing {

RingPtr extend_ring(const RingPtr& ring, const std::string& base_name) {
  std::string name = base_name;
  for (int k = 1; ring->find(name); ++k) name = base_name + std::to_string(k);
  std::vector<std::string> names = ring->names();
  names.push_back(name);
  return ring_new(ring->field(), std::move(names));
}

Polynomial embed(const Polynomial& f, const RingPtr& wider) {
  if (wider->size() < f.ring()->size() || !(wider->field() == f.field())) {
    throw Error(ErrorCode::RingMismatch, "target ring does not extend the source ring");
  }
  for (VarId v = 0; v < f.ring()->size(); ++v) {
    if (wider->name(v) != f.ring()->name(v)) throw Error(ErrorCode::RingMismatch, "variable lists differ");
  }
  // Same ids, so the grevlex order of the terms is unchanged.
  return Polynomial::from_sorted_terms(wider, f.terms());
}

Polynomial restrict_to(const Polynomial& f, const RingPtr& narrower) {
  const std::uint64_t allowed =
      narrower->size() >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << narrower->size()) - 1;
  if ((f.support() & ~allowed) != 0) throw Error(ErrorCode::RingMismatch, "polynomial uses extra variables");
  for (VarId v = 0; v < narrower->size(); ++v) {
    if (narrower->name(v) != f.ring()->name(v)) throw Error(ErrorCode::RingMismatch, "variable lists differ");
  }
  return Polynomial::from_sorted_terms(narrower, f.terms());
}

bool ideal_contains(const Ideal& ideal, const Polynomial& f, const MonomialOrder& order) {
  require_same_ring(f.ring(), ideal.ring());
  if (f.is_zero()) return true;
  if (ideal.is_zero()) return false;
  return groebner_cached(ideal, order)->contains(f);
}

bool ideal_subset(const Ideal& small, const Ideal& big, const MonomialOrder& order) {
  require_same_ring(small.ring(), big.ring());
  if (small.is_zero()) return true;
  if (big.is_zero()) return false;
  const auto basis = groebner_cached(big, order);
  return std::all_of(small.generators().begin(), small.generators().end(),
                     [&](const Polynomial& g) { return basis->contains(g); });
}

bool ideal_equal(const Ideal& a, const Ideal& b, const MonomialOrder& order) {
  return ideal_subset(a, b, order) && ideal_subset(b, a, order);
}

namespace {

/// I + <1 - t u> in the ring extended by t.
Ideal rabinowitsch(const Ideal& ideal, const Polynomial& u, const RingPtr& wide) {
  std::vector<Polynomial> gens;
  gens.reserve(ideal.generators().size() + 1);
  for (const Polynomial& g : ideal.generators()) gens.push_back(embed(g, wide));
  const Polynomial t = Polynomial::variable(wide, wide->size() - 1);
  gens.push_back(Polynomial::constant(wide, 1) - t * embed(u, wide));
  return Ideal(wide, std::move(gens));
}

}  // namespace

bool radical_member(const Polynomial& f, const Ideal& ideal) {
  require_same_ring(f.ring(), ideal.ring());
  if (f.is_zero()) return true;
  if (ideal.is_zero()) return false;
  const auto basis = groebner_cached(ideal);
  if (basis->is_unit()) return true;
  Polynomial power = f;
  for (int k = 1; k <= 3; ++k) {
    if (basis->contains(power)) return true;
    power *= f;
  }
  const RingPtr wide = extend_ring(ideal.ring());
  return groebner(rabinowitsch(ideal, f, wide)).is_unit();
}

Ideal saturate(const Ideal& ideal, const Polynomial& unit) {
  require_same_ring(unit.ring(), ideal.ring());
  if (unit.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "cannot saturate by zero");
  if (unit.is_constant() || ideal.is_zero()) return ideal;
  const RingPtr wide = extend_ring(ideal.ring());
  const std::vector<VarId> front{wide->size() - 1};
  const GroebnerBasis basis = groebner(rabinowitsch(ideal, unit, wide), MonomialOrder::elimination(front));
  const std::uint64_t t_mask = mask_of(front);
  std::vector<Polynomial> kept;
  for (const Polynomial& g : basis.elements()) {
    if ((g.support() & t_mask) == 0) kept.push_back(restrict_to(g, ideal.ring()));
  }
  return Ideal(ideal.ring(), std::move(kept));
}

LocalizedIdeal::LocalizedIdeal(const Ideal& ideal, const Polynomial& unit, const MonomialOrder& order)
    : base_(ideal.ring()) {
  require_same_ring(unit.ring(), base_);
  if (unit.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "cannot localize at zero");
  wide_ = extend_ring(base_);
  basis_ = std::make_shared<const GroebnerBasis>(groebner(rabinowitsch(ideal, unit, wide_), order));
}

bool LocalizedIdeal::contains(const Polynomial& f) const {
  require_same_ring(f.ring(), base_);
  return basis_->contains(embed(f, wide_));
}

bool LocalizedIdeal::contains_all(const Ideal& other) const {
  return std::all_of(other.generators().begin(), other.generators().end(),
                     [&](const Polynomial& g) { return contains(g); });
}

bool localized_equal(const Ideal& a, const Ideal& b, const Polynomial& unit, const MonomialOrder& order) {
  return LocalizedIdeal(b, unit, order).contains_all(a) && LocalizedIdeal(a, unit, order).contains_all(b);
}

std::optional<std::vector<VarId>> coordinate_subspace(const Ideal& ideal) {
  if (ideal.is_zero()) return std::vector<VarId>{};
  const auto basis = groebner_cached(ideal);
  std::vector<VarId> vars;
  for (const Polynomial& g : basis->elements()) {
    if (g.size() != 1 || g.total_degree() != 1) return std::nullopt;
    vars.push_back(static_cast<VarId>(std::countr_zero(g.support())));
  }
  std::sort(vars.begin(), vars.end());
  return vars;
}

void to_json(nlohmann::json& j, const Verdict& v) {
  j = nlohmann::json{{"check", v.check}, {"inputs", v.inputs}, {"pass", v.pass}};
  if (v.witness) j["witness"] = *v.witness;
}

Fact parse_fact(const std::string& name) {
  if (name == "F1") return Fact::F1;
  if (name == "F2") return Fact::F2;
  if (name == "F3") return Fact::F3;
  if (name == "Eq2l") return Fact::Eq2l;
  throw Error(ErrorCode::BadParameters, "unknown fact '" + name + "'");
}

std::string to_string(Fact fact) {
  switch (fact) {
    case Fact::F1: return "F1";
    case Fact::F2: return "F2";
    case Fact::F3: return "F3";
    case Fact::Eq2l: return "Eq2l";
  }
  return "?";
}

namespace {

/// First generator of `from` outside sqrt(to), if any.
std::optional<Polynomial> radical_escape(const Ideal& from, const Ideal& to) {
  for (const Polynomial& g : from.generators()) {
    if (!radical_member(g, to)) return g;
  }
  return std::nullopt;
}

Ideal pfaffian_ideal(const GenericMatrix& a, std::size_t size) {
  Ideal out(a.ring());
  for (const auto& idx : subsets(a.size(), size)) {
    const GenericMatrix sub = submatrix(a, idx, idx);
    out.add_unique(pfaffian(GenericMatrix(a.ring(), sub.entries(), MatrixKind::SkewSymmetric)));
  }
  return out;
}

}  // namespace

Verdict check_fact(Fact fact, std::size_t m, const CoefficientField& field, std::size_t l) {
  Verdict v;
  v.check = "fact:" + to_string(fact);
  v.inputs = {{"m", m}, {"field", field.to_string()}};
  const GenericMatrix a = generic_skew(m, field);
  switch (fact) {
    case Fact::F1: {
      if (m % 2 == 0) throw Error(ErrorCode::BadParameters, "F1 concerns odd sizes");
      const Polynomial det = determinant(a);
      v.pass = det.is_zero();
      if (!v.pass) v.witness = format_polynomial(det);
      return v;
    }
    case Fact::F3: {
      if (m % 2 != 0) throw Error(ErrorCode::BadParameters, "F3 concerns even sizes");
      const Polynomial diff = determinant(a) - pow(pfaffian(a), 2);
      v.pass = diff.is_zero();
      if (!v.pass) v.witness = format_polynomial(diff);
      return v;
    }
    case Fact::F2:
    case Fact::Eq2l: {
      v.inputs["l"] = l;
      if (l < 1 || 2 * l > m) throw Error(ErrorCode::BadParameters, "need 1 <= l and 2l <= m");
      const Ideal even = minors_ideal(a, 2 * l);
      const Ideal odd = minors_ideal(a, 2 * l - 1);
      std::vector<const Ideal*> chain{&even, &odd};
      Ideal pf(a.ring());
      if (fact == Fact::Eq2l) {
        pf = pfaffian_ideal(a, 2 * l);
        chain.push_back(&pf);
      }
      v.pass = true;
      for (std::size_t k = 0; k < chain.size() && v.pass; ++k) {
        const auto escape = radical_escape(*chain[k], *chain[(k + 1) % chain.size()]);
        if (escape) {
          v.pass = false;
          v.witness = format_polynomial(*escape);
        }
      }
      return v;
    }
  }
  return v;
}

}  // namespace detsing
