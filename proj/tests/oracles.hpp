#pragma once

#include <random>
#include <vector>

#include "detsing/polynomial.hpp"
#include "random_poly.hpp"

namespace detsing::testing {

// Dense linear algebra oracle: f in span{ m * g : deg(m*g) <= d }. For
// homogeneous g and f of degree d this decides membership exactly.
inline bool macaulay_member(const Polynomial& f, const std::vector<Polynomial>& gens, unsigned d) {
  const RingPtr& ring = f.ring();
  const CoefficientField& field = ring->field();
  std::vector<Monomial> monos{Monomial()};
  for (unsigned deg = 1; deg <= d; ++deg) {
    std::vector<Monomial> next;
    for (const Monomial& m : monos) {
      if (m.degree() != deg - 1) continue;
      unsigned last = 0;
      for (VarId v = 0; v < ring->size(); ++v)
        if (m.exponent(v) > 0) last = static_cast<unsigned>(v);
      for (VarId v = last; v < ring->size(); ++v) next.push_back(m * Monomial::variable(v));
    }
    monos.insert(monos.end(), next.begin(), next.end());
  }
  std::vector<TermMap> rows;
  for (const Polynomial& g : gens) {
    for (const Monomial& m : monos) {
      if (m.degree() + g.total_degree() > d) continue;
      rows.push_back(to_map(g.mul_term(m, 1)));
    }
  }
  // Row-reduce, then reduce f against the echelon rows.
  std::vector<std::pair<std::vector<unsigned>, TermMap>> echelon;
  auto reduce = [&](TermMap v) {
    for (const auto& [pivot, row] : echelon) {
      auto it = v.find(pivot);
      if (it == v.end()) continue;
      const Scalar c = it->second;
      for (const auto& [k, x] : row) {
        auto [jt, fresh] = v.try_emplace(k, field.neg(field.mul(c, x)));
        if (!fresh) jt->second = field.sub(jt->second, field.mul(c, x));
        if (jt->second == 0) v.erase(jt);
      }
    }
    return v;
  };
  for (auto& row : rows) {
    auto v = reduce(std::move(row));
    if (v.empty()) continue;
    const auto pivot = v.begin()->first;
    const Scalar inv = field.inv(v.begin()->second);
    for (auto& [k, x] : v) x = field.mul(x, inv);
    for (auto& [p, other] : echelon) {
      auto it = other.find(pivot);
      if (it == other.end()) continue;
      const Scalar c = it->second;
      for (const auto& [k, x] : v) {
        auto [jt, fresh] = other.try_emplace(k, field.neg(field.mul(c, x)));
        if (!fresh) jt->second = field.sub(jt->second, field.mul(c, x));
        if (jt->second == 0) other.erase(jt);
      }
    }
    echelon.emplace_back(pivot, std::move(v));
  }
  return reduce(to_map(f)).empty();
}

inline Polynomial random_homogeneous(const RingPtr& r, std::mt19937& rng, unsigned degree, int terms) {
  std::vector<Term> ts;
  std::uniform_int_distribution<int> coeff(-4, 4);
  std::uniform_int_distribution<int> var(0, static_cast<int>(r->size()) - 1);
  for (int k = 0; k < terms; ++k) {
    Monomial m;
    for (unsigned e = 0; e < degree; ++e) m = m * Monomial::variable(static_cast<VarId>(var(rng)));
    ts.push_back({m, r->field().from_integer(coeff(rng))});
  }
  return Polynomial::from_terms(r, ts);
}

}  // namespace detsing::testing
