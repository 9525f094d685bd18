#pragma once

#include <map>
#include <random>
#include <vector>

#include "detsing/polynomial.hpp"

namespace detsing::testing {

inline Polynomial random_polynomial(const RingPtr& ring, std::mt19937& rng, int max_terms, int max_exp,
                                    int coeff_range = 5) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> exp(0, max_exp);
  std::uniform_int_distribution<int> coeff(-coeff_range, coeff_range);
  std::vector<Term> terms;
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    Monomial m;
    for (VarId v = 0; v < ring->size(); ++v) {
      if (rng() % 2 == 0) m.set_exponent(v, static_cast<unsigned>(exp(rng)));
    }
    terms.push_back({m, ring->field().from_integer(coeff(rng))});
  }
  return Polynomial::from_terms(ring, std::move(terms));
}

/// Independent dense-key representation used as an arithmetic oracle.
using TermMap = std::map<std::vector<unsigned>, Scalar>;

inline TermMap to_map(const Polynomial& f) {
  TermMap out;
  for (const Term& t : f.terms()) {
    std::vector<unsigned> key(f.ring()->size());
    for (VarId v = 0; v < key.size(); ++v) key[v] = t.mono.exponent(v);
    out[key] = t.coeff;
  }
  return out;
}

inline TermMap map_product(const TermMap& a, const TermMap& b, const CoefficientField& field) {
  TermMap out;
  for (const auto& [ka, ca] : a) {
    for (const auto& [kb, cb] : b) {
      std::vector<unsigned> k(ka.size());
      for (std::size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
      auto [it, fresh] = out.try_emplace(k, field.mul(ca, cb));
      if (!fresh) it->second = field.add(it->second, field.mul(ca, cb));
    }
  }
  for (auto it = out.begin(); it != out.end();) {
    it = it->second == 0 ? out.erase(it) : std::next(it);
  }
  return out;
}

}  // namespace detsing::testing
