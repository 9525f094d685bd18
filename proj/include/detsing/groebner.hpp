#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "detsing/ideal.hpp"
#include "detsing/polynomial.hpp"

namespace detsing {

class MonomialOrder {
 public:
  enum class Kind { GradedReverseLex, Lex, EliminationBlock };

  static MonomialOrder grevlex() { return MonomialOrder(Kind::GradedReverseLex, 0); }
  static MonomialOrder lex() { return MonomialOrder(Kind::Lex, 0); }
  /// Product order: grevlex on `front`, ties broken by grevlex on the rest.
  /// Eliminates the front variables.
  static MonomialOrder elimination(std::span<const VarId> front) {
    return MonomialOrder(Kind::EliminationBlock, mask_of(front));
  }

  Kind kind() const { return kind_; }
  std::uint64_t front_mask() const { return front_; }

  /// >0 if a > b, <0 if a < b, 0 if equal.
  int compare(const Monomial& a, const Monomial& b) const;

  std::string key() const;

 private:
  MonomialOrder(Kind kind, std::uint64_t front) : kind_(kind), front_(front) {}

  Kind kind_;
  std::uint64_t front_;
};

/// Explicit bounds; exceeding one throws ResourceLimit.
struct ResourceCaps {
  std::size_t max_basis = 20000;
  std::size_t max_terms = 200000;
  std::size_t max_pairs = 2000000;

  /// Process-wide defaults: the values installed by set_defaults, else the
  /// built-in ones with DETSING_MAX_TERMS overriding max_terms when set.
  static ResourceCaps defaults();
  static void set_defaults(const ResourceCaps& caps);
};

/// Reduced Gröbner basis. Elements are monic and sorted by increasing
/// leading monomial in the basis order.
class GroebnerBasis {
 public:
  GroebnerBasis(RingPtr ring, MonomialOrder order, std::vector<Polynomial> elements);

  const RingPtr& ring() const { return ring_; }
  const MonomialOrder& order() const { return order_; }
  const std::vector<Polynomial>& elements() const { return elements_; }
  const std::vector<Monomial>& leading_monomials() const { return leads_; }

  bool is_unit() const { return elements_.size() == 1 && elements_[0].is_constant(); }
  bool is_zero() const { return elements_.empty(); }

  Polynomial normal_form(const Polynomial& f) const;
  bool contains(const Polynomial& f) const { return normal_form(f).is_zero(); }

 private:
  RingPtr ring_;
  MonomialOrder order_;
  std::vector<Polynomial> elements_;
  std::vector<Monomial> leads_;
};

/// Buchberger's algorithm with sugar selection and Gebauer–Möller pruning.
GroebnerBasis groebner(const Ideal& ideal, const MonomialOrder& order = MonomialOrder::grevlex(),
                       const ResourceCaps& caps = ResourceCaps::defaults());

/// As groebner(), but memoized in the ideal's cache.
std::shared_ptr<const GroebnerBasis> groebner_cached(const Ideal& ideal,
                                                     const MonomialOrder& order = MonomialOrder::grevlex(),
                                                     const ResourceCaps& caps = ResourceCaps::defaults());

/// Leading monomial of f under `order`. Precondition: f nonzero.
Monomial leading_monomial(const Polynomial& f, const MonomialOrder& order);

}  // namespace detsing
