#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "detsing/polynomial.hpp"

namespace detsing {

class GroebnerBasis;

/// Finite generator list in a ring. Zero generators are dropped on
/// construction. Copies share a write-once Gröbner basis cache keyed by
/// monomial order.
class Ideal {
 public:
  explicit Ideal(RingPtr ring, std::vector<Polynomial> generators = {});

  static Ideal unit(RingPtr ring) { return Ideal(ring, {Polynomial::constant(ring, 1)}); }

  const RingPtr& ring() const { return ring_; }
  const std::vector<Polynomial>& generators() const { return generators_; }
  bool is_zero() const { return generators_.empty(); }

  /// Appends g unless it is zero or proportional to an existing generator.
  void add_unique(const Polynomial& g);

  std::shared_ptr<const GroebnerBasis> cached_basis(const std::string& order_key) const;
  /// First writer wins; returns the basis now held by the cache.
  std::shared_ptr<const GroebnerBasis> store_basis(const std::string& order_key,
                                                   std::shared_ptr<const GroebnerBasis> basis) const;

 private:
  struct Cache {
    std::mutex mutex;
    std::map<std::string, std::shared_ptr<const GroebnerBasis>> bases;
  };

  RingPtr ring_;
  std::vector<Polynomial> generators_;
  std::vector<Polynomial> monic_;  // lazily filled by add_unique
  std::shared_ptr<Cache> cache_;
};

}  // namespace detsing
