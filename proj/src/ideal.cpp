#include "detsing/ideal.hpp"

#include <algorithm>

namespace detsing {

Ideal::Ideal(RingPtr ring, std::vector<Polynomial> generators)
    : ring_(std::move(ring)), cache_(std::make_shared<Cache>()) {
  generators_.reserve(generators.size());
  for (Polynomial& g : generators) {
    require_same_ring(g.ring(), ring_);
    if (!g.is_zero()) generators_.push_back(std::move(g));
  }
}

void Ideal::add_unique(const Polynomial& g) {
  require_same_ring(g.ring(), ring_);
  if (g.is_zero()) return;
  while (monic_.size() < generators_.size()) monic_.push_back(generators_[monic_.size()].monic());
  Polynomial key = g.monic();
  const bool seen = std::any_of(monic_.begin(), monic_.end(), [&](const Polynomial& h) {
    return h.size() == key.size() && h == key;
  });
  if (!seen) {
    generators_.push_back(g);
    monic_.push_back(std::move(key));
    cache_ = std::make_shared<Cache>();
  }
}

std::shared_ptr<const GroebnerBasis> Ideal::cached_basis(const std::string& order_key) const {
  std::lock_guard lock(cache_->mutex);
  auto it = cache_->bases.find(order_key);
  return it == cache_->bases.end() ? nullptr : it->second;
}

std::shared_ptr<const GroebnerBasis> Ideal::store_basis(
    const std::string& order_key, std::shared_ptr<const GroebnerBasis> basis) const {
  std::lock_guard lock(cache_->mutex);
  auto [it, inserted] = cache_->bases.emplace(order_key, std::move(basis));
  return it->second;
}

}  // namespace detsing
