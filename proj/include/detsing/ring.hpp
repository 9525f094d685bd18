#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "detsing/field.hpp"

namespace detsing {

using VarId = std::size_t;

class Ring;
using RingPtr = std::shared_ptr<const Ring>;

/// Polynomial ring over a coefficient field with named variables.
/// Variable ids are dense 0..n-1 in the order given at construction.
class Ring {
 public:
  /// Throws DuplicateVariable, SyntaxError (bad name) or ResourceLimit
  /// (more variables than a Monomial can hold).
  static RingPtr make(CoefficientField field, std::vector<std::string> names);

  const CoefficientField& field() const { return field_; }
  std::size_t size() const { return names_.size(); }
  const std::string& name(VarId v) const { return names_.at(v); }
  const std::vector<std::string>& names() const { return names_; }

  std::optional<VarId> find(std::string_view name) const;
  /// Throws UnknownVariable.
  VarId id(std::string_view name) const;

  bool operator==(const Ring& other) const {
    return field_ == other.field_ && names_ == other.names_;
  }

 private:
  Ring(CoefficientField field, std::vector<std::string> names);

  CoefficientField field_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, VarId> index_;
};

inline RingPtr ring_new(CoefficientField field, std::vector<std::string> names) {
  return Ring::make(std::move(field), std::move(names));
}

bool same_ring(const RingPtr& a, const RingPtr& b);
/// Throws RingMismatch unless same_ring(a, b).
void require_same_ring(const RingPtr& a, const RingPtr& b);

bool is_valid_variable_name(std::string_view name);

}  // namespace detsing
