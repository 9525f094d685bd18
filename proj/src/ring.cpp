#include "detsing/ring.hpp"

#include <cctype>

#include "detsing/error.hpp"
#include "detsing/monomial.hpp"

namespace detsing {

bool is_valid_variable_name(std::string_view name) {
  if (name.empty() || !std::isalpha(static_cast<unsigned char>(name.front()))) return false;
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

Ring::Ring(CoefficientField field, std::vector<std::string> names)
    : field_(std::move(field)), names_(std::move(names)) {
  for (VarId v = 0; v < names_.size(); ++v) {
    if (!is_valid_variable_name(names_[v])) {
      throw Error(ErrorCode::SyntaxError, "invalid variable name '" + names_[v] + "'");
    }
    if (!index_.emplace(names_[v], v).second) {
      throw Error(ErrorCode::DuplicateVariable, "variable '" + names_[v] + "' repeated");
    }
  }
}

RingPtr Ring::make(CoefficientField field, std::vector<std::string> names) {
  if (names.size() > kMaxVariables) {
    throw Error(ErrorCode::ResourceLimit, std::to_string(names.size()) +
                                              " variables exceed the limit of " +
                                              std::to_string(kMaxVariables));
  }
  return RingPtr(new Ring(std::move(field), std::move(names)));
}

std::optional<VarId> Ring::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VarId Ring::id(std::string_view name) const {
  if (auto v = find(name)) return *v;
  throw Error(ErrorCode::UnknownVariable, "no variable '" + std::string(name) + "' in ring");
}

bool same_ring(const RingPtr& a, const RingPtr& b) {
  return a == b || (a && b && *a == *b);
}

void require_same_ring(const RingPtr& a, const RingPtr& b) {
  if (!same_ring(a, b)) throw Error(ErrorCode::RingMismatch, "operands live in different rings");
}

}  // namespace detsing
