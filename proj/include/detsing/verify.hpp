#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "detsing/groebner.hpp"
#include "detsing/ideal.hpp"
#include "detsing/polynomial.hpp"

namespace detsing {

/// Ring with one extra variable appended after the existing ones.
RingPtr extend_ring(const RingPtr& ring, const std::string& base_name = "t");

/// Reinterprets f in `wider`, whose leading variables coincide with f's ring.
Polynomial embed(const Polynomial& f, const RingPtr& wider);

/// Inverse of embed for polynomials not involving the extra variables.
Polynomial restrict_to(const Polynomial& f, const RingPtr& narrower);

bool ideal_contains(const Ideal& ideal, const Polynomial& f,
                    const MonomialOrder& order = MonomialOrder::grevlex());
/// Every generator of `small` lies in `big`.
bool ideal_subset(const Ideal& small, const Ideal& big, const MonomialOrder& order = MonomialOrder::grevlex());
bool ideal_equal(const Ideal& a, const Ideal& b, const MonomialOrder& order = MonomialOrder::grevlex());

/// f in sqrt(I): tries f^k in I for small k, then 1 in I + <1 - t f>.
bool radical_member(const Polynomial& f, const Ideal& ideal);

/// I : u^inf by eliminating t from I + <1 - t u>.
Ideal saturate(const Ideal& ideal, const Polynomial& unit);

/// The localization I R[1/u], with membership decided by
/// f in I : u^inf  iff  f in I + <1 - t u>.
class LocalizedIdeal {
 public:
  LocalizedIdeal(const Ideal& ideal, const Polynomial& unit,
                 const MonomialOrder& order = MonomialOrder::grevlex());

  bool contains(const Polynomial& f) const;
  bool contains_all(const Ideal& other) const;
  bool is_unit() const { return basis_->is_unit(); }

 private:
  RingPtr base_;
  RingPtr wide_;
  std::shared_ptr<const GroebnerBasis> basis_;
};

/// Both localizations at u agree.
bool localized_equal(const Ideal& a, const Ideal& b, const Polynomial& unit,
                     const MonomialOrder& order = MonomialOrder::grevlex());

/// V if the reduced grevlex basis of I is exactly the variables V; the zero
/// ideal gives the empty set.
std::optional<std::vector<VarId>> coordinate_subspace(const Ideal& ideal);

struct Verdict {
  std::string check;
  nlohmann::json inputs = nlohmann::json::object();
  bool pass = false;
  std::optional<std::string> witness;
};

void to_json(nlohmann::json& j, const Verdict& v);

enum class Fact { F1, F2, F3, Eq2l };

Fact parse_fact(const std::string& name);
std::string to_string(Fact fact);

/// F1: det A_m = 0 for odd m. F3: det A_m = pf(A_m)^2 for even m.
/// F2: radical equality of the 2l- and (2l-1)-minor ideals of A_m.
/// Eq2l: radical equality of those two and the ideal of pfaffians of
/// principal 2l x 2l submatrices. `l` is ignored by F1 and F3.
Verdict check_fact(Fact fact, std::size_t m, const CoefficientField& field, std::size_t l = 0);

}  // namespace detsing
