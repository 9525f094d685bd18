#pragma once

#include <vector>

#include <json.hpp>

#include "detsing/ideal.hpp"
#include "detsing/substitution.hpp"
#include "detsing/verify.hpp"

namespace detsing {

/// Coordinate subspace V(t_i : i in vars).
class Center {
 public:
  /// Throws BadParameters if vars is empty, BadIndex if out of range.
  Center(RingPtr ring, std::vector<VarId> vars);

  static Center all_variables(RingPtr ring);

  const RingPtr& ring() const { return ring_; }
  const std::vector<VarId>& vars() const { return vars_; }
  bool contains(VarId v) const;

 private:
  RingPtr ring_;
  std::vector<VarId> vars_;
};

/// The T_i-chart: t_j -> t_i' t_j' for j in the center, j != i; every other
/// variable maps to its primed (center) or unchanged (passive) copy.
class ChartMap {
 public:
  const Center& center() const { return center_; }
  VarId chart_var() const { return chart_var_; }
  const RingPtr& source() const { return center_.ring(); }
  const RingPtr& target() const { return subst_.target(); }
  const Substitution& substitution() const { return subst_; }
  VarId exceptional_var() const { return exceptional_; }

  /// Variable ids are shared between source and target; only the names of
  /// center variables change.

 private:
  friend ChartMap make_chart(const Center& center, VarId chart_var);
  ChartMap(Center center, VarId chart_var, Substitution subst, VarId exceptional)
      : center_(std::move(center)), chart_var_(chart_var), subst_(std::move(subst)), exceptional_(exceptional) {}

  Center center_;
  VarId chart_var_;
  Substitution subst_;
  VarId exceptional_;
};

/// Throws NotInCenter.
ChartMap make_chart(const Center& center, VarId chart_var);

Polynomial total_transform(const Polynomial& f, const ChartMap& chart);

/// total_transform(f) = e^power * rest with e the exceptional variable not
/// dividing rest. Throws ZeroPolynomial.
Factored strict_transform_poly(const Polynomial& f, const ChartMap& chart);

/// Generated by the strict transforms of the generators, which is correct
/// only for generators homogeneous in the center variables. Throws
/// NonHomogeneousGenerators otherwise.
Ideal strict_transform_ideal(const Ideal& ideal, const ChartMap& chart);

/// Coordinates of chart `b` as fractions in the coordinates of chart `a`
/// (same center, overlap where both chart variables are nonzero).
LocalizedSubstitution chart_gluing(const ChartMap& a, const ChartMap& b);

void to_json(nlohmann::json& j, const ChartMap& chart);

/// <x^2 - y^3, x^2 - z^5> under the Z-chart of the blow-up of the origin:
/// h = y^3 - z^5 lies in the ideal, its strict transform does not lie in the
/// ideal generated by the strict transforms.
Verdict check_lemma_counterexample(const CoefficientField& field);

}  // namespace detsing
