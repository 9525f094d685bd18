#include "detsing/blowup.hpp"

#include <algorithm>

#include "detsing/error.hpp"
#include "detsing/poly_io.hpp"

namespace detsing {

Center::Center(RingPtr ring, std::vector<VarId> vars) : ring_(std::move(ring)), vars_(std::move(vars)) {
  if (vars_.empty()) throw Error(ErrorCode::BadParameters, "center needs at least one variable");
  std::sort(vars_.begin(), vars_.end());
  vars_.erase(std::unique(vars_.begin(), vars_.end()), vars_.end());
  if (vars_.back() >= ring_->size()) throw Error(ErrorCode::BadIndex, "center variable out of range");
}

Center Center::all_variables(RingPtr ring) {
  std::vector<VarId> vars(ring->size());
  for (VarId v = 0; v < vars.size(); ++v) vars[v] = v;
  return Center(std::move(ring), std::move(vars));
}

bool Center::contains(VarId v) const { return std::binary_search(vars_.begin(), vars_.end(), v); }

ChartMap make_chart(const Center& center, VarId chart_var) {
  if (!center.contains(chart_var)) {
    throw Error(ErrorCode::NotInCenter, "chart variable is not a center variable");
  }
  const RingPtr& src = center.ring();
  std::vector<std::string> names = src->names();
  for (VarId v : center.vars()) {
    std::string primed = names[v] + "p";
    while (std::find(names.begin(), names.end(), primed) != names.end()) primed += "p";
    names[v] = primed;
  }
  const RingPtr dst = ring_new(src->field(), names);
  const Polynomial e = Polynomial::variable(dst, chart_var);
  std::vector<Polynomial> images;
  images.reserve(src->size());
  for (VarId v = 0; v < src->size(); ++v) {
    Polynomial x = Polynomial::variable(dst, v);
    images.push_back(center.contains(v) && v != chart_var ? e * x : x);
  }
  return ChartMap(center, chart_var, Substitution(src, dst, std::move(images)), chart_var);
}

Polynomial total_transform(const Polynomial& f, const ChartMap& chart) {
  return substitute(f, chart.substitution());
}

Factored strict_transform_poly(const Polynomial& f, const ChartMap& chart) {
  if (f.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "strict transform of zero");
  return factor_out(total_transform(f, chart), chart.exceptional_var());
}

Ideal strict_transform_ideal(const Ideal& ideal, const ChartMap& chart) {
  require_same_ring(ideal.ring(), chart.source());
  for (const Polynomial& g : ideal.generators()) {
    if (!is_homogeneous(g, chart.center().vars())) {
      throw Error(ErrorCode::NonHomogeneousGenerators,
                  "generator " + format_polynomial(g) + " is not homogeneous in the center variables");
    }
  }
  Ideal out(chart.target());
  for (const Polynomial& g : ideal.generators()) out.add_unique(strict_transform_poly(g, chart).rest);
  return out;
}

LocalizedSubstitution chart_gluing(const ChartMap& a, const ChartMap& b) {
  if (!same_ring(a.source(), b.source()) || a.center().vars() != b.center().vars()) {
    throw Error(ErrorCode::BadParameters, "charts of different blow-ups");
  }
  const RingPtr& ra = a.target();
  const RingPtr& rb = b.target();
  const VarId i = a.chart_var();
  const VarId j = b.chart_var();
  const Polynomial one = Polynomial::constant(ra, 1);
  const Polynomial ti = Polynomial::variable(ra, i);
  const Polynomial tj = Polynomial::variable(ra, j);
  std::vector<Fraction> images;
  images.reserve(rb->size());
  for (VarId v = 0; v < rb->size(); ++v) {
    const Polynomial x = Polynomial::variable(ra, v);
    if (!a.center().contains(v)) {
      images.push_back({x, one});
    } else if (i == j) {
      images.push_back({x, one});
    } else if (v == j) {
      images.push_back({ti * tj, one});  // t_j itself
    } else if (v == i) {
      images.push_back({one, tj});
    } else {
      images.push_back({x, tj});
    }
  }
  return LocalizedSubstitution(rb, ra, std::move(images));
}

void to_json(nlohmann::json& j, const ChartMap& chart) {
  const RingPtr& src = chart.source();
  nlohmann::json center = nlohmann::json::array();
  for (VarId v : chart.center().vars()) center.push_back(src->name(v));
  nlohmann::json subst = nlohmann::json::object();
  for (VarId v = 0; v < src->size(); ++v) subst[src->name(v)] = format_polynomial(chart.substitution().image(v));
  j = nlohmann::json{{"center_vars", center},
                     {"chart_var", src->name(chart.chart_var())},
                     {"substitution", subst},
                     {"exceptional_var", chart.target()->name(chart.exceptional_var())}};
}

Verdict check_lemma_counterexample(const CoefficientField& field) {
  const RingPtr r = ring_new(field, {"x", "y", "z"});
  const Polynomial g1 = parse_polynomial(r, "x^2 - y^3");
  const Polynomial g2 = parse_polynomial(r, "x^2 - z^5");
  const Polynomial h = parse_polynomial(r, "y^3 - z^5");
  const Ideal before(r, {g1, g2});
  const ChartMap chart = make_chart(Center::all_variables(r), r->id("z"));
  const Ideal after(chart.target(), {strict_transform_poly(g1, chart).rest, strict_transform_poly(g2, chart).rest});
  const Polynomial hp = strict_transform_poly(h, chart).rest;

  Verdict v;
  v.check = "lemma-counterexample";
  const bool h_in = ideal_contains(before, h);
  const bool hp_in = ideal_contains(after, hp);
  bool refused = false;
  try {
    strict_transform_ideal(before, chart);
  } catch (const Error& e) {
    refused = e.code() == ErrorCode::NonHomogeneousGenerators;
  }
  v.inputs = {{"field", field.to_string()},
              {"g1_strict", format_polynomial(after.generators()[0])},
              {"g2_strict", format_polynomial(after.generators()[1])},
              {"h_strict", format_polynomial(hp)},
              {"h_in_ideal", h_in},
              {"h_strict_in_strict_ideal", hp_in},
              {"strict_transform_ideal_refused", refused}};
  v.pass = h_in && !hp_in && refused;
  if (!v.pass) v.witness = format_polynomial(groebner_cached(after)->normal_form(hp));
  return v;
}

}  // namespace detsing
