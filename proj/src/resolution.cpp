#include "detsing/resolution.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <deque>
#include <exception>
#include <set>
#include <thread>

#include "detsing/error.hpp"
#include "detsing/poly_io.hpp"

namespace detsing {

Polynomial ChartNode::unit_product() const {
  Polynomial p = Polynomial::constant(ring(), 1);
  for (const Polynomial& u : units) p *= u;
  return p;
}

namespace {

std::vector<VarId> matrix_vars(const GenericMatrix& m) {
  std::uint64_t mask = 0;
  for (const auto& row : m.entries())
    for (const Polynomial& e : row) mask |= e.support();
  std::vector<VarId> vars;
  for (; mask != 0; mask &= mask - 1) vars.push_back(static_cast<VarId>(std::countr_zero(mask)));
  return vars;
}

bool free_position(MatrixKind kind, std::size_t i, std::size_t j) {
  return kind == MatrixKind::SkewSymmetric ? i < j : i <= j;
}

std::string y_prefix(std::size_t depth) { return depth == 1 ? "y" : "y" + std::to_string(depth); }

std::size_t step_index(const ChartNode& node) {
  return node.matrix.kind() == MatrixKind::SkewSymmetric ? node.offset / 2 + 1 : node.offset + 1;
}

LocalizedSubstitution identity_localized(const RingPtr& ring) {
  std::vector<Fraction> images;
  for (VarId v = 0; v < ring->size(); ++v) {
    images.push_back({Polynomial::variable(ring, v), Polynomial::constant(ring, 1)});
  }
  return LocalizedSubstitution(ring, ring, std::move(images));
}

ChartNode reduce_chart(const ChartNode& node, std::size_t k, std::size_t l) {
  const GenericMatrix& M = node.matrix;
  const std::size_t s = M.size();
  const MatrixKind kind = M.kind();
  if (k > l || l >= s) throw Error(ErrorCode::BadIndex, "chart position outside the matrix");
  const Center center(node.ring(), matrix_vars(M));
  const Polynomial& at = M(k, l);
  if (at.size() != 1 || at.total_degree() != 1) throw Error(ErrorCode::BadParameters, "chart entry is not a variable");
  const VarId chart_var = static_cast<VarId>(std::countr_zero(at.support()));
  ChartMap chart = make_chart(center, chart_var);
  const RingPtr& R = chart.target();

  GenericMatrix::Grid mp(s, std::vector<Polynomial>(s, Polynomial(R)));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      if (M(i, j).is_zero()) continue;
      const Factored f = strict_transform_poly(M(i, j), chart);
      mp[i][j] = f.rest;
    }
  }
  const GenericMatrix chart_matrix(R, mp, kind);

  std::vector<std::size_t> piv = k == l ? std::vector<std::size_t>{k} : std::vector<std::size_t>{k, l};
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < s; ++i)
    if (std::find(piv.begin(), piv.end(), i) == piv.end()) rest.push_back(i);

  // adj(P) and d = det P for the 1x1 or 2x2 pivot block.
  std::vector<std::vector<Polynomial>> adj;
  Polynomial d(R);
  if (piv.size() == 1) {
    adj = {{Polynomial::constant(R, 1)}};
    d = mp[k][k];
  } else {
    adj = {{mp[l][l], -mp[k][l]}, {-mp[l][k], mp[k][k]}};
    d = mp[k][k] * mp[l][l] - mp[k][l] * mp[l][k];
  }
  const bool localized = kind == MatrixKind::Symmetric && piv.size() == 2;
  const Polynomial sigma = localized ? -d : Polynomial::constant(R, 1);
  const Polynomial ratio = exact_divide(sigma, d);
  if (!ratio.is_constant()) throw Error(ErrorCode::NotExact, "pivot block ratio is not constant");

  std::vector<std::vector<Polynomial>> mult(s);
  std::vector<RowOp> transcript;
  for (std::size_t i : rest) {
    for (std::size_t b = 0; b < piv.size(); ++b) {
      Polynomial w(R);
      for (std::size_t a = 0; a < piv.size(); ++a) w += mp[i][piv[a]] * adj[a][b];
      mult[i].push_back(ratio * w);
    }
    RowOp op{node.labels[i], sigma, {}};
    for (std::size_t b = 0; b < piv.size(); ++b) op.subtract.emplace_back(node.labels[piv[b]], mult[i][b]);
    transcript.push_back(std::move(op));
  }
  GenericMatrix::Grid yp(rest.size(), std::vector<Polynomial>(rest.size(), Polynomial(R)));
  std::vector<std::vector<Polynomial>> correction(rest.size(), std::vector<Polynomial>(rest.size(), Polynomial(R)));
  for (std::size_t a = 0; a < rest.size(); ++a) {
    for (std::size_t b = 0; b < rest.size(); ++b) {
      const std::size_t i = rest[a];
      const std::size_t j = rest[b];
      Polynomial c(R);
      for (std::size_t p = 0; p < piv.size(); ++p) c += mult[i][p] * mp[piv[p]][j];
      yp[a][b] = sigma * mp[i][j] - c;
      correction[a][b] = std::move(c);
    }
  }
  GenericMatrix reduced(R, yp, kind);

  // Child ring: passive variables, then the pivot-row chart variables, then y.
  const std::size_t depth = node.depth + 1;
  std::vector<std::string> names;
  for (VarId v = 0; v < R->size(); ++v)
    if (!center.contains(v)) names.push_back(R->name(v));
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = 0; j < s; ++j) {
      if (!free_position(kind, i, j)) continue;
      const bool pivot_row = std::find(piv.begin(), piv.end(), i) != piv.end() ||
                             std::find(piv.begin(), piv.end(), j) != piv.end();
      if (pivot_row) names.push_back(R->name(static_cast<VarId>(std::countr_zero(M(i, j).support()))));
    }
  }
  std::vector<VarId> y_ids;
  std::vector<std::pair<std::size_t, std::size_t>> y_pos;
  for (std::size_t a = 0; a < rest.size(); ++a) {
    for (std::size_t b = 0; b < rest.size(); ++b) {
      if (!free_position(kind, a, b)) continue;
      y_ids.push_back(names.size());
      y_pos.emplace_back(a, b);
      names.push_back(matrix_var_name(y_prefix(depth), node.labels[rest[a]], node.labels[rest[b]]));
    }
  }
  const RingPtr child_ring = ring_new(R->field(), names);

  std::vector<Polynomial> to_images;
  for (VarId v = 0; v < child_ring->size(); ++v) {
    const auto yi = std::find(y_ids.begin(), y_ids.end(), v);
    if (yi == y_ids.end()) {
      to_images.push_back(Polynomial::variable(R, child_ring->name(v)));
    } else {
      const auto [a, b] = y_pos[static_cast<std::size_t>(yi - y_ids.begin())];
      to_images.push_back(yp[a][b]);
    }
  }
  Substitution to_chart(child_ring, R, std::move(to_images));

  const Polynomial sigma_child = transfer_by_name(sigma, child_ring);
  const Polynomial one = Polynomial::constant(child_ring, 1);
  std::vector<Fraction> from_images;
  for (VarId v = 0; v < R->size(); ++v) {
    if (auto id = child_ring->find(R->name(v))) {
      from_images.push_back({Polynomial::variable(child_ring, *id), one});
      continue;
    }
    // A block variable x'_ij = (y_ij + correction_ij) / sigma.
    bool found = false;
    for (std::size_t a = 0; a < rest.size() && !found; ++a) {
      for (std::size_t b = 0; b < rest.size() && !found; ++b) {
        if (!free_position(kind, a, b) || mp[rest[a]][rest[b]] != Polynomial::variable(R, v)) continue;
        const VarId y = child_ring->id(
            matrix_var_name(y_prefix(depth), node.labels[rest[a]], node.labels[rest[b]]));
        from_images.push_back({Polynomial::variable(child_ring, y) + transfer_by_name(correction[a][b], child_ring),
                               sigma_child});
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::BadParameters, "chart variable " + R->name(v) + " not located");
  }
  LocalizedSubstitution from_chart(R, child_ring, std::move(from_images));

  std::vector<std::size_t> labels;
  for (std::size_t i : rest) labels.push_back(node.labels[i]);
  std::vector<Polynomial> units;
  for (const Polynomial& u : node.units) units.push_back(transfer_by_name(u, child_ring));
  if (localized) units.push_back(sigma_child);
  std::vector<ExceptionalVar> exceptional;
  for (const ExceptionalVar& e : node.exceptional) {
    exceptional.push_back({child_ring->id(node.ring()->name(e.var)), e.step});
  }
  exceptional.push_back({child_ring->id(R->name(chart.exceptional_var())), step_index(node)});

  LocalizedSubstitution composed =
      node.composed.then(LocalizedSubstitution::from(chart.substitution())).then(from_chart);
  GenericMatrix child_matrix = generic_in(child_ring, kind, rest.size(), y_ids);

  ChartStep step{k, l, std::move(chart), chart_matrix, std::move(reduced), sigma, d,
                 std::move(to_chart), std::move(from_chart), std::move(transcript)};
  return ChartNode{.id = 0,
                   .parent = node.id,
                   .step = std::move(step),
                   .matrix = std::move(child_matrix),
                   .labels = std::move(labels),
                   .offset = node.offset + piv.size(),
                   .depth = depth,
                   .composed = std::move(composed),
                   .units = std::move(units),
                   .exceptional = std::move(exceptional),
                   .children = {},
                   .leaf = false,
                   .verdicts = {}};
}

}  // namespace

ChartNode root_node(MatrixKind kind, std::size_t m, const CoefficientField& field) {
  GenericMatrix matrix = kind == MatrixKind::SkewSymmetric ? generic_skew(m, field) : generic_sym(m, field);
  std::vector<std::size_t> labels(m);
  for (std::size_t i = 0; i < m; ++i) labels[i] = i;
  LocalizedSubstitution id = identity_localized(matrix.ring());
  return ChartNode{.id = 0,
                   .parent = std::nullopt,
                   .step = std::nullopt,
                   .matrix = std::move(matrix),
                   .labels = std::move(labels),
                   .offset = 0,
                   .depth = 0,
                   .composed = std::move(id),
                   .units = {},
                   .exceptional = {},
                   .children = {},
                   .leaf = false,
                   .verdicts = {}};
}

ChartNode reduce_skew_chart(const ChartNode& node, std::size_t k, std::size_t l) {
  if (node.matrix.kind() != MatrixKind::SkewSymmetric) throw Error(ErrorCode::NotSkew, "node matrix is not skew");
  if (node.matrix.size() < 3) throw Error(ErrorCode::SizeTooSmall, "skew chart reduction needs size >= 3");
  if (k >= l) throw Error(ErrorCode::BadIndex, "skew charts need k < l");
  return reduce_chart(node, k, l);
}

ChartNode reduce_sym_diag_chart(const ChartNode& node, std::size_t k) {
  if (node.matrix.kind() != MatrixKind::Symmetric) throw Error(ErrorCode::BadParameters, "node matrix is not symmetric");
  if (node.matrix.size() < 2) throw Error(ErrorCode::SizeTooSmall, "diagonal chart reduction needs size >= 2");
  return reduce_chart(node, k, k);
}

ChartNode reduce_sym_offdiag_chart(const ChartNode& node, std::size_t k, std::size_t l) {
  if (node.matrix.kind() != MatrixKind::Symmetric) throw Error(ErrorCode::BadParameters, "node matrix is not symmetric");
  if (node.matrix.size() < 2) throw Error(ErrorCode::SizeTooSmall, "off-diagonal chart reduction needs size >= 2");
  if (k >= l) throw Error(ErrorCode::BadIndex, "off-diagonal charts need k < l");
  return reduce_chart(node, k, l);
}

GenericMatrix::Grid replay_transcript(const ChartStep& step, const std::vector<std::size_t>& parent_labels) {
  const GenericMatrix& mp = step.chart_matrix;
  auto row_of = [&](std::size_t label) {
    const auto it = std::find(parent_labels.begin(), parent_labels.end(), label);
    if (it == parent_labels.end()) throw Error(ErrorCode::BadIndex, "unknown row label");
    return static_cast<std::size_t>(it - parent_labels.begin());
  };
  GenericMatrix::Grid out;
  for (const RowOp& op : step.transcript) {
    const std::size_t i = row_of(op.row);
    std::vector<Polynomial> row;
    for (std::size_t j = 0; j < mp.size(); ++j) {
      Polynomial e = op.scale * mp(i, j);
      for (const auto& [label, c] : op.subtract) e -= c * mp(row_of(label), j);
      row.push_back(std::move(e));
    }
    out.push_back(std::move(row));
  }
  return out;
}

VerifyLevel parse_verify_level(const std::string& text) {
  if (text == "none") return VerifyLevel::None;
  if (text == "identities") return VerifyLevel::Identities;
  if (text == "full") return VerifyLevel::Full;
  throw Error(ErrorCode::BadParameters, "unknown verify level '" + text + "'");
}

std::string to_string(VerifyLevel level) {
  switch (level) {
    case VerifyLevel::None: return "none";
    case VerifyLevel::Identities: return "identities";
    case VerifyLevel::Full: return "full";
  }
  return "?";
}

std::vector<std::size_t> ResolutionReport::leaves() const {
  std::vector<std::size_t> out;
  for (const ChartNode& n : nodes)
    if (n.leaf) out.push_back(n.id);
  return out;
}

std::size_t ResolutionReport::max_depth() const {
  std::size_t d = 0;
  for (const ChartNode& n : nodes) d = std::max(d, n.depth);
  return d;
}

bool ResolutionReport::all_pass() const {
  return std::all_of(nodes.begin(), nodes.end(), [](const ChartNode& n) {
    return std::all_of(n.verdicts.begin(), n.verdicts.end(), [](const Verdict& v) { return v.pass; });
  });
}

long ResolutionReport::leaf_index(const ChartNode& node) const {
  const long off = static_cast<long>(node.offset);
  const long rank = static_cast<long>(input.rank);
  return input.kind == MatrixKind::SkewSymmetric ? 2 * rank - 1 - off : rank - off;
}

namespace {

void check_parameters(const ResolutionInput& in) {
  if (in.kind == MatrixKind::General) throw Error(ErrorCode::BadParameters, "kind must be sym or skew");
  if (in.m < 1) throw Error(ErrorCode::BadParameters, "m must be positive");
  if (in.kind == MatrixKind::SkewSymmetric) {
    if (in.field.characteristic() == 2) throw Error(ErrorCode::CharTwoForbidden, "skew matrices need char != 2");
    if (in.rank < 1 || 2 * in.rank > in.m) throw Error(ErrorCode::BadParameters, "skew needs 1 <= l and 2l <= m");
  } else if (in.rank < 1 || in.rank > in.m) {
    throw Error(ErrorCode::BadParameters, "symmetric needs 1 <= r <= m");
  }
  if (in.workers < 1) throw Error(ErrorCode::BadParameters, "workers must be positive");
}

std::vector<std::pair<std::size_t, std::size_t>> chart_positions(const ChartNode& node, bool all) {
  const std::size_t s = node.matrix.size();
  const bool skew = node.matrix.kind() == MatrixKind::SkewSymmetric;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  if (!all) {
    if (!skew) out.emplace_back(0, 0);
    if (s >= 2) out.emplace_back(0, 1);
    return out;
  }
  for (std::size_t k = 0; k < s; ++k)
    for (std::size_t l = skew ? k + 1 : k; l < s; ++l) out.emplace_back(k, l);
  return out;
}

ChartNode child_at(const ChartNode& node, std::size_t k, std::size_t l) {
  if (node.matrix.kind() == MatrixKind::SkewSymmetric) return reduce_skew_chart(node, k, l);
  return k == l ? reduce_sym_diag_chart(node, k) : reduce_sym_offdiag_chart(node, k, l);
}

}  // namespace

ResolutionReport resolve(const ResolutionInput& input) {
  check_parameters(input);
  const auto start = std::chrono::steady_clock::now();
  ResolutionReport report;
  report.input = input;
  report.nodes.push_back(root_node(input.kind, input.m, input.field));
  // Breadth-first so ids follow depth, then chart position.
  for (std::size_t i = 0; i < report.nodes.size(); ++i) {
    if (report.leaf_index(report.nodes[i]) < 2) {
      report.nodes[i].leaf = true;
      continue;
    }
    for (const auto& [k, l] : chart_positions(report.nodes[i], input.all_charts)) {
      ChartNode child = child_at(report.nodes[i], k, l);
      child.id = report.nodes.size();
      report.nodes[i].children.push_back(child.id);
      report.nodes.push_back(std::move(child));
    }
  }
  report.build_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ResolutionReport resolve_sym(std::size_t m, std::size_t r, const CoefficientField& field, bool all_charts) {
  ResolutionInput in;
  in.kind = MatrixKind::Symmetric;
  in.m = m;
  in.rank = r;
  in.field = field;
  in.all_charts = all_charts;
  return resolve(in);
}

ResolutionReport resolve_skew(std::size_t m, std::size_t l, const CoefficientField& field, bool all_charts) {
  ResolutionInput in;
  in.kind = MatrixKind::SkewSymmetric;
  in.m = m;
  in.rank = l;
  in.field = field;
  in.all_charts = all_charts;
  return resolve(in);
}

namespace {

std::string position_label(const ChartNode& parent, const ChartStep& step) {
  return "X_" + std::to_string(parent.labels[step.k] + 1) + "_" + std::to_string(parent.labels[step.l] + 1);
}

Verdict make_verdict(std::string check, nlohmann::json inputs, bool pass, std::optional<std::string> witness = {}) {
  Verdict v;
  v.check = std::move(check);
  v.inputs = std::move(inputs);
  v.pass = pass;
  v.witness = std::move(witness);
  return v;
}

/// Strips powers of the given variables and of the given unit polynomials.
Polynomial strip(Polynomial f, const std::vector<VarId>& vars, const std::vector<Polynomial>& units) {
  for (VarId v : vars) f = factor_out(f, v).rest;
  for (const Polynomial& u : units) {
    if (u.is_constant()) continue;
    while (true) {
      try {
        f = exact_divide(f, u);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::NotExact) throw;
        break;
      }
    }
  }
  return f;
}

/// Block variables first: every y_ij then has a block variable in its
/// leading monomial, which keeps the Gröbner computations small.
MonomialOrder block_order(const ChartNode& parent, const ChartStep& step) {
  const RingPtr& R = step.chart.target();
  std::uint64_t mask = 0;
  for (const auto& row : step.reduced.entries())
    for (const Polynomial& e : row) mask |= e.support();
  std::uint64_t pivot_mask = 0;
  for (std::size_t j = 0; j < parent.matrix.size(); ++j) {
    pivot_mask |= step.chart_matrix(step.k, j).support() | step.chart_matrix(step.l, j).support();
  }
  std::vector<VarId> block;
  for (VarId v = 0; v < R->size(); ++v)
    if (((mask & ~pivot_mask) >> v) & 1) block.push_back(v);
  return MonomialOrder::elimination(block);
}

/// Strict transform of I_j(parent) equals I_{j - delta}(reduced), after
/// localizing at sigma when it is not constant.
Verdict minors_verdict(const ChartNode& parent, const ChartStep& step, std::size_t j, const MonomialOrder& order) {
  const std::size_t delta = step.diagonal() ? 1 : 2;
  const bool localized = !step.sigma.is_constant();
  const Ideal st = strict_transform_ideal(minors_ideal(parent.matrix, j), step.chart);
  const long target = static_cast<long>(j) - static_cast<long>(delta);
  const Ideal expected = minors_ideal_extended(step.reduced, target);
  const bool same =
      localized ? localized_equal(st, expected, step.sigma, order) : ideal_equal(st, expected, order);
  nlohmann::json in = {{"chart", position_label(parent, step)},
                       {"parent_minors", j},
                       {"reduced_minors", target},
                       {"localized_at", localized ? nlohmann::json(format_polynomial(step.sigma)) : nlohmann::json(nullptr)}};
  return make_verdict("minors-strict-transform", in, same);
}

}  // namespace

Verdict check_chart_identity(MatrixKind kind, bool diagonal, std::size_t m, std::size_t r,
                             const CoefficientField& field) {
  const ChartNode root = root_node(kind, m, field);
  if (r < 1 || r > m) throw Error(ErrorCode::BadParameters, "need 1 <= r <= m");
  ChartNode child = kind == MatrixKind::SkewSymmetric ? reduce_skew_chart(root, 0, 1)
                    : diagonal                         ? reduce_sym_diag_chart(root, 0)
                                                       : reduce_sym_offdiag_chart(root, 0, 1);
  const ChartStep& step = *child.step;
  Verdict v = r == 1 ? make_verdict("center-strict-transform-empty", {{"chart", position_label(root, step)}},
                                    groebner(strict_transform_ideal(minors_ideal(root.matrix, 1), step.chart)).is_unit())
                     : minors_verdict(root, step, r, block_order(root, step));
  v.inputs["kind"] = kind == MatrixKind::SkewSymmetric ? "skew" : "sym";
  v.inputs["m"] = m;
  v.inputs["field"] = field.to_string();
  return v;
}

std::vector<Verdict> verify_node(const ResolutionReport& report, const ChartNode& node) {
  std::vector<Verdict> out;
  if (!node.parent || !node.step) return out;
  const ChartNode& parent = report.nodes[*node.parent];
  const ChartStep& step = *node.step;
  const std::size_t s = parent.matrix.size();
  const std::size_t delta = step.diagonal() ? 1 : 2;
  const nlohmann::json where = {{"chart", position_label(parent, step)}};

  out.push_back(make_verdict("size", {{"parent", s}, {"child", node.matrix.size()}},
                             node.matrix.size() + delta == s && node.offset == parent.offset + delta));

  {
    const LocalizedSubstitution round = step.from_chart.then(LocalizedSubstitution::from(step.to_chart));
    const RingPtr& R = step.chart.target();
    std::optional<std::string> bad;
    for (VarId v = 0; v < R->size() && !bad; ++v) {
      const Fraction& img = round.image(v);
      if (!img.equals({Polynomial::variable(R, v), Polynomial::constant(R, 1)})) bad = R->name(v);
    }
    out.push_back(make_verdict("coordinate-change", where, !bad, bad));
  }

  {
    const auto rows = replay_transcript(step, parent.labels);
    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < s; ++i)
      if (i != step.k && i != step.l) rest.push_back(i);
    bool ok = rows.size() == rest.size();
    for (std::size_t a = 0; a < rows.size() && ok; ++a) {
      ok = rows[a][step.k].is_zero() && rows[a][step.l].is_zero();
      for (std::size_t b = 0; b < rest.size() && ok; ++b) ok = rows[a][rest[b]] == step.reduced(a, b);
    }
    out.push_back(make_verdict("transcript", where, ok));
  }

  {
    const Polynomial det_parent = determinant(parent.matrix);
    const Polynomial det_chart = determinant(step.chart_matrix);
    // An odd skew determinant vanishes identically; only the chart identity remains.
    const Factored st = det_parent.is_zero() ? Factored{static_cast<unsigned>(s), det_chart}
                                             : strict_transform_poly(det_parent, step.chart);
    const Polynomial lhs = pow(step.sigma, static_cast<unsigned>(node.matrix.size())) * det_chart;
    const Polynomial rhs = step.pivot_det * determinant(step.reduced);
    const bool ok = st.power == s && st.rest == det_chart && lhs == rhs;
    std::optional<std::string> w;
    if (!ok) w = format_polynomial(lhs - rhs);
    out.push_back(make_verdict("determinant", {{"chart", position_label(parent, step)},
                                               {"exceptional_power", st.power},
                                               {"sigma", format_polynomial(step.sigma)},
                                               {"pivot_det", format_polynomial(step.pivot_det)}},
                               ok, w));
  }

  const bool localized = !step.sigma.is_constant();
  {
    const Ideal st = strict_transform_ideal(minors_ideal(parent.matrix, 1), step.chart);
    out.push_back(make_verdict("center-strict-transform-empty", where, groebner(st).is_unit()));
  }
  const MonomialOrder order = block_order(parent, step);
  for (std::size_t j = 2; j <= s; ++j) out.push_back(minors_verdict(parent, step, j, order));

  if (localized) {
    const RingPtr& R = step.chart.target();
    bool covered = true;
    for (std::size_t p : {step.k, step.l}) {
      const Ideal at(R, {step.sigma, step.chart_matrix(p, p)});
      covered = covered && groebner(at).is_unit();
    }
    out.push_back(make_verdict("excluded-locus-in-diagonal-charts", where, covered));
  }

  {
    const ChartNode& root = report.nodes.front();
    const Polynomial det0 = determinant(root.matrix);
    bool ok = true;
    std::optional<std::string> w;
    if (!det0.is_zero()) {
      const Fraction img = node.composed.apply(det0);
      std::vector<VarId> ex;
      for (const ExceptionalVar& e : node.exceptional) ex.push_back(e.var);
      const Polynomial num = strip(img.num, ex, node.units);
      const Polynomial den = strip(img.den, {}, node.units);
      const Polynomial det_node = determinant(node.matrix);
      ok = den.is_constant() && proportional(num, det_node);
      if (!ok) w = format_polynomial(num);
    }
    out.push_back(make_verdict("determinant-composed", {{"original_det_zero", det0.is_zero()}}, ok, w));
  }
  return out;
}

std::vector<Verdict> check_embedded_resolution(const ResolutionReport& report, const ChartNode& leaf) {
  std::vector<Verdict> out;
  const long index = report.leaf_index(leaf);
  const Ideal ideal = minors_ideal_extended(leaf.matrix, index);
  const Polynomial u = leaf.unit_product();
  const Ideal sat = u.is_constant() ? ideal : saturate(ideal, u);
  const auto basis = groebner_cached(sat);
  const bool empty = basis->is_unit();
  const auto coords = empty ? std::optional<std::vector<VarId>>{} : coordinate_subspace(sat);

  nlohmann::json in = {{"leaf_minors", index}, {"empty", empty}};
  if (report.input.verify == VerifyLevel::Full) {
    nlohmann::json b = nlohmann::json::array();
    for (const Polynomial& g : basis->elements()) b.push_back(format_polynomial(g));
    in["groebner_basis"] = b;
  }
  if (coords) {
    nlohmann::json names = nlohmann::json::array();
    for (VarId v : *coords) names.push_back(leaf.ring()->name(v));
    in["coordinates"] = names;
  }
  out.push_back(make_verdict("regular", in, empty || coords.has_value()));

  std::set<VarId> ex;
  bool distinct = true;
  for (const ExceptionalVar& e : leaf.exceptional) distinct = ex.insert(e.var).second && distinct;
  bool disjoint = true;
  if (coords)
    for (VarId v : *coords) disjoint = disjoint && !ex.count(v);
  nlohmann::json tin = {{"exceptional_distinct", distinct}, {"disjoint", disjoint}};
  out.push_back(make_verdict("transversal", tin, distinct && disjoint));

  if (report.input.kind == MatrixKind::SkewSymmetric && index >= 1 &&
      index + 1 <= static_cast<long>(leaf.matrix.size())) {
    // The tracked structure is reduced: sqrt(I_{idx+1}) = I_idx.
    const Ideal upper = minors_ideal(leaf.matrix, static_cast<std::size_t>(index + 1));
    bool ok = ideal_subset(upper, ideal);
    for (const Polynomial& g : ideal.generators()) ok = ok && radical_member(g, upper);
    out.push_back(make_verdict("reduced-structure", {{"minors", index}, {"radical_of", index + 1}}, ok));
  }
  return out;
}

void verify_report(ResolutionReport& report) {
  const VerifyLevel level = report.input.verify;
  if (level == VerifyLevel::None) return;
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = report.nodes.size();
  std::vector<std::vector<Verdict>> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const ResolutionReport& view = report;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = verify_node(view, view.nodes[i]);
        if (view.nodes[i].leaf) {
          auto leaf = check_embedded_resolution(view, view.nodes[i]);
          results[i].insert(results[i].end(), leaf.begin(), leaf.end());
        }
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min(report.input.workers, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  for (std::size_t i = 0; i < n; ++i) report.nodes[i].verdicts = std::move(results[i]);
  report.verify_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

nlohmann::json matrix_to_json(const GenericMatrix& m) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& row : m.entries()) {
    nlohmann::json r = nlohmann::json::array();
    for (const Polynomial& e : row) r.push_back(format_polynomial(e));
    entries.push_back(r);
  }
  return {{"kind", to_string(m.kind())},
          {"m", m.size()},
          {"ring", {{"field", m.ring()->field().to_string()}, {"variables", m.ring()->names()}}},
          {"entries", entries}};
}

namespace {

nlohmann::json step_to_json(const ChartNode& parent, const ChartStep& step) {
  nlohmann::json j = step.chart;
  j["position"] = {parent.labels[step.k] + 1, parent.labels[step.l] + 1};
  j["type"] = step.diagonal() ? "diagonal" : "off-diagonal";
  nlohmann::json coords = nlohmann::json::object();
  const RingPtr& child = step.to_chart.source();
  for (VarId v = 0; v < child->size(); ++v) {
    const Polynomial& img = step.to_chart.image(v);
    if (img.size() == 1 && img.total_degree() == 1 && step.chart.target()->name(
                                                         static_cast<VarId>(std::countr_zero(img.support()))) ==
                                                         child->name(v)) {
      continue;
    }
    coords[child->name(v)] = format_polynomial(img);
  }
  j["coordinates"] = coords;
  j["sigma"] = format_polynomial(step.sigma);
  j["pivot_det"] = format_polynomial(step.pivot_det);
  nlohmann::json ops = nlohmann::json::array();
  for (const RowOp& op : step.transcript) {
    nlohmann::json sub = nlohmann::json::array();
    for (const auto& [label, c] : op.subtract) sub.push_back({{"row", label + 1}, {"multiplier", format_polynomial(c)}});
    ops.push_back({{"row", op.row + 1}, {"scale", format_polynomial(op.scale)}, {"subtract", sub}});
  }
  j["transcript"] = ops;
  return j;
}

}  // namespace

nlohmann::json to_json(const ResolutionReport& report) {
  const ResolutionInput& in = report.input;
  nlohmann::json input = {{"kind", in.kind == MatrixKind::SkewSymmetric ? "skew" : "sym"},
                          {"m", in.m},
                          {"field", in.field.to_string()},
                          {"all_charts", in.all_charts},
                          {"verify", to_string(in.verify)}};
  input[in.kind == MatrixKind::SkewSymmetric ? "l" : "r"] = in.rank;

  const RingPtr& original = report.nodes.front().ring();
  nlohmann::json nodes = nlohmann::json::array();
  std::size_t passed = 0;
  std::size_t failed = 0;
  for (const ChartNode& n : report.nodes) {
    nlohmann::json j;
    j["id"] = n.id;
    j["parent"] = n.parent ? nlohmann::json(*n.parent) : nlohmann::json(nullptr);
    j["depth"] = n.depth;
    j["offset"] = n.offset;
    j["chart"] = n.step ? step_to_json(report.nodes[*n.parent], *n.step) : nlohmann::json(nullptr);
    nlohmann::json subst = nlohmann::json::object();
    for (VarId v = 0; v < original->size(); ++v) {
      const Fraction& f = n.composed.image(v);
      subst[original->name(v)] = {{"num", format_polynomial(f.num)}, {"den", format_polynomial(f.den)}};
    }
    j["substitution"] = subst;
    nlohmann::json units = nlohmann::json::array();
    for (const Polynomial& u : n.units) units.push_back(format_polynomial(u));
    j["units"] = units;
    nlohmann::json ex = nlohmann::json::array();
    for (const ExceptionalVar& e : n.exceptional) ex.push_back({{"var", n.ring()->name(e.var)}, {"step", e.step}});
    j["exceptional"] = ex;
    j["matrix"] = matrix_to_json(n.matrix);
    j["children"] = n.children;
    j["leaf"] = n.leaf;
    if (n.leaf) j["leaf_minors"] = report.leaf_index(n);
    nlohmann::json verdicts = nlohmann::json::array();
    for (const Verdict& v : n.verdicts) {
      verdicts.push_back(v);
      v.pass ? ++passed : ++failed;
    }
    j["verdicts"] = verdicts;
    nodes.push_back(std::move(j));
  }
  nlohmann::json stats = {{"nodes", report.nodes.size()},
                          {"leaves", report.leaves().size()},
                          {"max_depth", report.max_depth()},
                          {"verdicts_passed", passed},
                          {"verdicts_failed", failed}};
  if (in.timings) stats["timings"] = {{"build_seconds", report.build_seconds}, {"verify_seconds", report.verify_seconds}};
  return {{"input", input},
          {"nodes", nodes},
          {"statistics", stats},
          {"pass", report.all_pass()},
          {"condition_b", "structural: each center is contained in the singular locus of the current strict transform"}};
}

std::string to_markdown(const ResolutionReport& report) {
  const ResolutionInput& in = report.input;
  const bool skew = in.kind == MatrixKind::SkewSymmetric;
  std::string out = "# Resolution of the generic " + std::string(skew ? "skew-symmetric" : "symmetric") +
                    " determinantal singularity\n\n";
  out += "- m = " + std::to_string(in.m) + ", " + (skew ? "l = " : "r = ") + std::to_string(in.rank) + "\n";
  out += "- field: " + in.field.to_string() + "\n";
  out += "- charts: " + std::string(in.all_charts ? "all" : "representative") + "\n";
  out += "- verification: " + to_string(in.verify) + "\n";
  out += "- nodes: " + std::to_string(report.nodes.size()) + ", leaves: " + std::to_string(report.leaves().size()) +
         ", max depth: " + std::to_string(report.max_depth()) + "\n\n";
  for (const ChartNode& n : report.nodes) {
    out += std::string(2 * n.depth, ' ') + "- node " + std::to_string(n.id);
    if (n.step) out += ": " + position_label(report.nodes[*n.parent], *n.step) + "-chart of node " + std::to_string(*n.parent);
    out += ", " + to_string(n.matrix.kind()) + " size " + std::to_string(n.matrix.size());
    if (n.leaf) out += ", leaf (minors " + std::to_string(report.leaf_index(n)) + ")";
    std::size_t ok = 0;
    for (const Verdict& v : n.verdicts) ok += v.pass;
    if (!n.verdicts.empty()) out += ", checks " + std::to_string(ok) + "/" + std::to_string(n.verdicts.size());
    out += "\n";
    if (n.step) {
      const RingPtr& child = n.step->to_chart.source();
      for (std::size_t a = 0; a < n.matrix.size(); ++a) {
        for (std::size_t b = a; b < n.matrix.size(); ++b) {
          const Polynomial& e = n.matrix(a, b);
          if (e.is_zero()) continue;
          const VarId v = static_cast<VarId>(std::countr_zero(e.support()));
          out += std::string(2 * n.depth + 2, ' ') + "- `" + child->name(v) +
                 " = " + format_polynomial(n.step->to_chart.image(v)) + "`\n";
        }
      }
      for (const Polynomial& u : n.units) out += std::string(2 * n.depth + 2, ' ') + "- unit `" + format_polynomial(u) + "`\n";
    }
  }
  out += "\nOverall: " + std::string(report.all_pass() ? "pass" : "FAIL") + "\n";
  return out;
}

}  // namespace detsing
