#include "detsing/cli.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "detsing/blowup.hpp"
#include "detsing/error.hpp"
#include "detsing/groebner.hpp"
#include "detsing/matrix.hpp"
#include "detsing/poly_io.hpp"
#include "detsing/resolution.hpp"
#include "detsing/verify.hpp"

#ifndef DETSING_DATA_DIR
#define DETSING_DATA_DIR "data"
#endif

namespace detsing {

namespace {

class Recorder {
 public:
  explicit Recorder(std::vector<ExampleValue>& out) : out_(out) {}

  void poly(const std::string& example, const std::string& key, const Polynomial& f) {
    out_.push_back({example, key, format_polynomial(f), f.ring()});
  }
  void value(const std::string& example, const std::string& key, nlohmann::json v) {
    out_.push_back({example, key, std::move(v), nullptr});
  }

 private:
  std::vector<ExampleValue>& out_;
};

ResolutionReport verified(MatrixKind kind, std::size_t m, std::size_t rank, const CoefficientField& field) {
  ResolutionInput in;
  in.kind = kind;
  in.m = m;
  in.rank = rank;
  in.field = field;
  in.verify = VerifyLevel::Full;
  ResolutionReport report = resolve(in);
  verify_report(report);
  return report;
}

void record_tree(Recorder& rec, const std::string& example, const ResolutionReport& report) {
  rec.value(example, "nodes", report.nodes.size());
  rec.value(example, "leaves", report.leaves().size());
  rec.value(example, "max_depth", report.max_depth());
  rec.value(example, "all_pass", report.all_pass());
}

/// f with variable v set to a constant.
Polynomial specialize(const Polynomial& f, VarId v, long c) {
  const RingPtr& R = f.ring();
  std::vector<Polynomial> images;
  for (VarId w = 0; w < R->size(); ++w)
    images.push_back(w == v ? Polynomial::constant(R, c) : Polynomial::variable(R, w));
  return substitute(f, Substitution(R, R, std::move(images)));
}

void sym_examples(Recorder& rec, const CoefficientField& field) {
  {
    const GenericMatrix b2 = generic_sym(2, field);
    rec.poly("m2-sym", "det_B2", determinant(b2));
    record_tree(rec, "m2-sym", verified(MatrixKind::Symmetric, 2, 2, field));
  }

  const ChartNode root = root_node(MatrixKind::Symmetric, 3, field);
  const Polynomial det = determinant(root.matrix);
  const Ideal minors2 = minors_ideal(root.matrix, 2);
  {
    const ChartNode child = reduce_sym_diag_chart(root, 0);
    const ChartStep& step = *child.step;
    const std::string ex = "m3-sym-chart-X11";
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = i; j < 2; ++j)
        rec.poly(ex, "y_" + std::to_string(i + 2) + "_" + std::to_string(j + 2), step.reduced(i, j));
    const Polynomial st = strict_transform_poly(det, step.chart).rest;
    rec.poly(ex, "det_strict", st);
    rec.value(ex, "det_strict_is_det_y", st == determinant(step.reduced));
    Ideal ys(step.chart.target());
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = i; j < 2; ++j) ys.add_unique(step.reduced(i, j));
    rec.value(ex, "minors2_strict_is_y_ideal", ideal_equal(strict_transform_ideal(minors2, step.chart), ys));
    // In the coordinates of the reduced chart the y's and the exceptional
    // variable must become distinct coordinate functions.
    Ideal pulled(child.ring());
    for (const Polynomial& g : ys.generators()) pulled.add_unique(step.from_chart.apply(g).num);
    pulled.add_unique(step.from_chart.apply(Polynomial::variable(ys.ring(), step.chart.exceptional_var())).num);
    const auto coords = coordinate_subspace(pulled);
    rec.value(ex, "exceptional_transversal_to_y", coords.has_value() && coords->size() == 4);
  }
  {
    const ChartNode child = reduce_sym_offdiag_chart(root, 1, 2);
    const ChartStep& step = *child.step;
    const std::string ex = "m3-sym-chart-X23";
    const RingPtr& R = step.chart.target();
    const Polynomial st = strict_transform_poly(det, step.chart).rest;
    rec.poly(ex, "det_strict", st);
    const VarId x11 = R->id("x_1_1p");
    const Polynomial h = specialize(st, x11, 0);
    rec.poly(ex, "det_strict_coefficient_x_1_1", specialize(st, x11, 1) - h);
    const std::uint64_t exc = std::uint64_t{1} << step.chart.exceptional_var();
    rec.value(ex, "h_free_of_x_1_1_and_exceptional", (h.support() & ((std::uint64_t{1} << x11) | exc)) == 0);
    const Polynomial minor = determinant(submatrix(root.matrix, {1, 2}, {1, 2}));
    const Polynomial eps = strict_transform_poly(minor, step.chart).rest;
    rec.poly(ex, "minor_23_23_strict", eps);
    rec.value(ex, "minors2_saturated_unit",
              groebner(saturate(strict_transform_ideal(minors2, step.chart), eps)).is_unit());
  }
  record_tree(rec, "m3-sym-resolution", verified(MatrixKind::Symmetric, 3, 3, field));
}

void skew_examples(Recorder& rec, const CoefficientField& field) {
  {
    const GenericMatrix a2 = generic_skew(2, field);
    rec.poly("m2-skew", "det_A2", determinant(a2));
    record_tree(rec, "m2-skew", verified(MatrixKind::SkewSymmetric, 2, 1, field));
  }
  {
    const GenericMatrix a3 = generic_skew(3, field);
    rec.poly("m3-skew", "det_A3", determinant(a3));
    record_tree(rec, "m3-skew-resolution", verified(MatrixKind::SkewSymmetric, 3, 1, field));
  }

  const ChartNode root = root_node(MatrixKind::SkewSymmetric, 4, field);
  const ChartNode child = reduce_skew_chart(root, 0, 1);
  const ChartStep& step = *child.step;
  const std::string ex = "m4-skew-chart-X12";
  const Polynomial y34 = step.reduced(0, 1);
  rec.poly(ex, "y_3_4", y34);
  const Polynomial st = strict_transform_poly(determinant(root.matrix), step.chart).rest;
  rec.poly(ex, "det_strict", st);
  rec.value(ex, "det_strict_is_y_squared", st == y34 * y34);
  const Polynomial minor = determinant(submatrix(root.matrix, {0, 1, 2}, {0, 1, 3}));
  rec.poly(ex, "minor_123_124", minor);
  rec.poly(ex, "minor_123_124_strict", strict_transform_poly(minor, step.chart).rest);
  rec.value(ex, "minors2_strict_unit", groebner(strict_transform_ideal(minors_ideal(root.matrix, 2), step.chart)).is_unit());

  const Polynomial pf = pfaffian(root.matrix);
  rec.poly(ex, "pf_A4", pf);
  std::size_t nonzero = 0;
  bool factored = true;
  for (const auto& rows : subsets(4, 3)) {
    for (const auto& cols : subsets(4, 3)) {
      const Polynomial d = determinant(submatrix(root.matrix, rows, cols));
      if (d.is_zero()) continue;
      ++nonzero;
      // Minor with row i and column j left out is +-x_ab * pf, {a, b} the
      // complement of {i, j}; that entry is the one appearing twice.
      std::size_t i = 0;
      std::size_t j = 0;
      for (std::size_t k = 0; k < 4; ++k) {
        if (std::find(rows.begin(), rows.end(), k) == rows.end()) i = k;
        if (std::find(cols.begin(), cols.end(), k) == cols.end()) j = k;
      }
      std::vector<std::size_t> rest;
      for (std::size_t k = 0; k < 4; ++k)
        if (k != i && k != j) rest.push_back(k);
      const Polynomial expected = rest.size() == 2 ? root.matrix(rest[0], rest[1]) * pf : Polynomial(pf.ring());
      factored = factored && (d == expected || d == -expected);
    }
  }
  rec.value(ex, "minors3_nonzero", nonzero);
  rec.value(ex, "minors3_are_entry_times_pf", factored);
  record_tree(rec, "m4-skew-resolution", verified(MatrixKind::SkewSymmetric, 4, 2, field));
}

void lemma_example(Recorder& rec, const CoefficientField& field) {
  const Verdict v = check_lemma_counterexample(field);
  const RingPtr chart = ring_new(field, {"xp", "yp", "zp"});
  for (const char* key : {"g1_strict", "g2_strict", "h_strict"})
    rec.poly("lemma-counterexample", key, parse_polynomial(chart, v.inputs.at(key).get<std::string>()));
  for (const char* key : {"h_in_ideal", "h_strict_in_strict_ideal"})
    rec.value("lemma-counterexample", key, v.inputs.at(key));
}

bool wanted(const std::string& example, ExampleKinds kinds) {
  if (kinds == ExampleKinds::All) return true;
  const bool skew = example.find("skew") != std::string::npos;
  return kinds == ExampleKinds::Skew ? skew : !skew;
}

}  // namespace

std::vector<ExampleValue> replay_examples(const CoefficientField& field, ExampleKinds kinds) {
  std::vector<ExampleValue> out;
  Recorder rec(out);
  if (kinds != ExampleKinds::Skew) sym_examples(rec, field);
  if (kinds != ExampleKinds::Symmetric) {
    if (field.characteristic() == 2) throw Error(ErrorCode::CharTwoForbidden, "skew examples need characteristic != 2");
    skew_examples(rec, field);
  }
  if (kinds != ExampleKinds::Skew) lemma_example(rec, field);
  return out;
}

std::vector<std::string> diff_examples(const std::vector<ExampleValue>& actual, const nlohmann::json& golden,
                                       ExampleKinds kinds) {
  std::vector<std::string> diffs;
  const nlohmann::json& examples = golden.at("examples");
  std::map<std::pair<std::string, std::string>, bool> seen;
  for (const ExampleValue& v : actual) {
    seen[{v.example, v.key}] = true;
    const std::string where = v.example + "." + v.key;
    if (!examples.contains(v.example) || !examples[v.example].contains(v.key)) {
      diffs.push_back(where + ": no golden value, got " + v.value.dump());
      continue;
    }
    const nlohmann::json& want = examples[v.example][v.key];
    bool same = false;
    if (v.ring && want.is_string()) {
      try {
        same = parse_polynomial(v.ring, want.get<std::string>()) ==
               parse_polynomial(v.ring, v.value.get<std::string>());
      } catch (const Error&) {
        same = false;
      }
    } else {
      same = want == v.value;
    }
    if (!same) diffs.push_back(where + ": expected " + want.dump() + ", got " + v.value.dump());
  }
  for (const auto& [name, values] : examples.items()) {
    if (!wanted(name, kinds)) continue;
    for (const auto& [key, want] : values.items()) {
      if (seen.count({name, key})) continue;
      diffs.push_back(name + "." + key + ": golden value " + want.dump() + " was not produced");
    }
  }
  return diffs;
}

std::filesystem::path default_examples_path() {
  return std::filesystem::path(DETSING_DATA_DIR) / "examples.json";
}

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::ResourceLimit: return ExitResourceLimit;
    default: return ExitBadParameters;
  }
}

void apply_caps(std::optional<std::size_t> max_terms, std::optional<std::size_t> max_basis) {
  ResourceCaps caps = ResourceCaps::defaults();
  if (max_terms) caps.max_terms = *max_terms;
  if (max_basis) caps.max_basis = *max_basis;
  ResourceCaps::set_defaults(caps);
}

struct ResolveOptions {
  std::string kind;
  std::size_t m = 0;
  std::optional<std::size_t> r;
  std::optional<std::size_t> l;
  std::string field = "Q";
  bool all_charts = false;
  std::string verify = "identities";
  std::string out;
  std::string format = "json";
  std::size_t workers = 1;
  bool timings = false;
  std::optional<std::size_t> max_terms;
  std::optional<std::size_t> max_basis;
};

int cmd_resolve(const ResolveOptions& o, std::ostream& out) {
  apply_caps(o.max_terms, o.max_basis);
  ResolutionInput in;
  in.kind = o.kind == "sym" ? MatrixKind::Symmetric : MatrixKind::SkewSymmetric;
  in.m = o.m;
  if (in.kind == MatrixKind::Symmetric) {
    if (o.l || !o.r) throw Error(ErrorCode::BadParameters, "symmetric resolution takes --r");
    in.rank = *o.r;
  } else {
    if (o.r || !o.l) throw Error(ErrorCode::BadParameters, "skew resolution takes --l");
    in.rank = *o.l;
  }
  in.field = CoefficientField::parse(o.field);
  in.all_charts = o.all_charts;
  in.verify = parse_verify_level(o.verify);
  in.workers = std::max<std::size_t>(1, o.workers);
  in.timings = o.timings;

  ResolutionReport report = resolve(in);
  verify_report(report);
  const std::string text = o.format == "md" ? to_markdown(report) : to_json(report).dump(2) + "\n";
  if (o.out.empty() || o.out == "-") {
    out << text;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    if (!file) throw Error(ErrorCode::BadParameters, "cannot write " + o.out);
    file << text;
  }
  return report.all_pass() ? ExitPass : ExitFail;
}

struct VerifyOptions {
  std::optional<std::string> fact;
  std::optional<std::string> identity;
  bool lemma = false;
  std::optional<std::size_t> m;
  std::optional<std::size_t> r;
  std::optional<std::size_t> l;
  std::vector<std::string> fields;
  bool all_fields = false;
  std::optional<std::size_t> max_terms;
  std::optional<std::size_t> max_basis;
};

std::vector<CoefficientField> selected_fields(const VerifyOptions& o) {
  std::vector<std::string> specs = o.fields;
  if (o.all_fields) {
    for (const char* s : {"Q", "Fp:3", "Fp:5", "Fp:7", "Fp:101"})
      if (std::find(specs.begin(), specs.end(), s) == specs.end()) specs.push_back(s);
  }
  if (specs.empty()) specs.push_back("Q");
  std::vector<CoefficientField> fields;
  for (const std::string& s : specs) fields.push_back(CoefficientField::parse(s));
  return fields;
}

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  apply_caps(o.max_terms, o.max_basis);
  const int selectors = (o.fact ? 1 : 0) + (o.identity ? 1 : 0) + (o.lemma ? 1 : 0);
  if (selectors != 1) {
    throw Error(ErrorCode::BadParameters, "choose exactly one of --fact, --identity, --lemma-counterexample");
  }
  std::vector<Verdict> verdicts;
  for (const CoefficientField& field : selected_fields(o)) {
    if (o.lemma) {
      verdicts.push_back(check_lemma_counterexample(field));
      continue;
    }
    if (!o.m) throw Error(ErrorCode::BadParameters, "--m is required");
    if (o.fact) {
      verdicts.push_back(check_fact(parse_fact(*o.fact), *o.m, field, o.l.value_or(0)));
      continue;
    }
    if (!o.r) throw Error(ErrorCode::BadParameters, "--r is required");
    const std::size_t m = *o.m;
    const std::size_t r = *o.r;
    if (*o.identity == "to-show-Am") {
      if (m < 3 || r < 3 || r > m) throw Error(ErrorCode::BadParameters, "need 3 <= r <= m");
      verdicts.push_back(check_chart_identity(MatrixKind::SkewSymmetric, false, m, r, field));
    } else if (*o.identity == "sym-diag") {
      if (m < 2 || r < 2 || r > m) throw Error(ErrorCode::BadParameters, "need 2 <= r <= m");
      verdicts.push_back(check_chart_identity(MatrixKind::Symmetric, true, m, r, field));
    } else if (*o.identity == "sym-offdiag") {
      if (m < 2 || r < 2 || r > m) throw Error(ErrorCode::BadParameters, "need 2 <= r <= m");
      verdicts.push_back(check_chart_identity(MatrixKind::Symmetric, false, m, r, field));
    } else {
      throw Error(ErrorCode::BadParameters, "unknown identity " + *o.identity);
    }
  }
  const bool pass = std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
  nlohmann::json doc = {{"verdicts", verdicts}, {"pass", pass}};
  out << doc.dump(2) << "\n";
  return pass ? ExitPass : ExitFail;
}

struct ExamplesOptions {
  std::string field = "Q";
  std::string kind = "all";
  std::string data;
};

int cmd_examples(const ExamplesOptions& o, std::ostream& out) {
  const CoefficientField field = CoefficientField::parse(o.field);
  const ExampleKinds kinds = o.kind == "sym" ? ExampleKinds::Symmetric
                             : o.kind == "skew" ? ExampleKinds::Skew
                                                : ExampleKinds::All;
  const std::filesystem::path path = o.data.empty() ? default_examples_path() : std::filesystem::path(o.data);
  std::ifstream file(path);
  if (!file) throw Error(ErrorCode::BadParameters, "cannot read " + path.string());
  nlohmann::json golden;
  try {
    golden = nlohmann::json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::BadParameters, path.string() + ": " + e.what());
  }
  const std::vector<ExampleValue> actual = replay_examples(field, kinds);
  const std::vector<std::string> diffs = diff_examples(actual, golden, kinds);
  nlohmann::json doc = {{"field", field.to_string()},
                        {"compared", actual.size()},
                        {"diffs", diffs},
                        {"pass", diffs.empty()}};
  out << doc.dump(2) << "\n";
  return diffs.empty() ? ExitPass : ExitFail;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resolution of generic symmetric and skew-symmetric determinantal singularities"};
  app.require_subcommand(1);

  ResolveOptions ro;
  CLI::App* resolve_cmd = app.add_subcommand("resolve", "Build and verify the chart tree");
  resolve_cmd->add_option("--kind", ro.kind)->required()->check(CLI::IsMember({"sym", "skew"}));
  resolve_cmd->add_option("--m", ro.m)->required();
  resolve_cmd->add_option("--r", ro.r, "rank bound for sym");
  resolve_cmd->add_option("--l", ro.l, "half rank for skew");
  resolve_cmd->add_option("--field", ro.field, "Q or Fp:<p>");
  resolve_cmd->add_flag("--all-charts", ro.all_charts);
  resolve_cmd->add_option("--verify", ro.verify)->check(CLI::IsMember({"none", "identities", "full"}));
  resolve_cmd->add_option("--out", ro.out, "report path, stdout by default");
  resolve_cmd->add_option("--format", ro.format)->check(CLI::IsMember({"json", "md"}));
  resolve_cmd->add_option("--workers", ro.workers);
  resolve_cmd->add_flag("--timings", ro.timings, "include wall-clock times in the report");
  resolve_cmd->add_option("--max-terms", ro.max_terms);
  resolve_cmd->add_option("--max-basis", ro.max_basis);

  VerifyOptions vo;
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run a single verification");
  verify_cmd->add_option("--fact", vo.fact)->check(CLI::IsMember({"F1", "F2", "F3", "Eq2l"}));
  verify_cmd->add_option("--identity", vo.identity)
      ->check(CLI::IsMember({"to-show-Am", "sym-diag", "sym-offdiag"}));
  verify_cmd->add_flag("--lemma-counterexample", vo.lemma);
  verify_cmd->add_option("--m", vo.m);
  verify_cmd->add_option("--r", vo.r);
  verify_cmd->add_option("--l", vo.l);
  verify_cmd->add_option("--field", vo.fields, "repeatable");
  verify_cmd->add_flag("--all-fields", vo.all_fields, "Q, Fp:3, Fp:5, Fp:7, Fp:101");
  verify_cmd->add_option("--max-terms", vo.max_terms);
  verify_cmd->add_option("--max-basis", vo.max_basis);

  ExamplesOptions eo;
  CLI::App* examples_cmd = app.add_subcommand("examples", "Replay the worked examples against golden values");
  examples_cmd->add_option("--field", eo.field);
  examples_cmd->add_option("--kind", eo.kind)->check(CLI::IsMember({"all", "sym", "skew"}));
  examples_cmd->add_option("--data", eo.data, "golden file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o;
    std::ostringstream e2;
    const int code = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return code == 0 ? ExitPass : ExitBadParameters;
  }

  try {
    if (resolve_cmd->parsed()) return cmd_resolve(ro, out);
    if (verify_cmd->parsed()) return cmd_verify(vo, out);
    return cmd_examples(eo, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return ExitBadParameters;
  }
}

}  // namespace detsing
