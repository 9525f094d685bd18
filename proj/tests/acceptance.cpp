#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "detsing/blowup.hpp"
#include "detsing/error.hpp"
#include "detsing/groebner.hpp"
#include "detsing/matrix.hpp"
#include "detsing/poly_io.hpp"
#include "detsing/resolution.hpp"
#include "detsing/substitution.hpp"
#include "detsing/verify.hpp"
#include "oracles.hpp"
#include "random_poly.hpp"

using namespace detsing;

namespace {

const std::vector<std::string> kFields{"Q", "Fp:3", "Fp:5", "Fp:7", "Fp:101"};

class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::size_t count() const { return count_; }
  std::string summary() const {
    std::ostringstream s;
    s << failed_ << " of " << count_ << " checks failed";
    for (const auto& f : failures_) s << "; " << f;
    return s.str();
  }

 private:
  std::size_t count_ = 0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

Polynomial P(const RingPtr& r, const std::string& text) { return parse_polynomial(r, text); }

ChartMap chart_at(const RingPtr& r, const std::string& var) {
  return make_chart(Center::all_variables(r), r->id(var));
}

Polynomial strict(const Polynomial& f, const ChartMap& c) { return strict_transform_poly(f, c).rest; }

bool has_verdict(const ChartNode& node, const std::string& check) {
  return std::any_of(node.verdicts.begin(), node.verdicts.end(),
                     [&](const Verdict& v) { return v.check == check && v.pass; });
}

ResolutionReport verified(MatrixKind kind, std::size_t m, std::size_t rank, const CoefficientField& field,
                          bool all_charts) {
  ResolutionInput in;
  in.kind = kind;
  in.m = m;
  in.rank = rank;
  in.field = field;
  in.all_charts = all_charts;
  in.verify = VerifyLevel::Full;
  ResolutionReport report = resolve(in);
  verify_report(report);
  return report;
}

/// Conditions (a) and (c) at every leaf and an empty strict transform of the
/// center in every chart.
void check_tree(Checks& c, const ResolutionReport& report, const std::string& name) {
  c.expect(report.all_pass(), name + ": some verdict failed");
  for (const ChartNode& node : report.nodes) {
    const std::string where = name + " node " + std::to_string(node.id);
    if (node.parent) c.expect(has_verdict(node, "center-strict-transform-empty"), where + ": center transform");
    if (!node.leaf) continue;
    c.expect(has_verdict(node, "regular"), where + ": regular");
    c.expect(has_verdict(node, "transversal"), where + ": transversal");
    if (report.input.kind == MatrixKind::SkewSymmetric && node.parent) {
      c.expect(has_verdict(node, "reduced-structure"), where + ": reduced structure");
    }
  }
}

std::string criterion1(Checks& c) {
  for (const std::string& spec : kFields) {
    const CoefficientField field = CoefficientField::parse(spec);
    const GenericMatrix a2 = generic_skew(2, field);
    const GenericMatrix b2 = generic_sym(2, field);
    c.expect(determinant(a2) == P(a2.ring(), "x_1_2^2"), spec + ": det A_2");
    c.expect(determinant(b2) == P(b2.ring(), "x_1_1*x_2_2 - x_1_2^2"), spec + ": det B_2");
    for (bool all : {false, true}) {
      const ResolutionReport report = verified(MatrixKind::Symmetric, 2, 2, field, all);
      c.expect(report.max_depth() == 1, spec + ": one blow-up");
      c.expect(report.nodes[0].children.size() == (all ? 3u : 2u), spec + ": chart count");
      check_tree(c, report, spec + " sym(2,2)");
    }
  }
  return "";
}

std::string criterion2(Checks& c) {
  for (const std::string& spec : kFields) {
    const CoefficientField field = CoefficientField::parse(spec);
    const GenericMatrix b3 = generic_sym(3, field);
    const Ideal minors2 = minors_ideal(b3, 2);
    {
      const ChartMap x11 = chart_at(b3.ring(), "x_1_1");
      const RingPtr& t = x11.target();
      const Polynomial y22 = P(t, "x_2_2p - x_1_2p^2");
      const Polynomial y23 = P(t, "x_2_3p - x_1_2p*x_1_3p");
      const Polynomial y33 = P(t, "x_3_3p - x_1_3p^2");
      const GenericMatrix y(t, {{y22, y23}, {y23, y33}}, MatrixKind::Symmetric);
      c.expect(strict(determinant(b3), x11) == determinant(y), spec + ": det strict transform");
      c.expect(ideal_equal(strict_transform_ideal(minors2, x11), Ideal(t, {y22, y23, y33})),
               spec + ": 2-minors strict transform");
    }
    {
      const ChartMap x23 = chart_at(b3.ring(), "x_2_3");
      const Polynomial unit = P(x23.target(), "x_2_2p*x_3_3p - 1");
      c.expect(groebner(saturate(strict_transform_ideal(minors2, x23), unit)).is_unit(),
               spec + ": X23 saturation");
    }
  }
  return "";
}

std::string criterion3(Checks& c) {
  for (const std::string& spec : kFields) {
    const CoefficientField field = CoefficientField::parse(spec);
    const GenericMatrix a4 = generic_skew(4, field);
    const ChartMap x12 = chart_at(a4.ring(), "x_1_2");
    const Polynomial y34 = P(x12.target(), "x_3_4p + x_1_4p*x_2_3p - x_1_3p*x_2_4p");
    c.expect(strict(determinant(a4), x12) == y34 * y34, spec + ": det A_4 strict transform");
    const Polynomial m = strict(determinant(submatrix(a4, {0, 1, 2}, {0, 1, 3})), x12);
    c.expect(m == y34 || m == -y34, spec + ": 3-minor strict transform");

    const Polynomial pf = pfaffian(a4);
    c.expect(pf == P(a4.ring(), "x_1_2*x_3_4 - x_1_3*x_2_4 + x_1_4*x_2_3"), spec + ": pf A_4");
    std::size_t nonzero = 0;
    for (const auto& rows : subsets(4, 3)) {
      for (const auto& cols : subsets(4, 3)) {
        const Polynomial d = determinant(submatrix(a4, rows, cols));
        if (d.is_zero()) continue;
        ++nonzero;
        bool found = false;
        for (std::size_t i = 0; i < 4 && !found; ++i)
          for (std::size_t j = i + 1; j < 4 && !found; ++j)
            found = d == a4(i, j) * pf || d == -(a4(i, j) * pf);
        c.expect(found, spec + ": 3-minor is +-x_ij pf");
      }
    }
    c.expect(nonzero > 0, spec + ": some 3-minor is nonzero");
  }
  return "";
}

std::string criterion4(Checks& c) {
  const CoefficientField q = CoefficientField::rationals();
  const RingPtr r = ring_new(q, {"x", "y", "z"});
  const Polynomial g1 = P(r, "x^2 - y^3");
  const Polynomial g2 = P(r, "x^2 - z^5");
  const Polynomial h = P(r, "y^3 - z^5");
  const ChartMap z = chart_at(r, "z");
  const RingPtr& t = z.target();
  const Polynomial g1s = strict(g1, z);
  const Polynomial g2s = strict(g2, z);
  const Polynomial hs = strict(h, z);
  c.expect(g1s == P(t, "xp^2 - yp^3*zp"), "g1'");
  c.expect(g2s == P(t, "xp^2 - zp^3"), "g2'");
  c.expect(hs == P(t, "yp^3 - zp^2"), "h'");
  c.expect(g2s - g1s == P(t, "zp") * hs, "g2' - g1' = z' h'");
  c.expect(!ideal_contains(Ideal(t, {g1s, g2s}), hs), "h' not in <g1', g2'>");
  c.expect(ideal_contains(Ideal(r, {g1, g2}), h), "h in <g1, g2>");
  c.expect(check_lemma_counterexample(q).pass, "library verdict");
  return "";
}

std::string criterion5(Checks& c) {
  for (const std::string& spec : kFields) {
    const CoefficientField field = CoefficientField::parse(spec);
    for (std::size_t m : {3, 5, 7}) {
      c.expect(check_fact(Fact::F1, m, field).pass, spec + ": F1 m=" + std::to_string(m));
      c.expect(determinant_bareiss(generic_skew(m, field)).is_zero(), spec + ": Bareiss F1 m=" + std::to_string(m));
    }
    for (std::size_t m : {2, 4, 6}) {
      c.expect(check_fact(Fact::F3, m, field).pass, spec + ": F3 m=" + std::to_string(m));
      const GenericMatrix a = generic_skew(m, field);
      c.expect(determinant_bareiss(a) == pow(pfaffian(a), 2), spec + ": Bareiss F3 m=" + std::to_string(m));
    }
    c.expect(check_fact(Fact::F2, 4, field, 2).pass, spec + ": F2 m=4 l=2");
    // Second route: I_4 <= I_3 by Laplace, and every 3-minor is a multiple
    // of pf, whose square is det, so I_3 lies in the radical of I_4.
    const GenericMatrix a4 = generic_skew(4, field);
    const Ideal i4 = minors_ideal(a4, 4);
    const Ideal i3 = minors_ideal(a4, 3);
    const Polynomial pf = pfaffian(a4);
    c.expect(ideal_subset(i4, i3), spec + ": I_4 in I_3");
    c.expect(ideal_contains(i4, pf * pf), spec + ": pf^2 in I_4");
    for (const Polynomial& g : i3.generators()) {
      bool divisible = true;
      try {
        exact_divide(g, pf);
      } catch (const Error&) {
        divisible = false;
      }
      c.expect(divisible, spec + ": pf divides a 3-minor");
    }
  }
  return "";
}

/// Chart matrix entry at (i, j) in the chart of (k, l): the primed variable,
/// 1 at the chart position, with the symmetry sign for skew.
Polynomial entry(const RingPtr& t, MatrixKind kind, std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
  if (kind == MatrixKind::SkewSymmetric && i == j) return Polynomial(t);
  const std::size_t a = std::min(i, j);
  const std::size_t b = std::max(i, j);
  Polynomial v = (a == k && b == l) ? Polynomial::constant(t, 1)
                                    : Polynomial::variable(t, matrix_var_name("x", a, b) + "p");
  return kind == MatrixKind::SkewSymmetric && i > j ? -v : v;
}

/// The identity for one (kind, chart type, m, r), with the new coordinates
/// written out explicitly.
bool chart_identity(MatrixKind kind, bool diagonal, std::size_t m, std::size_t r, const CoefficientField& field) {
  const GenericMatrix mat = kind == MatrixKind::Symmetric ? generic_sym(m, field) : generic_skew(m, field);
  const std::size_t k = 0;
  const std::size_t l = diagonal ? 0 : 1;
  const ChartMap chart = chart_at(mat.ring(), matrix_var_name("x", k, l));
  const RingPtr& t = chart.target();
  auto e = [&](std::size_t i, std::size_t j) { return entry(t, kind, i, j, k, l); };
  const std::size_t start = diagonal ? 1 : 2;
  const std::size_t n = m - start;
  GenericMatrix::Grid y(n, std::vector<Polynomial>(n, Polynomial(t)));
  Polynomial eps = Polynomial::constant(t, 1);
  if (kind == MatrixKind::Symmetric && !diagonal) eps = Polynomial::constant(t, 1) - e(0, 0) * e(1, 1);
  for (std::size_t i = start; i < m; ++i) {
    for (std::size_t j = start; j < m; ++j) {
      Polynomial v(t);
      if (kind == MatrixKind::SkewSymmetric) {
        v = e(i, j) - e(k, i) * e(l, j) + e(l, i) * e(k, j);
      } else if (diagonal) {
        v = e(i, j) - e(0, i) * e(0, j);
      } else {
        v = eps * e(i, j) + e(1, 1) * e(i, 0) * e(0, j) - e(i, 0) * e(1, j) - e(i, 1) * e(0, j) +
            e(0, 0) * e(i, 1) * e(1, j);
      }
      y[i - start][j - start] = v;
    }
  }
  const GenericMatrix reduced(t, y, kind);
  std::vector<VarId> block;
  for (std::size_t i = start; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      if (kind == MatrixKind::Symmetric || i < j) block.push_back(t->id(matrix_var_name("x", i, j) + "p"));
  const MonomialOrder order = MonomialOrder::elimination(block);
  const long shift = diagonal ? 1 : 2;
  const Ideal st = strict_transform_ideal(minors_ideal(mat, r), chart);
  const Ideal expected = minors_ideal_extended(reduced, static_cast<long>(r) - shift);
  return eps.is_constant() ? ideal_equal(st, expected, order) : localized_equal(st, expected, eps, order);
}

std::string criterion6(Checks& c) {
  const CoefficientField q = CoefficientField::rationals();
  for (std::size_t m : {4, 5, 6}) {
    for (std::size_t r = 3; r <= m; ++r) {
      const std::string what = "skew m=" + std::to_string(m) + " r=" + std::to_string(r);
      c.expect(chart_identity(MatrixKind::SkewSymmetric, false, m, r, q), what);
      c.expect(check_chart_identity(MatrixKind::SkewSymmetric, false, m, r, q).pass, what + " (library)");
    }
  }
  for (std::size_t m : {3, 4, 5}) {
    for (std::size_t r = 1; r <= m; ++r) {
      for (bool diagonal : {true, false}) {
        const std::string what = std::string(diagonal ? "sym diag" : "sym offdiag") + " m=" + std::to_string(m) +
                                 " r=" + std::to_string(r);
        c.expect(chart_identity(MatrixKind::Symmetric, diagonal, m, r, q), what);
        c.expect(check_chart_identity(MatrixKind::Symmetric, diagonal, m, r, q).pass, what + " (library)");
      }
    }
  }
  return "";
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string criterion7(Checks& c) {
  const CoefficientField q = CoefficientField::rationals();
  std::ostringstream note;
  {
    const auto t0 = std::chrono::steady_clock::now();
    const ResolutionReport sym = verified(MatrixKind::Symmetric, 4, 4, q, false);
    const double s = seconds_since(t0);
    c.expect(sym.max_depth() <= 3, "sym(4,4) depth");
    check_tree(c, sym, "sym(4,4)");
    c.expect(s < 600, "sym(4,4) runtime");
    note << "sym(4,4) " << sym.nodes.size() << " nodes " << s << " s";
  }
  {
    const auto t0 = std::chrono::steady_clock::now();
    const ResolutionReport skew = verified(MatrixKind::SkewSymmetric, 6, 3, q, false);
    const double s = seconds_since(t0);
    c.expect(skew.max_depth() == 2, "skew(6,3) depth");
    check_tree(c, skew, "skew(6,3)");
    c.expect(s < 600, "skew(6,3) runtime");
    note << ", skew(6,3) " << skew.nodes.size() << " nodes " << s << " s";
  }
  return note.str();
}

std::string criterion8(Checks& c) {
  using detsing::testing::map_product;
  using detsing::testing::random_polynomial;
  using detsing::testing::to_map;
  std::size_t law_cases = 0;
  std::mt19937 rng(8080);
  for (const char* spec : {"Q", "Fp:3", "Fp:101"}) {
    const CoefficientField field = CoefficientField::parse(spec);
    const RingPtr r = ring_new(field, {"a", "b", "c", "d"});
    const RingPtr t = ring_new(field, {"u", "v"});
    for (int iter = 0; iter < 400; ++iter, ++law_cases) {
      const Polynomial f = random_polynomial(r, rng, 5, 3);
      const Polynomial g = random_polynomial(r, rng, 5, 3);
      const Polynomial h = random_polynomial(r, rng, 5, 3);
      c.expect(f + g == g + f && f * g == g * f, "commutativity");
      c.expect((f + g) + h == f + (g + h) && (f * g) * h == f * (g * h), "associativity");
      c.expect(f * (g + h) == f * g + f * h, "distributivity");
      c.expect((f - f).is_zero() && f * Polynomial::constant(r, 1) == f, "identities");
      c.expect(to_map(f * g) == map_product(to_map(f), to_map(g), field), "product oracle");
      c.expect(parse_polynomial(r, format_polynomial(f)) == f, "format round trip");
      std::vector<Polynomial> images;
      for (int k = 0; k < 4; ++k) images.push_back(random_polynomial(t, rng, 3, 2));
      const Substitution s(r, t, images);
      c.expect(substitute(f * g + h, s) == substitute(f, s) * substitute(g, s) + substitute(h, s), "homomorphism");
    }
  }
  c.expect(law_cases >= 1000, "at least 1000 randomized cases");

  const CoefficientField q = CoefficientField::rationals();
  for (std::size_t m = 1; m <= 6; ++m) {
    for (const auto& mat : {generic_sym(m, q), generic_skew(m, q), generic_general(m, q)}) {
      c.expect(determinant_cofactor(mat) == determinant_bareiss(mat), "cofactor vs Bareiss m=" + std::to_string(m));
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const RingPtr r = ring_new(CoefficientField::prime(7), {"a", "b", "c"});
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 3);
    GenericMatrix::Grid g(n, std::vector<Polynomial>(n, Polynomial(r)));
    for (auto& row : g)
      for (auto& x : row) x = random_polynomial(r, rng, 3, 2);
    const GenericMatrix mat(r, g, MatrixKind::General);
    c.expect(determinant_cofactor(mat) == determinant_bareiss(mat), "cofactor vs Bareiss, random entries");
  }

  std::size_t oracle_cases = 0;
  for (const char* spec : {"Q", "Fp:7"}) {
    const RingPtr r = ring_new(CoefficientField::parse(spec), {"a", "b", "c", "d"});
    for (int trial = 0; trial < 15; ++trial) {
      std::vector<Polynomial> gens;
      for (int k = 0; k < 3; ++k)
        gens.push_back(detsing::testing::random_homogeneous(r, rng, 2 + static_cast<unsigned>(rng() % 2), 3));
      const Ideal ideal(r, gens);
      for (unsigned d = 2; d <= 5; ++d) {
        Polynomial member(r);
        for (const Polynomial& g : ideal.generators())
          if (g.total_degree() <= d) member += g * detsing::testing::random_homogeneous(r, rng, d - g.total_degree(), 2);
        const Polynomial other = detsing::testing::random_homogeneous(r, rng, d, 3);
        for (const Polynomial& f : {member, other, member + other}) {
          c.expect(ideal_contains(ideal, f) == detsing::testing::macaulay_member(f, ideal.generators(), d),
                   "Buchberger vs Macaulay");
          ++oracle_cases;
        }
      }
    }
  }

  for (std::size_t m = 2; m <= 5; ++m) {
    for (const auto& mat : {generic_sym(m, q), generic_skew(m, q), generic_general(m, q)}) {
      for (std::size_t r = 2; r <= m; ++r) {
        const Ideal big = minors_ideal(mat, r - 1);
        const Ideal small = minors_ideal(mat, r);
        c.expect(ideal_subset(small, big), "Laplace " + to_string(mat.kind()) + " m=" + std::to_string(m) +
                                               " r=" + std::to_string(r));
      }
    }
  }
  return std::to_string(law_cases) + " law cases, " + std::to_string(oracle_cases) + " oracle cases";
}

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<std::string(Checks&)> body;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "m=2 determinants and resolve_sym(2,2)", 1, criterion1},
      {2, "symmetric m=3 charts X11 and X23", 5, criterion2},
      {3, "skew m=4 chart X12", 5, criterion3},
      {4, "non-homogeneous strict transform counterexample", 1, criterion4},
      {5, "F1, F2, F3 over Q and Fp, p in {3,5,7,101}", 60, criterion5},
      {6, "chart identities, skew m<=6 and symmetric m<=5", 600, criterion6},
      {7, "end-to-end resolve_sym(4,4) and resolve_skew(6,3)", 1200, criterion7},
      {8, "property suites", 600, criterion8},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    Checks checks;
    std::string note;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      note = cr.body(checks);
    } catch (const std::exception& e) {
      checks.expect(false, std::string("exception: ") + e.what());
    }
    const double s = seconds_since(t0);
    const bool in_time = s < cr.limit_seconds;
    const bool pass = checks.ok() && in_time;
    if (!pass) ++failed;
    std::printf("%s criterion %d: %s [%zu checks, exact, %.2f s, limit %.0f s]", pass ? "PASS" : "FAIL", cr.id,
                cr.title.c_str(), checks.count(), s, cr.limit_seconds);
    if (!note.empty()) std::printf(" (%s)", note.c_str());
    if (!checks.ok()) std::printf(" -- %s", checks.summary().c_str());
    if (!in_time) std::printf(" -- over time limit");
    std::printf("\n");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
