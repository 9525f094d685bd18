#include <gtest/gtest.h>

#include "detsing/error.hpp"
#include "detsing/poly_io.hpp"
#include "detsing/resolution.hpp"

using namespace detsing;

namespace {

const CoefficientField kQ = CoefficientField::rationals();

Polynomial P(const RingPtr& r, const std::string& text) { return parse_polynomial(r, text); }

/// y-variable of the child as a polynomial in the chart ring.
Polynomial y_in_chart(const ChartNode& child, const std::string& name) {
  return child.step->to_chart.image(child.ring()->id(name));
}

void expect_all_pass(const std::vector<Verdict>& verdicts) {
  EXPECT_FALSE(verdicts.empty());
  for (const Verdict& v : verdicts) EXPECT_TRUE(v.pass) << nlohmann::json(v).dump();
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::BadParameters;
}

std::vector<Verdict> verify_single(const ChartNode& root, const ChartNode& child) {
  ResolutionReport report;
  report.nodes = {root, child};
  report.nodes[1].id = 1;
  return verify_node(report, report.nodes[1]);
}

}  // namespace

TEST(SkewChart, FourByFourOneTwo) {
  const ChartNode root = root_node(MatrixKind::SkewSymmetric, 4, kQ);
  const ChartNode c = reduce_skew_chart(root, 0, 1);
  ASSERT_EQ(c.matrix.size(), 2u);
  EXPECT_EQ(c.matrix.kind(), MatrixKind::SkewSymmetric);
  const RingPtr& R = c.step->chart.target();
  const Polynomial y34 = P(R, "x_3_4p + x_1_4p*x_2_3p - x_1_3p*x_2_4p");
  EXPECT_EQ(y_in_chart(c, "y_3_4"), y34);
  EXPECT_EQ(determinant(c.step->chart_matrix), pow(y34, 2));
  EXPECT_EQ(c.offset, 2u);
  EXPECT_EQ(c.labels, (std::vector<std::size_t>{2, 3}));
  ASSERT_EQ(c.exceptional.size(), 1u);
  EXPECT_EQ(c.ring()->name(c.exceptional[0].var), "x_1_2p");
  EXPECT_TRUE(c.units.empty());
  expect_all_pass(verify_single(root, c));
}

TEST(SkewChart, EveryChartOfA4GivesASquare) {
  const ChartNode root = root_node(MatrixKind::SkewSymmetric, 4, kQ);
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::size_t l = k + 1; l < 4; ++l) {
      const ChartNode c = reduce_skew_chart(root, k, l);
      const Polynomial y = c.step->reduced(0, 1);
      EXPECT_EQ(determinant(c.step->chart_matrix), pow(y, 2)) << k << l;
      expect_all_pass(verify_single(root, c));
    }
  }
  // X_{2,3}: the remaining rows are 1 and 4.
  const ChartNode c = reduce_skew_chart(root, 1, 2);
  EXPECT_EQ(y_in_chart(c, "y_1_4"), P(c.step->chart.target(), "x_1_4p + x_1_2p*x_3_4p - x_1_3p*x_2_4p"));
}

TEST(SkewChart, FiveByFive) {
  const ChartNode root = root_node(MatrixKind::SkewSymmetric, 5, kQ);
  const ChartNode c = reduce_skew_chart(root, 0, 1);
  ASSERT_EQ(c.matrix.size(), 3u);
  for (const char* name : {"y_3_4", "y_3_5", "y_4_5"}) EXPECT_TRUE(c.ring()->find(name).has_value());
  // y_ij = x'_ij - x'_2j x'_1i + x'_1j x'_2i
  const RingPtr& R = c.step->chart.target();
  EXPECT_EQ(y_in_chart(c, "y_4_5"), P(R, "x_4_5p - x_2_5p*x_1_4p + x_1_5p*x_2_4p"));
  expect_all_pass(verify_single(root, c));
  EXPECT_EQ(code_of([] { reduce_skew_chart(root_node(MatrixKind::SkewSymmetric, 2, kQ), 0, 1); }),
            ErrorCode::SizeTooSmall);
}

TEST(SymChart, DiagonalThreeByThree) {
  const ChartNode root = root_node(MatrixKind::Symmetric, 3, kQ);
  const ChartNode c = reduce_sym_diag_chart(root, 0);
  ASSERT_EQ(c.matrix.size(), 2u);
  const RingPtr& R = c.step->chart.target();
  EXPECT_EQ(y_in_chart(c, "y_2_2"), P(R, "x_2_2p - x_1_2p^2"));
  EXPECT_EQ(y_in_chart(c, "y_2_3"), P(R, "x_2_3p - x_1_2p*x_1_3p"));
  EXPECT_EQ(y_in_chart(c, "y_3_3"), P(R, "x_3_3p - x_1_3p^2"));
  EXPECT_EQ(determinant(c.step->chart_matrix), determinant(c.step->reduced));
  expect_all_pass(verify_single(root, c));
}

TEST(SymChart, DiagonalSmallAndLarger) {
  const ChartNode r2 = root_node(MatrixKind::Symmetric, 2, kQ);
  const ChartNode c2 = reduce_sym_diag_chart(r2, 0);
  ASSERT_EQ(c2.matrix.size(), 1u);
  EXPECT_EQ(y_in_chart(c2, "y_2_2"), P(c2.step->chart.target(), "x_2_2p - x_1_2p^2"));
  expect_all_pass(verify_single(r2, c2));

  const ChartNode r4 = root_node(MatrixKind::Symmetric, 4, kQ);
  for (std::size_t k = 0; k < 4; ++k) {
    const ChartNode c = reduce_sym_diag_chart(r4, k);
    EXPECT_EQ(c.matrix.size(), 3u);
    expect_all_pass(verify_single(r4, c));
  }
  EXPECT_EQ(code_of([] { reduce_sym_diag_chart(root_node(MatrixKind::Symmetric, 1, kQ), 0); }),
            ErrorCode::SizeTooSmall);
}

TEST(SymChart, OffDiagonalFourByFour) {
  const ChartNode root = root_node(MatrixKind::Symmetric, 4, kQ);
  const ChartNode c = reduce_sym_offdiag_chart(root, 0, 1);
  ASSERT_EQ(c.matrix.size(), 2u);
  const RingPtr& R = c.step->chart.target();
  const Polynomial eps = P(R, "1 - x_1_1p*x_2_2p");
  EXPECT_EQ(c.step->sigma, eps);
  ASSERT_EQ(c.units.size(), 1u);
  EXPECT_EQ(c.units[0], P(c.ring(), "1 - x_1_1p*x_2_2p"));
  // y_ij = eps (x'_ij - x'_2i x'_1j) - (x'_1i - x'_11 x'_2i)(x'_2j - x'_22 x'_1j)
  for (const auto& [i, j] : std::vector<std::pair<int, int>>{{3, 3}, {3, 4}, {4, 4}}) {
    auto x = [&](int a, int b) {
      return Polynomial::variable(R, "x_" + std::to_string(std::min(a, b)) + "_" + std::to_string(std::max(a, b)) + "p");
    };
    const Polynomial expected = eps * (x(i, j) - x(2, i) * x(1, j)) - (x(1, i) - x(1, 1) * x(2, i)) * (x(2, j) - x(2, 2) * x(1, j));
    EXPECT_EQ(y_in_chart(c, "y_" + std::to_string(i) + "_" + std::to_string(j)), expected) << i << j;
  }
  // eps^(m-3) det B' = -det Y
  EXPECT_EQ(eps * determinant(c.step->chart_matrix), -determinant(c.step->reduced));
  expect_all_pass(verify_single(root, c));
}

TEST(SymChart, OffDiagonalSmallSizes) {
  const ChartNode r3 = root_node(MatrixKind::Symmetric, 3, kQ);
  const ChartNode c3 = reduce_sym_offdiag_chart(r3, 1, 2);
  EXPECT_EQ(c3.matrix.size(), 1u);
  EXPECT_TRUE(c3.ring()->find("y_1_1").has_value());
  expect_all_pass(verify_single(r3, c3));

  const ChartNode r2 = root_node(MatrixKind::Symmetric, 2, kQ);
  const ChartNode c2 = reduce_sym_offdiag_chart(r2, 0, 1);
  EXPECT_EQ(c2.matrix.size(), 0u);
  expect_all_pass(verify_single(r2, c2));
}

TEST(SymChart, SaturatedTwoMinorsEmptyInOffDiagonalChart) {
  const ChartNode r3 = root_node(MatrixKind::Symmetric, 3, kQ);
  const ChartNode c = reduce_sym_offdiag_chart(r3, 1, 2);
  const Ideal st = strict_transform_ideal(minors_ideal(r3.matrix, 2), c.step->chart);
  const RingPtr& R = c.step->chart.target();
  EXPECT_FALSE(groebner(st).is_unit());
  EXPECT_TRUE(groebner(saturate(st, P(R, "x_2_2p*x_3_3p - 1"))).is_unit());
}

TEST(Transcript, ReplayProducesBlockTriangularRows) {
  const ChartNode root = root_node(MatrixKind::Symmetric, 4, kQ);
  const ChartNode c = reduce_sym_offdiag_chart(root, 1, 3);
  const auto rows = replay_transcript(*c.step, root.labels);
  ASSERT_EQ(rows.size(), 2u);
  const std::vector<std::size_t> rest{0, 2};
  for (std::size_t a = 0; a < 2; ++a) {
    EXPECT_TRUE(rows[a][1].is_zero());
    EXPECT_TRUE(rows[a][3].is_zero());
    for (std::size_t b = 0; b < 2; ++b) EXPECT_EQ(rows[a][rest[b]], c.step->reduced(a, b));
  }
  EXPECT_EQ(c.step->transcript[0].row, 0u);
  EXPECT_EQ(c.step->transcript[0].scale, c.step->sigma);
}

TEST(Verification, DetectsWrongCoordinates) {
  const ChartNode root = root_node(MatrixKind::SkewSymmetric, 4, kQ);
  ChartNode c = reduce_skew_chart(root, 0, 1);
  const RingPtr& R = c.step->chart.target();
  // Flip the sign of one quadratic term of y_34.
  GenericMatrix::Grid wrong = c.step->reduced.entries();
  wrong[0][1] = P(R, "x_3_4p - x_1_4p*x_2_3p - x_1_3p*x_2_4p");
  wrong[1][0] = -wrong[0][1];
  c.step->reduced = GenericMatrix(R, wrong, MatrixKind::SkewSymmetric);
  bool minors_failed = false;
  bool det_failed = false;
  for (const Verdict& v : verify_single(root, c)) {
    if (v.check == "minors-strict-transform" && !v.pass) minors_failed = true;
    if (v.check == "determinant" && !v.pass) det_failed = true;
  }
  EXPECT_TRUE(minors_failed);
  EXPECT_TRUE(det_failed);
}

TEST(Resolve, SkewFourTwo) {
  ResolutionInput in;
  in.kind = MatrixKind::SkewSymmetric;
  in.m = 4;
  in.rank = 2;
  in.all_charts = true;
  in.verify = VerifyLevel::Full;
  ResolutionReport rep = resolve(in);
  ASSERT_EQ(rep.nodes.size(), 7u);
  EXPECT_EQ(rep.nodes[0].children.size(), 6u);
  EXPECT_EQ(rep.leaves().size(), 6u);
  EXPECT_EQ(rep.max_depth(), 1u);
  verify_report(rep);
  EXPECT_TRUE(rep.all_pass());
  const ChartNode& leaf = rep.nodes[1];
  EXPECT_EQ(rep.leaf_index(leaf), 1);
  bool saw_regular = false;
  for (const Verdict& v : leaf.verdicts) {
    if (v.check == "regular") {
      saw_regular = true;
      EXPECT_EQ(v.inputs["coordinates"], nlohmann::json::array({"y_3_4"}));
    }
  }
  EXPECT_TRUE(saw_regular);
}

TEST(Resolve, SkewLevelOneIsAlreadyRegular) {
  ResolutionReport rep = resolve_skew(5, 1, kQ);
  rep.input.verify = VerifyLevel::Full;
  ASSERT_EQ(rep.nodes.size(), 1u);
  EXPECT_TRUE(rep.nodes[0].leaf);
  verify_report(rep);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Resolve, SymTwoTwo) {
  ResolutionReport all = resolve_sym(2, 2, kQ, true);
  EXPECT_EQ(all.nodes.size(), 4u);
  EXPECT_EQ(all.max_depth(), 1u);
  all.input.verify = VerifyLevel::Full;
  verify_report(all);
  EXPECT_TRUE(all.all_pass());
  const ResolutionReport rep = resolve_sym(2, 2, kQ);
  EXPECT_EQ(rep.nodes.size(), 3u);
}

TEST(Resolve, SymThreeThree) {
  ResolutionReport rep = resolve_sym(3, 3, kQ);
  rep.input.verify = VerifyLevel::Full;
  // root; X_11 (size 2), X_12 (size 1); X_11 expands again.
  ASSERT_EQ(rep.nodes.size(), 5u);
  EXPECT_FALSE(rep.nodes[1].leaf);
  EXPECT_TRUE(rep.nodes[2].leaf);
  EXPECT_EQ(rep.nodes[2].depth, 1u);
  EXPECT_EQ(rep.nodes[3].depth, 2u);
  EXPECT_EQ(rep.max_depth(), 2u);
  verify_report(rep);
  EXPECT_TRUE(rep.all_pass());
}

TEST(Resolve, DepthBounds) {
  for (std::size_t m = 2; m <= 5; ++m) {
    for (std::size_t r = 1; r <= m; ++r) {
      const ResolutionReport rep = resolve_sym(m, r, kQ);
      EXPECT_LE(rep.max_depth(), r - 1);
      for (const ChartNode& n : rep.nodes) {
        if (!n.step) continue;
        EXPECT_EQ(n.matrix.size() + (n.step->diagonal() ? 1 : 2), rep.nodes[*n.parent].matrix.size());
      }
    }
  }
  for (std::size_t m = 2; m <= 7; ++m) {
    for (std::size_t l = 1; 2 * l <= m; ++l) {
      const ResolutionReport rep = resolve_skew(m, l, kQ);
      EXPECT_LE(rep.max_depth(), l - 1);
    }
  }
}

TEST(Resolve, BadParameters) {
  EXPECT_EQ(code_of([] { resolve_skew(3, 2, kQ); }), ErrorCode::BadParameters);
  EXPECT_EQ(code_of([] { resolve_sym(3, 4, kQ); }), ErrorCode::BadParameters);
  EXPECT_EQ(code_of([] { resolve_sym(3, 0, kQ); }), ErrorCode::BadParameters);
  EXPECT_EQ(code_of([] { resolve_skew(4, 2, CoefficientField::prime(2)); }), ErrorCode::CharTwoForbidden);
}

TEST(Resolve, DeterministicAcrossWorkers) {
  ResolutionInput in;
  in.kind = MatrixKind::Symmetric;
  in.m = 4;
  in.rank = 4;
  in.all_charts = true;
  in.verify = VerifyLevel::Full;
  ResolutionReport serial = resolve(in);
  verify_report(serial);
  in.workers = 4;
  ResolutionReport parallel = resolve(in);
  verify_report(parallel);
  EXPECT_EQ(to_json(serial).dump(), to_json(parallel).dump());
  EXPECT_TRUE(serial.all_pass());
  const std::string md = to_markdown(serial);
  EXPECT_NE(md.find("X_1_2-chart of node 0"), std::string::npos);
  EXPECT_NE(md.find("Overall: pass"), std::string::npos);
}

TEST(Resolve, JsonShape) {
  ResolutionReport rep = resolve_skew(4, 2, kQ);
  verify_report(rep);
  const nlohmann::json j = to_json(rep);
  EXPECT_EQ(j["input"]["kind"], "skew");
  EXPECT_EQ(j["input"]["l"], 2);
  ASSERT_EQ(j["nodes"].size(), 2u);
  const auto& node = j["nodes"][1];
  for (const char* key : {"id", "parent", "chart", "substitution", "units", "exceptional", "matrix", "verdicts"}) {
    EXPECT_TRUE(node.contains(key)) << key;
  }
  EXPECT_EQ(node["chart"]["coordinates"]["y_3_4"], "x_1_4p*x_2_3p - x_1_3p*x_2_4p + x_3_4p");
  EXPECT_EQ(node["matrix"]["kind"], "skew");
  EXPECT_FALSE(j["statistics"].contains("timings"));
  EXPECT_TRUE(j["pass"].get<bool>());
}
