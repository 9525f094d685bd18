#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "detsing/blowup.hpp"
#include "detsing/matrix.hpp"
#include "detsing/substitution.hpp"
#include "detsing/verify.hpp"

namespace detsing {

/// row <- scale * row - sum multiplier * pivot_row, rows named by label.
struct RowOp {
  std::size_t row;
  Polynomial scale;
  std::vector<std::pair<std::size_t, Polynomial>> subtract;
};

/// One blow-up of all current matrix variables, seen in the chart at matrix
/// position (k, l), followed by the change of coordinates that turns the
/// complement of the pivot rows into a fresh generic matrix.
struct ChartStep {
  std::size_t k = 0;
  std::size_t l = 0;
  ChartMap chart;
  /// M' in the chart ring: total transform divided by the exceptional variable.
  GenericMatrix chart_matrix;
  /// The new coordinates y_ij as polynomials in the chart ring.
  GenericMatrix reduced;
  /// sigma^(child size) * det M' = pivot_det * det reduced.
  Polynomial sigma;
  Polynomial pivot_det;
  /// node ring -> chart ring (y_ij to their defining polynomials).
  Substitution to_chart;
  /// chart ring -> node ring; rational when sigma is not constant.
  LocalizedSubstitution from_chart;
  std::vector<RowOp> transcript;
  bool diagonal() const { return k == l; }
};

struct ExceptionalVar {
  VarId var;
  std::size_t step;
};

struct ChartNode {
  std::size_t id = 0;
  std::optional<std::size_t> parent;
  std::optional<ChartStep> step;
  /// Generic matrix in fresh variables of the node ring.
  GenericMatrix matrix;
  /// Row i of `matrix` is row labels[i] of the original matrix (0-based).
  std::vector<std::size_t> labels;
  std::size_t offset = 0;
  std::size_t depth = 0;
  /// Original coordinates as fractions in the node coordinates.
  LocalizedSubstitution composed;
  /// Polynomials of the node ring assumed invertible in this chart.
  std::vector<Polynomial> units;
  std::vector<ExceptionalVar> exceptional;
  std::vector<std::size_t> children;
  bool leaf = false;
  std::vector<Verdict> verdicts;

  const RingPtr& ring() const { return matrix.ring(); }
  Polynomial unit_product() const;
};

/// Root node of the generic symmetric or skew matrix of size m.
ChartNode root_node(MatrixKind kind, std::size_t m, const CoefficientField& field);

/// Child in the X_{k,l}-chart (0-based positions, k < l). Throws SizeTooSmall
/// for matrices of size < 3.
ChartNode reduce_skew_chart(const ChartNode& node, std::size_t k, std::size_t l);
/// Child in the X_{k,k}-chart. Throws SizeTooSmall for size < 2.
ChartNode reduce_sym_diag_chart(const ChartNode& node, std::size_t k);
/// Child in the X_{k,l}-chart, k < l, with eps = 1 - x'_kk x'_ll appended to
/// the units. Size 2 yields the empty matrix. Throws SizeTooSmall for size < 2.
ChartNode reduce_sym_offdiag_chart(const ChartNode& node, std::size_t k, std::size_t l);

/// Rows of the chart matrix after applying the transcript, in label order.
GenericMatrix::Grid replay_transcript(const ChartStep& step, const std::vector<std::size_t>& parent_labels);

enum class VerifyLevel { None, Identities, Full };

VerifyLevel parse_verify_level(const std::string& text);
std::string to_string(VerifyLevel level);

struct ResolutionInput {
  MatrixKind kind = MatrixKind::Symmetric;
  std::size_t m = 0;
  /// r for symmetric, l for skew.
  std::size_t rank = 0;
  CoefficientField field = CoefficientField::rationals();
  bool all_charts = false;
  VerifyLevel verify = VerifyLevel::Identities;
  std::size_t workers = 1;
  bool timings = false;
};

struct ResolutionReport {
  ResolutionInput input;
  std::vector<ChartNode> nodes;
  double build_seconds = 0;
  double verify_seconds = 0;

  std::vector<std::size_t> leaves() const;
  std::size_t max_depth() const;
  bool all_pass() const;
  /// Index of the minors ideal whose strict transform is tracked at leaves:
  /// r - offset (symmetric) or 2l - 1 - offset (skew, reduced structure).
  long leaf_index(const ChartNode& node) const;
};

/// Resolution drivers. Throw BadParameters unless 1 <= r <= m (symmetric) or
/// 1 <= l, 2l <= m (skew); CharTwoForbidden for skew in characteristic 2.
ResolutionReport resolve_sym(std::size_t m, std::size_t r, const CoefficientField& field, bool all_charts = false);
ResolutionReport resolve_skew(std::size_t m, std::size_t l, const CoefficientField& field, bool all_charts = false);
ResolutionReport resolve(const ResolutionInput& input);

/// Per-node identities: sizes, coordinate change, transcript, determinant,
/// empty strict transform of the center, and strict transforms of every
/// minors ideal of the parent.
std::vector<Verdict> verify_node(const ResolutionReport& report, const ChartNode& node);

/// The identity "strict transform of I_r(M_m) = I_{r-delta}(reduced)" in the
/// representative chart: X_{1,2} for skew (delta 2), X_{1,1} (delta 1) or
/// X_{1,2} (delta 2, localized at eps) for symmetric.
Verdict check_chart_identity(MatrixKind kind, bool diagonal, std::size_t m, std::size_t r,
                             const CoefficientField& field);

/// Conditions (a) and (c) at every leaf; condition (b) holds structurally
/// for blow-ups with centers inside the singular locus and is not computed.
std::vector<Verdict> check_embedded_resolution(const ResolutionReport& report, const ChartNode& leaf);

/// Runs the verification level requested in report.input on `workers`
/// threads; results are stored per node independent of scheduling.
void verify_report(ResolutionReport& report);

nlohmann::json matrix_to_json(const GenericMatrix& m);
nlohmann::json to_json(const ResolutionReport& report);
std::string to_markdown(const ResolutionReport& report);

}  // namespace detsing
