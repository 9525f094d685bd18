#pragma once

#include <span>
#include <string>
#include <vector>

#include "detsing/ideal.hpp"
#include "detsing/polynomial.hpp"

namespace detsing {

enum class MatrixKind { Symmetric, SkewSymmetric, General };

std::string to_string(MatrixKind kind);

/// Square grid of polynomials in one ring. Indices are 0-based.
/// Construction checks the symmetry invariant implied by `kind`.
class GenericMatrix {
 public:
  using Grid = std::vector<std::vector<Polynomial>>;

  /// Throws BadIndex (not square / wrong ring), BadParameters (symmetry
  /// violated) or CharTwoForbidden (skew over characteristic 2).
  GenericMatrix(RingPtr ring, Grid entries, MatrixKind kind);

  const RingPtr& ring() const { return ring_; }
  std::size_t size() const { return entries_.size(); }
  MatrixKind kind() const { return kind_; }
  const Polynomial& operator()(std::size_t i, std::size_t j) const { return entries_[i][j]; }
  const Grid& entries() const { return entries_; }

 private:
  RingPtr ring_;
  Grid entries_;
  MatrixKind kind_;
};

/// "x_1_2" style name with 1-based indices.
std::string matrix_var_name(const std::string& prefix, std::size_t i, std::size_t j);

/// A_m over a fresh ring of the variables x_i_j, i < j. Throws CharTwoForbidden.
GenericMatrix generic_skew(std::size_t m, const CoefficientField& field);
/// B_m over a fresh ring of the variables x_i_j, i <= j.
GenericMatrix generic_sym(std::size_t m, const CoefficientField& field);
/// M_m over a fresh ring of m^2 independent variables.
GenericMatrix generic_general(std::size_t m, const CoefficientField& field);

/// Generic matrix over an existing ring. `vars` lists the entry variables
/// row-major over the independent positions (i < j for skew, i <= j for
/// symmetric, all for general).
GenericMatrix generic_in(const RingPtr& ring, MatrixKind kind, std::size_t m,
                         std::span<const VarId> vars);

/// Laplace expansion along rows, memoized over column subsets.
Polynomial determinant_cofactor(const GenericMatrix& m);
/// Fraction-free Gaussian elimination with exact polynomial division.
Polynomial determinant_bareiss(const GenericMatrix& m);
inline Polynomial determinant(const GenericMatrix& m) { return determinant_cofactor(m); }

/// Rows and columns given as increasing 0-based index lists of equal size.
/// Throws BadIndex.
GenericMatrix submatrix(const GenericMatrix& m, const std::vector<std::size_t>& rows,
                        const std::vector<std::size_t>& cols);

/// Expansion along the first row; pf [[0, x], [-x, 0]] = x.
/// Throws NotSkew or OddSize.
Polynomial pfaffian(const GenericMatrix& m);

/// Ideal of all r-minors, index sets enumerated lexicographically with
/// (rows, cols) nested; zero and proportional duplicates dropped.
/// Throws BadRank unless 1 <= r <= size.
Ideal minors_ideal(const GenericMatrix& m, std::size_t r);
Ideal principal_minors_ideal(const GenericMatrix& m, std::size_t r);

/// minors_ideal extended to all integers: unit ideal for r <= 0, zero ideal
/// for r > size.
Ideal minors_ideal_extended(const GenericMatrix& m, long r);

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k);

}  // namespace detsing
