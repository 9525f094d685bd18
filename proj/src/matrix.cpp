#include "detsing/matrix.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <unordered_map>

#include "detsing/error.hpp"

namespace detsing {

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::Symmetric: return "symmetric";
    case MatrixKind::SkewSymmetric: return "skew";
    case MatrixKind::General: return "general";
  }
  return "general";
}

GenericMatrix::GenericMatrix(RingPtr ring, Grid entries, MatrixKind kind)
    : ring_(std::move(ring)), entries_(std::move(entries)), kind_(kind) {
  const std::size_t n = entries_.size();
  for (const auto& row : entries_) {
    if (row.size() != n) throw Error(ErrorCode::BadIndex, "matrix is not square");
    for (const Polynomial& p : row) require_same_ring(p.ring(), ring_);
  }
  if (kind_ == MatrixKind::SkewSymmetric && ring_->field().characteristic() == 2) {
    throw Error(ErrorCode::CharTwoForbidden, "skew-symmetric matrices need characteristic != 2");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const bool ok = kind_ == MatrixKind::General ||
                      (kind_ == MatrixKind::Symmetric && entries_[i][j] == entries_[j][i]) ||
                      (kind_ == MatrixKind::SkewSymmetric && entries_[i][j] == -entries_[j][i] &&
                       (i != j || entries_[i][i].is_zero()));
      if (!ok) throw Error(ErrorCode::BadParameters, "matrix entries violate " + to_string(kind_));
    }
  }
}

std::string matrix_var_name(const std::string& prefix, std::size_t i, std::size_t j) {
  return prefix + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

namespace {

std::vector<std::pair<std::size_t, std::size_t>> free_positions(MatrixKind kind, std::size_t m) {
  std::vector<std::pair<std::size_t, std::size_t>> pos;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if ((kind == MatrixKind::SkewSymmetric && i < j) || (kind == MatrixKind::Symmetric && i <= j) ||
          kind == MatrixKind::General) {
        pos.emplace_back(i, j);
      }
    }
  }
  return pos;
}

GenericMatrix fresh_generic(MatrixKind kind, std::size_t m, const CoefficientField& field) {
  if (m == 0) throw Error(ErrorCode::BadParameters, "matrix size must be positive");
  if (kind == MatrixKind::SkewSymmetric && field.characteristic() == 2) {
    throw Error(ErrorCode::CharTwoForbidden, "skew-symmetric matrices need characteristic != 2");
  }
  std::vector<std::string> names;
  for (auto [i, j] : free_positions(kind, m)) names.push_back(matrix_var_name("x", i, j));
  RingPtr ring = Ring::make(field, std::move(names));
  std::vector<VarId> vars(ring->size());
  for (VarId v = 0; v < vars.size(); ++v) vars[v] = v;
  return generic_in(ring, kind, m, vars);
}

}  // namespace

GenericMatrix generic_skew(std::size_t m, const CoefficientField& field) {
  return fresh_generic(MatrixKind::SkewSymmetric, m, field);
}

GenericMatrix generic_sym(std::size_t m, const CoefficientField& field) {
  return fresh_generic(MatrixKind::Symmetric, m, field);
}

GenericMatrix generic_general(std::size_t m, const CoefficientField& field) {
  return fresh_generic(MatrixKind::General, m, field);
}

GenericMatrix generic_in(const RingPtr& ring, MatrixKind kind, std::size_t m,
                         std::span<const VarId> vars) {
  const auto pos = free_positions(kind, m);
  if (pos.size() != vars.size()) {
    throw Error(ErrorCode::BadParameters, "wrong number of entry variables for generic matrix");
  }
  GenericMatrix::Grid grid(m, std::vector<Polynomial>(m, Polynomial(ring)));
  for (std::size_t k = 0; k < pos.size(); ++k) {
    auto [i, j] = pos[k];
    Polynomial x = Polynomial::variable(ring, vars[k]);
    if (kind == MatrixKind::SkewSymmetric) grid[j][i] = -x;
    if (kind == MatrixKind::Symmetric) grid[j][i] = x;
    grid[i][j] = std::move(x);
  }
  return GenericMatrix(ring, std::move(grid), kind);
}

Polynomial determinant_cofactor(const GenericMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial::constant(m.ring(), 1);
  if (n > 20) throw Error(ErrorCode::ResourceLimit, "matrix too large for cofactor expansion");
  // level[S] = det of rows 0..|S|-1 against the column set S.
  std::unordered_map<std::uint32_t, Polynomial> level;
  level.emplace(0u, Polynomial::constant(m.ring(), 1));
  for (std::size_t row = 0; row < n; ++row) {
    std::unordered_map<std::uint32_t, Polynomial> next;
    for (const auto& [mask, minor] : level) {
      if (minor.is_zero()) continue;
      for (std::size_t col = 0; col < n; ++col) {
        const std::uint32_t bit = 1u << col;
        if ((mask & bit) != 0 || m(row, col).is_zero()) continue;
        // Sign of placing `col` after the columns already used that are larger.
        const int larger = std::popcount(mask & ~((bit << 1) - 1));
        Polynomial term = m(row, col) * minor;
        if (larger % 2 == 1) term = -term;
        auto [it, inserted] = next.try_emplace(mask | bit, term);
        if (!inserted) it->second += term;
      }
    }
    level = std::move(next);
  }
  auto it = level.find((1u << n) - 1);
  return it == level.end() ? Polynomial(m.ring()) : it->second;
}

Polynomial determinant_bareiss(const GenericMatrix& m) {
  const std::size_t n = m.size();
  if (n == 0) return Polynomial::constant(m.ring(), 1);
  GenericMatrix::Grid a = m.entries();
  Polynomial prev = Polynomial::constant(m.ring(), 1);
  bool negate = false;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k].is_zero()) {
      std::size_t pick = n;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (!a[i][k].is_zero() && (pick == n || a[i][k].size() < a[pick][k].size())) pick = i;
      }
      if (pick == n) return Polynomial(m.ring());
      std::swap(a[k], a[pick]);
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        a[i][j] = exact_divide(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev);
      }
      a[i][k] = Polynomial(m.ring());
    }
    prev = a[k][k];
  }
  Polynomial det = a[n - 1][n - 1];
  return negate ? -det : det;
}

GenericMatrix submatrix(const GenericMatrix& m, const std::vector<std::size_t>& rows,
                        const std::vector<std::size_t>& cols) {
  if (rows.size() != cols.size()) throw Error(ErrorCode::BadIndex, "row and column sets differ in size");
  auto check = [&](std::span<const std::size_t> idx) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (idx[k] >= m.size() || (k > 0 && idx[k] <= idx[k - 1])) {
        throw Error(ErrorCode::BadIndex, "index set must be increasing and within the matrix");
      }
    }
  };
  check(rows);
  check(cols);
  GenericMatrix::Grid grid;
  grid.reserve(rows.size());
  for (std::size_t i : rows) {
    std::vector<Polynomial> row;
    row.reserve(cols.size());
    for (std::size_t j : cols) row.push_back(m(i, j));
    grid.push_back(std::move(row));
  }
  const bool same = std::equal(rows.begin(), rows.end(), cols.begin(), cols.end());
  const MatrixKind kind = same ? m.kind() : MatrixKind::General;
  return GenericMatrix(m.ring(), std::move(grid), kind);
}

namespace {

Polynomial pfaffian_rec(const GenericMatrix& m, std::uint32_t remaining,
                        std::unordered_map<std::uint32_t, Polynomial>& memo) {
  if (remaining == 0) return Polynomial::constant(m.ring(), 1);
  if (auto it = memo.find(remaining); it != memo.end()) return it->second;
  const int first = std::countr_zero(remaining);
  const std::uint32_t rest = remaining & ~(1u << first);
  Polynomial sum(m.ring());
  int position = 0;
  for (std::uint32_t bits = rest; bits != 0; bits &= bits - 1, ++position) {
    const int j = std::countr_zero(bits);
    const Polynomial& entry = m(first, j);
    if (entry.is_zero()) continue;
    Polynomial term = entry * pfaffian_rec(m, rest & ~(1u << j), memo);
    if (position % 2 == 1) term = -term;
    sum += term;
  }
  memo.emplace(remaining, sum);
  return sum;
}

}  // namespace

Polynomial pfaffian(const GenericMatrix& m) {
  if (m.kind() != MatrixKind::SkewSymmetric) throw Error(ErrorCode::NotSkew, "pfaffian needs a skew matrix");
  if (m.size() % 2 != 0) throw Error(ErrorCode::OddSize, "pfaffian needs even size");
  if (m.size() > 30) throw Error(ErrorCode::ResourceLimit, "matrix too large for pfaffian");
  std::unordered_map<std::uint32_t, Polynomial> memo;
  const std::uint32_t all = m.size() == 0 ? 0u : static_cast<std::uint32_t>((1ull << m.size()) - 1);
  return pfaffian_rec(m, all, memo);
}

std::vector<std::vector<std::size_t>> subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) return out;
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

Ideal minors_ideal(const GenericMatrix& m, std::size_t r) {
  if (r < 1 || r > m.size()) throw Error(ErrorCode::BadRank, "minor size out of range");
  const auto sets = subsets(m.size(), r);
  Ideal ideal(m.ring());
  for (const auto& rows : sets) {
    for (const auto& cols : sets) ideal.add_unique(determinant(submatrix(m, rows, cols)));
  }
  return ideal;
}

Ideal principal_minors_ideal(const GenericMatrix& m, std::size_t r) {
  if (r < 1 || r > m.size()) throw Error(ErrorCode::BadRank, "minor size out of range");
  Ideal ideal(m.ring());
  for (const auto& idx : subsets(m.size(), r)) ideal.add_unique(determinant(submatrix(m, idx, idx)));
  return ideal;
}

Ideal minors_ideal_extended(const GenericMatrix& m, long r) {
  if (r <= 0) return Ideal::unit(m.ring());
  if (static_cast<std::size_t>(r) > m.size()) return Ideal(m.ring());
  return minors_ideal(m, static_cast<std::size_t>(r));
}

}  // namespace detsing
