#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cscoh/scalar.hpp"

namespace cscoh {

using Vec = std::vector<Gaussian>;

inline bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

// Dense row-major matrix over the Gaussian rationals. Every graded component
// in scope has dimension <= C(16,8)^2 and in practice <= 9, so density costs
// nothing and keeps elimination deterministic.
class ExactMatrix {
 public:
  ExactMatrix() : rows_(0), cols_(0) {}
  ExactMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}

  static ExactMatrix identity(std::size_t n) {
    ExactMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m.at(k, k) = Gaussian(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Gaussian& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Gaussian& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vec row(std::size_t r) const {
    return Vec(data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_);
  }
  void set_row(std::size_t r, const Vec& v) {
    for (std::size_t c = 0; c < cols_; ++c) at(r, c) = v[c];
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!x.is_zero()) return false;
    return true;
  }

  friend bool operator==(const ExactMatrix& a, const ExactMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const ExactMatrix& a, const ExactMatrix& b) { return !(a == b); }

 private:
  std::size_t rows_, cols_;
  std::vector<Gaussian> data_;
};

inline ExactMatrix operator+(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw EngineError("matrix addition shape mismatch");
  ExactMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) + b.at(i, j);
  return r;
}

inline ExactMatrix operator-(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw EngineError("matrix subtraction shape mismatch");
  ExactMatrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j) - b.at(i, j);
  return r;
}

inline ExactMatrix operator*(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.rows()) throw EngineError("matrix product shape mismatch");
  ExactMatrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a.at(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (b.at(k, j).is_zero()) continue;
        r.at(i, j) += a.at(i, k) * b.at(k, j);
      }
    }
  return r;
}

inline ExactMatrix scale(const Gaussian& c, const ExactMatrix& m) {
  ExactMatrix r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r.at(i, j) = c * m.at(i, j);
  return r;
}

inline Vec operator*(const ExactMatrix& m, const Vec& v) {
  if (m.cols() != v.size()) throw EngineError("matrix-vector shape mismatch");
  Vec r(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).is_zero() && !v[j].is_zero()) r[i] += m.at(i, j) * v[j];
  return r;
}

inline ExactMatrix transpose(const ExactMatrix& m) {
  ExactMatrix r(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r.at(j, i) = m.at(i, j);
  return r;
}

inline ExactMatrix conj_transpose(const ExactMatrix& m) {
  ExactMatrix r(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r.at(j, i) = m.at(i, j).conj();
  return r;
}

inline ExactMatrix mat_from_rows(std::size_t cols, const std::vector<Vec>& rows) {
  ExactMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) m.set_row(i, rows[i]);
  return m;
}

inline ExactMatrix vstack(const ExactMatrix& a, const ExactMatrix& b) {
  if (a.cols() != b.cols()) throw EngineError("vstack column mismatch");
  ExactMatrix m(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m.at(i, j) = a.at(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) m.at(a.rows() + i, j) = b.at(i, j);
  return m;
}

struct RrefResult {
  ExactMatrix mat;
  std::vector<std::size_t> pivots;  // pivot column per pivot row, strictly increasing
  std::size_t rank() const { return pivots.size(); }
};

// Reduced row echelon form with the fixed pivot rule: leftmost eligible
// column, topmost remaining row. Deterministic, so representative bases are
// reproducible across platforms. `eligible_cols` limits pivot search (used by
// solve(), where the augmented column may not become a pivot).
inline RrefResult rref(ExactMatrix m, std::size_t eligible_cols = SIZE_MAX) {
  const std::size_t nc = std::min<std::size_t>(m.cols(), eligible_cols);
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < nc && r < m.rows(); ++c) {
    std::size_t pr = r;
    while (pr < m.rows() && m.at(pr, c).is_zero()) ++pr;
    if (pr == m.rows()) continue;
    if (pr != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(pr, j), m.at(r, j));
    Gaussian inv = Gaussian(1) / m.at(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m.at(r, j) = inv * m.at(r, j);
    for (std::size_t r2 = 0; r2 < m.rows(); ++r2) {
      if (r2 == r || m.at(r2, c).is_zero()) continue;
      Gaussian f = m.at(r2, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        m.at(r2, j) -= f * m.at(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const ExactMatrix& m) { return rref(m).rank(); }

inline Gaussian determinant(ExactMatrix m) {
  if (m.rows() != m.cols()) throw EngineError("determinant of non-square matrix");
  Gaussian det(1);
  const std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pr = c;
    while (pr < n && m.at(pr, c).is_zero()) ++pr;
    if (pr == n) return Gaussian(0);
    if (pr != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m.at(pr, j), m.at(c, j));
      det = -det;
    }
    det *= m.at(c, c);
    Gaussian inv = Gaussian(1) / m.at(c, c);
    for (std::size_t r2 = c + 1; r2 < n; ++r2) {
      if (m.at(r2, c).is_zero()) continue;
      Gaussian f = m.at(r2, c) * inv;
      for (std::size_t j = c; j < n; ++j) m.at(r2, j) -= f * m.at(c, j);
    }
  }
  return det;
}

inline std::optional<ExactMatrix> inverse(const ExactMatrix& m) {
  if (m.rows() != m.cols()) throw EngineError("inverse of non-square matrix");
  const std::size_t n = m.rows();
  ExactMatrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, n + i) = Gaussian(1);
  }
  RrefResult rr = rref(std::move(aug), n);
  if (rr.rank() != n) return std::nullopt;
  ExactMatrix r(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.at(i, j) = rr.mat.at(i, n + j);
  return r;
}

// One particular solution of m x = rhs, or absent when rhs is outside the
// image. Free variables are pinned to zero so primitives found downstream
// (Massey products) are reproducible.
inline std::optional<Vec> solve(const ExactMatrix& m, const Vec& rhs) {
  if (rhs.size() != m.rows()) throw EngineError("solve: rhs length mismatch");
  ExactMatrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug.at(i, j) = m.at(i, j);
    aug.at(i, m.cols()) = rhs[i];
  }
  RrefResult rr = rref(std::move(aug), m.cols());
  for (std::size_t i = rr.rank(); i < m.rows(); ++i)
    if (!rr.mat.at(i, m.cols()).is_zero()) return std::nullopt;
  Vec x(m.cols());
  for (std::size_t k = 0; k < rr.pivots.size(); ++k)
    x[rr.pivots[k]] = rr.mat.at(k, m.cols());
  return x;
}

// A subspace of an ambient coordinate space, held as the unique RREF basis
// (one basis vector per row, unit pivots, strictly increasing pivot columns).
// Membership tests and representative choices against it are deterministic.
class Subspace {
 public:
  Subspace() : ambient_(0) {}

  static Subspace zero(std::size_t ambient) {
    Subspace s;
    s.ambient_ = ambient;
    s.basis_ = ExactMatrix(0, ambient);
    return s;
  }

  static Subspace full(std::size_t ambient) {
    return from_span(ExactMatrix::identity(ambient));
  }

  // Row span of an arbitrary matrix.
  static Subspace from_span(const ExactMatrix& rows) {
    RrefResult rr = rref(rows);
    Subspace s;
    s.ambient_ = rows.cols();
    s.pivots_ = rr.pivots;
    ExactMatrix b(rr.rank(), rows.cols());
    for (std::size_t i = 0; i < rr.rank(); ++i)
      for (std::size_t j = 0; j < rows.cols(); ++j) b.at(i, j) = rr.mat.at(i, j);
    s.basis_ = std::move(b);
    return s;
  }

  static Subspace from_span(std::size_t ambient, const std::vector<Vec>& vecs) {
    return from_span(mat_from_rows(ambient, vecs));
  }

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return basis_.rows(); }
  const ExactMatrix& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  // Residual of v after reduction against the basis; zero iff v is a member.
  Vec reduce(Vec v) const {
    for (std::size_t i = 0; i < basis_.rows(); ++i) {
      const Gaussian& c = v[pivots_[i]];
      if (c.is_zero()) continue;
      Gaussian f = c;
      for (std::size_t j = 0; j < ambient_; ++j)
        if (!basis_.at(i, j).is_zero()) v[j] -= f * basis_.at(i, j);
    }
    return v;
  }

  bool member(const Vec& v) const {
    if (v.size() != ambient_) throw EngineError("member: ambient mismatch");
    return cscoh::is_zero(reduce(v));
  }

  bool contains(const Subspace& other) const {
    if (other.ambient_ != ambient_) throw EngineError("contains: ambient mismatch");
    for (std::size_t i = 0; i < other.dim(); ++i)
      if (!member(other.basis_.row(i))) return false;
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_;
  ExactMatrix basis_;
  std::vector<std::size_t> pivots_;
};

inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient()) throw SpecError("subspace sum: ambient dimension mismatch");
  return Subspace::from_span(vstack(a.basis(), b.basis()));
}

// Intersection via the kernel-of-stacked-bases construction: x lies in both
// row spans iff x = u^T A = v^T B, i.e. (u,v) ∈ ker [A^T | -B^T].
inline Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
  if (a.ambient() != b.ambient())
    throw SpecError("subspace intersection: ambient dimension mismatch");
  const std::size_t da = a.dim(), db = b.dim(), amb = a.ambient();
  if (da == 0 || db == 0) return Subspace::zero(amb);
  ExactMatrix sys(amb, da + db);
  for (std::size_t j = 0; j < amb; ++j) {
    for (std::size_t i = 0; i < da; ++i) sys.at(j, i) = a.basis().at(i, j);
    for (std::size_t i = 0; i < db; ++i) sys.at(j, da + i) = -b.basis().at(i, j);
  }
  // Kernel of sys, then map each kernel vector (u,v) to u^T A.
  RrefResult rr = rref(sys);
  std::vector<bool> is_pivot(da + db, false);
  for (auto p : rr.pivots) is_pivot[p] = true;
  std::vector<Vec> gens;
  for (std::size_t fc = 0; fc < da + db; ++fc) {
    if (is_pivot[fc]) continue;
    Vec u(da);
    auto coord = [&](std::size_t k) -> Gaussian {
      if (k == fc) return Gaussian(1);
      for (std::size_t pi = 0; pi < rr.pivots.size(); ++pi)
        if (rr.pivots[pi] == k) return -rr.mat.at(pi, fc);
      return Gaussian(0);
    };
    for (std::size_t k = 0; k < da; ++k) u[k] = coord(k);
    Vec x(amb);
    for (std::size_t k = 0; k < da; ++k)
      if (!u[k].is_zero())
        for (std::size_t j = 0; j < amb; ++j) x[j] += u[k] * a.basis().at(k, j);
    gens.push_back(std::move(x));
  }
  return Subspace::from_span(amb, gens);
}

// Right null space of m, in RREF.
inline Subspace kernel(const ExactMatrix& m) {
  RrefResult rr = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : rr.pivots) is_pivot[p] = true;
  std::vector<Vec> gens;
  for (std::size_t fc = 0; fc < m.cols(); ++fc) {
    if (is_pivot[fc]) continue;
    Vec v(m.cols());
    v[fc] = Gaussian(1);
    for (std::size_t pi = 0; pi < rr.pivots.size(); ++pi)
      v[rr.pivots[pi]] = -rr.mat.at(pi, fc);
    gens.push_back(std::move(v));
  }
  Subspace s = Subspace::from_span(m.cols(), gens);
  return s;
}

// Column space of m, as a subspace of the row-count-dimensional target.
inline Subspace image(const ExactMatrix& m) { return Subspace::from_span(transpose(m)); }

inline std::size_t quotient_dim(const Subspace& space, const Subspace& sub) {
  if (!space.contains(sub))
    throw EngineError("quotient: subspace not contained in space");
  return space.dim() - sub.dim();
}

// Representatives of space/sub: the RREF basis vectors of `space` whose pivot
// columns are not pivot columns of `sub`.
inline std::vector<Vec> quotient_basis(const Subspace& space, const Subspace& sub) {
  if (!space.contains(sub))
    throw EngineError("quotient: subspace not contained in space");
  std::vector<bool> sub_pivot(space.ambient(), false);
  for (auto p : sub.pivots()) sub_pivot[p] = true;
  std::vector<Vec> reps;
  for (std::size_t i = 0; i < space.dim(); ++i)
    if (!sub_pivot[space.pivots()[i]]) reps.push_back(space.basis().row(i));
  return reps;
}

}  // namespace cscoh
