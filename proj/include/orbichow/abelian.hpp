#pragma once

#include "orbichow/matrix.hpp"

#include <optional>
#include <string>
#include <vector>

namespace orbichow {

struct Snf {
  IntMatrix U, D, V;  // U * M * V == D
};

namespace detail {

inline Integer abs_value(const Integer& x) { return x < 0 ? Integer(-x) : x; }

}  // namespace detail

inline Snf smith_normal_form(const IntMatrix& M) {
  const std::size_t p = M.rows(), q = M.cols();
  Snf s{IntMatrix::identity(p), M, IntMatrix::identity(q)};
  IntMatrix& D = s.D;
  auto move_to = [&](std::size_t i, std::size_t j, std::size_t t) {
    D.swap_rows(i, t);
    s.U.swap_rows(i, t);
    D.swap_cols(j, t);
    s.V.swap_cols(j, t);
  };
  for (std::size_t t = 0; t < std::min(p, q); ++t) {
    bool found = false;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = t; i < p; ++i)
      for (std::size_t j = t; j < q; ++j)
        if (D(i, j) != 0 && (!found || detail::abs_value(D(i, j)) < detail::abs_value(D(bi, bj)))) {
          found = true;
          bi = i;
          bj = j;
        }
    if (!found) break;
    move_to(bi, bj, t);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < p; ++i) {
        if (D(i, t) == 0) continue;
        Integer k = floor_div(D(i, t), D(t, t));
        D.add_row(i, t, -k);
        s.U.add_row(i, t, -k);
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < q; ++j) {
        if (D(t, j) == 0) continue;
        Integer k = floor_div(D(t, j), D(t, t));
        D.add_col(j, t, -k);
        s.V.add_col(j, t, -k);
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) {
        std::size_t mi = t, mj = t;
        Integer best = detail::abs_value(D(t, t));
        for (std::size_t i = t + 1; i < p; ++i)
          if (D(i, t) != 0 && detail::abs_value(D(i, t)) < best) {
            best = detail::abs_value(D(i, t));
            mi = i;
            mj = t;
          }
        for (std::size_t j = t + 1; j < q; ++j)
          if (D(t, j) != 0 && detail::abs_value(D(t, j)) < best) {
            best = detail::abs_value(D(t, j));
            mi = t;
            mj = j;
          }
        move_to(mi, mj, t);
        continue;
      }
      bool divides = true;
      for (std::size_t i = t + 1; i < p && divides; ++i)
        for (std::size_t j = t + 1; j < q; ++j)
          if (D(i, j) % D(t, t) != 0) {
            D.add_row(t, i, Integer(1));
            s.U.add_row(t, i, Integer(1));
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (D(t, t) < 0) {
      D.negate_row(t);
      s.U.negate_row(t);
    }
  }
  return s;
}

struct Hnf {
  IntMatrix H, W;  // W * A == H, row-style
  std::vector<std::size_t> pivots;
};

inline Hnf hermite_normal_form(const IntMatrix& A) {
  Hnf h{A, IntMatrix::identity(A.rows()), {}};
  IntMatrix& H = h.H;
  std::size_t row = 0;
  for (std::size_t col = 0; col < A.cols() && row < A.rows(); ++col) {
    for (;;) {
      std::size_t best = A.rows();
      for (std::size_t i = row; i < A.rows(); ++i)
        if (H(i, col) != 0 && (best == A.rows() || detail::abs_value(H(i, col)) < detail::abs_value(H(best, col))))
          best = i;
      if (best == A.rows()) break;
      H.swap_rows(row, best);
      h.W.swap_rows(row, best);
      bool clean = true;
      for (std::size_t i = row + 1; i < A.rows(); ++i) {
        if (H(i, col) == 0) continue;
        Integer k = floor_div(H(i, col), H(row, col));
        H.add_row(i, row, -k);
        h.W.add_row(i, row, -k);
        if (H(i, col) != 0) clean = false;
      }
      if (clean) break;
    }
    if (H(row, col) == 0) continue;
    if (H(row, col) < 0) {
      H.negate_row(row);
      h.W.negate_row(row);
    }
    for (std::size_t i = 0; i < row; ++i) {
      Integer k = floor_div(H(i, col), H(row, col));
      H.add_row(i, row, -k);
      h.W.add_row(i, row, -k);
    }
    h.pivots.push_back(col);
    ++row;
  }
  return h;
}

inline IntMatrix inverse_unimodular(const IntMatrix& U) {
  RatMatrix aug = to_rational(U).hconcat(RatMatrix::identity(U.rows()));
  Rref r = rref(aug);
  if (r.pivots.size() != U.rows() || (U.rows() && r.pivots.back() >= U.rows()))
    throw Error(ErrorCode::InvalidInput, "matrix is not invertible");
  IntMatrix inv(U.rows(), U.rows());
  for (std::size_t i = 0; i < U.rows(); ++i)
    for (std::size_t j = 0; j < U.rows(); ++j) {
      const Rational& x = r.m(i, U.rows() + j);
      if (!is_integral(x)) throw Error(ErrorCode::InvalidInput, "matrix is not unimodular");
      inv(i, j) = numer(x);
    }
  return inv;
}

class AbelianGroup {
 public:
  AbelianGroup() = default;
  AbelianGroup(std::size_t free_rank, std::vector<Integer> torsion)
      : free_rank_(free_rank), torsion_(std::move(torsion)) {
    for (std::size_t j = 0; j < torsion_.size(); ++j) {
      if (torsion_[j] < 2) throw Error(ErrorCode::InvalidInput, "torsion factor must be at least 2");
      if (j > 0 && torsion_[j] % torsion_[j - 1] != 0)
        throw Error(ErrorCode::InvalidInput, "torsion factors must form a divisibility chain");
    }
  }
  static AbelianGroup free(std::size_t d) { return AbelianGroup(d, {}); }

  std::size_t free_rank() const { return free_rank_; }
  const std::vector<Integer>& torsion() const { return torsion_; }
  std::size_t num_torsion() const { return torsion_.size(); }
  std::size_t dim() const { return free_rank_ + torsion_.size(); }
  bool is_finite() const { return free_rank_ == 0; }
  bool is_trivial() const { return dim() == 0; }

  Integer torsion_order() const {
    Integer o = 1;
    for (const auto& k : torsion_) o *= k;
    return o;
  }

  // (d+s) x s relation matrix of the invariant-factor presentation.
  IntMatrix relations() const {
    IntMatrix Q(dim(), num_torsion());
    for (std::size_t j = 0; j < num_torsion(); ++j) Q(free_rank_ + j, j) = torsion_[j];
    return Q;
  }

  IntVec zero() const { return IntVec(dim(), Integer(0)); }

  IntVec normalize(IntVec v) const {
    if (v.size() != dim()) throw Error(ErrorCode::InvalidInput, "element has wrong length for group");
    for (std::size_t j = 0; j < num_torsion(); ++j) v[free_rank_ + j] = mod_floor(v[free_rank_ + j], torsion_[j]);
    return v;
  }
  bool contains_normalized(const IntVec& v) const {
    if (v.size() != dim()) return false;
    for (std::size_t j = 0; j < num_torsion(); ++j) {
      const auto& r = v[free_rank_ + j];
      if (r < 0 || r >= torsion_[j]) return false;
    }
    return true;
  }
  IntVec add(const IntVec& a, const IntVec& b) const { return normalize(orbichow::add(a, b)); }
  IntVec sub(const IntVec& a, const IntVec& b) const { return normalize(orbichow::sub(a, b)); }
  IntVec neg(const IntVec& a) const { return normalize(scale(a, Integer(-1))); }
  bool is_zero(const IntVec& a) const { return orbichow::is_zero(normalize(a)); }
  bool equal(const IntVec& a, const IntVec& b) const { return normalize(a) == normalize(b); }

  IntVec free_part(const IntVec& a) const { return IntVec(a.begin(), a.begin() + free_rank_); }
  bool is_torsion(const IntVec& a) const { return orbichow::is_zero(free_part(a)); }

  // All elements of the torsion subgroup, free part zero, in lexicographic order.
  std::vector<IntVec> torsion_elements() const {
    std::vector<IntVec> out{zero()};
    for (std::size_t j = 0; j < num_torsion(); ++j) {
      std::vector<IntVec> next;
      for (const auto& e : out)
        for (Integer r = 0; r < torsion_[j]; ++r) {
          IntVec f = e;
          f[free_rank_ + j] = r;
          next.push_back(std::move(f));
        }
      out = std::move(next);
    }
    return out;
  }

  bool operator==(const AbelianGroup& o) const { return free_rank_ == o.free_rank_ && torsion_ == o.torsion_; }

  std::string str() const {
    std::string s = "Z^" + std::to_string(free_rank_);
    for (const auto& k : torsion_) s += " + Z/" + k.str();
    return s;
  }

 private:
  std::size_t free_rank_ = 0;
  std::vector<Integer> torsion_;
};

// Homomorphism between groups given on coordinate vectors.
class GroupHom {
 public:
  GroupHom() = default;
  GroupHom(AbelianGroup source, AbelianGroup target, IntMatrix matrix)
      : source_(std::move(source)), target_(std::move(target)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != target_.dim() || matrix_.cols() != source_.dim())
      throw Error(ErrorCode::InvalidInput, "homomorphism matrix has wrong shape");
    for (std::size_t j = 0; j < source_.num_torsion(); ++j) {
      IntVec img = matrix_.col(source_.free_rank() + j);
      if (!target_.is_zero(scale(img, source_.torsion()[j])))
        throw Error(ErrorCode::InvalidInput, "homomorphism is not well defined on torsion");
    }
    for (std::size_t i = 0; i < target_.num_torsion(); ++i)
      for (std::size_t j = 0; j < matrix_.cols(); ++j) {
        auto& x = matrix_(target_.free_rank() + i, j);
        x = mod_floor(x, target_.torsion()[i]);
      }
  }

  const AbelianGroup& source() const { return source_; }
  const AbelianGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return matrix_; }

  IntVec operator()(const IntVec& x) const { return target_.normalize(matrix_ * x); }

  GroupHom compose_after(const GroupHom& first) const {
    return GroupHom(first.source_, target_, matrix_ * first.matrix_);
  }

 private:
  AbelianGroup source_, target_;
  IntMatrix matrix_;
};

// m elements of a target group, stored as the columns of a (d+s) x m matrix.
class LatticeMap {
 public:
  LatticeMap() = default;
  LatticeMap(AbelianGroup target, IntMatrix columns) : target_(std::move(target)), cols_(std::move(columns)) {
    if (cols_.rows() != target_.dim()) throw Error(ErrorCode::InvalidInput, "column length does not match target group");
    for (std::size_t j = 0; j < cols_.cols(); ++j) {
      IntVec c = target_.normalize(cols_.col(j));
      for (std::size_t i = 0; i < c.size(); ++i) cols_(i, j) = c[i];
    }
  }
  LatticeMap(AbelianGroup target, const std::vector<IntVec>& columns)
      : LatticeMap(target, IntMatrix::from_columns(columns, target.dim())) {}

  const AbelianGroup& target() const { return target_; }
  const IntMatrix& matrix() const { return cols_; }
  std::size_t source_rank() const { return cols_.cols(); }
  IntVec column(std::size_t i) const { return cols_.col(i); }
  std::vector<IntVec> columns() const {
    std::vector<IntVec> out;
    for (std::size_t i = 0; i < source_rank(); ++i) out.push_back(column(i));
    return out;
  }

  IntMatrix free_matrix() const { return cols_.select_rows(0, target_.free_rank()); }
  RatVec free_column(std::size_t i) const {
    RatVec v(target_.free_rank());
    for (std::size_t r = 0; r < v.size(); ++r) v[r] = Rational(cols_(r, i));
    return v;
  }

  IntVec operator()(const IntVec& x) const { return target_.normalize(cols_ * x); }

  GroupHom as_hom() const { return GroupHom(AbelianGroup::free(source_rank()), target_, cols_); }

 private:
  AbelianGroup target_;
  IntMatrix cols_;
};

struct Quotient {
  AbelianGroup group;
  IntMatrix proj;     // group.dim() x n
  IntMatrix section;  // n x group.dim(); proj * section == I modulo torsion
};

// Canonical invariant-factor form of Z^n / image(relations).
inline Quotient present(const IntMatrix& relations) {
  const std::size_t n = relations.rows();
  Snf s = smith_normal_form(relations);
  std::size_t r = 0;
  std::vector<std::size_t> tors_rows;
  std::vector<Integer> tors;
  while (r < std::min(n, relations.cols()) && s.D(r, r) != 0) {
    if (s.D(r, r) > 1) {
      tors_rows.push_back(r);
      tors.push_back(s.D(r, r));
    }
    ++r;
  }
  const std::size_t d = n - r;
  IntMatrix Uinv = inverse_unimodular(s.U);
  IntMatrix free_rows = s.U.select_rows(r, n);
  Hnf h = hermite_normal_form(free_rows);
  IntMatrix Winv = inverse_unimodular(h.W);

  Quotient q;
  q.group = AbelianGroup(d, tors);
  q.proj = IntMatrix(d + tors.size(), n);
  q.section = IntMatrix(n, d + tors.size());
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < n; ++j) q.proj(i, j) = h.H(i, j);
  for (std::size_t t = 0; t < tors_rows.size(); ++t)
    for (std::size_t j = 0; j < n; ++j) q.proj(d + t, j) = mod_floor(s.U(tors_rows[t], j), tors[t]);
  IntMatrix free_section = Uinv.select_cols(r, n) * Winv;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) q.section(i, j) = free_section(i, j);
    for (std::size_t t = 0; t < tors_rows.size(); ++t) q.section(i, d + t) = Uinv(i, tors_rows[t]);
  }
  return q;
}

struct GroupQuotient {
  AbelianGroup group;
  GroupHom proj;
  IntMatrix section;  // lifts group coordinates to coordinates of the ambient group

  IntVec lift(const IntVec& x) const { return section * x; }
};

inline GroupQuotient quotient_by_elements(const AbelianGroup& N, const std::vector<IntVec>& elems) {
  IntMatrix gens = IntMatrix::from_columns(elems, N.dim()).hconcat(N.relations());
  Quotient q = present(gens);
  return {q.group, GroupHom(N, q.group, q.proj), q.section};
}

inline GroupQuotient cokernel(const LatticeMap& f) { return quotient_by_elements(f.target(), f.columns()); }

inline GroupQuotient quotient_by_columns(const LatticeMap& f, const std::vector<int>& cols) {
  std::vector<IntVec> elems;
  for (int c : cols) elems.push_back(f.column(c));
  return quotient_by_elements(f.target(), elems);
}

struct GaleDual {
  AbelianGroup dg;
  LatticeMap beta_dual;
  IntMatrix proj;     // dg.dim() x (m + s), quotient map from Z^{m+s}
  IntMatrix section;  // (m + s) x dg.dim()
};

inline GaleDual gale_dual(const LatticeMap& beta) {
  const AbelianGroup& N = beta.target();
  IntMatrix BQ = beta.matrix().hconcat(N.relations());
  Quotient q = present(BQ.transpose());
  const std::size_t m = beta.source_rank();
  std::vector<int> first(m);
  for (std::size_t i = 0; i < m; ++i) first[i] = static_cast<int>(i);
  return {q.group, LatticeMap(q.group, q.proj.select_columns(first)), q.proj, q.section};
}

// Some x with f(x) = target; the representative is reduced modulo the Hermite basis of ker f.
inline std::optional<IntVec> solve_integer(const LatticeMap& f, const IntVec& target) {
  const AbelianGroup& N = f.target();
  const std::size_t m = f.source_rank();
  IntMatrix A = f.matrix().hconcat(N.relations());
  Snf s = smith_normal_form(A);
  IntVec Ut = s.U * N.normalize(target);
  IntVec w(A.cols(), Integer(0));
  std::size_t r = 0;
  while (r < std::min(A.rows(), A.cols()) && s.D(r, r) != 0) ++r;
  for (std::size_t i = 0; i < A.rows(); ++i) {
    if (i < r) {
      if (Ut[i] % s.D(i, i) != 0) return std::nullopt;
      w[i] = Ut[i] / s.D(i, i);
    } else if (Ut[i] != 0) {
      return std::nullopt;
    }
  }
  IntVec z = s.V * w;
  IntVec x(z.begin(), z.begin() + m);
  std::vector<IntVec> kernel;
  for (std::size_t j = r; j < A.cols(); ++j) {
    IntVec c = s.V.col(j);
    c.resize(m);
    if (!is_zero(c)) kernel.push_back(std::move(c));
  }
  if (!kernel.empty()) {
    Hnf h = hermite_normal_form(IntMatrix::from_rows(kernel, m));
    for (std::size_t i = 0; i < h.pivots.size(); ++i) {
      std::size_t p = h.pivots[i];
      Integer k = floor_div(x[p], h.H(i, p));
      for (std::size_t j = 0; j < m; ++j) x[j] -= k * h.H(i, j);
    }
  }
  return x;
}

// Some preimage of b under h, normalized in the source group.
inline std::optional<IntVec> preimage(const GroupHom& h, const IntVec& b) {
  auto x = solve_integer(LatticeMap(h.target(), h.matrix()), b);
  if (!x) return std::nullopt;
  return h.source().normalize(*x);
}

// For a commuting square g . beta1 == beta2 . F, the induced map DG(beta2) -> DG(beta1).
inline GroupHom dual_morphism(const LatticeMap& beta1, const GaleDual& dual1, const LatticeMap& beta2,
                              const GaleDual& dual2, const IntMatrix& F, const GroupHom& g) {
  const AbelianGroup& N1 = beta1.target();
  const AbelianGroup& N2 = beta2.target();
  const std::size_t m1 = beta1.source_rank(), m2 = beta2.source_rank();
  const std::size_t s1 = N1.num_torsion(), s2 = N2.num_torsion(), d2 = N2.free_rank();
  if (F.rows() != m2 || F.cols() != m1) throw Error(ErrorCode::InvalidInput, "square map has wrong shape");
  const IntMatrix& G = g.matrix();
  IntMatrix GQ = G * N1.relations();
  IntMatrix diff = G * beta1.matrix() - beta2.matrix() * F;
  IntMatrix H(s2, s1), K(s2, m1);
  for (std::size_t i = 0; i < d2; ++i) {
    for (std::size_t j = 0; j < s1; ++j)
      if (GQ(i, j) != 0) throw Error(ErrorCode::InvalidInput, "torsion maps to free part");
    for (std::size_t j = 0; j < m1; ++j)
      if (diff(i, j) != 0) throw Error(ErrorCode::InvalidInput, "square does not commute");
  }
  for (std::size_t t = 0; t < s2; ++t) {
    const Integer& k = N2.torsion()[t];
    for (std::size_t j = 0; j < s1; ++j) {
      if (GQ(d2 + t, j) % k != 0) throw Error(ErrorCode::InvalidInput, "homomorphism not well defined");
      H(t, j) = GQ(d2 + t, j) / k;
    }
    for (std::size_t j = 0; j < m1; ++j) {
      if (diff(d2 + t, j) % k != 0) throw Error(ErrorCode::InvalidInput, "square does not commute");
      K(t, j) = diff(d2 + t, j) / k;
    }
  }
  IntMatrix M(m2 + s2, m1 + s1);
  for (std::size_t i = 0; i < m2; ++i)
    for (std::size_t j = 0; j < m1; ++j) M(i, j) = F(i, j);
  for (std::size_t t = 0; t < s2; ++t) {
    for (std::size_t j = 0; j < m1; ++j) M(m2 + t, j) = K(t, j);
    for (std::size_t j = 0; j < s1; ++j) M(m2 + t, m1 + j) = H(t, j);
  }
  return GroupHom(dual2.dg, dual1.dg, dual1.proj * M.transpose() * dual2.section);
}

}  // namespace orbichow
