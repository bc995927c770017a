#pragma once

#include "orbichow/fan.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace orbichow {

using Exponent = std::vector<int>;
using Poly = std::map<Exponent, Rational>;

inline int total_degree(const Exponent& e) {
  int s = 0;
  for (int x : e) s += x;
  return s;
}

inline Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponent e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      Rational& c = out[e];
      c += ca * cb;
      if (c == 0) out.erase(e);
    }
  return out;
}

// Monomials of degree k in f variables, lexicographically descending.
inline std::vector<Exponent> monomials_of_degree(std::size_t f, int k) {
  std::vector<Exponent> out;
  Exponent cur(f, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == f) {
      cur[i] = left;
      out.push_back(cur);
      return;
    }
    for (int x = left; x >= 0; --x) {
      cur[i] = x;
      rec(i + 1, left - x);
    }
    cur[i] = 0;
  };
  if (f == 0) {
    if (k == 0) out.push_back({});
    return out;
  }
  rec(0, k);
  return out;
}

using SparseVec = std::map<std::size_t, Rational>;

inline void add_scaled(SparseVec& x, const SparseVec& y, const Rational& a = 1) {
  for (const auto& [i, b] : y) {
    Rational& c = x[i];
    c += a * b;
    if (c == 0) x.erase(i);
  }
}

inline SparseVec sparse(const RatVec& v) {
  SparseVec out;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) out.emplace(i, v[i]);
  return out;
}

struct Sector {
  Cone cone;       // support cone of the sector label
  Rational shift;  // degree of the sector generator
};

struct BasisEntry {
  std::size_t sector;
  Exponent monomial;  // exponents over the free variables
  Rational degree;
};

// A direct sum over sectors of Q[x_1..x_n] / (M_sector + linear forms), graded and finite.
class GradedPresentation {
 public:
  struct Piece {
    std::vector<Exponent> monomials;
    std::map<Exponent, std::size_t> column;
    std::vector<RatVec> rows;  // reduced echelon basis of the ideal in this degree
    std::vector<std::size_t> pivots;
    std::vector<std::size_t> standard;
    std::vector<std::size_t> global;  // basis index of each standard column
  };

  std::size_t num_vars() const { return n_; }
  const std::vector<int>& free_vars() const { return free_; }
  const RatMatrix& linear_forms() const { return forms_; }
  const std::vector<Sector>& sectors() const { return sectors_; }
  const std::vector<BasisEntry>& basis() const { return basis_; }
  const std::vector<std::vector<Cone>>& generators() const { return gens_; }
  std::size_t size() const { return basis_.size(); }

  std::map<Rational, std::size_t> dims() const {
    std::map<Rational, std::size_t> out;
    for (const auto& b : basis_) ++out[b.degree];
    return out;
  }

  Rational top_degree() const {
    Rational t = 0;
    for (const auto& b : basis_) t = std::max(t, b.degree);
    return t;
  }

  RatVec zero() const { return RatVec(basis_.size(), Rational(0)); }

  RatVec dense(const SparseVec& x) const {
    RatVec out = zero();
    for (const auto& [i, a] : x) out[i] = a;
    return out;
  }

  // Class of (sector generator) * p, p a polynomial in all n variables.
  SparseVec normal_form_sparse(std::size_t sector, const Poly& p) const {
    SparseVec out;
    std::map<int, RatVec> by_degree;
    for (const auto& [e, c] : p) {
      Poly sub = substitute(e);
      for (const auto& [fe, fc] : sub) {
        int k = total_degree(fe);
        const auto& pieces = pieces_[sector];
        if (k >= static_cast<int>(pieces.size())) continue;
        auto& vec = by_degree[k];
        if (vec.empty()) vec.assign(pieces[k].monomials.size(), Rational(0));
        vec[pieces[k].column.at(fe)] += c * fc;
      }
    }
    for (auto& [k, vec] : by_degree) {
      const Piece& pc = pieces_[sector][k];
      for (std::size_t r = 0; r < pc.rows.size(); ++r) {
        Rational coef = vec[pc.pivots[r]];
        if (coef == 0) continue;
        for (std::size_t j = 0; j < vec.size(); ++j) vec[j] -= coef * pc.rows[r][j];
      }
      for (std::size_t s = 0; s < pc.standard.size(); ++s)
        if (vec[pc.standard[s]] != 0) out.emplace(pc.global[s], vec[pc.standard[s]]);
    }
    return out;
  }

  RatVec normal_form(std::size_t sector, const Poly& p) const { return dense(normal_form_sparse(sector, p)); }

  SparseVec normal_form_monomial_sparse(std::size_t sector, const Exponent& e, const Rational& coef = 1) const {
    return normal_form_sparse(sector, Poly{{e, coef}});
  }

  RatVec normal_form_monomial(std::size_t sector, const Exponent& e, const Rational& coef = 1) const {
    return normal_form(sector, Poly{{e, coef}});
  }

  std::string describe_entry(std::size_t i) const {
    const BasisEntry& b = basis_[i];
    std::string s = "s" + std::to_string(b.sector);
    for (std::size_t j = 0; j < b.monomial.size(); ++j)
      if (b.monomial[j]) s += "*x" + std::to_string(free_[j]) + (b.monomial[j] > 1 ? "^" + std::to_string(b.monomial[j]) : "");
    return s;
  }

  template <class FacePred>
  friend GradedPresentation build_graded(std::size_t n, const RatMatrix& forms, std::vector<Sector> sectors,
                                         FacePred is_face, int degree_cap);

 private:
  // x^e with pivot variables eliminated.
  Poly substitute(const Exponent& e) const {
    Poly out{{Exponent(free_.size(), 0), Rational(1)}};
    for (std::size_t i = 0; i < n_; ++i)
      for (int t = 0; t < e[i]; ++t) out = poly_mul(out, images_[i]);
    return out;
  }

  std::size_t n_ = 0;
  RatMatrix forms_;
  std::vector<int> free_;
  std::vector<Poly> images_;
  std::vector<Sector> sectors_;
  std::vector<std::vector<Cone>> gens_;
  std::vector<std::vector<Piece>> pieces_;
  std::vector<BasisEntry> basis_;
};

// Minimal S disjoint from sigma with S + sigma failing the face predicate.
template <class FacePred>
std::vector<Cone> minimal_nonfaces_over(std::size_t n, const Cone& sigma, FacePred is_face) {
  Cone rest;
  for (std::size_t i = 0; i < n; ++i)
    if (!std::binary_search(sigma.begin(), sigma.end(), static_cast<int>(i))) rest.push_back(static_cast<int>(i));
  const std::size_t r = rest.size();
  std::vector<char> face(std::size_t(1) << r, 0);
  std::vector<Cone> out;
  for (std::size_t mask = 0; mask < face.size(); ++mask) {
    bool sub_faces = true;
    for (std::size_t j = 0; j < r && sub_faces; ++j)
      if (mask >> j & 1) sub_faces = face[mask & ~(std::size_t(1) << j)];
    if (!sub_faces) continue;
    Cone s;
    for (std::size_t j = 0; j < r; ++j)
      if (mask >> j & 1) s.push_back(rest[j]);
    if (is_face(cone_union(s, sigma)))
      face[mask] = 1;
    else
      out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](const Cone& a, const Cone& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; });
  return out;
}

template <class FacePred>
GradedPresentation build_graded(std::size_t n, const RatMatrix& forms, std::vector<Sector> sectors, FacePred is_face,
                                int degree_cap) {
  GradedPresentation g;
  g.n_ = n;
  g.forms_ = forms;
  g.sectors_ = std::move(sectors);
  Rref r = rref(forms);
  std::vector<bool> pivot(n, false);
  for (auto p : r.pivots) pivot[p] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!pivot[i]) g.free_.push_back(static_cast<int>(i));
  const std::size_t f = g.free_.size();
  g.images_.assign(n, Poly{});
  for (std::size_t j = 0; j < f; ++j) {
    Exponent e(f, 0);
    e[j] = 1;
    g.images_[g.free_[j]] = Poly{{e, Rational(1)}};
  }
  for (std::size_t row = 0; row < r.pivots.size(); ++row) {
    Poly img;
    for (std::size_t j = 0; j < f; ++j) {
      Rational c = -r.m(row, g.free_[j]);
      if (c == 0) continue;
      Exponent e(f, 0);
      e[j] = 1;
      img[e] = c;
    }
    g.images_[r.pivots[row]] = img;
  }

  struct Pending {
    std::size_t sector;
    int degree;
    std::size_t column;
  };
  std::vector<Pending> pending;
  for (std::size_t s = 0; s < g.sectors_.size(); ++s) {
    auto gens = minimal_nonfaces_over(n, g.sectors_[s].cone, is_face);
    std::vector<Poly> gen_polys;
    for (const auto& S : gens) {
      Exponent e(n, 0);
      for (int i : S) e[i] = 1;
      gen_polys.push_back(g.substitute(e));
    }
    g.gens_.push_back(gens);
    std::vector<GradedPresentation::Piece> pieces;
    for (int k = 0;; ++k) {
      if (k > degree_cap)
        throw Error(ErrorCode::NotFinite, "graded piece still nonzero at degree cap " + std::to_string(degree_cap));
      GradedPresentation::Piece pc;
      pc.monomials = monomials_of_degree(f, k);
      for (std::size_t c = 0; c < pc.monomials.size(); ++c) pc.column[pc.monomials[c]] = c;
      std::vector<RatVec> rows;
      auto add_poly = [&](const Poly& p) {
        RatVec v(pc.monomials.size(), Rational(0));
        for (const auto& [e, c] : p) v[pc.column.at(e)] = c;
        rows.push_back(std::move(v));
      };
      if (k > 0) {
        const auto& prev = pieces.back();
        for (const auto& row : prev.rows)
          for (std::size_t j = 0; j < f; ++j) {
            RatVec v(pc.monomials.size(), Rational(0));
            for (std::size_t c = 0; c < row.size(); ++c) {
              if (row[c] == 0) continue;
              Exponent e = prev.monomials[c];
              ++e[j];
              v[pc.column.at(e)] = row[c];
            }
            rows.push_back(std::move(v));
          }
      }
      for (std::size_t t = 0; t < gens.size(); ++t)
        if (static_cast<int>(gens[t].size()) == k && !gen_polys[t].empty()) add_poly(gen_polys[t]);
      if (!rows.empty()) {
        Rref red = rref(RatMatrix::from_rows(rows, pc.monomials.size()));
        pc.pivots = red.pivots;
        for (std::size_t i = 0; i < red.pivots.size(); ++i) pc.rows.push_back(red.m.row(i));
      }
      std::vector<bool> is_pivot(pc.monomials.size(), false);
      for (auto p : pc.pivots) is_pivot[p] = true;
      for (std::size_t c = 0; c < pc.monomials.size(); ++c)
        if (!is_pivot[c]) pc.standard.push_back(c);
      bool empty = pc.standard.empty();
      pc.global.assign(pc.standard.size(), 0);
      for (std::size_t c = 0; c < pc.standard.size(); ++c) pending.push_back({s, k, c});
      pieces.push_back(std::move(pc));
      if (empty) break;
    }
    g.pieces_.push_back(std::move(pieces));
  }
  std::stable_sort(pending.begin(), pending.end(), [&](const Pending& a, const Pending& b) {
    Rational da = g.sectors_[a.sector].shift + a.degree, db = g.sectors_[b.sector].shift + b.degree;
    if (da != db) return da < db;
    if (a.sector != b.sector) return a.sector < b.sector;
    return a.column < b.column;
  });
  for (std::size_t i = 0; i < pending.size(); ++i) {
    auto& pc = g.pieces_[pending[i].sector][pending[i].degree];
    pc.global[pending[i].column] = i;
    g.basis_.push_back({pending[i].sector, pc.monomials[pc.standard[pending[i].column]],
                        g.sectors_[pending[i].sector].shift + pending[i].degree});
  }
  return g;
}

}  // namespace orbichow
