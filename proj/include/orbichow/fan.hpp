#pragma once

#include "orbichow/abelian.hpp"
#include "orbichow/lp.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace orbichow {

// Sorted ray indices.
using Cone = std::vector<int>;

inline bool is_subset(const Cone& a, const Cone& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

inline Cone cone_union(const Cone& a, const Cone& b) {
  Cone out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}
inline Cone cone_intersection(const Cone& a, const Cone& b) {
  Cone out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}
inline Cone cone_difference(const Cone& a, const Cone& b) {
  Cone out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline std::string to_string(const Cone& c) {
  std::string s = "{";
  for (std::size_t i = 0; i < c.size(); ++i) s += (i ? "," : "") + std::to_string(c[i]);
  return s + "}";
}

inline RatMatrix ray_matrix(const std::vector<IntVec>& rays, const Cone& c, std::size_t dim) {
  RatMatrix m(dim, c.size());
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::size_t i = 0; i < dim; ++i) m(i, j) = Rational(rays[c[j]][i]);
  return m;
}

// pos(S1) and pos(S2) meet exactly in pos(S1 n S2).
inline bool proper_intersection(const std::vector<IntVec>& rays, std::size_t dim, const Cone& s1, const Cone& s2) {
  Cone only1 = cone_difference(s1, s2), only2 = cone_difference(s2, s1);
  if (only1.empty() && only2.empty()) return true;
  const std::size_t n = s1.size() + s2.size();
  RatMatrix A(dim + 1, n);
  RatVec b(dim + 1, Rational(0));
  for (std::size_t j = 0; j < s1.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) A(i, j) = Rational(rays[s1[j]][i]);
    if (!std::binary_search(s2.begin(), s2.end(), s1[j])) A(dim, j) = 1;
  }
  for (std::size_t j = 0; j < s2.size(); ++j) {
    for (std::size_t i = 0; i < dim; ++i) A(i, s1.size() + j) = Rational(-rays[s2[j]][i]);
    if (!std::binary_search(s1.begin(), s1.end(), s2[j])) A(dim, s1.size() + j) = 1;
  }
  b[dim] = 1;
  return !feasible_point(A, b).has_value();
}

class SimplicialFan {
 public:
  SimplicialFan() = default;
  SimplicialFan(std::size_t dim, std::vector<IntVec> rays, std::vector<Cone> max_cones)
      : dim_(dim), rays_(std::move(rays)) {
    for (const auto& r : rays_)
      if (r.size() != dim_) throw Error(ErrorCode::InvalidInput, "ray has wrong dimension");
    for (auto c : max_cones) {
      std::sort(c.begin(), c.end());
      if (std::adjacent_find(c.begin(), c.end()) != c.end())
        throw Error(ErrorCode::InvalidInput, "repeated ray in cone " + to_string(c));
      for (int i : c)
        if (i < 0 || static_cast<std::size_t>(i) >= rays_.size())
          throw Error(ErrorCode::InvalidInput, "ray index out of range in cone " + to_string(c));
      max_.push_back(c);
    }
    std::sort(max_.begin(), max_.end());
    max_.erase(std::unique(max_.begin(), max_.end()), max_.end());
    for (const auto& c : max_) {
      RatMatrix B = ray_matrix(rays_, c, dim_);
      if (rank(B) != c.size()) throw Error(ErrorCode::InvalidInput, "cone " + to_string(c) + " is not simplicial");
      RatMatrix Bt = B.transpose();
      RatMatrix gram = Bt * B;
      RatMatrix aug = gram.hconcat(RatMatrix::identity(c.size()));
      Rref r = rref(aug);
      RatMatrix inv = r.m.select_cols(c.size(), 2 * c.size());
      coords_.push_back(inv * Bt);
      basis_.push_back(std::move(B));
      fast_.push_back(small_form(coords_.back()));
      SmallForm& f = fast_.back();
      for (std::size_t i = 0; i < dim_; ++i)
        for (int j : c) {
          f.ok = f.ok && fits(rays_[j][i]);
          f.rays.push_back(f.ok ? to_int64(rays_[j][i]) : 0);
        }
    }
    for (std::size_t a = 0; a < max_.size(); ++a)
      for (std::size_t b = a + 1; b < max_.size(); ++b) {
        if (is_subset(max_[a], max_[b]) || is_subset(max_[b], max_[a]))
          throw Error(ErrorCode::InvalidInput, "max cone " + to_string(max_[a]) + " is a face of " + to_string(max_[b]));
        if (!proper_intersection(rays_, dim_, max_[a], max_[b]))
          throw Error(ErrorCode::InvalidInput,
                      "cones " + to_string(max_[a]) + " and " + to_string(max_[b]) + " overlap improperly");
      }
  }

  std::size_t dim() const { return dim_; }
  std::size_t num_rays() const { return rays_.size(); }
  const std::vector<IntVec>& rays() const { return rays_; }
  const std::vector<Cone>& max_cones() const { return max_; }

  bool is_face(const Cone& c) const {
    for (const auto& m : max_)
      if (is_subset(c, m)) return true;
    return c.empty();
  }

  // Coordinates in the rays of a max cone, in cone order; nullopt if v is not in the cone.
  std::optional<RatVec> max_cone_coordinates(std::size_t k, const RatVec& v) const {
    auto a = span_coordinates(k, v);
    if (!a) return std::nullopt;
    for (const auto& x : *a)
      if (x < 0) return std::nullopt;
    return a;
  }

  std::optional<RatVec> cone_coordinates(const Cone& c, const RatVec& v) const {
    if (c.empty()) return is_zero(v) ? std::optional<RatVec>(RatVec{}) : std::nullopt;
    for (std::size_t k = 0; k < max_.size(); ++k) {
      if (!is_subset(c, max_[k])) continue;
      auto a = span_coordinates(k, v);
      if (!a) return std::nullopt;
      RatVec out;
      for (std::size_t j = 0, t = 0; j < max_[k].size(); ++j) {
        bool inside = t < c.size() && c[t] == max_[k][j];
        if (inside) {
          if ((*a)[j] < 0) return std::nullopt;
          out.push_back((*a)[j]);
          ++t;
        } else if ((*a)[j] != 0) {
          return std::nullopt;
        }
      }
      return out;
    }
    auto x = solve(ray_matrix(rays_, c, dim_), v);
    if (!x) return std::nullopt;
    for (const auto& a : *x)
      if (a < 0) return std::nullopt;
    return x;
  }

  // Sparse coordinates over ray indices, taken in any max cone containing v.
  std::optional<std::map<int, Rational>> coordinates(const RatVec& v) const {
    if (is_zero(v)) return std::map<int, Rational>{};
    for (std::size_t k = 0; k < max_.size(); ++k)
      if (auto a = max_cone_coordinates(k, v)) {
        std::map<int, Rational> out;
        for (std::size_t j = 0; j < a->size(); ++j)
          if ((*a)[j] != 0) out[max_[k][j]] = (*a)[j];
        return out;
      }
    return std::nullopt;
  }

  std::optional<Cone> minimal_cone_containing(const RatVec& v) const {
    auto c = coordinates(v);
    if (!c) return std::nullopt;
    Cone out;
    for (const auto& [i, a] : *c) out.push_back(i);
    return out;
  }

  bool support_contains(const RatVec& v) const { return coordinates(v).has_value(); }

  std::vector<Cone> all_cones() const {
    std::set<Cone> seen{Cone{}};
    for (const auto& m : max_) {
      const std::size_t k = m.size();
      for (std::size_t mask = 1; mask < (std::size_t(1) << k); ++mask) {
        Cone c;
        for (std::size_t j = 0; j < k; ++j)
          if (mask >> j & 1) c.push_back(m[j]);
        seen.insert(c);
      }
    }
    return {seen.begin(), seen.end()};
  }

  std::vector<Cone> link(const Cone& sigma) const {
    std::set<Cone> out{Cone{}};
    for (const auto& m : max_) {
      if (!is_subset(sigma, m)) continue;
      Cone rest = cone_difference(m, sigma);
      for (std::size_t mask = 1; mask < (std::size_t(1) << rest.size()); ++mask) {
        Cone c;
        for (std::size_t j = 0; j < rest.size(); ++j)
          if (mask >> j & 1) c.push_back(rest[j]);
        out.insert(c);
      }
    }
    return {out.begin(), out.end()};
  }

  // Rays of link(sigma), ascending.
  Cone link_rays(const Cone& sigma) const {
    std::set<int> out;
    for (const auto& m : max_)
      if (is_subset(sigma, m))
        for (int i : cone_difference(m, sigma)) out.insert(i);
    return {out.begin(), out.end()};
  }

  bool has_full_dimensional_cone() const {
    for (const auto& m : max_)
      if (m.size() == dim_) return true;
    return false;
  }

 private:
  // Integer numerators over a common denominator, when everything fits in 64 bits.
  struct SmallForm {
    bool ok = false;
    std::int64_t den = 1;
    std::vector<std::int64_t> num;   // row-major, cone size x dim
    std::vector<std::int64_t> rays;  // row-major, dim x cone size
  };

  static bool fits(const Integer& z) { return mpz_sizeinbase(z.backend().data(), 2) <= 30; }

  // Integral entry below 2^30 in absolute value, read without copying.
  static bool small_integer(const Rational& q, std::int64_t& out) {
    const auto* r = q.backend().data();
    if (mpz_cmp_ui(mpq_denref(r), 1) != 0 || mpz_sizeinbase(mpq_numref(r), 2) > 30) return false;
    out = mpz_get_si(mpq_numref(r));
    return true;
  }

  static SmallForm small_form(const RatMatrix& C) {
    SmallForm f;
    Integer den = 1;
    for (std::size_t i = 0; i < C.rows(); ++i)
      for (std::size_t j = 0; j < C.cols(); ++j) den = lcm(den, denom(C(i, j)));
    if (!fits(den)) return f;
    f.den = to_int64(den);
    for (std::size_t i = 0; i < C.rows(); ++i)
      for (std::size_t j = 0; j < C.cols(); ++j) {
        Integer z = numer(C(i, j) * Rational(den));
        if (!fits(z)) return f;
        f.num.push_back(to_int64(z));
      }
    f.ok = true;
    return f;
  }

  // Coordinates of v in the rays of max cone k when v lies in their span.
  std::optional<RatVec> span_coordinates(std::size_t k, const RatVec& v) const {
    const SmallForm& f = fast_[k];
    const Cone& c = max_[k];
    bool small = f.ok;
    std::vector<__int128> x(dim_), num(c.size(), 0);
    for (std::size_t i = 0; i < dim_ && small; ++i) {
      std::int64_t t = 0;
      small = small_integer(v[i], t);
      x[i] = t;
    }
    if (small) {
      for (std::size_t j = 0; j < c.size(); ++j)
        for (std::size_t i = 0; i < dim_; ++i) num[j] += static_cast<__int128>(f.num[j * dim_ + i]) * x[i];
      bool exact = true;
      for (std::size_t i = 0; i < dim_ && exact; ++i) {
        __int128 s = 0;
        for (std::size_t j = 0; j < c.size(); ++j) s += num[j] * f.rays[i * c.size() + j];
        exact = s == x[i] * f.den;
      }
      if (!exact) return std::nullopt;
      const __int128 lim = static_cast<__int128>(1) << 62;
      for (auto n : num)
        if (n >= lim || n <= -lim) small = false;
    }
    if (small) {
      RatVec a;
      a.reserve(c.size());
      for (auto n : num) a.emplace_back(static_cast<long long>(n), static_cast<long long>(f.den));
      return a;
    }
    RatVec a = coords_[k] * v;
    if (basis_[k] * a != v) return std::nullopt;
    return a;
  }

  std::size_t dim_ = 0;
  std::vector<IntVec> rays_;
  std::vector<Cone> max_;
  std::vector<RatMatrix> basis_, coords_;
  std::vector<SmallForm> fast_;
};

struct FanQuotient {
  SimplicialFan fan;
  std::vector<int> ray_ids;  // original index of each quotient ray
  IntMatrix proj;            // free quotient of Z^dim by the saturated span of sigma
};

inline FanQuotient quotient_fan(const SimplicialFan& fan, const Cone& sigma) {
  if (!fan.is_face(sigma)) throw Error(ErrorCode::InvalidInput, to_string(sigma) + " is not a cone of the fan");
  std::vector<IntVec> gens;
  for (int i : sigma) gens.push_back(fan.rays()[i]);
  Quotient q = present(IntMatrix::from_columns(gens, fan.dim()));
  const std::size_t d = q.group.free_rank();
  IntMatrix P = q.proj.select_rows(0, d);
  Cone link = fan.link_rays(sigma);
  std::map<int, int> index;
  std::vector<IntVec> rays;
  for (std::size_t j = 0; j < link.size(); ++j) {
    index[link[j]] = static_cast<int>(j);
    rays.push_back(P * fan.rays()[link[j]]);
  }
  std::vector<Cone> cones;
  for (const auto& m : fan.max_cones()) {
    if (!is_subset(sigma, m)) continue;
    Cone c;
    for (int i : cone_difference(m, sigma)) c.push_back(index.at(i));
    if (rank(ray_matrix(rays, c, d)) != c.size())
      throw Error(ErrorCode::InvalidInput, "quotient cone rays became dependent");
    cones.push_back(c);
  }
  return {SimplicialFan(d, rays, cones), link, P};
}

struct RegularityReport {
  bool regular = false;
  std::string violation;
  IntVec weights;
};

// Decides whether max_cones form a regular triangulation of pos(generators) with generators spanning.
inline RegularityReport check_regular_triangulation(std::size_t dim, const std::vector<IntVec>& generators,
                                                    std::vector<Cone> max_cones) {
  RegularityReport rep;
  auto fail = [&](std::string why) {
    rep.violation = std::move(why);
    return rep;
  };
  const std::size_t n = generators.size();
  for (const auto& g : generators) {
    if (g.size() != dim) return fail("generator has wrong dimension");
    if (is_zero(g)) return fail("zero generator");
  }
  if (rank(IntMatrix::from_columns(generators, dim)) != dim) return fail("generators do not span");
  if (max_cones.empty()) return fail("no cones");
  for (auto& c : max_cones) {
    std::sort(c.begin(), c.end());
    for (int i : c)
      if (i < 0 || static_cast<std::size_t>(i) >= n) return fail("ray index out of range");
    if (c.size() != dim || rank(ray_matrix(generators, c, dim)) != dim)
      return fail("cone " + to_string(c) + " is not full-dimensional simplicial");
  }
  for (std::size_t a = 0; a < max_cones.size(); ++a)
    for (std::size_t b = a + 1; b < max_cones.size(); ++b)
      if (!proper_intersection(generators, dim, max_cones[a], max_cones[b]))
        return fail("cones " + to_string(max_cones[a]) + " and " + to_string(max_cones[b]) + " overlap");

  std::vector<RatVec> rows;
  auto fold_row = [&](const Cone& c, int q) -> bool {
    auto coef = solve(ray_matrix(generators, c, dim), to_rational(generators[q]));
    if (!coef) return false;
    RatVec row(n, Rational(0));
    row[q] += 1;
    for (std::size_t j = 0; j < c.size(); ++j) row[c[j]] -= (*coef)[j];
    rows.push_back(std::move(row));
    return true;
  };

  std::map<Cone, std::vector<std::pair<std::size_t, int>>> walls;
  for (std::size_t k = 0; k < max_cones.size(); ++k)
    for (int opp : max_cones[k]) {
      Cone w;
      for (int i : max_cones[k])
        if (i != opp) w.push_back(i);
      walls[w].push_back({k, opp});
    }
  for (const auto& [wall, owners] : walls) {
    if (owners.size() > 2) return fail("wall " + to_string(wall) + " lies in more than two cones");
    RatMatrix W = ray_matrix(generators, wall, dim).transpose();
    auto normals = nullspace(W);
    RatVec nrm = normals.at(0);
    auto dot = [&](const IntVec& v) {
      Rational s = 0;
      for (std::size_t i = 0; i < dim; ++i) s += nrm[i] * Rational(v[i]);
      return s;
    };
    if (dot(generators[owners[0].second]) < 0)
      for (auto& x : nrm) x = -x;
    if (owners.size() == 1) {
      for (std::size_t k = 0; k < n; ++k)
        if (dot(generators[k]) < 0)
          return fail("boundary wall " + to_string(wall) + " separates generator " + std::to_string(k));
      continue;
    }
    int q = owners[1].second;
    if (dot(generators[q]) >= 0) return fail("cones on wall " + to_string(wall) + " lie on one side");
    fold_row(max_cones[owners[0].first], q);
  }
  std::set<int> used;
  for (const auto& c : max_cones) used.insert(c.begin(), c.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (used.count(static_cast<int>(k))) continue;
    bool placed = false;
    for (const auto& c : max_cones) {
      auto coef = solve(ray_matrix(generators, c, dim), to_rational(generators[k]));
      bool inside = coef && std::all_of(coef->begin(), coef->end(), [](const Rational& a) { return a >= 0; });
      if (inside) {
        fold_row(c, static_cast<int>(k));
        placed = true;
        break;
      }
    }
    if (!placed) return fail("generator " + std::to_string(k) + " is outside the support");
  }

  RatMatrix G = RatMatrix::from_rows(rows, n);
  auto w = solve_inequalities(G, RatVec(rows.size(), Rational(1)));
  if (!w) return fail("no height function induces the subdivision");
  Integer l = 1;
  for (const auto& x : *w) l = lcm(l, denom(x));
  rep.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) rep.weights[i] = numer((*w)[i] * Rational(l));
  rep.regular = true;
  return rep;
}

}  // namespace orbichow
