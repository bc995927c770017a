#pragma once

#include "orbichow/fan.hpp"

#include <map>
#include <optional>
#include <set>
#include <vector>

namespace orbichow {

// Columns 0..n-1 of beta generate the rays of the fan; the rest are extra vectors.
class ExtendedStackyFan {
 public:
  ExtendedStackyFan() = default;
  ExtendedStackyFan(LatticeMap beta, std::size_t n, std::vector<Cone> max_cones) : beta_(std::move(beta)), n_(n) {
    if (n_ > beta_.source_rank()) throw Error(ErrorCode::InvalidInput, "more rays than columns");
    std::vector<IntVec> rays;
    for (std::size_t i = 0; i < n_; ++i) {
      IntVec r = group().free_part(beta_.column(i));
      if (is_zero(r)) throw Error(ErrorCode::InvalidInput, "ray " + std::to_string(i) + " has zero free part");
      rays.push_back(std::move(r));
    }
    fan_ = SimplicialFan(group().free_rank(), rays, std::move(max_cones));
  }

  const AbelianGroup& group() const { return beta_.target(); }
  const LatticeMap& beta() const { return beta_; }
  const SimplicialFan& fan() const { return fan_; }
  std::size_t num_rays() const { return n_; }
  std::size_t num_columns() const { return beta_.source_rank(); }
  std::size_t dim() const { return group().free_rank(); }
  IntVec ray(int i) const { return beta_.column(i); }

  RatVec bar(const IntVec& v) const { return to_rational(group().free_part(v)); }

  std::vector<Cone> top_cones() const {
    std::vector<Cone> out;
    for (const auto& c : fan_.max_cones())
      if (c.size() == dim()) out.push_back(c);
    return out;
  }

 private:
  LatticeMap beta_;
  std::size_t n_ = 0;
  SimplicialFan fan_;
};

struct BoxElement {
  IntVec v;
  Cone cone;
  RatVec frac;  // one coordinate per ray of cone, each in (0,1)
  Rational age;

  bool operator==(const BoxElement& o) const { return v == o.v; }
  bool operator<(const BoxElement& o) const { return v < o.v; }
};

// Box data of an element whose cone coordinates all lie in [0,1).
inline BoxElement make_box_element(const ExtendedStackyFan& sf, const IntVec& v) {
  auto coords = sf.fan().coordinates(sf.bar(v));
  if (!coords) throw Error(ErrorCode::InvalidInput, "element outside the support");
  BoxElement b{sf.group().normalize(v), {}, {}, 0};
  for (const auto& [i, a] : *coords) {
    if (a >= 1) throw Error(ErrorCode::InvalidInput, "element is not a box element");
    b.cone.push_back(i);
    b.frac.push_back(a);
    b.age += a;
  }
  return b;
}

struct Decomposition {
  BoxElement box;
  std::map<int, Integer> exponents;  // ray index -> multiplicity, nonzero only
};

// c = v + sum m_i b_i with v in the box and m_i >= 0 over the minimal cone of c.
inline Decomposition decompose(const ExtendedStackyFan& sf, const IntVec& c) {
  auto coords = sf.fan().coordinates(sf.bar(c));
  if (!coords) throw Error(ErrorCode::InvalidInput, "element outside the support of the fan");
  Decomposition d;
  IntVec v = c;
  BoxElement& b = d.box;
  for (const auto& [i, a] : *coords) {
    Integer m = floor(a);
    if (m != 0) {
      d.exponents[i] = m;
      v = sub(v, scale(sf.ray(i), m));
    }
    Rational f = a - Rational(m);
    if (f != 0) {
      b.cone.push_back(i);
      b.frac.push_back(f);
      b.age += f;
    }
  }
  b.v = sf.group().normalize(v);
  return d;
}

inline std::vector<BoxElement> box_of_cone(const ExtendedStackyFan& sf, const Cone& sigma) {
  if (sigma.size() != sf.dim() || !sf.fan().is_face(sigma))
    throw Error(ErrorCode::InvalidInput, "box requires a top-dimensional cone, got " + to_string(sigma));
  GroupQuotient q = quotient_by_columns(sf.beta(), sigma);
  if (!q.group.is_finite()) throw Error(ErrorCode::InvalidInput, "cone does not span");
  RatMatrix B = ray_matrix(sf.fan().rays(), sigma, sf.dim());
  std::set<BoxElement> out;
  for (const auto& g : q.group.torsion_elements()) {
    IntVec x = sf.group().normalize(q.lift(g));
    RatVec a = *solve(B, sf.bar(x));
    BoxElement b;
    IntVec v = x;
    for (std::size_t j = 0; j < sigma.size(); ++j) {
      Integer m = floor(a[j]);
      v = sub(v, scale(sf.ray(sigma[j]), m));
      Rational f = a[j] - Rational(m);
      if (f != 0) {
        b.cone.push_back(sigma[j]);
        b.frac.push_back(f);
        b.age += f;
      }
    }
    b.v = sf.group().normalize(v);
    out.insert(b);
  }
  if (Integer(out.size()) != q.group.torsion_order())
    throw Error(ErrorCode::InvalidInput, "box enumeration does not match the order of N/N_sigma");
  return {out.begin(), out.end()};
}

inline std::vector<BoxElement> box_of_fan(const ExtendedStackyFan& sf) {
  auto tops = sf.top_cones();
  if (tops.empty()) throw Error(ErrorCode::InvalidInput, "fan has no top-dimensional cone");
  std::set<BoxElement> out;
  for (const auto& c : tops)
    for (auto& b : box_of_cone(sf, c)) out.insert(std::move(b));
  return {out.begin(), out.end()};
}

inline BoxElement inverse_box(const ExtendedStackyFan& sf, const BoxElement& b) {
  IntVec w = sf.group().neg(b.v);
  for (int i : b.cone) w = add(w, sf.ray(i));
  return make_box_element(sf, sf.group().normalize(w));
}

struct QuotientStackyFan {
  ExtendedStackyFan sf;
  GroupQuotient quotient;    // N -> N(sigma)
  std::vector<int> columns;  // original column index of each new column
};

inline QuotientStackyFan quotient_stacky_fan(const ExtendedStackyFan& sf, const Cone& sigma) {
  bool in_top = false;
  for (const auto& c : sf.top_cones()) in_top = in_top || is_subset(sigma, c);
  if (!in_top) throw Error(ErrorCode::NotSemiprojective, to_string(sigma) + " lies in no top-dimensional cone");
  std::vector<int> all(sf.num_columns());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  if (sigma.empty()) {
    const AbelianGroup& N = sf.group();
    return {sf, {N, GroupHom(N, N, IntMatrix::identity(N.dim())), IntMatrix::identity(N.dim())}, all};
  }
  GroupQuotient q = quotient_by_columns(sf.beta(), sigma);
  Cone link = sf.fan().link_rays(sigma);
  std::vector<int> cols(link.begin(), link.end());
  for (std::size_t i = sf.num_rays(); i < sf.num_columns(); ++i) cols.push_back(static_cast<int>(i));
  std::vector<IntVec> images;
  for (int c : cols) images.push_back(q.proj(sf.ray(c)));
  std::map<int, int> index;
  for (std::size_t j = 0; j < link.size(); ++j) index[link[j]] = static_cast<int>(j);
  std::vector<Cone> cones;
  for (const auto& m : sf.fan().max_cones()) {
    if (!is_subset(sigma, m)) continue;
    Cone c;
    for (int i : cone_difference(m, sigma)) c.push_back(index.at(i));
    cones.push_back(c);
  }
  return {ExtendedStackyFan(LatticeMap(q.group, images), link.size(), cones), q, cols};
}

struct InertiaComponent {
  std::vector<BoxElement> tuple;
  Cone cone;
};

inline std::vector<InertiaComponent> inertia_components(const ExtendedStackyFan& sf, int r) {
  if (r < 1) throw Error(ErrorCode::InvalidInput, "inertia order must be positive");
  auto box = box_of_fan(sf);
  std::vector<InertiaComponent> out;
  std::vector<std::size_t> idx(r, 0);
  if (box.empty()) return out;
  for (;;) {
    Cone u;
    std::vector<BoxElement> t;
    for (auto i : idx) {
      u = cone_union(u, box[i].cone);
      t.push_back(box[i]);
    }
    if (sf.fan().is_face(u)) out.push_back({t, u});
    int k = r - 1;
    while (k >= 0 && ++idx[k] == box.size()) idx[k--] = 0;
    if (k < 0) break;
  }
  return out;
}

inline bool is_semiprojective(const ExtendedStackyFan& sf, RegularityReport* report = nullptr) {
  RegularityReport rep = check_regular_triangulation(sf.dim(), sf.fan().rays(), sf.fan().max_cones());
  bool ok = rep.regular;
  if (report) *report = std::move(rep);
  return ok;
}

}  // namespace orbichow
