#pragma once

#include "orbichow/graded.hpp"
#include "orbichow/stacky.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace orbichow {

// Finite sums of y^c with c in N_Sigma; keys are normalized, coefficients nonzero.
using DeformedElement = std::map<IntVec, Rational>;

inline void accumulate(DeformedElement& x, const IntVec& c, const Rational& a) {
  if (a == 0) return;
  Rational& s = x[c];
  s += a;
  if (s == 0) x.erase(c);
}

inline Cone support_cone(const ExtendedStackyFan& sf, const IntVec& c) {
  auto m = sf.fan().minimal_cone_containing(sf.bar(c));
  if (!m) throw Error(ErrorCode::InvalidInput, "lattice point outside the support of the fan");
  return *m;
}

inline DeformedElement monomial(const ExtendedStackyFan& sf, const IntVec& c, const Rational& a = 1) {
  support_cone(sf, c);
  DeformedElement x;
  accumulate(x, sf.group().normalize(c), a);
  return x;
}

inline DeformedElement deformed_product(const ExtendedStackyFan& sf, const DeformedElement& x,
                                        const DeformedElement& y) {
  DeformedElement out;
  std::map<IntVec, Cone> cones;
  auto cone_of = [&](const IntVec& c) -> const Cone& {
    auto it = cones.find(c);
    if (it == cones.end()) it = cones.emplace(c, support_cone(sf, c)).first;
    return it->second;
  };
  for (const auto& [c1, a1] : x)
    for (const auto& [c2, a2] : y) {
      if (!sf.fan().is_face(cone_union(cone_of(c1), cone_of(c2)))) continue;
      accumulate(out, sf.group().add(c1, c2), a1 * a2);
    }
  return out;
}

inline Rational degree(const ExtendedStackyFan& sf, const IntVec& c) {
  Decomposition d = decompose(sf, c);
  Rational s = d.box.age;
  for (const auto& [i, m] : d.exponents) s += Rational(m);
  return s;
}

struct ChowPresentation {
  ExtendedStackyFan sf;
  std::vector<BoxElement> box;  // sector order
  GradedPresentation ring;

  std::size_t sector_of(const IntVec& v) const {
    BoxElement key{sf.group().normalize(v), {}, {}, 0};
    auto it = std::lower_bound(box.begin(), box.end(), key);
    if (it != box.end() && it->v == key.v) return it - box.begin();
    throw Error(ErrorCode::InvalidInput, "not a box element");
  }

  SparseVec normal_form_sparse(const DeformedElement& x) const {
    SparseVec out;
    for (const auto& [c, a] : x) {
      Decomposition d = decompose(sf, c);
      Exponent e(sf.num_rays(), 0);
      for (const auto& [i, m] : d.exponents) e[i] = to_int64(m);
      add_scaled(out, ring.normal_form_monomial_sparse(sector_of(d.box.v), e, a));
    }
    return out;
  }

  RatVec normal_form(const DeformedElement& x) const { return ring.dense(normal_form_sparse(x)); }

  // y^c representing basis element i.
  IntVec lattice_point(std::size_t i) const {
    const BasisEntry& b = ring.basis()[i];
    IntVec c = box[b.sector].v;
    for (std::size_t j = 0; j < b.monomial.size(); ++j)
      c = add(c, scale(sf.ray(ring.free_vars()[j]), Integer(b.monomial[j])));
    return sf.group().normalize(c);
  }

  DeformedElement lift(const RatVec& coords) const {
    DeformedElement x;
    for (std::size_t i = 0; i < coords.size(); ++i) accumulate(x, lattice_point(i), coords[i]);
    return x;
  }

  RatVec multiply(const RatVec& a, const RatVec& b) const {
    return normal_form(deformed_product(sf, lift(a), lift(b)));
  }

  std::string label(std::size_t i) const {
    const BasisEntry& b = ring.basis()[i];
    std::string s = "y^" + group_string(box[b.sector].v);
    for (std::size_t j = 0; j < b.monomial.size(); ++j)
      if (b.monomial[j])
        s += "*y^b" + std::to_string(ring.free_vars()[j]) +
             (b.monomial[j] > 1 ? "^" + std::to_string(b.monomial[j]) : "");
    return s;
  }

  static std::string group_string(const IntVec& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
    return s + ")";
  }
};

inline RatMatrix ray_linear_forms(const ExtendedStackyFan& sf) {
  RatMatrix L(sf.dim(), sf.num_rays());
  for (std::size_t i = 0; i < sf.num_rays(); ++i)
    for (std::size_t k = 0; k < sf.dim(); ++k) L(k, i) = Rational(sf.fan().rays()[i][k]);
  return L;
}

inline ChowPresentation build_presentation(const ExtendedStackyFan& sf, int degree_cap = 64) {
  RegularityReport rep;
  if (!is_semiprojective(sf, &rep)) throw Error(ErrorCode::NotSemiprojective, rep.violation);
  ChowPresentation p{sf, box_of_fan(sf), {}};
  std::vector<Sector> sectors;
  for (const auto& b : p.box) sectors.push_back({b.cone, b.age});
  const SimplicialFan& fan = sf.fan();
  p.ring = build_graded(sf.num_rays(), ray_linear_forms(sf), sectors,
                        [&](const Cone& c) { return fan.is_face(c); }, degree_cap);
  return p;
}

// Chow ring of the coarse space: the zero sector alone.
inline GradedPresentation untwisted_presentation(const ExtendedStackyFan& sf, int degree_cap = 64) {
  const SimplicialFan& fan = sf.fan();
  return build_graded(sf.num_rays(), ray_linear_forms(sf), {Sector{{}, 0}},
                      [&](const Cone& c) { return fan.is_face(c); }, degree_cap);
}

// Sum over the box of the dims of the quotient stacks, each shifted by the age.
inline std::map<Rational, std::size_t> sector_decomposition_dims(const ExtendedStackyFan& sf, int degree_cap = 64) {
  std::map<Rational, std::size_t> out;
  for (const auto& b : box_of_fan(sf)) {
    QuotientStackyFan q = quotient_stacky_fan(sf, b.cone);
    for (const auto& [d, k] : untwisted_presentation(q.sf, degree_cap).dims()) out[d + b.age] += k;
  }
  return out;
}

// Rays with a_i = 2 in v1+v2+v3 = sum a_i b_i, or nullopt when the three supports share no cone.
inline std::optional<Cone> obstruction_exponents(const ExtendedStackyFan& sf, const BoxElement& v1,
                                                 const BoxElement& v2, const BoxElement& v3) {
  Cone u = cone_union(cone_union(v1.cone, v2.cone), v3.cone);
  if (!sf.fan().is_face(u)) return std::nullopt;
  const AbelianGroup& N = sf.group();
  IntVec s = N.add(N.add(v1.v, v2.v), v3.v);
  auto coords = sf.fan().cone_coordinates(u, sf.bar(s));
  if (!coords) throw Error(ErrorCode::MalformedTriple, "sum leaves the cone " + to_string(u));
  const RatVec& a = *coords;
  IntVec rest = s;
  Cone twos;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (a[j] != 1 && a[j] != 2)
      throw Error(ErrorCode::MalformedTriple, "coefficient " + to_string(a[j]) + " on ray " + std::to_string(u[j]));
    if (a[j] == 2) twos.push_back(u[j]);
    rest = sub(rest, scale(sf.ray(u[j]), numer(a[j])));
  }
  if (!N.is_zero(rest)) throw Error(ErrorCode::MalformedTriple, "triple does not sum into the lattice of its cone");
  return twos;
}

// y^{v1} * y^{v2} = y^{v3check} * prod_{a_i=2} y^{b_i} * prod_{j in J} y^{b_j}.
inline SparseVec cup_product_sparse(const ChowPresentation& p, const BoxElement& v1, const BoxElement& v2) {
  const ExtendedStackyFan& sf = p.sf;
  Cone u = cone_union(v1.cone, v2.cone);
  if (!sf.fan().is_face(u)) return {};
  BoxElement v3check = decompose(sf, sf.group().add(v1.v, v2.v)).box;
  BoxElement v3 = inverse_box(sf, v3check);
  auto twos = obstruction_exponents(sf, v1, v2, v3);
  if (!twos) throw Error(ErrorCode::MalformedTriple, "inverse partner left the cone");
  Exponent e(sf.num_rays(), 0);
  for (int i : *twos) ++e[i];
  for (int j : cone_difference(u, v3check.cone)) ++e[j];
  return p.ring.normal_form_monomial_sparse(p.sector_of(v3check.v), e);
}

inline RatVec cup_product_via_sectors(const ChowPresentation& p, const BoxElement& v1, const BoxElement& v2) {
  return p.ring.dense(cup_product_sparse(p, v1, v2));
}

}  // namespace orbichow
