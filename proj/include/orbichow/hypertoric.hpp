#pragma once

#include "orbichow/graded.hpp"
#include "orbichow/lawrence.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace orbichow {

struct MultiFan {
  LatticeMap beta;
  std::vector<Cone> independent;  // by size, then lexicographic

  bool contains(const Cone& s) const { return std::binary_search(independent.begin(), independent.end(), s, order); }

  static bool order(const Cone& a, const Cone& b) { return a.size() != b.size() ? a.size() < b.size() : a < b; }
};

inline MultiFan multifan(const LatticeMap& beta) {
  MultiFan mf{beta, {}};
  const int m = static_cast<int>(beta.source_rank());
  for (int k = 0; k <= std::min<int>(m, static_cast<int>(beta.target().free_rank())); ++k)
    for_each_subset(m, k, [&](const Cone& s) {
      if (is_independent(beta, s)) mf.independent.push_back(s);
    });
  std::sort(mf.independent.begin(), mf.independent.end(), MultiFan::order);
  return mf;
}

// Coefficients of the free part of c over sigma, or nullopt when c is not in its span.
inline std::optional<RatVec> span_coordinates(const LatticeMap& beta, const IntVec& c, const Cone& sigma) {
  const AbelianGroup& N = beta.target();
  RatVec target = to_rational(N.free_part(c));
  if (sigma.empty()) return is_zero(target) ? std::optional<RatVec>(RatVec{}) : std::nullopt;
  const detail::SpanSolver& sv = detail::span_solver(beta, sigma);
  if (sv.independent) {
    RatVec a(sigma.size(), Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < a.size(); ++j) a[i] += sv.inv(i, j) * target[sv.rows[j]];
    if (sv.cols * a != target) return std::nullopt;
    return a;
  }
  RatMatrix M(N.free_rank(), sigma.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    RatVec col = beta.free_column(sigma[j]);
    for (std::size_t i = 0; i < col.size(); ++i) M(i, j) = col[i];
  }
  return solve(M, target);
}

struct MFBoxElement {
  IntVec v;
  Cone sigma;
  RatVec frac;

  Rational shift() const { return Rational(static_cast<long>(sigma.size())); }
  bool operator==(const MFBoxElement& o) const { return v == o.v && sigma == o.sigma; }
  bool operator<(const MFBoxElement& o) const { return sigma != o.sigma ? MultiFan::order(sigma, o.sigma) : v < o.v; }
};

inline std::vector<MFBoxElement> mf_box(const LatticeMap& beta) {
  const AbelianGroup& N = beta.target();
  std::set<MFBoxElement> out;
  for (const auto& sigma : multifan(beta).independent) {
    GroupQuotient q = quotient_by_columns(beta, sigma);
    for (const auto& g : q.group.torsion_elements()) {
      IntVec x = N.normalize(q.lift(g));
      RatVec a = *span_coordinates(beta, x, sigma);
      MFBoxElement b{x, sigma, {}};
      bool full = true;
      for (std::size_t j = 0; j < sigma.size(); ++j) {
        Integer f = floor(a[j]);
        b.v = sub(b.v, scale(beta.column(sigma[j]), f));
        b.frac.push_back(a[j] - Rational(f));
        full = full && b.frac.back() != 0;
      }
      b.v = N.normalize(b.v);
      if (full) out.insert(b);
    }
  }
  return {out.begin(), out.end()};
}

using MFKey = std::pair<IntVec, Cone>;
using MFElement = std::map<MFKey, Rational>;

inline void accumulate(MFElement& x, const MFKey& k, const Rational& a) {
  if (a == 0) return;
  Rational& s = x[k];
  s += a;
  if (s == 0) x.erase(k);
}

// Strictly positive coordinates of c over an independent sigma.
inline RatVec mf_coordinates(const LatticeMap& beta, const MFKey& k) {
  if (!is_independent(beta, k.second)) throw Error(ErrorCode::InvalidInput, to_string(k.second) + " is dependent");
  auto a = span_coordinates(beta, k.first, k.second);
  if (!a) throw Error(ErrorCode::InvalidInput, "element not in the span of " + to_string(k.second));
  for (const auto& x : *a)
    if (x <= 0) throw Error(ErrorCode::InvalidInput, "element not in the relative interior of " + to_string(k.second));
  return *a;
}

inline MFKey mf_key(const LatticeMap& beta, const IntVec& c, const Cone& sigma) {
  MFKey k{beta.target().normalize(c), sigma};
  mf_coordinates(beta, k);
  return k;
}

struct MFDecomposition {
  MFBoxElement box;
  std::map<int, Integer> exponents;
};

inline MFDecomposition mf_decompose(const LatticeMap& beta, const MFKey& k) {
  RatVec a = mf_coordinates(beta, k);
  MFDecomposition d;
  IntVec v = k.first;
  for (std::size_t j = 0; j < a.size(); ++j) {
    Integer m = floor(a[j]);
    Rational f = a[j] - Rational(m);
    if (m != 0) {
      d.exponents[k.second[j]] = m;
      v = sub(v, scale(beta.column(k.second[j]), m));
    }
    if (f != 0) {
      d.box.sigma.push_back(k.second[j]);
      d.box.frac.push_back(f);
    }
  }
  d.box.v = beta.target().normalize(v);
  return d;
}

inline Rational mf_degree(const LatticeMap& beta, const MFKey& k) {
  MFDecomposition d = mf_decompose(beta, k);
  Rational s = d.box.shift();
  for (const auto& [i, m] : d.exponents) s += Rational(m);
  return s;
}

inline IntVec ceiling(const LatticeMap& beta, const MFKey& k) {
  RatVec a = mf_coordinates(beta, k);
  IntVec out(beta.target().dim(), Integer(0));
  for (std::size_t j = 0; j < a.size(); ++j) out = add(out, scale(beta.column(k.second[j]), orbichow::ceil(a[j])));
  return beta.target().normalize(out);
}

struct SignedKey {
  int sign;
  MFKey key;
};

inline std::optional<SignedKey> mf_product(const LatticeMap& beta, const MFKey& x, const MFKey& y) {
  Cone u = cone_union(x.second, y.second);
  if (!is_independent(beta, u)) return std::nullopt;
  const AbelianGroup& N = beta.target();
  IntVec c = N.add(x.first, y.first);
  IntVec eps = N.sub(N.add(ceiling(beta, x), ceiling(beta, y)), ceiling(beta, {c, u}));
  auto e = span_coordinates(beta, eps, u);
  int flips = 0;
  for (const auto& a : *e)
    if (a != 0) ++flips;
  return SignedKey{flips % 2 ? -1 : 1, {N.add(c, eps), u}};
}

inline MFElement mf_multiply(const LatticeMap& beta, const MFElement& x, const MFElement& y) {
  MFElement out;
  for (const auto& [kx, ax] : x)
    for (const auto& [ky, ay] : y)
      if (auto p = mf_product(beta, kx, ky)) accumulate(out, p->key, ax * ay * p->sign);
  return out;
}

// Signed y^{(v,sigma)} * prod y^{b_i}^{k_i}.
struct BoxProductTerm {
  int kind = 0;  // 1: distinct classes, 2: mutually inverse, 3: no common cone
  int sign = 1;
  MFBoxElement box;
  std::map<int, int> exponents;
};

inline MFElement evaluate(const LatticeMap& beta, const BoxProductTerm& t) {
  MFElement out;
  if (t.kind == 3) return out;
  IntVec c = t.box.v;
  Cone s = t.box.sigma;
  for (const auto& [i, k] : t.exponents) {
    c = add(c, scale(beta.column(i), Integer(k)));
    s = cone_union(s, {i});
  }
  accumulate(out, mf_key(beta, c, s), t.sign);
  return out;
}

inline MFBoxElement mf_box_inverse(const LatticeMap& beta, const MFBoxElement& b) {
  IntVec w = beta.target().neg(b.v);
  for (int i : b.sigma) w = add(w, beta.column(i));
  MFBoxElement out = mf_decompose(beta, {beta.target().normalize(w), b.sigma}).box;
  return out;
}

// The three-case closed form of y^{(v1,s1)} y^{(v2,s2)}, with v3 the inverse of the box part of v1 + v2.
inline BoxProductTerm mf_box_product(const LatticeMap& beta, const std::vector<MFBoxElement>& box,
                                     const MFBoxElement& x, const MFBoxElement& y) {
  BoxProductTerm t;
  const AbelianGroup& N = beta.target();
  Cone u = cone_union(x.sigma, y.sigma);
  if (!is_independent(beta, u)) {
    t.kind = 3;
    return t;
  }
  auto coeff = [&](const MFBoxElement& b, int i) {
    auto it = std::lower_bound(b.sigma.begin(), b.sigma.end(), i);
    return it != b.sigma.end() && *it == i ? b.frac[it - b.sigma.begin()] : Rational(0);
  };
  IntVec sum = N.add(x.v, y.v);
  for (int i : u) sum = add(sum, beta.column(i));
  MFBoxElement v3check = mf_decompose(beta, {N.normalize(sum), u}).box;
  MFBoxElement partner = mf_box_inverse(beta, v3check);
  auto found = std::lower_bound(box.begin(), box.end(), partner);
  if (found == box.end() || !(*found == partner)) throw Error(ErrorCode::MalformedTriple, "no box element completes the pair");
  const MFBoxElement* v3 = &*found;
  std::map<int, int> a;
  IntVec rest = N.add(N.add(x.v, y.v), v3->v);
  for (int i : u) {
    Rational s = coeff(x, i) + coeff(y, i) + coeff(*v3, i);
    if (s != 1 && s != 2) throw Error(ErrorCode::MalformedTriple, "coefficient outside {1,2} at " + std::to_string(i));
    a[i] = static_cast<int>(to_int64(numer(s)));
    rest = sub(rest, scale(beta.column(i), numer(s)));
  }
  if (!N.is_zero(rest)) throw Error(ErrorCode::MalformedTriple, "partner does not close the triple");
  Cone I, J;
  for (int i : u) {
    bool all = coeff(x, i) != 0 && coeff(y, i) != 0 && coeff(*v3, i) != 0;
    if (a[i] == 1 && all) I.push_back(i);
    if (!std::binary_search(v3->sigma.begin(), v3->sigma.end(), i)) J.push_back(i);
  }
  bool inverse_pair = x.sigma == y.sigma && !x.sigma.empty();
  for (std::size_t j = 0; j < x.sigma.size() && inverse_pair; ++j) inverse_pair = x.frac[j] + y.frac[j] == 1;
  t.box = v3check;
  if (inverse_pair) {
    t.kind = 2;
    t.sign = J.size() % 2 ? -1 : 1;
    for (int j : J) t.exponents[j] += 2;
    return t;
  }
  t.kind = 1;
  t.sign = (I.size() + J.size()) % 2 ? -1 : 1;
  for (const auto& [i, ai] : a)
    if (ai == 2) ++t.exponents[i];
  for (int i : I) ++t.exponents[i];
  for (int j : J) t.exponents[j] += 2;
  return t;
}

struct HypertoricPresentation {
  LatticeMap beta;
  std::vector<MFBoxElement> box;
  GradedPresentation ring;

  std::size_t sector_of(const MFBoxElement& b) const {
    auto it = std::lower_bound(box.begin(), box.end(), b);
    if (it != box.end() && *it == b) return it - box.begin();
    throw Error(ErrorCode::InvalidInput, "not a box element of the multi-fan");
  }

  SparseVec normal_form_sparse(const MFElement& x) const {
    SparseVec out;
    for (const auto& [k, a] : x) {
      MFDecomposition d = mf_decompose(beta, k);
      Exponent e(beta.source_rank(), 0);
      for (const auto& [i, m] : d.exponents) e[i] = to_int64(m);
      add_scaled(out, ring.normal_form_monomial_sparse(sector_of(d.box), e, a));
    }
    return out;
  }

  RatVec normal_form(const MFElement& x) const { return ring.dense(normal_form_sparse(x)); }

  MFKey key(std::size_t i) const {
    const BasisEntry& b = ring.basis()[i];
    IntVec c = box[b.sector].v;
    Cone s = box[b.sector].sigma;
    for (std::size_t j = 0; j < b.monomial.size(); ++j)
      if (b.monomial[j]) {
        int r = ring.free_vars()[j];
        c = add(c, scale(beta.column(r), Integer(b.monomial[j])));
        s = cone_union(s, {r});
      }
    return {beta.target().normalize(c), s};
  }

  MFElement lift(const SparseVec& coords) const {
    MFElement x;
    for (const auto& [i, a] : coords) accumulate(x, key(i), a);
    return x;
  }

  MFElement lift(const RatVec& coords) const {
    MFElement x;
    for (std::size_t i = 0; i < coords.size(); ++i) accumulate(x, key(i), coords[i]);
    return x;
  }

  RatVec multiply(const RatVec& a, const RatVec& b) const { return normal_form(mf_multiply(beta, lift(a), lift(b))); }
};

inline RatMatrix vector_linear_forms(const LatticeMap& beta) {
  RatMatrix L(beta.target().free_rank(), beta.source_rank());
  for (std::size_t i = 0; i < beta.source_rank(); ++i) {
    RatVec c = beta.free_column(i);
    for (std::size_t k = 0; k < c.size(); ++k) L(k, i) = c[k];
  }
  return L;
}

// theta only selects the stack; the ring does not see it.
inline HypertoricPresentation hypertoric_presentation(const LatticeMap& beta, int degree_cap = 64) {
  HypertoricPresentation p{beta, mf_box(beta), {}};
  std::vector<Sector> sectors;
  for (const auto& b : p.box) sectors.push_back({b.sigma, b.shift()});
  p.ring = build_graded(beta.source_rank(), vector_linear_forms(beta), sectors,
                        [&](const Cone& c) { return is_independent(beta, c); }, degree_cap);
  return p;
}

inline HypertoricPresentation hypertoric_presentation(const StackyArrangement& arr, int degree_cap = 64) {
  return hypertoric_presentation(arr.beta(), degree_cap);
}

}  // namespace orbichow
