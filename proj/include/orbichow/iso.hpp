#pragma once

#include "orbichow/chow.hpp"
#include "orbichow/hypertoric.hpp"
#include "orbichow/lawrence.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace orbichow {

struct ConeLiftReport {
  bool holds = true;
  Cone witness;
  bool independent = false;
};

inline Cone lawrence_lifts(const Cone& F, int m) {
  Cone out = F;
  for (int i : F) out.push_back(i + m);
  std::sort(out.begin(), out.end());
  return out;
}

// F independent <=> its 2|F| Lawrence lifts lie in a cone of the Lawrence fan, for every F.
inline ConeLiftReport cone_lift_check(const StackyArrangement& arr, const LawrenceData& L) {
  const int m = static_cast<int>(arr.size());
  ConeLiftReport rep;
  for (int k = 0; k <= m && rep.holds; ++k)
    for_each_subset(m, k, [&](const Cone& F) {
      if (!rep.holds) return;
      bool ind = is_independent(arr.beta(), F);
      if (ind != L.fan->is_face(lawrence_lifts(F, m))) rep = {false, F, ind};
    });
  return rep;
}

inline ConeLiftReport cone_lift_check(const StackyArrangement& arr) { return cone_lift_check(arr, lawrence_fan(arr)); }

struct BoxPair {
  MFBoxElement hyper;
  BoxElement lawrence;
};

class BoxBijection {
 public:
  BoxBijection() = default;
  explicit BoxBijection(std::vector<BoxPair> pairs) : pairs_(std::move(pairs)) {
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      by_hyper_[{pairs_[i].hyper.v, pairs_[i].hyper.sigma}] = i;
      by_lawrence_[pairs_[i].lawrence.v] = i;
    }
  }

  const std::vector<BoxPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }

  const BoxElement& forward(const MFBoxElement& b) const {
    auto it = by_hyper_.find({b.v, b.sigma});
    if (it == by_hyper_.end()) throw Error(ErrorCode::BijectionFailed, "not a multi-fan box element");
    return pairs_[it->second].lawrence;
  }

  const MFBoxElement& inverse(const IntVec& v) const {
    auto it = by_lawrence_.find(v);
    if (it == by_lawrence_.end()) throw Error(ErrorCode::BijectionFailed, "not a box element of the Lawrence fan");
    return pairs_[it->second].hyper;
  }

 private:
  std::vector<BoxPair> pairs_;
  std::map<MFKey, std::size_t> by_hyper_;
  std::map<IntVec, std::size_t> by_lawrence_;
};

// (v, sigma) -> kappa(v) + sum_{i in sigma} b'_L,i, which has coordinates alpha_i on b_L,i and 1 - alpha_i on b'_L,i.
inline IntVec lawrence_box_image(const LawrenceData& L, const MFBoxElement& b) {
  const int m = static_cast<int>(L.m());
  IntVec w = L.kappa(b.v);
  for (int i : b.sigma) w = add(w, L.beta.column(i + m));
  return L.group.normalize(w);
}

inline BoxBijection box_bijection(const StackyArrangement& arr, const LawrenceData& L, const ExtendedStackyFan& sf) {
  const int m = static_cast<int>(arr.size());
  auto fail = [](const std::string& why) { throw Error(ErrorCode::BijectionFailed, why); };
  std::vector<BoxPair> pairs;
  std::set<IntVec> seen;
  for (const auto& h : mf_box(arr.beta())) {
    IntVec w = lawrence_box_image(L, h);
    BoxElement b;
    try {
      b = make_box_element(sf, w);
    } catch (const Error&) {
      fail("image of " + ChowPresentation::group_string(h.v) + to_string(h.sigma) + " is not a box element");
    }
    if (b.cone != lawrence_lifts(h.sigma, m))
      fail("image of " + to_string(h.sigma) + " lies in cone " + to_string(b.cone));
    for (std::size_t j = 0; j < h.sigma.size(); ++j) {
      auto at = [&](int r) { return b.frac[std::lower_bound(b.cone.begin(), b.cone.end(), r) - b.cone.begin()]; };
      if (at(h.sigma[j]) != h.frac[j] || at(h.sigma[j] + m) != 1 - h.frac[j])
        fail("fractional coordinates of the image of " + to_string(h.sigma) + " are wrong");
    }
    if (b.age != h.shift()) fail("age " + to_string(b.age) + " differs from shift " + to_string(h.shift()));
    if (!seen.insert(b.v).second) fail("two multi-fan box elements share an image");
    pairs.push_back({h, b});
  }
  std::size_t total = box_of_fan(sf).size();
  if (total != pairs.size())
    fail("Lawrence box has " + std::to_string(total) + " elements, multi-fan box has " + std::to_string(pairs.size()));
  return BoxBijection(std::move(pairs));
}

inline BoxBijection box_bijection(const StackyArrangement& arr) {
  LawrenceData L = lawrence_fan(arr);
  return box_bijection(arr, L, lawrence_stacky_fan(L));
}

struct Comparison {
  StackyArrangement arr;
  LawrenceData L;
  ExtendedStackyFan sf;
  BoxBijection bijection;
};

inline Comparison compare(const StackyArrangement& arr) {
  Comparison c{arr, lawrence_fan(arr), {}, {}};
  c.sf = lawrence_stacky_fan(c.L);
  c.bijection = box_bijection(arr, c.L, c.sf);
  return c;
}

inline MFElement ray_image(const LatticeMap& beta, int i, const Rational& a = 1) {
  MFElement x;
  accumulate(x, MFKey{beta.column(i), {i}}, a);
  return x;
}

// y^{v_theta} prod y^{b_L,i}^{p_i} y^{b'_L,i}^{q_i} -> (-1)^{sum q} y^{(v,sigma)} prod y^{b_i}^{p_i+q_i}
inline MFElement phi(const Comparison& c, const DeformedElement& x) {
  const LatticeMap& beta = c.arr.beta();
  const int m = static_cast<int>(c.arr.size());
  MFElement out;
  for (const auto& [pt, a] : x) {
    Decomposition d = decompose(c.sf, pt);
    const MFBoxElement& h = c.bijection.inverse(d.box.v);
    Integer q = 0;
    for (const auto& [r, k] : d.exponents)
      if (r >= m) q += k;
    MFElement term;
    accumulate(term, MFKey{h.v, h.sigma}, q % 2 == 0 ? a : Rational(-a));
    for (const auto& [r, k] : d.exponents)
      for (Integer t = 0; t < k; ++t) term = mf_multiply(beta, term, ray_image(beta, r % m));
    for (const auto& [key, b] : term) accumulate(out, key, b);
  }
  return out;
}

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct IsoReport {
  std::map<Rational, std::size_t> lawrence_dims, hypertoric_dims;
  std::size_t box_size = 0;
  std::vector<Rational> ages;
  std::vector<CheckResult> checks;

  bool passed() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return !checks.empty();
  }

  const CheckResult* first_failure() const {
    for (const auto& c : checks)
      if (!c.pass) return &c;
    return nullptr;
  }
};

inline std::string dims_string(const std::map<Rational, std::size_t>& d) {
  std::string s = "{";
  for (const auto& [k, v] : d) s += (s.size() > 1 ? ", " : "") + to_string(k) + ":" + std::to_string(v);
  return s + "}";
}

inline std::string vec_string(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + ")";
}

namespace detail {

inline CheckResult relations_check(const Comparison& c, const HypertoricPresentation& H) {
  CheckResult r{"relations", true, ""};
  const int m = static_cast<int>(c.arr.size());
  RatMatrix F = vector_linear_forms(c.arr.beta());
  const std::size_t base = rank(F);
  for (std::size_t k = 0; k < c.L.group.free_rank(); ++k) {
    MFElement img;
    RatMatrix row(1, m);
    for (int i = 0; i < m; ++i) {
      Rational a = c.L.beta.free_column(i)[k] - c.L.beta.free_column(i + m)[k];
      row(0, i) = a;
      for (const auto& [key, b] : ray_image(c.arr.beta(), i, a)) accumulate(img, key, b);
    }
    if (rank(F.vconcat(row)) != base || !is_zero(H.normal_form(img)))
      return {"relations", false, "linear relation " + std::to_string(k) + " maps outside the hypertoric relations"};
  }
  const SimplicialFan& fan = *c.L.fan;
  auto nonfaces = minimal_nonfaces_over(2 * m, {}, [&](const Cone& s) { return fan.is_face(s); });
  for (const auto& S : nonfaces) {
    MFElement prod{{MFKey{IntVec(c.arr.group().dim(), Integer(0)), {}}, 1}};
    for (int j : S) prod = mf_multiply(c.arr.beta(), prod, ray_image(c.arr.beta(), j % m, j < m ? 1 : -1));
    if (!prod.empty()) return {"relations", false, "non-face " + to_string(S) + " maps outside the matroid ideal"};
  }
  r.detail = std::to_string(c.L.group.free_rank()) + " linear relations, " + std::to_string(nonfaces.size()) +
             " minimal non-faces";
  return r;
}

inline CheckResult products_check(const Comparison& c, const ChowPresentation& P, const HypertoricPresentation& H) {
  std::vector<DeformedElement> gens;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < c.sf.num_rays(); ++j) {
    gens.push_back(monomial(c.sf, c.sf.ray(j)));
    names.push_back("y^b" + std::to_string(j));
  }
  for (const auto& p : c.bijection.pairs()) {
    gens.push_back(monomial(c.sf, p.lawrence.v));
    names.push_back("y^" + ChowPresentation::group_string(p.lawrence.v));
  }
  const LatticeMap& beta = c.arr.beta();
  std::vector<MFElement> images;
  for (const auto& g : gens) images.push_back(phi(c, g));
  for (std::size_t a = 0; a < gens.size(); ++a)
    for (std::size_t b = a; b < gens.size(); ++b) {
      SparseVec lhs = H.normal_form_sparse(phi(c, deformed_product(c.sf, gens[a], gens[b])));
      SparseVec rhs = H.normal_form_sparse(mf_multiply(beta, images[a], images[b]));
      if (lhs != rhs)
        return {"products", false,
                names[a] + " * " + names[b] + ": " + vec_string(H.ring.dense(lhs)) + " != " + vec_string(H.ring.dense(rhs))};
    }
  // phi on the Lawrence basis: sector and degree preserving, invertible blockwise, compatible with the rays
  const std::size_t n = P.ring.size();
  if (H.ring.size() != n) return {"products", false, "basis sizes differ"};
  using Block = std::pair<std::size_t, Rational>;
  std::map<Block, std::vector<std::size_t>> lblocks, hblocks;
  for (std::size_t k = 0; k < n; ++k) hblocks[{H.ring.basis()[k].sector, H.ring.basis()[k].degree}].push_back(k);
  std::vector<SparseVec> image(n);
  for (std::size_t i = 0; i < n; ++i) {
    const BasisEntry& e = P.ring.basis()[i];
    const std::size_t target = H.sector_of(c.bijection.inverse(P.box[e.sector].v));
    image[i] = H.normal_form_sparse(phi(c, monomial(c.sf, P.lattice_point(i))));
    for (const auto& [k, a] : image[i])
      if (H.ring.basis()[k].sector != target || H.ring.basis()[k].degree != e.degree)
        return {"products", false, "basis element " + P.label(i) + " leaves its sector or degree"};
    lblocks[{target, e.degree}].push_back(i);
  }
  for (const auto& [key, cols] : lblocks) {
    const auto& rows = hblocks[key];
    if (rows.size() != cols.size()) return {"products", false, "block sizes differ in degree " + to_string(key.second)};
    RatMatrix M(rows.size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t r = 0; r < rows.size(); ++r) {
        auto it = image[cols[j]].find(rows[r]);
        if (it != image[cols[j]].end()) M(r, j) = it->second;
      }
    if (rank(M) != cols.size()) return {"products", false, "phi is singular on the Lawrence basis"};
  }
  for (std::size_t r = 0; r < c.sf.num_rays(); ++r)
    for (std::size_t i = 0; i < n; ++i) {
      SparseVec prod = P.normal_form_sparse(deformed_product(c.sf, gens[r], monomial(c.sf, P.lattice_point(i))));
      SparseVec lhs;
      for (const auto& [k, a] : prod) add_scaled(lhs, image[k], a);
      if (lhs != H.normal_form_sparse(mf_multiply(beta, images[r], H.lift(image[i]))))
        return {"products", false, "product " + names[r] + " * " + P.label(i) + " is not preserved"};
    }
  return {"products", true,
          std::to_string(gens.size() * (gens.size() + 1) / 2) + " generator pairs, " + std::to_string(lblocks.size()) +
              " basis blocks, " + std::to_string(c.sf.num_rays() * n) + " ray products"};
}

}  // namespace detail

inline IsoReport check_isomorphism(const StackyArrangement& arr, int degree_cap = 64) {
  IsoReport rep;
  auto pending = [&](const std::string& why) {
    for (const char* name : {"relations", "products"}) rep.checks.push_back({name, false, why});
  };
  LawrenceData L = lawrence_fan(arr);
  ExtendedStackyFan sf = lawrence_stacky_fan(L);
  ChowPresentation P = build_presentation(sf, degree_cap);
  HypertoricPresentation H = hypertoric_presentation(arr, degree_cap);
  rep.lawrence_dims = P.ring.dims();
  rep.hypertoric_dims = H.ring.dims();
  bool same = rep.lawrence_dims == rep.hypertoric_dims;
  rep.checks.push_back({"dimensions", same,
                        "Lawrence " + dims_string(rep.lawrence_dims) + ", hypertoric " + dims_string(rep.hypertoric_dims)});
  Comparison c{arr, L, sf, {}};
  try {
    c.bijection = box_bijection(arr, L, sf);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::BijectionFailed) throw;
    pending("no box bijection");
    rep.checks.push_back({"box_ages", false, e.what()});
    return rep;
  }
  rep.checks.push_back(detail::relations_check(c, H));
  rep.checks.push_back(detail::products_check(c, P, H));
  rep.box_size = c.bijection.size();
  for (const auto& p : c.bijection.pairs()) rep.ages.push_back(p.lawrence.age);
  std::sort(rep.ages.begin(), rep.ages.end());
  std::string ages;
  for (const auto& a : rep.ages) ages += (ages.empty() ? "" : ",") + to_string(a);
  rep.checks.push_back({"box_ages", true, "|Box| = " + std::to_string(rep.box_size) + ", ages {" + ages + "}"});
  return rep;
}

inline IsoReport verify_isomorphism(const StackyArrangement& arr, int degree_cap = 64) {
  IsoReport rep = check_isomorphism(arr, degree_cap);
  if (const CheckResult* f = rep.first_failure())
    throw Error(ErrorCode::VerificationFailed, f->name + ": " + f->detail);
  return rep;
}

// Cones of the Lawrence fan over the lifts of sigma, one choice of lift for each vector in the span of sigma.
inline std::vector<Cone> lifted_cones(const StackyArrangement& arr, const LawrenceData& L, const Cone& sigma) {
  const int m = static_cast<int>(arr.size());
  Cone base = lawrence_lifts(sigma, m), spanned;
  for (int j = 0; j < m; ++j)
    if (!std::binary_search(sigma.begin(), sigma.end(), j) && !is_independent(arr.beta(), cone_union(sigma, {j})))
      spanned.push_back(j);
  std::vector<Cone> out;
  for (std::size_t mask = 0; mask < (std::size_t(1) << spanned.size()); ++mask) {
    Cone c = base;
    for (std::size_t t = 0; t < spanned.size(); ++t) c.push_back(mask >> t & 1 ? spanned[t] + m : spanned[t]);
    std::sort(c.begin(), c.end());
    if (L.fan->is_face(c)) out.push_back(c);
  }
  return out;
}

struct CoherenceReport {
  Cone sigma;
  Cone sigma_theta;
  bool fans_match = false;
  std::string detail;
  IsoReport iso;

  bool passed() const { return fans_match && iso.passed(); }
};

inline CoherenceReport quotient_coherence(const StackyArrangement& arr, const Cone& sigma, int degree_cap = 64) {
  CoherenceReport rep;
  rep.sigma = sigma;
  LawrenceData L = lawrence_fan(arr);
  auto lifts = lifted_cones(arr, L, sigma);
  QuotientArrangement qa = quotient_arrangement(arr, sigma);
  rep.iso = check_isomorphism(qa.arr, degree_cap);
  if (lifts.size() != 1) {
    rep.detail = std::to_string(lifts.size()) + " lifted cones over " + to_string(sigma);
    return rep;
  }
  rep.sigma_theta = lifts[0];
  const int m = static_cast<int>(arr.size());
  const int l = static_cast<int>(qa.link.size());
  FanQuotient fq = quotient_fan(*L.fan, rep.sigma_theta);
  LawrenceData LQ = lawrence_fan(qa.arr);
  auto fail = [&](const std::string& why) {
    rep.detail = why;
    return rep;
  };
  if (fq.fan.dim() != LQ.fan->dim()) return fail("quotient dimensions differ");
  if (fq.fan.num_rays() != static_cast<std::size_t>(2 * l)) return fail("quotient ray counts differ");
  std::map<int, int> position;
  for (std::size_t j = 0; j < fq.ray_ids.size(); ++j) position[fq.ray_ids[j]] = static_cast<int>(j);
  std::vector<int> relabel(2 * l);
  for (int k = 0; k < 2 * l; ++k) {
    int orig = k < l ? qa.link[k] : qa.link[k - l] + m;
    auto it = position.find(orig);
    if (it == position.end()) return fail("Lawrence ray " + std::to_string(orig) + " is not in the quotient");
    relabel[k] = it->second;
  }
  std::vector<Cone> cones;
  for (const auto& c : LQ.fan->max_cones()) {
    Cone r;
    for (int k : c) r.push_back(relabel[k]);
    std::sort(r.begin(), r.end());
    cones.push_back(r);
  }
  std::sort(cones.begin(), cones.end());
  if (cones != fq.fan.max_cones()) return fail("max cones differ after relabeling");
  // a unimodular change of basis carrying each quotient ray to its partner
  const std::size_t d = fq.fan.dim();
  if (d > 0) {
    const Cone& top = LQ.fan->max_cones().front();
    if (top.size() != d) return fail("quotient Lawrence fan is not full dimensional");
    RatMatrix X(d, d), Y(d, d);
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t i = 0; i < d; ++i) {
        X(i, j) = Rational(fq.fan.rays()[relabel[top[j]]][i]);
        Y(i, j) = Rational(LQ.fan->rays()[top[j]][i]);
      }
    Rref r = rref(X.hconcat(RatMatrix::identity(d)));
    RatMatrix A = Y * r.m.select_cols(d, 2 * d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j)
        if (!is_integral(A(i, j))) return fail("ray correspondence is not integral");
    if (abs(determinant(A)) != 1) return fail("ray correspondence is not unimodular");
    for (int k = 0; k < 2 * l; ++k)
      if (A * to_rational(fq.fan.rays()[relabel[k]]) != to_rational(LQ.fan->rays()[k]))
        return fail("ray " + std::to_string(k) + " is not carried to its partner");
  }
  QuotientStackyFan qs = quotient_stacky_fan(lawrence_stacky_fan(L), rep.sigma_theta);
  if (!(qs.quotient.group == LQ.group)) return fail("quotient groups differ: " + qs.quotient.group.str() + " vs " + LQ.group.str());
  rep.fans_match = true;
  rep.detail = "sigma_theta " + to_string(rep.sigma_theta) + ", " + std::to_string(cones.size()) + " max cones";
  return rep;
}

}  // namespace orbichow
