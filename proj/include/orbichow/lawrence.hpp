#pragma once

#include "orbichow/stacky.hpp"

#include <algorithm>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace orbichow {

inline void for_each_subset(int n, int k, const std::function<void(const Cone&)>& fn) {
  Cone cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      fn(cur);
      return;
    }
    for (int i = start; i <= n - (k - static_cast<int>(cur.size())); ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
}

class StackyArrangement {
 public:
  StackyArrangement() = default;
  StackyArrangement(LatticeMap beta, IntVec theta, std::optional<IntVec> psi = std::nullopt)
      : beta_(std::move(beta)), dual_(gale_dual(beta_)) {
    const AbelianGroup& N = beta_.target();
    for (std::size_t i = 0; i < beta_.source_rank(); ++i)
      if (N.is_torsion(beta_.column(i))) throw Error(ErrorCode::InvalidInput, "vector " + std::to_string(i) + " is torsion");
    if (theta.size() != dual_.dg.dim())
      throw Error(ErrorCode::InvalidInput, "theta has " + std::to_string(theta.size()) + " coordinates, DG(beta) needs " +
                                               std::to_string(dual_.dg.dim()));
    theta_ = dual_.dg.normalize(theta);
    if (psi) {
      if (psi->size() != beta_.source_rank()) throw Error(ErrorCode::InvalidInput, "psi has the wrong length");
      if (!dual_.dg.is_zero(dual_.dg.add(dual_.beta_dual(*psi), theta_)))
        throw Error(ErrorCode::InvalidInput, "psi is not a lifting of -theta");
      psi_ = psi;
    }
  }

  const LatticeMap& beta() const { return beta_; }
  const AbelianGroup& group() const { return beta_.target(); }
  const GaleDual& dual() const { return dual_; }
  const IntVec& theta() const { return theta_; }
  const std::optional<IntVec>& psi() const { return psi_; }
  std::size_t size() const { return beta_.source_rank(); }
  std::size_t dim() const { return group().free_rank(); }

  // Free part of the dual configuration, one column per vector.
  RatMatrix dual_free() const { return to_rational(dual_.beta_dual.free_matrix()); }

 private:
  LatticeMap beta_;
  GaleDual dual_;
  IntVec theta_;
  std::optional<IntVec> psi_;
};

struct ColumnBasis {
  Cone columns;
  RatVec lambda;
  Cone sigma;     // sigma(C, theta) in Lawrence ray indices
  Cone max_cone;  // its complement
};

inline std::vector<ColumnBasis> column_bases(const StackyArrangement& arr) {
  const int m = static_cast<int>(arr.size());
  RatMatrix A = arr.dual_free();
  const std::size_t r = A.rows();
  if (rank(A) != r || static_cast<int>(r) + static_cast<int>(arr.dim()) != m)
    throw Error(ErrorCode::InvalidInput, "dual configuration is rank deficient (vectors do not span)");
  RatVec th(r);
  for (std::size_t i = 0; i < r; ++i) th[i] = Rational(arr.theta()[i]);
  std::vector<ColumnBasis> out;
  for_each_subset(m, static_cast<int>(r), [&](const Cone& C) {
    RatMatrix sub = A.select_columns(C);
    if (rank(sub) != r) return;
    ColumnBasis b{C, *solve(sub, th), {}, {}};
    out.push_back(std::move(b));
  });
  return out;
}

struct GenericityReport {
  bool generic = true;
  Cone basis;
  int column = -1;
  RatVec lambda;
};

inline GenericityReport check_generic(const StackyArrangement& arr) {
  GenericityReport rep;
  for (const auto& b : column_bases(arr))
    for (std::size_t j = 0; j < b.lambda.size(); ++j)
      if (b.lambda[j] == 0) return {false, b.columns, b.columns[j], b.lambda};
  return rep;
}

struct Hyperplane {
  RatVec normal;
  Integer offset;
};

inline IntVec lifting(const StackyArrangement& arr) {
  if (arr.psi()) return *arr.psi();
  auto x = solve_integer(arr.dual().beta_dual, arr.dual().dg.neg(arr.theta()));
  if (!x) throw Error(ErrorCode::NoIntegralLift, "-theta is not in the image of the dual map");
  return *x;
}

inline std::vector<Hyperplane> hyperplanes(const StackyArrangement& arr) {
  IntVec psi = lifting(arr);
  std::vector<Hyperplane> out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back({arr.beta().free_column(i), psi[i]});
  return out;
}

struct LawrenceData {
  AbelianGroup group;          // N_L
  LatticeMap beta;             // columns b_L,1..m then b'_L,1..m
  GroupHom kappa;              // N -> N_L with kappa(b_i) = b_L,i - b'_L,i
  std::vector<ColumnBasis> table;
  std::optional<SimplicialFan> fan;

  std::size_t m() const { return beta.source_rank() / 2; }
};

// N_L = (N + Z^{2m}) / <(b_i, -e_i, e'_i)>.
inline LawrenceData lawrence_lift(const StackyArrangement& arr) {
  const AbelianGroup& N = arr.group();
  const std::size_t m = arr.size(), n = N.dim();
  IntMatrix rel(n + 2 * m, m + N.num_torsion());
  for (std::size_t i = 0; i < m; ++i) {
    IntVec b = arr.beta().column(i);
    for (std::size_t k = 0; k < n; ++k) rel(k, i) = b[k];
    rel(n + i, i) = -1;
    rel(n + m + i, i) = 1;
  }
  IntMatrix Q = N.relations();
  for (std::size_t j = 0; j < Q.cols(); ++j)
    for (std::size_t k = 0; k < n; ++k) rel(k, m + j) = Q(k, j);
  Quotient q = present(rel);
  std::vector<int> cols(2 * m), ncols(n);
  for (std::size_t i = 0; i < 2 * m; ++i) cols[i] = static_cast<int>(n + i);
  for (std::size_t k = 0; k < n; ++k) ncols[k] = static_cast<int>(k);
  LawrenceData L;
  L.group = q.group;
  L.beta = LatticeMap(q.group, q.proj.select_columns(cols));
  L.kappa = GroupHom(N, q.group, q.proj.select_columns(ncols));
  return L;
}

inline LawrenceData lawrence_fan(const StackyArrangement& arr) {
  GenericityReport g = check_generic(arr);
  if (!g.generic)
    throw Error(ErrorCode::NotGeneric, "theta lies on a hyperplane: lambda vanishes at column " +
                                           std::to_string(g.column) + " of basis " + to_string(g.basis));
  LawrenceData L = lawrence_lift(arr);
  const int m = static_cast<int>(arr.size());
  L.table = column_bases(arr);
  std::vector<Cone> cones;
  for (auto& b : L.table) {
    for (std::size_t j = 0; j < b.columns.size(); ++j) b.sigma.push_back(b.lambda[j] > 0 ? b.columns[j] : b.columns[j] + m);
    std::sort(b.sigma.begin(), b.sigma.end());
    for (int i = 0; i < 2 * m; ++i)
      if (!std::binary_search(b.sigma.begin(), b.sigma.end(), i)) b.max_cone.push_back(i);
    cones.push_back(b.max_cone);
  }
  std::sort(cones.begin(), cones.end());
  cones.erase(std::unique(cones.begin(), cones.end()), cones.end());
  std::vector<IntVec> rays;
  for (int i = 0; i < 2 * m; ++i) {
    IntVec r = L.group.free_part(L.beta.column(i));
    if (is_zero(r)) throw Error(ErrorCode::InvalidInput, "Lawrence ray " + std::to_string(i) + " is torsion");
    rays.push_back(r);
  }
  L.fan = SimplicialFan(L.group.free_rank(), rays, cones);
  return L;
}

inline ExtendedStackyFan lawrence_stacky_fan(const LawrenceData& L) {
  if (!L.fan) throw Error(ErrorCode::InvalidInput, "Lawrence data has no fan");
  return ExtendedStackyFan(L.beta, L.beta.source_rank(), L.fan->max_cones());
}

inline ExtendedStackyFan lawrence_stacky_fan(const StackyArrangement& arr) { return lawrence_stacky_fan(lawrence_fan(arr)); }

namespace detail {

// Left inverse of the free columns over s, restricted to a set of independent rows.
struct SpanSolver {
  bool independent = false;
  std::vector<std::size_t> rows;
  RatMatrix inv;
  RatMatrix cols;
};

inline const SpanSolver& span_solver(const LatticeMap& beta, const Cone& s) {
  struct Entry {
    std::size_t free_rank;
    IntMatrix matrix;
    std::map<Cone, SpanSolver> solvers;
  };
  thread_local std::list<Entry> cache;
  const std::size_t d = beta.target().free_rank();
  auto hit = std::find_if(cache.begin(), cache.end(),
                          [&](const Entry& e) { return e.free_rank == d && e.matrix == beta.matrix(); });
  if (hit == cache.end()) {
    if (cache.size() >= 32) cache.pop_back();
    cache.push_front({d, beta.matrix(), {}});
    hit = cache.begin();
  }
  auto [it, fresh] = hit->solvers.try_emplace(s);
  SpanSolver& sv = it->second;
  if (!fresh) return sv;
  const std::size_t k = s.size();
  sv.cols = RatMatrix(d, k);
  for (std::size_t j = 0; j < k; ++j) {
    RatVec c = beta.free_column(s[j]);
    for (std::size_t i = 0; i < d; ++i) sv.cols(i, j) = c[i];
  }
  Rref r = rref(sv.cols.transpose());
  sv.independent = r.pivots.size() == k;
  if (!sv.independent) return sv;
  sv.rows.assign(r.pivots.begin(), r.pivots.end());
  RatMatrix A(k, 2 * k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) A(i, j) = sv.cols(sv.rows[i], j);
    A(i, k + i) = 1;
  }
  Rref inv = rref(A);
  sv.inv = RatMatrix(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) sv.inv(i, j) = inv.m(i, k + j);
  return sv;
}

}  // namespace detail

inline bool is_independent(const LatticeMap& beta, const Cone& s) {
  if (s.empty()) return true;
  return detail::span_solver(beta, s).independent;
}

// Vectors i outside sigma with sigma + i independent.
inline Cone multifan_link(const LatticeMap& beta, const Cone& sigma) {
  Cone out;
  for (int i = 0; i < static_cast<int>(beta.source_rank()); ++i)
    if (!std::binary_search(sigma.begin(), sigma.end(), i) && is_independent(beta, cone_union(sigma, {i})))
      out.push_back(i);
  return out;
}

struct QuotientArrangement {
  StackyArrangement arr;
  Cone link;               // original index of each new vector
  GroupQuotient quotient;  // N -> N(sigma)
};

inline QuotientArrangement quotient_arrangement(const StackyArrangement& arr, const Cone& sigma) {
  const LatticeMap& beta = arr.beta();
  if (!is_independent(beta, sigma)) throw Error(ErrorCode::InvalidInput, to_string(sigma) + " is dependent");
  const AbelianGroup& N = arr.group();
  Cone link = multifan_link(beta, sigma);
  Cone both = cone_union(sigma, link);
  GroupQuotient q = quotient_by_columns(beta, sigma);
  std::vector<IntVec> tilde_cols, new_cols;
  for (int i : both) tilde_cols.push_back(beta.column(i));
  for (int i : link) new_cols.push_back(q.proj(beta.column(i)));
  LatticeMap tilde(N, tilde_cols), reduced(q.group, new_cols);
  GaleDual dtilde = gale_dual(tilde), dred = gale_dual(reduced);

  IntMatrix incl(arr.size(), both.size());
  for (std::size_t j = 0; j < both.size(); ++j) incl(both[j], j) = 1;
  GroupHom phi2 = dual_morphism(tilde, dtilde, beta, arr.dual(), incl, GroupHom(N, N, IntMatrix::identity(N.dim())));
  IntMatrix proj(link.size(), both.size());
  for (std::size_t j = 0; j < link.size(); ++j)
    proj(j, std::lower_bound(both.begin(), both.end(), link[j]) - both.begin()) = 1;
  GroupHom phi1 = dual_morphism(tilde, dtilde, reduced, dred, proj, q.proj);
  if (!(phi1.source() == phi1.target())) throw Error(ErrorCode::InvalidInput, "quotient dual map is not an isomorphism");
  auto th = preimage(phi1, phi2(arr.theta()));
  if (!th) throw Error(ErrorCode::InvalidInput, "quotient dual map is not surjective");
  return {StackyArrangement(reduced, *th), link, q};
}

}  // namespace orbichow
