#include "arrangements.hpp"

#include "orbichow/hypertoric.hpp"

#include <gtest/gtest.h>

using namespace orbichow;
using namespace fixtures;

namespace {

LatticeMap config(std::initializer_list<std::initializer_list<long>> rows, const AbelianGroup& N) {
  return LatticeMap(N, int_matrix(rows));
}

LatticeMap line12() { return config({{1, 2}}, AbelianGroup::free(1)); }

bool independent_by_minors(const LatticeMap& beta, const Cone& s) {
  IntMatrix B = beta.free_matrix().select_columns(s);
  bool found = s.empty();
  oracle::subsets(static_cast<int>(B.rows()), static_cast<int>(s.size()), [&](const std::vector<int>& rows) {
    IntMatrix sq(s.size(), s.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < s.size(); ++j) sq(i, j) = B(rows[i], j);
    if (oracle::det(sq) != 0) found = true;
  });
  return found;
}

// Brute-force box: lattice points near each parallelepiped with coordinates strictly inside (0,1).
std::set<std::pair<IntVec, Cone>> box_oracle(const LatticeMap& beta) {
  const AbelianGroup& N = beta.target();
  const std::size_t d = N.free_rank();
  std::set<std::pair<IntVec, Cone>> out;
  for (const auto& s : multifan(beta).independent) {
    std::vector<Integer> lo(d, Integer(0)), hi(d, Integer(0));
    for (std::size_t i = 0; i < d; ++i)
      for (int j : s) {
        const Integer x = beta.matrix()(i, j);
        (x < 0 ? lo[i] : hi[i]) += x;
      }
    IntVec p(lo);
    for (;;) {
      auto a = span_coordinates(beta, p, s);
      bool inside = a && std::all_of(a->begin(), a->end(), [](const Rational& x) { return x > 0 && x < 1; });
      if (inside)
        for (const auto& t : N.torsion_elements()) {
          IntVec v = t;
          for (std::size_t i = 0; i < d; ++i) v[i] = p[i];
          out.insert({v, s});
        }
      std::size_t i = 0;
      while (i < d && p[i] == hi[i]) p[i] = lo[i], ++i;
      if (i == d) break;
      ++p[i];
    }
  }
  return out;
}

std::vector<MFKey> small_monomials(const LatticeMap& beta, int bound) {
  std::vector<MFKey> out;
  for (const auto& s : multifan(beta).independent)
    oracle::box_points(beta.target().dim(), bound, [&](const IntVec& raw) {
      IntVec c = beta.target().normalize(raw);
      if (c != raw) return;
      auto a = span_coordinates(beta, c, s);
      if (a && std::all_of(a->begin(), a->end(), [](const Rational& x) { return x > 0; })) out.push_back({c, s});
    });
  return out;
}

std::vector<LatticeMap> configurations() {
  std::vector<LatticeMap> out{line12(), config({{1, 1}}, AbelianGroup::free(1)), config({{1, 3}}, AbelianGroup::free(1)),
                              config({{1, 0, 1}, {0, 1, 1}}, AbelianGroup::free(2)),
                              config({{1, 2}, {1, 0}}, AbelianGroup(1, {2})),
                              config({{1, 0, 1, 2}, {0, 1, 1, 1}}, AbelianGroup::free(2))};
  for (const auto& arr : random_arrangements(8, 21, true, 4, 2, 2)) out.push_back(arr.beta());
  return out;
}

RatVec unit(std::size_t n, std::size_t i) {
  RatVec e(n, Rational(0));
  e[i] = 1;
  return e;
}

}  // namespace

TEST(MultiFan, Examples) {
  EXPECT_EQ(multifan(line12()).independent, (std::vector<Cone>{{}, {0}, {1}}));
  EXPECT_EQ(multifan(LatticeMap(AbelianGroup::free(2), IntMatrix::identity(2))).independent,
            (std::vector<Cone>{{}, {0}, {1}, {0, 1}}));
  EXPECT_EQ(multifan(config({{1, 0}, {0, 0}}, AbelianGroup::free(2))).independent, (std::vector<Cone>{{}, {0}}));
}

TEST(MultiFan, MatroidComplexByMinors) {
  for (const auto& beta : configurations()) {
    auto mf = multifan(beta);
    const int m = static_cast<int>(beta.source_rank());
    std::size_t expected = 0;
    for (int k = 0; k <= m; ++k)
      oracle::subsets(m, k, [&](const std::vector<int>& s) {
        bool ind = independent_by_minors(beta, s);
        expected += ind;
        ASSERT_EQ(mf.contains(s), ind);
        if (ind)
          for (std::size_t j = 0; j < s.size(); ++j) {
            Cone smaller = s;
            smaller.erase(smaller.begin() + j);
            ASSERT_TRUE(mf.contains(smaller));
          }
      });
    ASSERT_EQ(mf.independent.size(), expected);
  }
}

TEST(MFBox, Examples) {
  auto b = mf_box(line12());
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].v, iv({0}));
  EXPECT_TRUE(b[0].sigma.empty());
  EXPECT_EQ(b[1].v, iv({1}));
  EXPECT_EQ(b[1].sigma, Cone{1});
  EXPECT_EQ(b[1].frac, RatVec{Rational(1, 2)});
  EXPECT_EQ(mf_box(LatticeMap(AbelianGroup::free(2), IntMatrix::identity(2))).size(), 1u);
  auto t = mf_box(config({{1, 3}}, AbelianGroup::free(1)));
  ASSERT_EQ(t.size(), 3u);
  EXPECT_EQ(t[1].frac, RatVec{Rational(1, 3)});
  EXPECT_EQ(t[2].frac, RatVec{Rational(2, 3)});
}

TEST(MFBox, MatchesBruteForce) {
  for (const auto& beta : configurations()) {
    std::set<std::pair<IntVec, Cone>> got;
    for (const auto& b : mf_box(beta)) got.insert({b.v, b.sigma});
    ASSERT_EQ(got, box_oracle(beta)) << beta.matrix().str();
  }
}

TEST(Ceiling, Examples) {
  EXPECT_EQ(ceiling(line12(), {iv({1}), {1}}), iv({2}));
  EXPECT_EQ(ceiling(line12(), {iv({1}), {0}}), iv({1}));
  EXPECT_EQ(ceiling(line12(), {iv({2}), {1}}), iv({2}));
  EXPECT_EQ(ceiling(line12(), {iv({3}), {1}}), iv({4}));
  EXPECT_THROW(ceiling(line12(), {iv({-1}), {1}}), Error);
}

TEST(MFProduct, Examples) {
  auto beta = line12();
  auto p = mf_product(beta, {iv({1}), {1}}, {iv({2}), {1}});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->sign, 1);
  EXPECT_EQ(p->key, (MFKey{iv({3}), {1}}));
  auto q = mf_product(beta, {iv({1}), {1}}, {iv({1}), {1}});
  EXPECT_EQ(q->sign, -1);
  EXPECT_EQ(q->key, (MFKey{iv({4}), {1}}));
  auto unit_key = MFKey{iv({0}), {}};
  EXPECT_EQ(mf_product(beta, unit_key, {iv({3}), {1}})->key, (MFKey{iv({3}), {1}}));
  EXPECT_FALSE(mf_product(beta, {iv({1}), {0}}, {iv({1}), {1}}));
  EXPECT_EQ(mf_degree(beta, {iv({1}), {1}}), 1);
  EXPECT_EQ(mf_degree(beta, {iv({3}), {1}}), 2);
  EXPECT_EQ(mf_degree(beta, {iv({4}), {1}}), 2);
}

TEST(MFProduct, RingLawsAndGrading) {
  for (const auto& beta : configurations()) {
    auto mons = small_monomials(beta, beta.target().dim() == 1 ? 4 : 2);
    std::mt19937 rng(3);
    const std::size_t samples = std::min<std::size_t>(mons.size() * mons.size() * mons.size(), 3000);
    for (std::size_t t = 0; t < samples; ++t) {
      const MFKey& a = mons[rng() % mons.size()];
      const MFKey& b = mons[rng() % mons.size()];
      const MFKey& c = mons[rng() % mons.size()];
      MFElement x{{a, 1}}, y{{b, 1}}, z{{c, 1}};
      ASSERT_EQ(mf_multiply(beta, x, y), mf_multiply(beta, y, x));
      ASSERT_EQ(mf_multiply(beta, mf_multiply(beta, x, y), z), mf_multiply(beta, x, mf_multiply(beta, y, z)));
      if (auto p = mf_product(beta, a, b)) { ASSERT_EQ(mf_degree(beta, p->key), mf_degree(beta, a) + mf_degree(beta, b)); }
    }
  }
}

TEST(MFProduct, ModuleDecompositionIsExact) {
  for (const auto& beta : configurations()) {
    auto box = mf_box(beta);
    for (const auto& k : small_monomials(beta, 2)) {
      MFDecomposition d = mf_decompose(beta, k);
      ASSERT_NE(std::find(box.begin(), box.end(), d.box), box.end());
      IntVec back = d.box.v;
      Cone s = d.box.sigma;
      for (const auto& [i, m] : d.exponents) {
        ASSERT_GT(m, 0);
        back = add(back, scale(beta.column(i), m));
        s = cone_union(s, {i});
      }
      ASSERT_EQ(beta.target().normalize(back), k.first);
      ASSERT_EQ(s, k.second);
      // the same element as a product of its box part and ray monomials, with no sign
      MFElement prod{{{d.box.v, d.box.sigma}, 1}};
      for (const auto& [i, m] : d.exponents)
        for (Integer r = 0; r < m; ++r) prod = mf_multiply(beta, prod, {{{beta.column(i), {i}}, 1}});
      ASSERT_EQ(prod, (MFElement{{k, 1}}));
    }
  }
}

TEST(MFProduct, MatroidIdeal) {
  for (const auto& beta : configurations()) {
    const int m = static_cast<int>(beta.source_rank());
    for (int k = 1; k <= m; ++k)
      oracle::subsets(m, k, [&](const std::vector<int>& s) {
        MFElement prod{{{IntVec(beta.target().dim(), Integer(0)), {}}, 1}};
        for (int i : s) prod = mf_multiply(beta, prod, {{{beta.column(i), {i}}, 1}});
        ASSERT_EQ(prod.empty(), !independent_by_minors(beta, s));
      });
  }
}

TEST(MFBoxProduct, Examples) {
  auto beta = line12();
  auto box = mf_box(beta);
  auto t = mf_box_product(beta, box, box[1], box[1]);
  EXPECT_EQ(t.kind, 2);
  EXPECT_EQ(t.sign, -1);
  EXPECT_EQ(t.exponents, (std::map<int, int>{{1, 2}}));
  EXPECT_EQ(evaluate(beta, t), (MFElement{{{iv({4}), {1}}, -1}}));
  auto u = mf_box_product(beta, box, box[0], box[1]);
  EXPECT_EQ(evaluate(beta, u), (MFElement{{{iv({1}), {1}}, 1}}));
  auto two = config({{1, 0, 1}, {0, 2, 1}}, AbelianGroup::free(2));
  auto b2 = mf_box(two);
  for (const auto& a : b2)
    for (const auto& b : b2)
      if (!is_independent(two, cone_union(a.sigma, b.sigma))) { EXPECT_EQ(mf_box_product(two, b2, a, b).kind, 3); }
}

TEST(MFBoxProduct, AgreesWithProductOnAllPairs) {
  for (const auto& beta : configurations()) {
    auto box = mf_box(beta);
    for (const auto& a : box)
      for (const auto& b : box) {
        MFElement direct = mf_multiply(beta, {{{a.v, a.sigma}, 1}}, {{{b.v, b.sigma}, 1}});
        ASSERT_EQ(evaluate(beta, mf_box_product(beta, box, a, b)), direct) << beta.matrix().str();
      }
  }
}

TEST(Hypertoric, Presentations) {
  using D = std::map<Rational, std::size_t>;
  EXPECT_EQ(hypertoric_presentation(line12()).ring.dims(), (D{{0, 1}, {1, 2}}));
  EXPECT_EQ(hypertoric_presentation(config({{1, 1}}, AbelianGroup::free(1))).ring.dims(), (D{{0, 1}, {1, 1}}));
  EXPECT_EQ(hypertoric_presentation(LatticeMap(AbelianGroup::free(2), IntMatrix::identity(2))).ring.dims(), (D{{0, 1}}));
  EXPECT_EQ(hypertoric_presentation(pair12()).ring.dims(), (D{{0, 1}, {1, 2}}));
}

TEST(Hypertoric, SectorsMatchNaiveHilbertOracle) {
  for (const auto& beta : configurations()) {
    auto p = hypertoric_presentation(beta);
    std::map<Rational, std::size_t> expected;
    for (const auto& b : p.box)
      for (int k = 0; k < 6; ++k) {
        auto dead = [&](const std::vector<int>& s) { return !independent_by_minors(beta, cone_union(s, b.sigma)); };
        std::size_t h = oracle::hilbert_value(beta.source_rank(), vector_linear_forms(beta), dead, k);
        if (h) expected[b.shift() + k] += h;
      }
    ASSERT_EQ(p.ring.dims(), expected);
  }
}

TEST(Hypertoric, NormalFormAndProducts) {
  for (const auto& beta : configurations()) {
    auto p = hypertoric_presentation(beta);
    const std::size_t n = p.ring.size();
    for (std::size_t k = 0; k < beta.target().free_rank(); ++k) {
      MFElement rel;
      for (std::size_t i = 0; i < beta.source_rank(); ++i)
        accumulate(rel, MFKey{beta.column(i), {static_cast<int>(i)}}, beta.free_column(i)[k]);
      ASSERT_TRUE(is_zero(p.normal_form(rel)));
    }
    for (std::size_t i = 0; i < n; ++i) {
      ASSERT_EQ(p.normal_form({{p.key(i), 1}}), unit(n, i));
      ASSERT_EQ(mf_degree(beta, p.key(i)), p.ring.basis()[i].degree);
      for (std::size_t j = 0; j < n; ++j) {
        RatVec prod = p.multiply(unit(n, i), unit(n, j));
        for (std::size_t k = 0; k < n; ++k)
          if (prod[k] != 0) { ASSERT_EQ(p.ring.basis()[k].degree, p.ring.basis()[i].degree + p.ring.basis()[j].degree); }
      }
    }
  }
}
