#include "fixtures.hpp"
#include "oracles.hpp"

#include "orbichow/chow.hpp"

#include <gtest/gtest.h>

using namespace orbichow;
using namespace fixtures;

namespace {

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

std::map<Rational, std::size_t> dims(std::initializer_list<std::pair<Rational, std::size_t>> xs) {
  return {xs.begin(), xs.end()};
}

// P(w): N = Z^{d+1} / (w), rays the images of the standard basis.
ExtendedStackyFan weighted_projective(const std::vector<long>& w) {
  const std::size_t d = w.size() - 1;
  IntMatrix rel(d + 1, 1);
  for (std::size_t i = 0; i <= d; ++i) rel(i, 0) = w[i];
  Quotient q = present(rel);
  std::vector<Cone> cones;
  for (std::size_t skip = 0; skip <= d; ++skip) {
    Cone c;
    for (std::size_t i = 0; i <= d; ++i)
      if (i != skip) c.push_back(static_cast<int>(i));
    cones.push_back(c);
  }
  return ExtendedStackyFan(LatticeMap(q.group, q.proj), d + 1, cones);
}

RatVec unit(std::size_t n, std::size_t i) {
  RatVec e(n, Rational(0));
  e[i] = 1;
  return e;
}

}  // namespace

TEST(Deformed, ProductExamples) {
  auto sf = p12();
  auto y = [&](long c) { return monomial(sf, iv({c})); };
  EXPECT_TRUE(deformed_product(sf, y(1), y(-2)).empty());
  EXPECT_EQ(deformed_product(sf, y(0), y(-3)), y(-3));
  EXPECT_EQ(deformed_product(sf, y(-1), y(-1)), y(-2));
  EXPECT_EQ(deformed_product(sf, y(2), y(3)), y(5));
  auto g = p1_gerbe();
  EXPECT_EQ(deformed_product(g, monomial(g, iv({0, 1})), monomial(g, iv({0, 1}))), monomial(g, iv({0, 0})));
  ExtendedStackyFan line(LatticeMap(AbelianGroup::free(1), int_matrix({{1}})), 1, {{0}});
  EXPECT_THROW(monomial(line, iv({-1})), Error);
}

TEST(Deformed, RingLaws) {
  for (const auto& sf : zoo()) {
    std::vector<IntVec> pts;
    oracle::box_points(sf.group().dim(), 2, [&](const IntVec& raw) {
      IntVec c = sf.group().normalize(raw);
      if (sf.fan().support_contains(sf.bar(c))) pts.push_back(c);
    });
    std::mt19937 rng(7);
    auto random_element = [&]() {
      DeformedElement x;
      for (int t = 0; t < 3; ++t) accumulate(x, pts[rng() % pts.size()], Rational(int(rng() % 7) - 3, 1 + rng() % 3));
      return x;
    };
    for (int trial = 0; trial < 20; ++trial) {
      auto a = random_element(), b = random_element(), c = random_element();
      ASSERT_EQ(deformed_product(sf, a, b), deformed_product(sf, b, a));
      ASSERT_EQ(deformed_product(sf, deformed_product(sf, a, b), c), deformed_product(sf, a, deformed_product(sf, b, c)));
    }
  }
}

TEST(Degree, Examples) {
  EXPECT_EQ(degree(p12(), iv({-1})), Rational(1, 2));
  EXPECT_EQ(degree(p12(), iv({1})), 1);
  EXPECT_EQ(degree(p12(), iv({-2})), 1);
  EXPECT_EQ(degree(p12(), iv({-3})), Rational(3, 2));
  EXPECT_EQ(degree(p1_gerbe(), iv({0, 1})), 0);
}

TEST(Presentation, WeightedProjectiveLine) {
  auto p = build_presentation(p12());
  EXPECT_EQ(p.ring.dims(), dims({{0, 1}, {Rational(1, 2), 1}, {1, 1}}));
  EXPECT_EQ(p.ring.top_degree(), 1);
  EXPECT_EQ(build_presentation(p1()).ring.dims(), dims({{0, 1}, {1, 1}}));
  EXPECT_EQ(build_presentation(p13()).ring.dims(), dims({{0, 1}, {Rational(1, 3), 1}, {Rational(2, 3), 1}, {1, 1}}));
  EXPECT_EQ(build_presentation(p1_gerbe()).ring.dims(), dims({{0, 2}, {1, 2}}));
}

TEST(Presentation, HandReductionOracle) {
  // Q[x1,x2]/(x1 x2, x1 - 2 x2): degree 0 -> 1, degree 1 -> 1, degree 2 -> 0.
  RatMatrix L(1, 2);
  L(0, 0) = 1;
  L(0, 1) = -2;
  auto dead = [](const std::vector<int>& s) { return s.size() == 2; };
  EXPECT_EQ(oracle::hilbert_value(2, L, dead, 0), 1u);
  EXPECT_EQ(oracle::hilbert_value(2, L, dead, 1), 1u);
  EXPECT_EQ(oracle::hilbert_value(2, L, dead, 2), 0u);
  auto u = untwisted_presentation(p12());
  EXPECT_EQ(u.dims(), dims({{0, 1}, {1, 1}}));
}

TEST(Presentation, SectorsMatchNaiveHilbertOracle) {
  for (const auto& sf : zoo()) {
    auto p = build_presentation(sf);
    std::map<Rational, std::size_t> expected;
    for (const auto& b : p.box)
      for (int k = 0; k < 6; ++k) {
        auto dead = [&](const std::vector<int>& s) { return !sf.fan().is_face(cone_union(s, b.cone)); };
        std::size_t h = oracle::hilbert_value(sf.num_rays(), ray_linear_forms(sf), dead, k);
        if (h) expected[b.age + k] += h;
      }
    ASSERT_EQ(p.ring.dims(), expected);
  }
}

TEST(Presentation, WeightedProjectiveTotalDimension) {
  // total orbifold Chow dimension of P(w) is the sum of the weights
  for (const auto& w : std::vector<std::vector<long>>{{1, 2}, {1, 3}, {1, 2, 3}, {1, 1, 2}, {2, 3}, {1, 2, 2}, {1, 3, 4}}) {
    auto p = build_presentation(weighted_projective(w));
    long total = 0;
    for (long x : w) total += x;
    EXPECT_EQ(static_cast<long>(p.ring.size()), total);
  }
}

TEST(Presentation, NormalFormKillsRelationsAndFixesBasis) {
  for (const auto& sf : zoo()) {
    auto p = build_presentation(sf);
    for (std::size_t k = 0; k < sf.dim(); ++k) {
      DeformedElement rel;
      for (std::size_t i = 0; i < sf.num_rays(); ++i) accumulate(rel, sf.ray(i), Rational(sf.fan().rays()[i][k]));
      ASSERT_TRUE(is_zero(p.normal_form(rel)));
    }
    for (std::size_t i = 0; i < p.ring.size(); ++i) {
      ASSERT_EQ(p.normal_form(monomial(sf, p.lattice_point(i))), unit(p.ring.size(), i));
      ASSERT_EQ(degree(sf, p.lattice_point(i)), p.ring.basis()[i].degree);
    }
  }
  auto p = build_presentation(p12());
  DeformedElement r;
  accumulate(r, iv({1}), 1);
  accumulate(r, iv({-2}), -2);
  EXPECT_TRUE(is_zero(p.normal_form(r)));
}

TEST(Presentation, ProductsRespectGrading) {
  for (const auto& sf : zoo()) {
    auto p = build_presentation(sf);
    const auto& basis = p.ring.basis();
    for (std::size_t i = 0; i < basis.size(); ++i)
      for (std::size_t j = 0; j < basis.size(); ++j) {
        RatVec prod = p.multiply(unit(basis.size(), i), unit(basis.size(), j));
        for (std::size_t k = 0; k < basis.size(); ++k)
          if (prod[k] != 0) { ASSERT_EQ(basis[k].degree, basis[i].degree + basis[j].degree); }
      }
  }
}

TEST(Presentation, Errors) {
  auto gens = std::vector<std::vector<long>>{{4, 0, 0}, {0, 4, 0}, {0, 0, 4}, {2, 1, 1}, {1, 2, 1}, {1, 1, 2}};
  IntMatrix B(3, 6);
  for (std::size_t j = 0; j < 6; ++j)
    for (std::size_t i = 0; i < 3; ++i) B(i, j) = gens[j][i];
  ExtendedStackyFan twisted(LatticeMap(AbelianGroup::free(3), B), 6,
                            {{0, 1, 4}, {0, 3, 4}, {1, 2, 5}, {1, 4, 5}, {0, 2, 3}, {2, 3, 5}, {3, 4, 5}});
  try {
    build_presentation(twisted);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSemiprojective);
  }
  try {
    build_presentation(p1(), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFinite);
  }
  EXPECT_NO_THROW(build_presentation(p1(), 2));
}

TEST(Presentation, ModuleDecompositionMatches) {
  EXPECT_EQ(sector_decomposition_dims(p12()), dims({{0, 1}, {Rational(1, 2), 1}, {1, 1}}));
  for (const auto& sf : zoo()) ASSERT_EQ(sector_decomposition_dims(sf), build_presentation(sf).ring.dims());
}

TEST(Presentation, UntwistedSliceIsCoarseChowRing) {
  for (const auto& sf : zoo()) {
    auto p = build_presentation(sf);
    std::size_t zero = p.sector_of(IntVec(sf.group().dim(), Integer(0)));
    std::map<Rational, std::size_t> slice;
    for (const auto& b : p.ring.basis())
      if (b.sector == zero) ++slice[b.degree];
    ASSERT_EQ(slice, untwisted_presentation(sf).dims());
  }
}

TEST(Obstruction, Examples) {
  auto sf = p12();
  auto box = box_of_fan(sf);  // {-1, 0}
  EXPECT_EQ(obstruction_exponents(sf, box[1], box[1], box[1]), Cone{});
  EXPECT_EQ(obstruction_exponents(sf, box[0], box[0], box[1]), Cone{});
  EXPECT_THROW(obstruction_exponents(sf, box[0], box[0], box[0]), Error);
  auto t = p13();
  auto b3 = box_of_fan(t);  // {-2, -1, 0}
  EXPECT_EQ(b3[0].v, iv({-2}));
  EXPECT_EQ(obstruction_exponents(t, b3[0], b3[0], b3[0]), Cone{1});
  auto w = p123();
  auto bw = box_of_fan(w);
  for (const auto& a : bw)
    for (const auto& b : bw)
      if (!w.fan().is_face(cone_union(a.cone, b.cone))) { EXPECT_FALSE(obstruction_exponents(w, a, b, bw[0]).has_value()); }
}

TEST(Cup, Examples) {
  auto p = build_presentation(p12());
  auto box = p.box;
  EXPECT_EQ(cup_product_via_sectors(p, box[1], box[0]), p.normal_form(monomial(p.sf, iv({-1}))));
  EXPECT_EQ(cup_product_via_sectors(p, box[0], box[0]), p.normal_form(monomial(p.sf, iv({-2}))));
  EXPECT_FALSE(is_zero(cup_product_via_sectors(p, box[0], box[0])));
}

TEST(Cup, AgreesWithDeformedProduct) {
  std::vector<ExtendedStackyFan> all = zoo();
  for (const auto& w : std::vector<std::vector<long>>{{1, 2, 3}, {1, 3, 4}, {2, 3}}) all.push_back(weighted_projective(w));
  for (const auto& sf : all) {
    auto p = build_presentation(sf);
    for (const auto& a : p.box)
      for (const auto& b : p.box) {
        RatVec direct = p.normal_form(deformed_product(sf, monomial(sf, a.v), monomial(sf, b.v)));
        ASSERT_EQ(cup_product_via_sectors(p, a, b), direct);
      }
  }
}
