#include "arrangements.hpp"

#include "orbichow/chow.hpp"
#include "orbichow/lawrence.hpp"

#include <gtest/gtest.h>

using namespace orbichow;
using namespace fixtures;

TEST(Arrangement, Validation) {
  EXPECT_THROW(StackyArrangement(LatticeMap(AbelianGroup(1, {2}), int_matrix({{1, 0}, {0, 1}})), iv({0, 0})), Error);
  EXPECT_THROW(StackyArrangement(LatticeMap(AbelianGroup::free(1), int_matrix({{1, 2}})), iv({1, 1})), Error);
  EXPECT_THROW(StackyArrangement(LatticeMap(AbelianGroup::free(1), int_matrix({{1, 2}})), iv({1}), iv({0, 0})), Error);
  EXPECT_NO_THROW(StackyArrangement(LatticeMap(AbelianGroup::free(1), int_matrix({{1, 2}})), iv({1}), iv({0, 1})));
}

TEST(Generic, Examples) {
  auto bases = column_bases(pair12());
  ASSERT_EQ(bases.size(), 2u);
  EXPECT_EQ(bases[0].lambda, RatVec{Rational(1, 2)});
  EXPECT_EQ(bases[1].lambda, RatVec{Rational(-1)});
  EXPECT_TRUE(check_generic(pair12()).generic);
  auto bad = check_generic(pair12(0));
  EXPECT_FALSE(bad.generic);
  EXPECT_EQ(bad.basis, Cone{0});
  StackyArrangement unimodular(LatticeMap(AbelianGroup::free(2), IntMatrix::identity(2)), IntVec{});
  EXPECT_TRUE(check_generic(unimodular).generic);
  EXPECT_THROW(check_generic(StackyArrangement(LatticeMap(AbelianGroup::free(2), int_matrix({{1, 2}, {0, 0}})), iv({1}))),
               Error);
}

TEST(Hyperplanes, Examples) {
  auto h = hyperplanes(pair12());
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h[0].normal, RatVec{Rational(1)});
  EXPECT_EQ(h[0].offset, 0);
  EXPECT_EQ(h[1].normal, RatVec{Rational(2)});
  EXPECT_EQ(h[1].offset, 1);
  for (const auto& x : hyperplanes(pair12(0))) EXPECT_EQ(x.offset, 0);
  StackyArrangement one(LatticeMap(AbelianGroup::free(1), int_matrix({{1}})), IntVec{});
  auto o = hyperplanes(one);
  ASSERT_EQ(o.size(), 1u);
  EXPECT_EQ(o[0].offset, 0);
  // theta in DG = Z + Z/2 not hit by the dual map
  StackyArrangement tors(LatticeMap(AbelianGroup::free(1), int_matrix({{2, 2}})), iv({0, 0}));
  EXPECT_EQ(tors.dual().dg, AbelianGroup(1, {2}));
}

TEST(Hyperplanes, TranslationCovariance) {
  for (const auto& arr : random_arrangements(30, 11, false)) {
    IntVec psi = lifting(arr);
    const std::size_t m = arr.size(), d = arr.dim();
    // every other lifting differs by the values of one integral functional on the b_i
    for (const auto& k : nullspace(to_rational(arr.dual().beta_dual.free_matrix()))) {
      IntVec step = primitive(k);
      IntVec other = add(psi, step);
      if (!arr.dual().dg.equal(arr.dual().beta_dual(other), arr.dual().dg.neg(arr.theta()))) continue;
      RatMatrix Bt = to_rational(arr.beta().free_matrix()).transpose();
      auto u = solve(Bt, to_rational(step));
      ASSERT_TRUE(u.has_value());
      ASSERT_EQ(u->size(), d);
      StackyArrangement shifted(arr.beta(), arr.theta(), other);
      auto h0 = hyperplanes(arr), h1 = hyperplanes(shifted);
      for (std::size_t i = 0; i < m; ++i) {
        Rational pairing = 0;
        for (std::size_t j = 0; j < d; ++j) pairing += h0[i].normal[j] * (*u)[j];
        ASSERT_EQ(Rational(h1[i].offset - h0[i].offset), pairing);
      }
    }
  }
}

TEST(Lift, Examples) {
  LawrenceData L = lawrence_lift(pair12());
  EXPECT_EQ(L.group, AbelianGroup::free(3));
  EXPECT_EQ(oracle::invariant_factors(int_matrix({{2}, {-1}, {-2}, {1}})), std::vector<Integer>{1});
  StackyArrangement uni(LatticeMap(AbelianGroup::free(2), IntMatrix::identity(2)), IntVec{});
  LawrenceData U = lawrence_lift(uni);
  EXPECT_EQ(U.group, AbelianGroup::free(4));
  EXPECT_EQ(abs(determinant(U.beta.matrix())), 1);
  EXPECT_EQ(lawrence_lift(StackyArrangement(LatticeMap(AbelianGroup::free(1), int_matrix({{1, 1}})), iv({1}))).group,
            AbelianGroup::free(3));
}

TEST(Lift, GaleDualOfLiftIsDoubledDual) {
  auto all = random_arrangements(40, 3, true);
  all.push_back(pair12());
  for (const auto& arr : all) {
    LawrenceData L = lawrence_lift(arr);
    const std::size_t m = arr.size();
    // kappa(b_i) = b_L,i - b'_L,i
    for (std::size_t i = 0; i < m; ++i)
      ASSERT_TRUE(L.group.equal(L.kappa(arr.beta().column(i)), L.group.sub(L.beta.column(i), L.beta.column(m + i))));
    // N_L agrees with the Gale dual of (a, -a) and dualizes back to DG(beta)
    IntMatrix A = arr.dual().beta_dual.matrix();
    IntMatrix AA(A.rows(), 2 * m);
    for (std::size_t i = 0; i < A.rows(); ++i)
      for (std::size_t j = 0; j < m; ++j) {
        AA(i, j) = A(i, j);
        AA(i, m + j) = -A(i, j);
      }
    GaleDual direct = gale_dual(LatticeMap(arr.dual().dg, AA));
    ASSERT_EQ(direct.dg, L.group) << arr.beta().matrix().str();
    ASSERT_EQ(gale_dual(L.beta).dg, arr.dual().dg);
    ASSERT_EQ(rank(to_rational(L.beta.free_matrix() * AA.select_rows(0, arr.dual().dg.free_rank()).transpose())), 0u);
  }
}

TEST(Fan, Examples) {
  LawrenceData L = lawrence_fan(pair12());
  ASSERT_TRUE(L.fan);
  EXPECT_EQ(L.fan->max_cones(), (std::vector<Cone>{{0, 1, 2}, {1, 2, 3}}));
  EXPECT_EQ(L.table[0].max_cone, (Cone{1, 2, 3}));
  EXPECT_EQ(L.table[1].max_cone, (Cone{0, 1, 2}));
  auto L11 = lawrence_fan(StackyArrangement(LatticeMap(AbelianGroup::free(1), int_matrix({{1, 1}})), iv({1})));
  EXPECT_EQ(L11.fan->max_cones(), (std::vector<Cone>{{0, 1, 2}, {1, 2, 3}}));
  StackyArrangement uni(LatticeMap(AbelianGroup::free(2), IntMatrix::identity(2)), IntVec{});
  EXPECT_EQ(lawrence_fan(uni).fan->max_cones(), (std::vector<Cone>{{0, 1, 2, 3}}));
  try {
    lawrence_fan(pair12(0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotGeneric);
  }
}

TEST(Fan, StackyFanAndPresentation) {
  auto sf = lawrence_stacky_fan(pair12());
  EXPECT_EQ(sf.num_rays(), 4u);
  EXPECT_EQ(sf.dim(), 3u);
  auto box = box_of_fan(sf);
  ASSERT_EQ(box.size(), 2u);
  EXPECT_EQ(box[0].age + box[1].age, 1);
  auto p = build_presentation(sf);
  EXPECT_EQ(p.ring.dims(), (std::map<Rational, std::size_t>{{0, 1}, {1, 2}}));
  auto s11 = lawrence_stacky_fan(StackyArrangement(LatticeMap(AbelianGroup::free(1), int_matrix({{1, 1}})), iv({1})));
  EXPECT_EQ(box_of_fan(s11).size(), 1u);
  EXPECT_EQ(build_presentation(s11).ring.dims(), (std::map<Rational, std::size_t>{{0, 1}, {1, 1}}));
}

TEST(Fan, ConeCountIsDualMatroidBases) {
  for (const auto& arr : random_arrangements(60, 5, true)) {
    LawrenceData L = lawrence_fan(arr);
    // bases of the dual matroid are complements of bases of the configuration
    std::size_t bases = 0;
    IntMatrix B = arr.beta().free_matrix();
    oracle::subsets(static_cast<int>(arr.size()), static_cast<int>(arr.dim()), [&](const std::vector<int>& s) {
      if (oracle::det(B.select_columns(s)) != 0) ++bases;
    });
    ASSERT_EQ(L.fan->max_cones().size(), bases);
    ASSERT_EQ(L.table.size(), bases);
    for (const auto& c : L.fan->max_cones()) ASSERT_EQ(c.size(), arr.size() + arr.dim());
    ASSERT_TRUE(is_semiprojective(lawrence_stacky_fan(L)));
  }
}

TEST(Quotient, Examples) {
  auto same = quotient_arrangement(pair12(), {});
  EXPECT_EQ(same.arr.beta().matrix(), pair12().beta().matrix());
  EXPECT_EQ(same.arr.theta(), pair12().theta());
  auto q = quotient_arrangement(pair12(), {1});
  EXPECT_EQ(q.arr.group(), AbelianGroup(0, {2}));
  EXPECT_EQ(q.arr.size(), 0u);
  EXPECT_EQ(q.arr.dual().dg, AbelianGroup(0, {2}));
  EXPECT_EQ(q.arr.theta(), iv({1}));
  auto r = quotient_arrangement(pair12(), {0});
  EXPECT_EQ(r.arr.group(), AbelianGroup(0, {}));
  EXPECT_THROW(quotient_arrangement(pair12(), {0, 1}), Error);
  StackyArrangement uni(LatticeMap(AbelianGroup::free(2), IntMatrix::identity(2)), IntVec{});
  auto u = quotient_arrangement(uni, {0});
  EXPECT_EQ(u.arr.size(), 1u);
  EXPECT_EQ(u.link, Cone{1});
  EXPECT_EQ(u.arr.group(), AbelianGroup::free(1));
}

TEST(Quotient, ResultIsValidArrangement) {
  for (const auto& arr : random_arrangements(40, 9, true))
    for (int i = 0; i < static_cast<int>(arr.size()); ++i) {
      auto q = quotient_arrangement(arr, {i});
      ASSERT_EQ(q.arr.size(), q.link.size());
      ASSERT_TRUE(check_generic(q.arr).generic);
    }
}
