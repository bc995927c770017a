#pragma once

// Small hand-built stacky fans shared by several test files.

#include "orbichow/stacky.hpp"

#include <random>

namespace fixtures {

using namespace orbichow;

inline IntMatrix int_matrix(std::initializer_list<std::initializer_list<long>> rows) {
  IntMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (long x : r) m(i, j++) = x;
    ++i;
  }
  return m;
}

inline ExtendedStackyFan p12() {
  return ExtendedStackyFan(LatticeMap(AbelianGroup::free(1), int_matrix({{1, -2}})), 2, {{0}, {1}});
}

inline ExtendedStackyFan p1() {
  return ExtendedStackyFan(LatticeMap(AbelianGroup::free(1), int_matrix({{1, -1}})), 2, {{0}, {1}});
}

inline ExtendedStackyFan p13() {
  return ExtendedStackyFan(LatticeMap(AbelianGroup::free(1), int_matrix({{1, -3}})), 2, {{0}, {1}});
}

inline ExtendedStackyFan p123() {
  return ExtendedStackyFan(LatticeMap(AbelianGroup::free(2), int_matrix({{-2, 1, 0}, {-3, 0, 1}})), 3,
                           {{0, 1}, {1, 2}, {0, 2}});
}

// P^1 with a Z/2 gerbe twist on one ray.
inline ExtendedStackyFan p1_gerbe() {
  return ExtendedStackyFan(LatticeMap(AbelianGroup(1, {2}), int_matrix({{1, -1}, {1, 0}})), 2, {{0}, {1}});
}

// The fan of P^a x P^b with rays scaled by the given multipliers.
inline ExtendedStackyFan scaled_product(int a, int b, const std::vector<int>& mult, const AbelianGroup& N,
                                        const std::vector<std::vector<int>>& torsion_parts = {}) {
  const int d = a + b;
  IntMatrix B(N.dim(), d + 2);
  int col = 0;
  auto block = [&](int off, int k) {
    for (int i = 0; i < k; ++i) B(off + i, col++) = 1;
    for (int i = 0; i < k; ++i) B(off + i, col) = -1;
    ++col;
  };
  block(0, a);
  block(a, b);
  for (int j = 0; j < d + 2; ++j)
    for (int i = 0; i < d; ++i) B(i, j) *= mult[j];
  for (std::size_t t = 0; t < torsion_parts.size(); ++t)
    for (int j = 0; j < d + 2; ++j) B(d + t, j) = torsion_parts[t][j];
  std::vector<Cone> cones;
  for (int s1 = 0; s1 <= a; ++s1)
    for (int s2 = 0; s2 <= b; ++s2) {
      Cone c;
      for (int i = 0; i <= a; ++i)
        if (i != s1) c.push_back(i);
      for (int i = 0; i <= b; ++i)
        if (i != s2) c.push_back(a + 1 + i);
      cones.push_back(c);
    }
  return ExtendedStackyFan(LatticeMap(N, B), d + 2, cones);
}

inline std::vector<ExtendedStackyFan> zoo() {
  std::vector<ExtendedStackyFan> out{p12(), p1(), p13(), p123(), p1_gerbe()};
  out.push_back(scaled_product(1, 1, {1, 2, 1, 3}, AbelianGroup::free(2)));
  out.push_back(scaled_product(1, 1, {2, 2, 1, 1}, AbelianGroup(2, {2}), {{1, 0, 1, 0}}));
  out.push_back(ExtendedStackyFan(LatticeMap(AbelianGroup::free(2), int_matrix({{1, 0, -1}, {0, 1, -2}})), 3,
                                  {{0, 1}, {1, 2}, {0, 2}}));
  out.push_back(scaled_product(1, 2, {1, 1, 2, 1, 1}, AbelianGroup::free(3)));
  return out;
}

}  // namespace fixtures
