#include <gtest/gtest.h>

#include <random>

#include "kmv/lattice.hpp"
#include "support.hpp"

using namespace kmv;
using kmv::testing::num;
using kmv::testing::rel_diff;

namespace {

constexpr Bits kBits = 192;

auto constant(long v) {
  return [v](std::span<const long>) { return HValue(kBits, v); };
}

// Determinant of [w_i^j] by Gaussian elimination with partial pivoting.
HValue vandermonde_det(const std::vector<HValue>& w) {
  const size_t n = w.size();
  std::vector<std::vector<HValue>> a(n);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) a[i].push_back(pow(w[i], static_cast<long>(j)));
  }
  HValue det(kBits, 1);
  for (size_t c = 0; c < n; ++c) {
    size_t piv = c;
    for (size_t r = c + 1; r < n; ++r) {
      if (a[r][c].abs_double() > a[piv][c].abs_double()) piv = r;
    }
    if (piv != c) {
      std::swap(a[piv], a[c]);
      det = -det;
    }
    det *= a[c][c];
    for (size_t r = c + 1; r < n; ++r) {
      HValue f = a[r][c] / a[c][c];
      for (size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return det;
}

}  // namespace

TEST(Vandermonde, Examples) {
  QBase q(num("0.5", kBits));
  std::vector<HValue> z{num("1", kBits), num("2", kBits)};
  std::vector<long> y{1, 0};
  EXPECT_LT(rel_diff(vandermonde_ratio(z, y, q), num("1.5", kBits)), 1e-50);
  std::vector<long> zero{0, 0};
  EXPECT_EQ(vandermonde_ratio(z, zero, q), HValue(kBits, 1));
  std::vector<HValue> one{num("0.7", kBits)};
  std::vector<long> y1{5};
  EXPECT_EQ(vandermonde_ratio(one, y1, q), HValue(kBits, 1));
}

TEST(Vandermonde, DegenerateNodes) {
  QBase q(num("0.5", kBits));
  std::vector<HValue> z{num("1", kBits), num("1", kBits)};
  std::vector<long> y{1, 0};
  try {
    vandermonde_ratio(z, y, q);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::degenerate_nodes);
  }
  EXPECT_THROW(vandermonde_ratio_classical(z, y), Error);
}

TEST(Vandermonde, MatchesDeterminantRatio) {
  std::mt19937_64 rng(7);
  QBase q(num("0.31", "0.42", kBits));
  std::uniform_int_distribution<long> idx(-6, 6);
  for (size_t n = 2; n <= 4; ++n) {
    for (int rep = 0; rep < 10; ++rep) {
      std::vector<HValue> z, w;
      std::vector<long> y;
      for (size_t i = 0; i < n; ++i) {
        z.push_back(kmv::testing::random_complex(rng, kBits, 0.3, 2.0));
        y.push_back(idx(rng));
        w.push_back(z.back() * q.pow(y.back()));
      }
      HValue ref = vandermonde_det(w) / vandermonde_det(z);
      EXPECT_LT(rel_diff(vandermonde_ratio(z, y, q), ref), 1e-45);
      // permuting (z_i, y_i) pairs together leaves the ratio unchanged
      std::reverse(z.begin(), z.end());
      std::reverse(y.begin(), y.end());
      EXPECT_LT(rel_diff(vandermonde_ratio(z, y, q), ref), 1e-45);
    }
  }
}

TEST(Vandermonde, ClassicalAdditive) {
  std::vector<HValue> z{num("0.25", kBits), num("1.5", kBits), num("-2", kBits)};
  std::vector<long> y{2, -1, 0};
  // (0.25+2-0.5)(0.25+2+2)(0.5+2) / ((0.25-1.5)(0.25+2)(1.5+2))
  HValue ref = num("1.75", kBits) * num("4.25", kBits) * num("2.5", kBits) /
               (num("-1.25", kBits) * num("2.25", kBits) * num("3.5", kBits));
  EXPECT_LT(rel_diff(vandermonde_ratio_classical(z, y), ref), 1e-50);
}

TEST(SumBox, Cardinality) {
  std::vector<long> m{2, 3};
  auto r = sum_box(constant(1), m, kBits);
  EXPECT_EQ(r.value.re().to_double(), 12.0);
  EXPECT_TRUE(r.diag.converged);
  EXPECT_TRUE(r.diag.terminating);
  EXPECT_EQ(r.diag.largest_shell_tail, 0.0);
  std::vector<long> m1{2};
  auto r1 = sum_box([](std::span<const long> x) { return HValue(kBits, x[0]); }, m1, kBits);
  EXPECT_EQ(r1.value.re().to_double(), 3.0);
  auto r0 = sum_box(constant(7), std::span<const long>(), kBits);
  EXPECT_EQ(r0.value.re().to_double(), 7.0);
  std::vector<long> m3{1, 0, 4};
  EXPECT_EQ(sum_box(constant(3), m3, kBits).value.re().to_double(), 30.0);
}

TEST(SumBox, LexicographicOrder) {
  std::vector<long> m{1, 2};
  std::vector<MultiIndex> seen;
  sum_box(
      [&](std::span<const long> x) {
        seen.emplace_back(x.begin(), x.end());
        return HValue(kBits, 1);
      },
      m, kBits);
  std::vector<MultiIndex> expect{{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {1, 2}};
  EXPECT_EQ(seen, expect);
}

TEST(SumBoxHyperplane, Examples) {
  std::vector<long> m{1, 1};
  EXPECT_EQ(sum_box_hyperplane(constant(1), m, 1, kBits).value.re().to_double(), 2.0);
  EXPECT_TRUE(sum_box_hyperplane(constant(1), m, 3, kBits).value.is_zero());
  EXPECT_TRUE(sum_box_hyperplane(constant(1), m, -1, kBits).value.is_zero());
  std::vector<long> m3{2, 3, 1};
  // compositions of 3 into parts bounded by (2,3,1): count directly
  long count = 0;
  for (int a = 0; a <= 2; ++a)
    for (int b = 0; b <= 3; ++b)
      for (int c = 0; c <= 1; ++c) count += (a + b + c == 3);
  EXPECT_EQ(sum_box_hyperplane(constant(1), m3, 3, kBits).value.re().to_double(), static_cast<double>(count));
}

TEST(SumSimplex, Count) {
  // points of {y >= 0, |y| <= 4} in dimension 3: C(7,3)
  EXPECT_EQ(sum_simplex(constant(1), 3, 4, kBits).value.re().to_double(), 35.0);
}

TEST(SumHyperplane, Indicator) {
  TruncationPolicy pol;
  pol.radius = 5;
  pol.early_stop = false;
  auto ind = [](std::span<const long> y) {
    for (long v : y) {
      if (std::labs(v) > 1) return HValue(kBits);
    }
    return HValue(kBits, 1);
  };
  auto r = sum_hyperplane_bilateral(ind, 2, 0, pol, kBits);
  EXPECT_EQ(r.value.re().to_double(), 3.0);
  EXPECT_TRUE(r.diag.converged);
  EXPECT_EQ(r.diag.terms_evaluated, 11);
}

TEST(SumHyperplane, OneDimensionPinsIndex) {
  TruncationPolicy pol;
  pol.radius = 10;
  auto r = sum_hyperplane_bilateral([](std::span<const long> y) { return HValue(kBits, 100 + y[0]); }, 1, 4, pol,
                                    kBits);
  EXPECT_EQ(r.value.re().to_double(), 104.0);
  EXPECT_EQ(r.diag.nonzero_terms, 1);
}

TEST(SumHyperplane, BoundedIsExact) {
  TruncationPolicy pol;
  pol.radius = 3;
  IndexBounds b = IndexBounds::unbounded(3);
  for (auto& l : b.lo) l = 0;
  auto r = sum_hyperplane_bilateral(constant(1), 3, 4, pol, kBits, b);
  EXPECT_EQ(r.value.re().to_double(), 12.0);  // C(6,2) minus the three points with a 4
  EXPECT_FALSE(r.diag.terminating);
  pol.radius = 10;
  r = sum_hyperplane_bilateral(constant(1), 3, 4, pol, kBits, b);
  EXPECT_EQ(r.value.re().to_double(), 15.0);
  EXPECT_TRUE(r.diag.terminating);
}

TEST(SumOrthant, Geometric) {
  TruncationPolicy pol;
  pol.radius = 300;
  pol.term_tol = 1e-60;
  auto half = num("0.5", kBits);
  auto r = sum_orthant([&](std::span<const long> y) { return pow(half, y[0]); }, 1, pol, kBits);
  EXPECT_LT(rel_diff(r.value, HValue(kBits, 2)), 1e-55);
  EXPECT_TRUE(r.diag.converged);
  EXPECT_LT(r.diag.shells, 300);
  auto z = sum_orthant(constant(0), 2, pol, kBits);
  EXPECT_TRUE(z.value.is_zero());
  EXPECT_EQ(z.diag.nonzero_terms, 0);
}

TEST(SumOrthant, TotalBoundTerminates) {
  TruncationPolicy pol;
  pol.radius = 50;
  IndexBounds b = IndexBounds::unbounded(2);
  b.total_hi = 3;
  auto r = sum_orthant(constant(1), 2, pol, kBits, b);
  EXPECT_EQ(r.value.re().to_double(), 10.0);
  EXPECT_TRUE(r.diag.terminating);
}

TEST(SumLattice, ShellOrderMatchesBox) {
  // sum over Z^2 of 3^-|y1| 5^-|y2| against a lexicographic box sum
  TruncationPolicy pol;
  pol.radius = 40;
  pol.early_stop = false;
  auto third = num("1", kBits) / num("3", kBits), fifth = num("0.2", kBits);
  auto term = [&](std::span<const long> y) { return pow(third, std::labs(y[0])) * pow(fifth, std::labs(y[1])); };
  auto shells = sum_lattice_bilateral(term, 2, pol, kBits);
  std::vector<long> lo{-40, -40}, hi{40, 40};
  HValue box(kBits);
  detail::for_each_in_box(lo, hi, [&](std::span<const long> y) { box += term(y); });
  EXPECT_LT(rel_diff(shells.value, box), 100 * kmv::testing::eps_of(kBits));
  EXPECT_LT(rel_diff(shells.value, num("2", kBits) * num("1.5", kBits)), 1e-15);
}

TEST(SumLattice, DivergenceDetected) {
  TruncationPolicy pol;
  pol.radius = 6;
  auto two = num("2", kBits);
  auto term = [&](std::span<const long> y) { return pow(two, std::labs(y[0])); };
  try {
    sum_lattice_bilateral(term, 1, pol, kBits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::diverged);
  }
}

TEST(SumLattice, BudgetExceeded) {
  TruncationPolicy pol;
  pol.radius = 6;
  pol.max_terms = 20;
  try {
    sum_lattice_bilateral(constant(1), 2, pol, kBits);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::budget_exceeded);
  }
}
