#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace entanglemeter;

namespace {

// element read-off for a|GHZ⟩⟨GHZ| + b|W⟩⟨W| + (1-a-b)I/2ⁿ
CriterionTerms ghz_w_terms(int n, double a, double b) {
  const double p = std::pow(2.0, n);
  const double r = (1.0 - a - b) / p;
  CriterionTerms t;
  t.A = a / 2;
  t.B = 2 * n * std::sqrt((b / n + r) * r) + (p / 2 - n - 1) * (1.0 - a - b) / (p / 2);
  t.C = (n - 1) * b;
  t.D = n * (n - 1) * std::sqrt((a / 2 + r) * r);
  t.E = n * (b / n + r);
  return t;
}

double ghz_noise_keff1(int n, double t) {
  const double p = std::pow(2.0, n);
  return std::log2((p - 2) * (1 - t) / (p / 2 * t) + 2);
}

double ghz_noise_threshold(int n, int k) { return (std::pow(2.0, n) - 2) / (std::pow(2.0, n + k - 1) - 2); }

// first radius along direction (cos φ, sin φ) at which `flag` switches on, or -1
template <class F>
double onset_along(double phi, F&& flag) {
  const double ca = std::cos(phi), cb = std::sin(phi);
  const double smax = 1.0 / (ca + cb);
  auto at = [&](double s) { return flag(s * ca, s * cb); };
  if (!at(smax)) return -1.0;
  return bisect_switch(at, 0.0, smax, 1e-9);
}

}  // namespace

TEST(CriterionTerms, GhzNoiseReadOff) {
  const int n = 4;
  for (double t : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    const CriterionTerms c = criterion_terms(ghz_noise(n, t));
    EXPECT_NEAR(c.A, t / 2, 1e-14);
    EXPECT_NEAR(c.B, (16 - 2) * (1 - t) / 16, 1e-14);
  }
}

TEST(CriterionTerms, GhzWNoiseMatchesClosedForms) {
  Rng g(77);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    double a = u(g), b = u(g);
    if (a + b > 1.0) {
      a = 1.0 - a;
      b = 1.0 - b;
    }
    for (int n : {3, 4, 5}) {
      const CriterionTerms got = criterion_terms(ghz_w_noise(n, a, b));
      const CriterionTerms want = ghz_w_terms(n, a, b);
      EXPECT_NEAR(got.A, want.A, 1e-10);
      EXPECT_NEAR(got.B, want.B, 1e-10);
      EXPECT_NEAR(got.C, want.C, 1e-10);
      EXPECT_NEAR(got.D, want.D, 1e-10);
      EXPECT_NEAR(got.E, want.E, 1e-10);
    }
    // n = 4 closed forms for both separability degrees
    const auto deg = k_eff(ghz_w_noise(4, a, b));
    const double keff1 =
        std::log2(2 / a * (std::sqrt((1 - a + 3 * b) * (1 - a - b)) / 2 + 3 * (1 - a - b) / 8) + 2);
    const double keff2 = 4 - (12 * b - 3 * std::sqrt((1 + 7 * a - b) * (1 - a - b))) / (1 - a + 3 * b);
    EXPECT_NEAR(deg.k_eff1, keff1, 1e-10);
    EXPECT_NEAR(deg.k_eff2, keff2, 1e-10);
    EXPECT_EQ(w_criterion(ghz_w_noise(4, a, b), 4), keff2 < 4);
  }
}

TEST(CriterionTerms, PureWAndMaximallyMixed) {
  for (int n = 2; n <= 6; ++n) {
    const CriterionTerms w = criterion_terms(to_density(w_pure(n)));
    EXPECT_NEAR(w.C, n - 1, 1e-12);
    EXPECT_NEAR(w.D, 0.0, 1e-15);
    EXPECT_NEAR(w.E, 1.0, 1e-12);
    EXPECT_TRUE(w_criterion(to_density(w_pure(n)), n));

    const DensityMatrix mixed = ghz_noise(n, 0.0);
    const CriterionTerms m = criterion_terms(mixed);
    EXPECT_EQ(m.A, 0.0);
    EXPECT_EQ(m.C, 0.0);
    for (int k = 2; k <= n; ++k) {
      EXPECT_FALSE(ghz_criterion(mixed, k));
      EXPECT_FALSE(w_criterion(mixed, k));
      EXPECT_TRUE(ghz_criterion(to_density(ghz_pure(n)), k));
    }
    const auto deg = k_eff(mixed);
    EXPECT_TRUE(std::isinf(deg.k_eff1));
    EXPECT_FALSE(std::isinf(deg.k_eff2));  // E > 0 on the identity
    EXPECT_GT(deg.k_eff2, n - 1e-12);
    const auto v = separability_verdict(mixed, 2);
    EXPECT_FALSE(v.k_nonseparable());
    EXPECT_TRUE(v.k_eff1_uninformative);
  }
}

TEST(CriterionTerms, RejectsQuditsAndBadK) {
  Rng g(3);
  const DensityMatrix qutrit = to_density(oracle::random_pure(SiteDims({2, 3}), g));
  EXPECT_THROW(criterion_terms(qutrit), std::invalid_argument);
  EXPECT_THROW(ghz_criterion(ghz_noise(3, 0.5), 1), std::invalid_argument);
  EXPECT_THROW(w_criterion(ghz_noise(3, 0.5), 4), std::invalid_argument);
}

TEST(KEff, GhzNoiseClosedFormAndGenuineEntanglementAtOne) {
  for (int n : {3, 4, 5, 8}) {
    for (double t : {0.05, 0.3, 0.5, 0.77, 1.0}) {
      EXPECT_NEAR(k_eff(ghz_noise(n, t)).k_eff1, ghz_noise_keff1(n, t), 1e-12);
    }
  }
  EXPECT_NEAR(k_eff(ghz_noise(4, 1.0)).k_eff1, 1.0, 1e-14);
  EXPECT_TRUE(separability_verdict(ghz_noise(4, 1.0), 2).ghz_test_violated);
}

TEST(KEff, MonotoneInDecoherence) {
  for (int n : {3, 4, 11}) {
    double prev = 0.0;
    for (int i = 100; i >= 1; --i) {
      const double k1 = k_eff(ghz_noise(n, i / 100.0)).k_eff1;
      EXPECT_GT(k1, prev) << "n=" << n << " t=" << i / 100.0;
      prev = k1;
    }
  }
}

TEST(DetectionProperties, CriteriaAgreeWithKEffAndNestInK) {
  const std::vector<GridAxis> axes = {{"a", 0.0, 1.0, 0.025}, {"b", 0.0, 1.0, 0.025}};
  for (int n : {3, 4, 5}) {
    std::vector<int> ks;
    for (int k = 2; k <= n; ++k) ks.push_back(k);
    const auto rows = detection_scan(StateFamily::ghz_w_noise, n, ks, axes);
    ASSERT_FALSE(rows.empty());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ScanRow& r = rows[i];
      const SeparabilityVerdict& v = r.verdict;
      // the 1e-12 margin can separate the two sides only within rounding of the boundary
      if (r.terms.A > 0 && std::abs((std::pow(2.0, r.k) - 2) * r.terms.A - r.terms.B) > 1e-9) {
        EXPECT_EQ(v.ghz_test_violated, v.k_eff1 < r.k);
      }
      if (r.terms.E > 0 && std::abs(r.terms.C - r.terms.D - (n - r.k) * r.terms.E) > 1e-9) {
        EXPECT_EQ(v.w_test_violated, v.k_eff2 < r.k);
      }
      // rows of one grid point are consecutive with increasing k
      if (r.k > 2) {
        const SeparabilityVerdict& prev = rows[i - 1].verdict;
        if (prev.ghz_test_violated) {
          EXPECT_TRUE(v.ghz_test_violated);
        }
        if (prev.w_test_violated) {
          EXPECT_TRUE(v.w_test_violated);
        }
      }
    }
  }
}

TEST(DetectionProperties, GhzNoiseThresholds) {
  for (int n : {3, 4, 5}) {
    for (int k = 2; k <= n; ++k) {
      const double found = bisect_switch([&](double t) { return ghz_criterion(ghz_noise(n, t), k); }, 0.0, 1.0, 1e-6);
      EXPECT_NEAR(found, ghz_noise_threshold(n, k), 1e-5) << "n=" << n << " k=" << k;
    }
  }
  EXPECT_NEAR(ghz_noise_threshold(4, 2), 14.0 / 30, 1e-15);
  EXPECT_FALSE(ghz_criterion(ghz_noise(4, 14.0 / 30 - 1e-6), 2));
  EXPECT_TRUE(ghz_criterion(ghz_noise(4, 14.0 / 30 + 1e-6), 2));
}

TEST(DetectionProperties, GhzCriterionFirstForLargerGhzWeight) {
  // n = 4, k = 2: walk outward along rays of the (a, b) triangle
  auto ghz_flag = [](double a, double b) { return ghz_criterion(ghz_w_noise(4, a, std::min(b, 1.0 - a)), 2); };
  auto w_flag = [](double a, double b) { return w_criterion(ghz_w_noise(4, a, std::min(b, 1.0 - a)), 2); };
  for (int deg = 1; deg < 45; deg += 2) {
    const double phi = deg * std::numbers::pi / 180;
    const double g = onset_along(phi, ghz_flag);
    const double w = onset_along(phi, w_flag);
    ASSERT_GT(g, 0.0) << deg;
    if (w > 0.0) {
      EXPECT_LT(g, w) << deg;
    }
  }
  for (int deg = 61; deg < 90; deg += 2) {
    const double phi = deg * std::numbers::pi / 180;
    const double g = onset_along(phi, ghz_flag);
    const double w = onset_along(phi, w_flag);
    ASSERT_GT(w, 0.0) << deg;
    if (g > 0.0) {
      EXPECT_LT(w, g) << deg;
    }
  }
  // the two boundary lines cross at b/a ≈ 1.61, slightly on the a < b side
  const double cross = bisect_switch(
      [&](double phi) { return onset_along(phi, ghz_flag) > onset_along(phi, w_flag); }, std::numbers::pi / 4,
      61 * std::numbers::pi / 180, 1e-7);
  EXPECT_NEAR(cross * 180 / std::numbers::pi, 58.1629, 1e-3);
}

TEST(DetectionScan, RowOrderAndCounts) {
  const auto rows = detection_scan(StateFamily::ghz_noise, 4, {2, 4}, {{"t", 0.0, 1.0, 0.01}});
  ASSERT_EQ(rows.size(), 202u);
  EXPECT_EQ(rows[0].k, 2);
  EXPECT_EQ(rows[1].k, 4);
  EXPECT_EQ(rows[2].params[0], 0.01);
  EXPECT_EQ(rows.back().params[0], 1.0);

  const auto one = detection_scan(StateFamily::ghz_noise, 3, {2}, {{"t", 0.4, 0.4, 0.0}});
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].params[0], 0.4);

  // triangle domain: points with a + b > 1 are skipped; first axis varies slowest
  const auto tri = detection_scan(StateFamily::ghz_w_noise, 4, {2}, {{"a", 0.0, 1.0, 0.25}, {"b", 0.0, 1.0, 0.25}});
  EXPECT_EQ(tri.size(), 15u);
  EXPECT_EQ(tri[1].params, (std::vector<double>{0.0, 0.25}));
  EXPECT_EQ(tri[5].params, (std::vector<double>{0.25, 0.0}));

  const auto fixed = detection_scan(StateFamily::ghz_w_noise, 4, {4}, {{"a", 0.0, 0.5, 0.1}}, {{"b", 0.3}});
  EXPECT_EQ(fixed.size(), 6u);
  for (const auto& r : fixed) EXPECT_EQ(r.params[1], 0.3);

  EXPECT_THROW(detection_scan(StateFamily::ghz_noise, 4, {2}, {{"a", 0.0, 1.0, 0.1}}), std::invalid_argument);
  EXPECT_THROW(detection_scan(StateFamily::ghz_noise, 4, {5}, {{"t", 0.0, 1.0, 0.1}}), std::invalid_argument);
  EXPECT_THROW(detection_scan(StateFamily::ghz_noise, 4, {2}, {{"t", 0.0, 1.0, -0.1}}), std::invalid_argument);
  EXPECT_THROW(detection_scan(StateFamily::ghz_w_noise, 4, {2}, {{"a", 0.0, 1.0, 0.1}}), std::invalid_argument);
}
