#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace entanglemeter;

namespace {

const std::vector<double> kQs = {2.0, 2.5, 3.0, 5.0, 12.0};

double ghz3_closed(double q) { return 1.0 - std::pow(2.0, 1.0 - q); }
double w3_closed(double q) { return 1.0 - (std::pow(2.0 / 3, q) + std::pow(1.0 / 3, q)); }

}  // namespace

TEST(TracePower, ClampsAndCountsRank) {
  RealVector ev(4);
  ev << -1e-14, 0.0, 0.25, 0.75;
  EXPECT_NEAR(trace_power_of_spectrum(ev, 2.0), 0.625, 1e-15);
  EXPECT_EQ(trace_power_of_spectrum(ev, 0.0), 2.0);
  EXPECT_NEAR(trace_power_of_spectrum(ev, 0.5), std::sqrt(0.25) + std::sqrt(0.75), 1e-15);
  EXPECT_THROW(trace_power_of_spectrum(ev, -1.0), std::invalid_argument);
  EXPECT_NEAR(trace_power(w_noise(3, 0.0), 0.0), 8.0, 1e-12);
}

TEST(BipartiteConcurrence, BellAndProduct) {
  const PureState bell(SiteDims::qubits(2), oracle::bell());
  const Partition cut = Partition::parse("1|2");
  EXPECT_NEAR(q_concurrence(bell, cut, 2.0), 0.5, 1e-14);
  EXPECT_NEAR(q_concurrence(bell, cut, 3.0), 0.75, 1e-14);
  EXPECT_NEAR(alpha_concurrence(bell, cut, 0.5), std::sqrt(2.0) - 1.0, 1e-14);
  EXPECT_NEAR(alpha_concurrence(bell, cut, 0.0), 1.0, 1e-14);
  const PureState prod(SiteDims::qubits(2), oracle::kron(oracle::qubit(0.3, 1.0), oracle::qubit(2.0, -0.5)));
  EXPECT_NEAR(q_concurrence(prod, cut, 2.0), 0.0, 1e-14);
  EXPECT_NEAR(alpha_concurrence(prod, cut, 0.25), 0.0, 1e-14);
  EXPECT_THROW(q_concurrence(bell, cut, 1.5), std::invalid_argument);
  EXPECT_THROW(alpha_concurrence(bell, cut, 0.6), std::invalid_argument);
  EXPECT_THROW(q_concurrence(bell, Partition::parse("1,2"), 2.0), std::invalid_argument);
}

TEST(GmeClosedForms, GhzAndW) {
  for (double q : kQs) {
    EXPECT_NEAR(q_gme_pure(ghz_pure(3), q).value, ghz3_closed(q), 1e-10) << q;
    EXPECT_NEAR(q_gme_pure(w_pure(3), q).value, w3_closed(q), 1e-10) << q;
  }
}

TEST(KMe, MatchesBruteForceOracle) {
  Rng g(17);
  for (int trial = 0; trial < 6; ++trial) {
    const int n = 3 + trial % 2;
    const PureState psi = oracle::random_qubits(n, g);
    for (int k = 2; k <= n; ++k) {
      for (double q : {2.0, 3.5}) {
        EXPECT_NEAR(q_k_me_pure(psi, MeasureSpec::q_k(q, k)).value, oracle::q_k_me_brute(psi, q, k), 1e-12);
      }
      for (double a : {0.0, 0.2, 0.5}) {
        EXPECT_NEAR(alpha_k_me_pure(psi, MeasureSpec::alpha_k(a, k)).value, oracle::alpha_k_me_brute(psi, a, k), 1e-10);
      }
    }
  }
}

TEST(KMe, QuadraticCaseIsOneMinusAveragePurity) {
  // q = 2 and k = n: every block is a single site
  Rng g(4);
  const PureState psi = oracle::random_qubits(4, g);
  double purity_sum = 0.0;
  for (int s = 0; s < 4; ++s) purity_sum += oracle::trace_pow(oracle::reduced_by_loops(psi.amplitudes(), {2, 2, 2, 2}, {s}), 2.0);
  EXPECT_NEAR(q_k_me_pure(psi, MeasureSpec::q_k(2.0, 4)).value, 1.0 - purity_sum / 4, 1e-12);
}

TEST(KMe, ArgminAttainsValueAndFirstTieWins) {
  const auto r = q_k_me_pure(ghz_pure(4), MeasureSpec::q_k(2.0, 2));
  // every cut of GHZ has the same reduced spectrum; the first 2-partition wins
  EXPECT_EQ(r.argmin.to_string(), "1,2,3|4");
  EXPECT_NEAR(r.value, 0.5, 1e-12);

  Rng g(1);
  const PureState psi = oracle::random_qubits(4, g);
  const auto m = q_k_me_pure(psi, MeasureSpec::q_k(2.5, 3));
  double v = 0.0;
  for (int t = 0; t < 3; ++t) {
    v += 1.0 - oracle::trace_pow(oracle::reduced_by_loops(psi.amplitudes(), {2, 2, 2, 2}, m.argmin.block(t)), 2.5);
  }
  EXPECT_NEAR(v / 3, m.value, 1e-12);
}

TEST(KMe, GmeFormMatchesTwoBlockAverageOnPureStates) {
  Rng g(21);
  const PureState psi = oracle::random_qubits(3, g);
  const double gme = q_gme_pure(psi, 2.0).value;
  const double avg = q_k_me_pure(psi, MeasureSpec::q_k(2.0, 2)).value;
  // both blocks of a pure state share the nonzero spectrum
  EXPECT_NEAR(gme, avg, 1e-12);
  EXPECT_NEAR(alpha_gme_pure(psi, 0.3).value, alpha_k_me_pure(psi, MeasureSpec::alpha_k(0.3, 2)).value, 1e-12);
}

TEST(KMe, ValidatesParameters) {
  const PureState psi = ghz_pure(3);
  EXPECT_THROW(k_me_pure(psi, MeasureSpec::q_k(1.9, 2)), std::invalid_argument);
  EXPECT_THROW(k_me_pure(psi, MeasureSpec::alpha_k(-0.1, 2)), std::invalid_argument);
  EXPECT_THROW(k_me_pure(psi, MeasureSpec::alpha_k(0.51, 2)), std::invalid_argument);
  EXPECT_THROW(k_me_pure(psi, MeasureSpec::q_k(2.0, 1)), std::invalid_argument);
  EXPECT_THROW(k_me_pure(psi, MeasureSpec::q_k(2.0, 4)), std::invalid_argument);
  EXPECT_THROW(q_k_me_pure(psi, MeasureSpec::alpha_k(0.3, 2)), std::invalid_argument);
}

TEST(KMeProperties, LocalUnitaryInvariance) {
  Rng g(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 3 + trial % 2;
    const PureState psi = oracle::random_qubits(n, g);
    const PureState moved = apply_local_unitaries(psi, LocalUnitarySet::haar(psi.dims(), g));
    const int k = 2 + trial % (n - 1);
    for (const MeasureSpec& s : {MeasureSpec::q_k(2.0 + trial % 5, k), MeasureSpec::alpha_k(0.1 * (trial % 6), k)}) {
      EXPECT_NEAR(k_me_pure(psi, s).value, k_me_pure(moved, s).value, 1e-9);
    }
    EXPECT_NEAR(q_gme_pure(psi, 3.0).value, q_gme_pure(moved, 3.0).value, 1e-9);
  }
}

TEST(KMeProperties, ZeroOnKSeparableAndPositiveOnGhzW) {
  Rng g(5);
  for (int n = 2; n <= 6; ++n) {
    for (int k = 2; k <= n; ++k) {
      for (const Partition& p : k_partitions(n, k)) {
        const PureState psi = oracle::block_product(p.blocks(), n, g);
        EXPECT_NEAR(k_me_pure(psi, MeasureSpec::q_k(2.0, k)).value, 0.0, 1e-12) << p.to_string();
        EXPECT_NEAR(k_me_pure(psi, MeasureSpec::alpha_k(0.3, k)).value, 0.0, 1e-10) << p.to_string();
        break;  // first partition of each (n, k)
      }
      EXPECT_GT(k_me_pure(ghz_pure(n), MeasureSpec::q_k(2.0, k)).value, 0.1);
      EXPECT_GT(k_me_pure(w_pure(n), MeasureSpec::q_k(2.0, k)).value, 0.1);
      EXPECT_GT(k_me_pure(ghz_pure(n), MeasureSpec::alpha_k(0.5, k)).value, 0.1);
      EXPECT_GT(k_me_pure(w_pure(n), MeasureSpec::alpha_k(0.5, k)).value, 0.1);
    }
  }
}

TEST(KMeProperties, KSeparableInCoarserPartitionsOnly) {
  // |Bell> ⊗ |Bell> is 2-separable but not 3-separable
  const PureState bb(SiteDims::qubits(4), oracle::kron(oracle::bell(), oracle::bell()));
  EXPECT_NEAR(k_me_pure(bb, MeasureSpec::q_k(2.0, 2)).value, 0.0, 1e-12);
  EXPECT_GT(k_me_pure(bb, MeasureSpec::q_k(2.0, 3)).value, 0.1);
}

TEST(KMeProperties, MonotoneInQAndAlphaOnPhiTheta) {
  const PureState psi = phi_theta_pure(std::numbers::pi / 3);
  double prev = -1.0;
  for (int i = 0; i <= 40; ++i) {
    const double q = 2.0 + 0.25 * i;
    const double v = q_gme_pure(psi, q).value;
    EXPECT_GE(v, prev - 1e-14) << q;
    prev = v;
  }
  prev = 1e9;
  for (int i = 0; i <= 25; ++i) {
    const double v = alpha_gme_pure(psi, 0.02 * i).value;
    EXPECT_LE(v, prev + 1e-14) << i;
    prev = v;
  }
}

TEST(KMeProperties, SubadditivityOfQConcurrence) {
  // C_q(|a> ⊗ |b>) <= C_q(|a>) + C_q(|b>) with parties A1B1 | A2B2
  Rng g(31);
  for (int trial = 0; trial < 50; ++trial) {
    const PureState a = oracle::random_qubits(2, g);
    const PureState b = oracle::random_qubits(2, g);
    const PureState ab = permute_sites(tensor(a, b), {0, 2, 1, 3});
    for (double q : {2.0, 3.0}) {
      const double lhs = q_concurrence(ab, Partition::parse("1,2|3,4"), q);
      const double rhs = q_concurrence(a, Partition::parse("1|2"), q) + q_concurrence(b, Partition::parse("1|2"), q);
      EXPECT_LE(lhs, rhs + 1e-12);
    }
  }
}

TEST(PureMeasureKernel, AgreesWithKMe) {
  Rng g(8);
  const MeasureSpec spec = MeasureSpec::alpha_k(0.25, 3);
  const PureMeasureKernel kernel(4, spec);
  for (int i = 0; i < 10; ++i) {
    const PureState psi = oracle::random_qubits(4, g);
    EXPECT_EQ(kernel(psi), k_me_pure(psi, spec).value);
  }
}
