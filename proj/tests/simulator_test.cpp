#include "iqpv/simulator.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "iqpv/testing/oracles.hpp"
#include "iqpv/testing/reference_instance.hpp"
#include "iqpv/verifier.hpp"

using namespace iqpv;

namespace {

std::vector<double> to_vector(const OutputDistribution& d) { return {d.probs().begin(), d.probs().end()}; }

OutputDistribution random_distribution(std::size_t n, Rng& rng) {
    std::vector<double> p(std::size_t{1} << n);
    for (auto& x : p) {
        x = rng.uniform_real();
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    for (auto& x : p) {
        x /= total;
    }
    return OutputDistribution(n, std::move(p));
}

XProgram random_program(std::size_t n, std::size_t gates, Rng& rng) {
    std::vector<BitVector> g;
    while (g.size() < gates) {
        const std::uint64_t m = rng.uniform_below(std::uint64_t{1} << n);
        if (m != 0) {
            g.push_back(BitVector::from_index(m, n));
        }
    }
    return XProgram(n, rng.uniform_real() * std::numbers::pi, std::move(g));
}

void expect_close(std::span<const double> a, std::span<const double> b, double tol) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        ASSERT_NEAR(a[i], b[i], tol) << "index " << i;
    }
}

const double kReferenceBias = std::pow(std::cos(std::numbers::pi / 8), 2);

}  // namespace

TEST(Simulate, empty_program_is_point_mass_on_zero) {
    const OutputDistribution d = simulate(XProgram(4, kDefaultTheta, {}));
    EXPECT_DOUBLE_EQ(d[0], 1.0);
    for (std::uint64_t x = 1; x < 16; ++x) {
        EXPECT_EQ(d[x], 0.0);
    }
}

TEST(Simulate, single_gate_on_one_qubit) {
    const OutputDistribution d = simulate(XProgram(1, std::numbers::pi / 8, {BitVector::unit(1, 0)}));
    const double c = std::cos(std::numbers::pi / 8);
    const double s = std::sin(std::numbers::pi / 8);
    EXPECT_NEAR(d[0], c * c, 1e-15);
    EXPECT_NEAR(d[1], s * s, 1e-15);
}

TEST(Simulate, amplitudes_of_single_gate) {
    const StateVector sv = simulate_state(XProgram(2, 0.3, {BitVector::from_string("11")}));
    const auto& a = sv.amplitudes();
    EXPECT_NEAR(a[0].real(), std::cos(0.3), 1e-15);
    EXPECT_NEAR(a[3].imag(), std::sin(0.3), 1e-15);
    EXPECT_NEAR(std::abs(a[1]) + std::abs(a[2]), 0.0, 1e-15);
    EXPECT_NEAR(sv.norm_squared(), 1.0, 1e-12);
}

TEST(Simulate, reference_instance_bias) {
    const KeyedProgram kp = iqpv::testing::reference_instance();
    const OutputDistribution d = simulate(kp.program());
    EXPECT_NEAR(bias_from_dist(d, kp.secret()), kReferenceBias, 1e-12);
    EXPECT_NEAR(correlation(d, kp.secret()), std::numbers::sqrt2 / 2, 1e-9);
}

TEST(Simulate, matches_hadamard_basis_oracle) {
    Rng rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(6);
        const XProgram p = random_program(n, rng.uniform_below(10), rng);
        std::vector<std::uint64_t> masks;
        for (const auto& g : p.gates()) {
            masks.push_back(g.to_index());
        }
        expect_close(simulate(p).probs(),
                     iqpv::testing::hadamard_basis_distribution(masks, static_cast<unsigned>(n), p.theta()), 1e-12);
    }
}

TEST(Simulate, gate_order_does_not_matter) {
    Rng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const XProgram p = random_program(6, 12, rng);
        std::vector<BitVector> shuffled = p.gates();
        for (std::size_t k = shuffled.size(); k > 1; --k) {
            std::swap(shuffled[k - 1], shuffled[rng.uniform_below(k)]);
        }
        expect_close(simulate(p).probs(), simulate(p.with_gates(shuffled)).probs(), 1e-12);
    }
}

TEST(Simulate, normalized) {
    Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const OutputDistribution d = simulate(random_program(8, 20, rng));
        const double total = std::accumulate(d.probs().begin(), d.probs().end(), 0.0);
        ASSERT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(Simulate, qubit_cap) {
    EXPECT_THROW(simulate(XProgram(5, kDefaultTheta, {}), 4), ResourceLimit);
    EXPECT_NO_THROW(simulate(XProgram(4, kDefaultTheta, {}), 4));
}

TEST(OutputDistribution, validation) {
    EXPECT_THROW(OutputDistribution(2, {0.5, 0.5}), DimensionError);
    EXPECT_THROW(OutputDistribution(1, {0.6, 0.5}), InvalidParameter);
    EXPECT_THROW(OutputDistribution(1, {1.1, -0.1}), InvalidParameter);
    const OutputDistribution clamped(1, {1.0 + 5e-13, -5e-13});
    EXPECT_EQ(clamped[1], 0.0);
}

TEST(Sample, point_mass) {
    Rng rng(4);
    const SampleSet s = sample(OutputDistribution::point_mass(3, 0), 100, rng);
    EXPECT_EQ(s.total(), 100u);
    EXPECT_EQ(s.count(0), 100u);
    EXPECT_EQ(s.counts().size(), 1u);
}

TEST(Sample, uniform_frequencies) {
    Rng rng(5);
    const SampleSet s = sample(OutputDistribution::uniform(1), 100000, rng);
    EXPECT_NEAR(static_cast<double>(s.count(0)) / 1e5, 0.5, 0.01);
    EXPECT_NEAR(static_cast<double>(s.count(1)) / 1e5, 0.5, 0.01);
}

TEST(Sample, never_draws_zero_probability_outcomes) {
    Rng rng(6);
    const SampleSet s = sample(OutputDistribution(2, {0.0, 0.5, 0.0, 0.5}), 10000, rng);
    EXPECT_EQ(s.count(0) + s.count(2), 0u);
}

TEST(Sample, deterministic_for_a_seed) {
    const OutputDistribution d = simulate(iqpv::testing::reference_instance().program());
    Rng a(7);
    Rng b(7);
    EXPECT_EQ(sample(d, 5000, a), sample(d, 5000, b));
}

TEST(Sample, reference_instance_bias_concentrates) {
    const KeyedProgram kp = iqpv::testing::reference_instance();
    Rng rng(8);
    const BiasEstimate est = estimate_bias(sample(simulate(kp.program()), 100000, rng), kp.secret());
    EXPECT_LE(std::abs(est.bias - kReferenceBias), 3.0 * est.std_error);
}

TEST(Sample, zero_shots_rejected) {
    Rng rng(9);
    EXPECT_THROW(sample(OutputDistribution::uniform(2), 0, rng), InvalidParameter);
}

TEST(SampleSet, rejects_wide_outcomes_and_normalizes) {
    SampleSet s(2);
    EXPECT_THROW(s.add(4), InvalidParameter);
    EXPECT_THROW(s.to_distribution(), InvalidParameter);
    s.add(1, 3);
    s.add(2);
    const OutputDistribution d = s.to_distribution();
    EXPECT_DOUBLE_EQ(d[1], 0.75);
    EXPECT_DOUBLE_EQ(d[2], 0.25);
}

TEST(Correlation, examples) {
    const OutputDistribution d = simulate(iqpv::testing::reference_instance().program());
    EXPECT_NEAR(correlation(d, BitVector(5)), 1.0, 1e-15);
    const OutputDistribution u = OutputDistribution::uniform(5);
    for (std::uint64_t s = 1; s < 32; ++s) {
        EXPECT_NEAR(correlation(u, BitVector::from_index(s, 5)), 0.0, 1e-15);
    }
    EXPECT_THROW(correlation(d, BitVector(4)), DimensionError);
}

TEST(BiasFromDist, examples) {
    EXPECT_NEAR(bias_from_dist(OutputDistribution::uniform(4), BitVector::from_string("1010")), 0.5, 1e-15);
    EXPECT_DOUBLE_EQ(bias_from_dist(OutputDistribution::point_mass(4, 0), BitVector::from_string("1111")), 1.0);
    EXPECT_THROW(bias_from_dist(OutputDistribution::uniform(4), BitVector(3)), DimensionError);
}

TEST(BiasFromDist, equals_half_one_plus_correlation_for_every_s) {
    const OutputDistribution d = simulate(iqpv::testing::reference_instance().program());
    const auto probs = to_vector(d);
    for (std::uint64_t s = 0; s < 32; ++s) {
        const BitVector sv = BitVector::from_index(s, 5);
        ASSERT_NEAR(bias_from_dist(d, sv), (1.0 + correlation(d, sv)) / 2.0, 1e-15);
        ASSERT_NEAR(bias_from_dist(d, sv), iqpv::testing::brute_bias(probs, s), 1e-15);
        ASSERT_NEAR(correlation(d, sv), iqpv::testing::brute_correlation(probs, s), 1e-15);
    }
}

TEST(Fwht, point_mass_gives_flat_coefficients) {
    for (double c : fwht(OutputDistribution::point_mass(4, 0))) {
        EXPECT_DOUBLE_EQ(c, 1.0 / 16);
    }
}

TEST(Fwht, coefficients_equal_scaled_correlations) {
    Rng rng(10);
    for (int trial = 0; trial < 5; ++trial) {
        const OutputDistribution d = random_distribution(5, rng);
        const auto c = fwht(d);
        EXPECT_DOUBLE_EQ(c[0], 1.0 / 32);
        for (std::uint64_t s = 0; s < 32; ++s) {
            ASSERT_NEAR(32.0 * c[s], correlation(d, BitVector::from_index(s, 5)), 1e-12);
        }
    }
    const auto ref = fwht(simulate(iqpv::testing::reference_instance().program()));
    EXPECT_NEAR(32.0 * ref[BitVector::from_string("11110").to_index()], std::numbers::sqrt2 / 2, 1e-9);
}

TEST(Fwht, inverse_round_trip_and_parseval) {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 1 + rng.uniform_below(10);
        const OutputDistribution d = random_distribution(n, rng);
        const auto c = fwht(d);
        expect_close(inverse_fwht(c), d.probs(), 1e-12);
        double lhs = 0.0;
        double rhs = 0.0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            lhs += d[i] * d[i];
            rhs += c[i] * c[i];
        }
        ASSERT_NEAR(lhs, std::ldexp(rhs, static_cast<int>(n)), 1e-12);
    }
}

TEST(Fwht, rejects_non_power_of_two) {
    std::vector<double> v(6, 0.0);
    EXPECT_THROW(walsh_hadamard_in_place(v), DimensionError);
}

TEST(Dephasing, endpoints) {
    const OutputDistribution d = simulate(iqpv::testing::reference_instance().program());
    expect_close(apply_dephasing(d, 0.0).probs(), d.probs(), 1e-15);
    const OutputDistribution flat = apply_dephasing(d, 0.5);
    for (double p : flat.probs()) {
        EXPECT_NEAR(p, 1.0 / 32, 1e-15);
    }
    EXPECT_THROW(apply_dephasing(d, -0.01), InvalidParameter);
    EXPECT_THROW(apply_dephasing(d, 0.51), InvalidParameter);
}

TEST(Dephasing, reference_instance_damped_bias) {
    const KeyedProgram kp = iqpv::testing::reference_instance();
    const OutputDistribution d = simulate(kp.program());
    const double eps = 0.0679;
    const OutputDistribution noisy = apply_dephasing(d, eps);
    const double closed = 0.5 * (1.0 + std::pow(1.0 - 2.0 * eps, 4) * std::numbers::sqrt2 / 2);
    EXPECT_NEAR(bias_from_dist(noisy, kp.secret()), closed, 1e-12);
    EXPECT_NEAR(closed, 0.697, 5e-4);
    const auto brute = iqpv::testing::brute_bit_flip_channel(to_vector(d), 5, eps);
    EXPECT_NEAR(bias_from_dist(noisy, kp.secret()), iqpv::testing::brute_bias(brute, kp.secret().to_index()), 1e-12);
}

TEST(Dephasing, equals_bit_flip_convolution) {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const OutputDistribution d = random_distribution(5, rng);
        const double eps = 0.5 * rng.uniform_real();
        expect_close(apply_dephasing(d, eps).probs(), iqpv::testing::brute_bit_flip_channel(to_vector(d), 5, eps), 1e-12);
    }
}

TEST(Dephasing, composes_multiplicatively) {
    Rng rng(13);
    for (int trial = 0; trial < 20; ++trial) {
        const OutputDistribution d = simulate(random_program(6, 10, rng));
        const double e1 = 0.5 * rng.uniform_real();
        const double e2 = 0.5 * rng.uniform_real();
        const double e12 = 0.5 * (1.0 - (1.0 - 2.0 * e1) * (1.0 - 2.0 * e2));
        const auto twice = fwht(apply_dephasing(apply_dephasing(d, e1), e2));
        const auto once = fwht(apply_dephasing(d, e12));
        expect_close(twice, once, 1e-12);
        const double total = std::accumulate(twice.begin(), twice.begin() + 1, 0.0) * 64.0;
        ASSERT_NEAR(total, 1.0, 1e-10);
    }
}

TEST(DistributionFromTransform, clamps_tiny_negatives_and_rejects_large_ones) {
    const OutputDistribution d = distribution_from_transform(1, {1.0, -1e-13});
    EXPECT_EQ(d[1], 0.0);
    EXPECT_THROW(distribution_from_transform(1, {1.0, -1e-6}), ConsistencyError);
}
