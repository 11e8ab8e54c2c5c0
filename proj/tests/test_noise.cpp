// test_noise.cpp — Statistics and reproducibility of the synthesized noise

#include <cmath>

#include <gtest/gtest.h>

#include "hops/noise.hpp"

using namespace hops;

namespace {

BathSpec single(Complex g, Complex w) {
    BathSpec b;
    b.terms = {{g, w}};
    return b;
}

std::vector<NoisePath> draw(const NoiseSynthesizer& s, std::uint64_t seed, std::size_t n) {
    std::vector<NoisePath> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(s.sample(seed, i));
    return out;
}

} // namespace

TEST(Noise, EmptyBathGivesZeroPath) {
    const NoiseSynthesizer s(BathSpec{}, 1.0, 0.1);
    const NoisePath p = s.sample(1, 2);
    ASSERT_EQ(p.samples.size(), 21u);
    for (const auto& z : p.samples) EXPECT_EQ(z, Complex(0.0, 0.0));
}

TEST(Noise, SameKeySamePath) {
    const NoiseSynthesizer s(single(2.0, Complex(0.5, 2.0)), 5.0, 0.01);
    const NoisePath a = s.sample(42, 7), b = s.sample(42, 7), c = s.sample(42, 8), d = s.sample(42, 7, 1);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_NE(a.samples, c.samples);
    EXPECT_NE(a.samples, d.samples);
    EXPECT_EQ(a.seed, 42u);
    EXPECT_EQ(a.trajectory_id, 7u);
}

TEST(Noise, PathIndependentOfStepSize) {
    const BathSpec b = single(2.0, Complex(0.5, 2.0));
    const NoiseSynthesizer coarse(b, 4.0, 0.02), fine(b, 4.0, 0.01);
    ASSERT_FALSE(coarse.nyquist_limited());
    ASSERT_FALSE(fine.nyquist_limited());
    const NoisePath a = coarse.sample(3, 11), c = fine.sample(3, 11);
    for (std::size_t m = 0; m < a.samples.size(); ++m) EXPECT_LT(std::abs(a.samples[m] - c.samples[2 * m]), 1e-10);
}

TEST(Noise, UnitVarianceForUnitBath) {
    const NoiseSynthesizer s(single(1.0, 1.0), 5.0, 0.01);
    const auto paths = draw(s, 5, 10000);
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& p : paths)
        for (std::size_t m = 0; m < p.samples.size(); m += 100, ++n) sum += std::norm(p.samples[m]);
    const double var = sum / static_cast<double>(n);
    EXPECT_GT(var, 0.95);
    EXPECT_LT(var, 1.05);
    const NoiseStatistics st = noise_statistics(paths, single(1.0, 1.0));
    EXPECT_LT(st.mean_deviation, 5.0);
    EXPECT_LT(st.covariance_deviation, 5.0);
    EXPECT_LT(st.pseudo_covariance_deviation, 5.0);
}

TEST(Noise, OscillatingBathCovariance) {
    const BathSpec b = single(2.0, Complex(0.5, 2.0));
    const NoiseSynthesizer s(b, 5.0, 0.01);
    const auto paths = draw(s, 9, 4000);
    const NoiseStatistics st = noise_statistics(paths, b);
    EXPECT_EQ(st.paths, 4000u);
    EXPECT_LT(st.mean_deviation, 5.0);
    EXPECT_LT(st.covariance_deviation, 5.0);
    EXPECT_LT(st.pseudo_covariance_deviation, 5.0);
    // a wrong target must be detected
    const NoiseStatistics wrong = noise_statistics(paths, single(2.0, Complex(0.5, -2.0)));
    EXPECT_GT(wrong.covariance_deviation, 5.0);
}

TEST(Noise, FrequencyResolutionChangesWithinStatistics) {
    const BathSpec b = single(2.0, Complex(0.5, 2.0));
    NoiseOptions wide;
    wide.omega_max_factor = 400.0;
    wide.period_pad_factor = 40.0;
    const NoiseSynthesizer s(b, 5.0, 0.01, wide);
    const NoiseStatistics st = noise_statistics(draw(s, 13, 2000), b);
    EXPECT_LT(st.covariance_deviation, 5.0);
    EXPECT_LT(st.pseudo_covariance_deviation, 5.0);
}

TEST(Noise, IndependentSeedsUncorrelated) {
    const NoiseSynthesizer s(single(1.0, 1.0), 5.0, 0.01);
    EXPECT_LT(noise_cross_deviation(draw(s, 1, 2000), draw(s, 2, 2000)), 5.0);
    // same seed: fully correlated
    EXPECT_GT(noise_cross_deviation(draw(s, 1, 2000), draw(s, 1, 2000)), 5.0);
}

TEST(Noise, MismatchedGridsRejected) {
    const BathSpec b = single(1.0, 1.0);
    std::vector<NoisePath> paths{NoiseSynthesizer(b, 1.0, 0.1).sample(1, 0), NoiseSynthesizer(b, 1.0, 0.05).sample(1, 1)};
    EXPECT_THROW(noise_statistics(paths, b), std::invalid_argument);
    EXPECT_THROW(NoiseSynthesizer(b, 1.0, 0.3), std::invalid_argument);
}

TEST(Noise, NegativeSpectrumHandling) {
    BathSpec bad;
    bad.terms = {{1.0, 1.0}, {-0.5, 0.1}};  // S(0) = 2 (1 - 5) < 0
    EXPECT_THROW(NoiseSynthesizer(bad, 1.0, 0.01), NoiseError);

    BathSpec mild;
    mild.terms = {{1.0, 1.0}, {-1e-3, Complex(0.05, 30.0)}};
    NoiseOptions opts;
    opts.clip_tol = 0.05;
    const NoiseSynthesizer s(mild, 1.0, 0.01, opts);
    EXPECT_GT(s.clipped_points(), 0u);
    EXPECT_GT(s.worst_negative_ratio(), 0.0);
    EXPECT_LE(s.worst_negative_ratio(), 0.05);
}
