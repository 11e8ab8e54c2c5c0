// noise.hpp — Complex Gaussian noise z_t with E[z_t z*_s] = alpha(t - s), E[z_t z_s] = 0

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "hops/bath_model.hpp"
#include "hops/types.hpp"

namespace hops {

// Samples of the conjugate process z*_t on the half-step grid t_m = m dt / 2, m = 0 .. 2 n_steps.
struct NoisePath {
    double dt{0.0};
    std::vector<Complex> samples;
    std::uint64_t seed{0};
    std::uint64_t trajectory_id{0};

    double spacing() const { return 0.5 * dt; }
    // z*_t at integrator step n (offset 0, 1, 2 -> t, t + dt/2, t + dt).
    Complex at_step(std::size_t n, int offset) const { return samples[2 * n + offset]; }
};

struct NoiseOptions {
    // Frequencies up to max_j(|Omega_j| + omega_max_factor * gamma_j) are synthesized.
    double omega_max_factor{200.0};
    // Negative spectral values down to -clip_tol * max S are clipped to zero; below that generation fails.
    double clip_tol{1e-8};
    // Synthesis period P >= t_max + period_pad_factor / min_j gamma_j.
    double period_pad_factor{20.0};
};

class NoiseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Precomputed frequency grid and amplitudes for one bath. Draws are indexed by frequency, so a
// path depends only on (bath, t_max, options, seed, trajectory_id, stream), not on dt, as long as
// the synthesized band stays below the Nyquist frequency of the dt/2 grid.
class NoiseSynthesizer {
public:
    NoiseSynthesizer(const BathSpec& bath, double t_max, double dt, const NoiseOptions& opts = {});

    NoisePath sample(std::uint64_t seed, std::uint64_t trajectory_id, std::uint64_t stream = 0) const;

    std::size_t sample_count() const { return n_samples_; }
    std::size_t fft_size() const { return fft_size_; }
    double period() const { return period_; }
    double omega_max() const { return omega_max_; }
    bool nyquist_limited() const { return nyquist_limited_; }
    std::size_t clipped_points() const { return clipped_points_; }
    // Most negative S found, relative to max S (0 when nothing was clipped).
    double worst_negative_ratio() const { return worst_negative_; }

private:
    double dt_;
    std::size_t n_samples_{0};
    std::size_t fft_size_{0};
    double period_{0.0};
    double omega_max_{0.0};
    bool nyquist_limited_{false};
    std::size_t clipped_points_{0};
    double worst_negative_{0.0};
    long k_max_{-1};
    std::vector<double> amplitudes_;  // index k + k_max_
};

NoisePath generate_noise(const BathSpec& bath, double t_max, double dt, std::uint64_t seed,
                         std::uint64_t trajectory_id, const NoiseOptions& opts = {});

// Deviations in units of the estimator's standard error, maximized over a coarse (t, s) grid.
struct NoiseStatistics {
    std::size_t paths{0};
    std::vector<double> grid_times;
    double mean_deviation{0.0};
    double pseudo_covariance_deviation{0.0};
    double covariance_deviation{0.0};
    // Largest absolute covariance error |E[z_t z*_s] - alpha(t-s)|, for reporting.
    double covariance_abs_error{0.0};
};

NoiseStatistics noise_statistics(std::span<const NoisePath> paths, const BathSpec& target,
                                 std::size_t grid_points = 8);

// Max deviation of E[z^a_t z^b*_s] from zero, in standard errors.
double noise_cross_deviation(std::span<const NoisePath> a, std::span<const NoisePath> b,
                             std::size_t grid_points = 8);

} // namespace hops
