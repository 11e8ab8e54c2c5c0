// noise.cpp — Spectral synthesis of colored complex Gaussian noise

#include "hops/noise.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace hops {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::mt19937_64 keyed_engine(std::uint64_t seed, std::uint64_t trajectory_id, std::uint64_t stream) {
    auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(seed), hi(seed), lo(trajectory_id), hi(trajectory_id), lo(stream), hi(stream), 0x484f5053u};
    return std::mt19937_64(seq);
}

std::size_t step_count(double t_max, double dt) {
    if (!(dt > 0.0) || !(t_max >= dt)) throw std::invalid_argument("noise: need dt > 0 and t_max >= dt");
    const double ratio = t_max / dt;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("noise: t_max must be an integer multiple of dt");
    return static_cast<std::size_t>(n);
}

} // namespace

NoiseSynthesizer::NoiseSynthesizer(const BathSpec& bath, double t_max, double dt, const NoiseOptions& opts)
    : dt_(dt) {
    const std::size_t n_steps = step_count(t_max, dt);
    n_samples_ = 2 * n_steps + 1;

    double gamma_min = std::numeric_limits<double>::infinity();
    double reach = 0.0;
    for (const auto& t : bath.terms) {
        if (t.g == Complex(0.0, 0.0)) continue;
        if (!(t.w.real() > 0.0)) throw NoiseError("noise: correlation term with Re(w) <= 0");
        gamma_min = std::min(gamma_min, t.w.real());
        reach = std::max(reach, std::abs(t.w.imag()) + opts.omega_max_factor * t.w.real());
    }
    if (!std::isfinite(gamma_min)) return;  // no terms: identically zero noise

    const double pad = opts.period_pad_factor / gamma_min;
    std::size_t mult = 1;
    while (static_cast<double>(mult) * t_max < t_max + pad) mult *= 2;
    period_ = static_cast<double>(mult) * static_cast<double>(n_steps) * dt;
    fft_size_ = mult * 2 * n_steps;

    const double d_omega = kTwoPi / period_;
    omega_max_ = reach;
    long k_max = static_cast<long>(std::floor(reach / d_omega));
    const long nyquist = static_cast<long>(fft_size_ / 2) - 1;
    if (k_max > nyquist) {
        k_max = nyquist;
        nyquist_limited_ = true;
        omega_max_ = k_max * d_omega;
    }
    k_max_ = k_max;

    std::vector<double> S(2 * k_max + 1);
    double s_max = 0.0;
    for (long k = -k_max; k <= k_max; ++k) {
        S[k + k_max] = bath.spectrum(k * d_omega);
        s_max = std::max(s_max, S[k + k_max]);
    }
    amplitudes_.resize(S.size());
    for (std::size_t i = 0; i < S.size(); ++i) {
        double s = S[i];
        if (s < 0.0) {
            const double ratio = s_max > 0.0 ? -s / s_max : std::numeric_limits<double>::infinity();
            if (ratio > opts.clip_tol) {
                std::ostringstream os;
                os << "noise: spectral function negative (S = " << s << " at omega = "
                   << (static_cast<long>(i) - k_max) * d_omega << ", " << ratio
                   << " of max S) beyond clip tolerance " << opts.clip_tol << "; invalid correlation function";
                throw NoiseError(os.str());
            }
            worst_negative_ = std::max(worst_negative_, ratio);
            ++clipped_points_;
            s = 0.0;
        }
        amplitudes_[i] = std::sqrt(s * d_omega / kTwoPi);
    }
}

NoisePath NoiseSynthesizer::sample(std::uint64_t seed, std::uint64_t trajectory_id, std::uint64_t stream) const {
    NoisePath path;
    path.dt = dt_;
    path.seed = seed;
    path.trajectory_id = trajectory_id;
    path.samples.assign(n_samples_, Complex(0.0, 0.0));
    if (k_max_ < 0) return path;

    auto engine = keyed_engine(seed, trajectory_id, stream);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    std::vector<Complex> spectrum(fft_size_, Complex(0.0, 0.0));
    const long n = static_cast<long>(fft_size_);
    for (long k = -k_max_; k <= k_max_; ++k) {
        const double re = normal(engine);
        const double im = normal(engine);
        spectrum[static_cast<std::size_t>((k % n + n) % n)] = amplitudes_[k + k_max_] * Complex(re, im);
    }
    // z(t_m) = sum_k c_k exp(-i omega_k t_m) = sum_k c_k exp(-2 pi i k m / N)
    Eigen::FFT<double> fft;
    std::vector<Complex> z;
    fft.fwd(z, spectrum);
    for (std::size_t m = 0; m < n_samples_; ++m) path.samples[m] = std::conj(z[m]);
    return path;
}

NoisePath generate_noise(const BathSpec& bath, double t_max, double dt, std::uint64_t seed,
                         std::uint64_t trajectory_id, const NoiseOptions& opts) {
    return NoiseSynthesizer(bath, t_max, dt, opts).sample(seed, trajectory_id);
}

namespace {

void check_grids(std::span<const NoisePath> paths) {
    if (paths.size() < 2) throw std::invalid_argument("noise_statistics: need at least 2 paths");
    for (const auto& p : paths)
        if (p.samples.size() != paths.front().samples.size() || p.dt != paths.front().dt)
            throw std::invalid_argument("noise_statistics: paths on mismatched grids");
}

std::vector<std::size_t> coarse_indices(std::size_t n_samples, std::size_t grid_points) {
    std::vector<std::size_t> idx;
    grid_points = std::max<std::size_t>(2, std::min(grid_points, n_samples));
    for (std::size_t i = 0; i < grid_points; ++i) idx.push_back(i * (n_samples - 1) / (grid_points - 1));
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

// |mean(x) - target| / (sample std / sqrt(n)); 0 when both numerator and spread vanish.
struct Moment {
    Complex sum{0.0, 0.0};
    double sum_sq{0.0};
    void add(Complex x) {
        sum += x;
        sum_sq += std::norm(x);
    }
    double deviation(std::size_t n, Complex target, double* abs_err = nullptr) const {
        const double nn = static_cast<double>(n);
        const Complex mean = sum / nn;
        const double var = std::max(0.0, (sum_sq - nn * std::norm(mean)) / (nn - 1.0));
        const double se = std::sqrt(var / nn);
        const double diff = std::abs(mean - target);
        if (abs_err) *abs_err = diff;
        if (se == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        return diff / se;
    }
};

} // namespace

NoiseStatistics noise_statistics(std::span<const NoisePath> paths, const BathSpec& target, std::size_t grid_points) {
    check_grids(paths);
    NoiseStatistics out;
    out.paths = paths.size();
    const auto idx = coarse_indices(paths.front().samples.size(), grid_points);
    const double h = paths.front().spacing();
    for (auto i : idx) out.grid_times.push_back(i * h);

    for (std::size_t a = 0; a < idx.size(); ++a) {
        Moment mean;
        for (const auto& p : paths) mean.add(std::conj(p.samples[idx[a]]));
        out.mean_deviation = std::max(out.mean_deviation, mean.deviation(paths.size(), 0.0));
        for (std::size_t b = 0; b <= a; ++b) {
            Moment cov, pseudo;
            for (const auto& p : paths) {
                const Complex zt = std::conj(p.samples[idx[a]]);
                const Complex zs = std::conj(p.samples[idx[b]]);
                cov.add(zt * std::conj(zs));
                pseudo.add(zt * zs);
            }
            double abs_err = 0.0;
            const Complex alpha = target.correlation((idx[a] - idx[b]) * h);
            out.covariance_deviation = std::max(out.covariance_deviation, cov.deviation(paths.size(), alpha, &abs_err));
            out.covariance_abs_error = std::max(out.covariance_abs_error, abs_err);
            out.pseudo_covariance_deviation =
                std::max(out.pseudo_covariance_deviation, pseudo.deviation(paths.size(), 0.0));
        }
    }
    return out;
}

double noise_cross_deviation(std::span<const NoisePath> a, std::span<const NoisePath> b, std::size_t grid_points) {
    check_grids(a);
    check_grids(b);
    if (a.size() != b.size() || a.front().samples.size() != b.front().samples.size())
        throw std::invalid_argument("noise_cross_deviation: mismatched path sets");
    const auto idx = coarse_indices(a.front().samples.size(), grid_points);
    double worst = 0.0;
    for (auto i : idx) {
        for (auto j : idx) {
            Moment m;
            for (std::size_t p = 0; p < a.size(); ++p) m.add(std::conj(a[p].samples[i]) * b[p].samples[j]);
            worst = std::max(worst, m.deviation(a.size(), 0.0));
        }
    }
    return worst;
}

} // namespace hops
