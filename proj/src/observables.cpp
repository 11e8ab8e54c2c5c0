// observables.cpp — Density-matrix readout, dipole correlation and absorption lineshape

#include "hops/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <unsupported/Eigen/FFT>

namespace hops {

ObservableSeries expectation(const CMatrix& op, const DensityTrajectory& rho) {
    ObservableSeries out;
    if (rho.rho.empty()) return out;
    if (op.rows() != rho.rho.front().rows() || op.cols() != rho.rho.front().cols())
        throw std::invalid_argument("expectation: operator dimension mismatch");
    const double scale = std::max(1.0, op.cwiseAbs().maxCoeff());
    out.hermitian = (op - op.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
    out.times = rho.times;
    const RMatrix weight = op.cwiseAbs();
    for (std::size_t t = 0; t < rho.rho.size(); ++t) {
        Complex v = (op * rho.rho[t]).trace();
        if (out.hermitian) v = Complex(v.real(), 0.0);
        out.value.push_back(v);
        // Tr(op rho) = sum_ij op_ji rho_ij
        out.error.push_back(rho.std_error.empty() ? 0.0 : (weight.transpose().cwiseProduct(rho.std_error[t])).sum());
    }
    return out;
}

Complex CorrelationResult::full(std::size_t i) const {
    return values[i] * std::exp(Complex(0.0, -frame_energy * times[i]));
}

CorrelationResult dipole_autocorrelation(const SystemSpec& sys, const Eigen::VectorXd& mu,
                                         const CorrelationOptions& opts) {
    if (mu.size() != sys.dim()) throw std::invalid_argument("dipole_autocorrelation: one dipole per site required");
    const double mu_tot = mu.norm();
    if (!(mu_tot > 0.0)) throw std::invalid_argument("dipole_autocorrelation: dipole vector is zero");

    SystemSpec shifted = sys;
    shifted.H -= opts.frame_energy * CMatrix::Identity(sys.dim(), sys.dim());
    const CVector psi0 = mu.cast<Complex>() / mu_tot;
    CorrelationResult out;
    out.frame_energy = opts.frame_energy;
    out.mu_tot2 = mu_tot * mu_tot;

    if (shifted.couplings.empty()) {
        // bare system: exact propagation in the eigenbasis
        shifted.validate();
        TrajectoryOptions grid;
        grid.dt = opts.dt;
        grid.t_max = opts.t_max;
        const std::size_t n_steps = step_count(grid);
        Eigen::SelfAdjointEigenSolver<CMatrix> eig(shifted.H);
        const CVector c = eig.eigenvectors().adjoint() * psi0;
        for (std::size_t s = 0; s <= n_steps; ++s) {
            const double t = static_cast<double>(s) * opts.dt;
            Complex v{0.0, 0.0};
            for (Eigen::Index k = 0; k < c.size(); ++k)
                v += std::norm(c(k)) * std::exp(Complex(0.0, -eig.eigenvalues()(k) * t));
            out.times.push_back(t);
            out.values.push_back(out.mu_tot2 * v);
        }
        return out;
    }

    const HierarchySpace space = build_space(shifted.mode_count(), opts.order, static_cast<std::size_t>(sys.dim()));
    const HierarchyOperator op(space, shifted, opts.terminator);
    TrajectoryOptions topts;
    topts.dt = opts.dt;
    topts.t_max = opts.t_max;
    topts.variant = Variant::Linear;
    const Trajectory traj = integrate_trajectory(op, {}, psi0, topts);
    if (traj.aborted) throw std::runtime_error("dipole_autocorrelation: " + traj.diagnostic);

    out.times = traj.times;
    for (const auto& psi : traj.psi0) out.values.push_back(out.mu_tot2 * psi0.dot(psi));
    return out;
}

std::size_t SpectrumResult::peak_index() const {
    return static_cast<std::size_t>(std::max_element(absorption.begin(), absorption.end()) - absorption.begin());
}

double SpectrumResult::integral() const {
    double s = 0.0;
    for (double a : absorption) s += a;
    return s * bin_width();
}

SpectrumResult absorption_spectrum(const CorrelationResult& m, const SpectrumOptions& opts) {
    const std::size_t n = m.values.size();
    if (n < 2 || m.times.size() != n) throw std::invalid_argument("absorption_spectrum: need at least two samples");
    const double dt = m.times[1] - m.times[0];
    for (std::size_t i = 1; i < n; ++i)
        if (std::abs(m.times[i] - m.times[0] - static_cast<double>(i) * dt) > 1e-9 * dt * static_cast<double>(n))
            throw std::invalid_argument("absorption_spectrum: time grid is not uniform");
    if (opts.padding_factor < 4) throw std::invalid_argument("absorption_spectrum: padding factor must be >= 4");
    if (opts.damping < 0.0) throw std::invalid_argument("absorption_spectrum: damping must be >= 0");

    SpectrumResult out;
    out.damping = opts.damping;
    out.padding_factor = opts.padding_factor;
    out.correlation = m.values;
    if (opts.damping == 0.0 && std::abs(m.values.back()) > opts.decay_fraction * std::abs(m.values.front())) {
        std::ostringstream os;
        os << "|M(t_max)| / |M(0)| = " << std::abs(m.values.back()) / std::abs(m.values.front())
           << " exceeds " << opts.decay_fraction << " and no damping is set; expect truncation ripples";
        out.warnings.push_back(os.str());
    }

    std::size_t L = 1;
    while (L < opts.padding_factor * n) L *= 2;
    std::vector<Complex> x(L, Complex(0.0, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double w = i == 0 ? 0.5 : 1.0;
        x[i] = std::conj(w * m.values[i] * std::exp(-opts.damping * m.times[i]) * dt);
    }
    Eigen::FFT<double> fft;
    std::vector<Complex> y;
    fft.fwd(y, x);

    const double dnu = 2.0 * std::numbers::pi / (static_cast<double>(L) * dt);
    const long half = static_cast<long>(L / 2);
    out.nu.resize(L);
    out.absorption.resize(L);
    for (long k = -half; k < half; ++k) {
        const std::size_t slot = static_cast<std::size_t>(k + half);
        const std::size_t idx = static_cast<std::size_t>(k < 0 ? k + static_cast<long>(L) : k);
        out.nu[slot] = m.frame_energy + static_cast<double>(k) * dnu;
        // conj(Y) = sum x e^{+i nu t}; the phase e^{i nu t_0} is 1 when the grid starts at 0
        out.absorption[slot] = (std::conj(y[idx]) * std::exp(Complex(0.0, k * dnu * m.times[0]))).real();
    }
    return out;
}

RegionDeviation region_deviation(const SpectrumResult& a, const SpectrumResult& b, double band_fraction) {
    if (a.nu.size() != b.nu.size()) throw std::invalid_argument("region_deviation: grids differ");
    for (std::size_t i = 0; i < a.nu.size(); ++i)
        if (std::abs(a.nu[i] - b.nu[i]) > 1e-9 * std::max(1.0, std::abs(b.nu[i])))
            throw std::invalid_argument("region_deviation: grids differ");
    const double peak = *std::max_element(b.absorption.begin(), b.absorption.end());
    if (!(peak > 0.0)) throw std::invalid_argument("region_deviation: reference spectrum has no positive peak");

    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < b.nu.size(); ++i) {
        if (b.absorption[i] < band_fraction * peak) continue;
        num += b.nu[i] * b.absorption[i];
        den += b.absorption[i];
    }
    RegionDeviation out;
    out.split = num / den;
    double low_peak = 0.0, high_peak = 0.0;
    for (std::size_t i = 0; i < b.nu.size(); ++i) {
        if (b.absorption[i] < band_fraction * peak) continue;
        const double dev = std::abs(a.absorption[i] - b.absorption[i]);
        if (b.nu[i] < out.split) {
            out.low = std::max(out.low, dev);
            low_peak = std::max(low_peak, b.absorption[i]);
        } else {
            out.high = std::max(out.high, dev);
            high_peak = std::max(high_peak, b.absorption[i]);
        }
    }
    // each region relative to its own strongest feature
    if (low_peak > 0.0) out.low /= low_peak;
    if (high_peak > 0.0) out.high /= high_peak;
    return out;
}

} // namespace hops
