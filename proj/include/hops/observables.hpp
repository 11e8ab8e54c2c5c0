// observables.hpp — Expectation values and linear absorption from the dipole correlation function

#pragma once

#include <string>
#include <vector>

#include "hops/ensemble.hpp"
#include "hops/integrator.hpp"
#include "hops/types.hpp"

namespace hops {

struct ObservableSeries {
    std::vector<double> times;
    std::vector<Complex> value;
    std::vector<double> error;  // linear propagation of the entrywise standard errors
    bool hermitian{true};
};

// Tr(op rho(t)). A non-Hermitian op is accepted; the complex trace is returned and hermitian = false.
ObservableSeries expectation(const CMatrix& op, const DensityTrajectory& rho);

struct CorrelationResult {
    std::vector<double> times;
    // M(t) exp(i frame t): the correlation in a frame rotating at frame_energy
    std::vector<Complex> values;
    double frame_energy{0.0};
    double mu_tot2{0.0};

    Complex full(std::size_t i) const;
};

struct CorrelationOptions {
    int order{4};
    Terminator terminator{Terminator::Rescaled};
    double dt{0.01};
    double t_max{10.0};
    // The hierarchy is propagated with H - frame_energy; the spectrum only shifts.
    double frame_energy{0.0};
};

// One deterministic linear trajectory with z* = 0 from the normalized dipole state.
CorrelationResult dipole_autocorrelation(const SystemSpec& sys, const Eigen::VectorXd& mu,
                                         const CorrelationOptions& opts);

struct SpectrumOptions {
    double damping{0.0};          // eta in exp(-eta t), added Lorentzian half-width
    std::size_t padding_factor{4};
    double decay_fraction{1e-3};  // warn when |M(t_max)| > this * |M(0)| and damping = 0
};

struct SpectrumResult {
    std::vector<double> nu;
    std::vector<double> absorption;
    std::vector<Complex> correlation;
    double damping{0.0};
    std::size_t padding_factor{0};
    std::vector<std::string> warnings;

    double bin_width() const { return nu.size() > 1 ? nu[1] - nu[0] : 0.0; }
    std::size_t peak_index() const;
    // sum A dnu
    double integral() const;
};

// A(nu) = Re int_0^inf dt exp(i nu t) M(t), trapezoid weight 1/2 at t = 0, on the zero-padded DFT grid.
SpectrumResult absorption_spectrum(const CorrelationResult& m, const SpectrumOptions& opts = {});

struct RegionDeviation {
    double split{0.0};
    double low{0.0};
    double high{0.0};
};

// Max |a - b| below and above the absorption-weighted mean frequency of b, each divided by the
// largest b in that region. Only the band where b exceeds band_fraction of its maximum counts.
// Grids must match.
RegionDeviation region_deviation(const SpectrumResult& a, const SpectrumResult& b, double band_fraction = 1e-2);

} // namespace hops
