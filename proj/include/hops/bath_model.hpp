// bath_model.hpp — Spectral densities, bath correlation functions and their
// expansion into sums of complex exponentials (finite temperature via Padé).
//
// Conventions (hbar = k_B = 1):
//   alpha(tau) = int_0^inf dw J(w) [coth(w / 2T) cos(w tau) - i sin(w tau)]
//   alpha(tau) ~ sum_j g_j exp(-w_j tau),   tau >= 0
//   S(w)       = 2 sum_j Re[g_j / (gamma_j + i (Omega_j - w))]   (Fourier transform of alpha)

#pragma once

#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "hops/types.hpp"

namespace hops {

// One exponential term g exp(-w tau) of the correlation function, w = gamma + i Omega.
struct ExpTerm {
    Complex g{0.0, 0.0};
    Complex w{1.0, 0.0};
};

// Antisymmetrized Lorentzian pair
//   J(w) = (p / pi) [gamma / ((w - Omega)^2 + gamma^2) - gamma / ((w + Omega)^2 + gamma^2)]
// so that int_0^inf J dw ~ p for Omega >> gamma.
struct LorentzianPeak {
    double weight{0.0};
    double center{0.0};
    double width{1.0};
};

struct LorentzianSum {
    std::vector<LorentzianPeak> peaks;
};

// J(w) = (2 lambda / pi) gamma_c w / (w^2 + gamma_c^2), normalized so that int_0^inf J(w)/w dw = lambda.
struct DrudeLorentz {
    double reorganization{0.0};
    double cutoff{1.0};
};

// Taken as the definition of alpha(tau); no spectral density behind it.
struct DirectExpansion {
    std::vector<ExpTerm> terms;
};

using SpectralDensity = std::variant<LorentzianSum, DrudeLorentz, DirectExpansion>;

std::string variant_name(const SpectralDensity& J);

// J(w) for the parametric forms (odd continuation for w < 0). Throws for DirectExpansion.
double spectral_density(const SpectralDensity& J, double omega);

struct BathSpec {
    std::vector<ExpTerm> terms;
    double temperature{0.0};
    // Max deviation found by the self-validation of expand_correlation, relative to |alpha(tau_min)|.
    double validation_error{0.0};

    Complex alpha0() const;
    Complex correlation(double tau) const;
    // Two-sided power spectrum of the exponential sum.
    double spectrum(double omega) const;
};

// coth(x/2) ~ 2/x + sum_k 4 eta_k x / (x^2 + xi_k^2)
struct PadeScheme {
    std::vector<double> poles;     // xi_k, strictly increasing
    std::vector<double> residues;  // eta_k > 0

    std::size_t size() const { return poles.size(); }
    double coth_half(double x) const;
};

class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double achieved)
        : std::runtime_error(what), achieved_(achieved) {}
    double achieved_tolerance() const { return achieved_; }

private:
    double achieved_;
};

class ExpansionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
    double rel_tol{1e-10};
    unsigned max_depth{15};
    // Accept the result if the estimated error stays below this (relative to the integral's L1 norm).
    double accept_tol{1e-7};
};

Complex correlation_function(const SpectralDensity& J, double temperature, double tau,
                             const QuadratureOptions& opts = {});

PadeScheme pade_coth_terms(int n);

struct ExpansionOptions {
    double tau_min{0.0};
    double tau_max{10.0};
    int grid_points{101};
    double tolerance{1e-5};
};

BathSpec expand_correlation(const SpectralDensity& J, double temperature, const PadeScheme& scheme,
                            const ExpansionOptions& opts);

// Max_tau |sum - quadrature| / |quadrature(tau_min)| on a uniform grid.
double expansion_error(const SpectralDensity& J, double temperature, const BathSpec& bath,
                       const ExpansionOptions& opts);

double reorganization_energy(const SpectralDensity& J);

} // namespace hops
