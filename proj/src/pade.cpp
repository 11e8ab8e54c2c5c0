// pade.cpp — [N-1/N] Padé decomposition of coth(x/2) from tridiagonal eigenproblems

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Eigenvalues>

#include "hops/bath_model.hpp"

namespace hops {

namespace {

// Positive eigenvalues of the symmetric tridiagonal matrix with off-diagonal 1/sqrt(b_m b_{m+1}),
// b_m = 2m + 1 (Bose case), m running from `first`. They come in +/- pairs; return 2/lambda sorted.
std::vector<double> tridiagonal_poles(int size, int first) {
    std::vector<double> out;
    if (size <= 1) return out;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(size, size);
    for (int i = 0; i + 1 < size; ++i) {
        const double bm = 2.0 * (first + i) + 1.0;
        const double bn = 2.0 * (first + i + 1) + 1.0;
        T(i, i + 1) = T(i + 1, i) = 1.0 / std::sqrt(bm * bn);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("pade_coth_terms: eigen solver failed");
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const double ev = es.eigenvalues()(i);
        if (ev > 1e-300 && ev > 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff()) out.push_back(2.0 / ev);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace

double PadeScheme::coth_half(double x) const {
    double s = 2.0 / x;
    for (std::size_t k = 0; k < poles.size(); ++k) s += 4.0 * residues[k] * x / (x * x + poles[k] * poles[k]);
    return s;
}

PadeScheme pade_coth_terms(int n) {
    if (n < 0) throw std::invalid_argument("pade_coth_terms: N must be >= 0");
    PadeScheme scheme;
    if (n == 0) return scheme;

    const std::vector<double> xi = tridiagonal_poles(2 * n, 1);
    const std::vector<double> zeta = tridiagonal_poles(2 * n - 1, 2);
    if (static_cast<int>(xi.size()) != n || static_cast<int>(zeta.size()) != n - 1)
        throw std::runtime_error("pade_coth_terms: N=" + std::to_string(n) + " too large for stable pole computation");

    const double prefactor = 0.5 * n * (2.0 * (n + 1) + 1.0);
    scheme.poles = xi;
    scheme.residues.resize(n);
    for (int j = 0; j < n; ++j) {
        const double xj2 = xi[j] * xi[j];
        // Interleave the two products to keep intermediate magnitudes bounded.
        double eta = prefactor;
        for (int k = 0; k < n; ++k) {
            if (k < n - 1) eta *= (zeta[k] * zeta[k] - xj2);
            if (k != j) eta /= (xi[k] * xi[k] - xj2);
        }
        scheme.residues[j] = eta;
    }

    for (int j = 0; j < n; ++j) {
        const bool ordered = j == 0 || scheme.poles[j] > scheme.poles[j - 1];
        if (!std::isfinite(scheme.residues[j]) || scheme.residues[j] <= 0.0 || !ordered)
            throw std::runtime_error("pade_coth_terms: N=" + std::to_string(n) + " too large for stable pole computation");
    }
    return scheme;
}

} // namespace hops
