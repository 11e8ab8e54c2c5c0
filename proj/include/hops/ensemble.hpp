// ensemble.hpp — Monte Carlo reconstruction of the reduced density matrix from HOPS trajectories

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hops/integrator.hpp"
#include "hops/noise.hpp"
#include "hops/types.hpp"

namespace hops {

// Running sums of |psi><psi| and of |rho_ij|^2 per time point.
class EnsembleAccumulator {
public:
    EnsembleAccumulator() = default;
    EnsembleAccumulator(std::vector<double> times, Eigen::Index dim);

    // Nonlinear trajectories contribute normalized projectors, linear ones raw projectors.
    void add(const Trajectory& traj, Variant variant);
    void add_states(const std::vector<CVector>& states, bool normalize);

    std::size_t count() const { return n_; }
    bool empty() const { return times_.empty(); }
    Eigen::Index dim() const { return dim_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<CMatrix>& sum_rho() const { return sum_rho_; }
    const std::vector<RMatrix>& sum_sq() const { return sum_sq_; }

    std::vector<CMatrix> mean() const;

    friend EnsembleAccumulator merge(const EnsembleAccumulator& a, const EnsembleAccumulator& b);

private:
    std::size_t n_{0};
    Eigen::Index dim_{0};
    std::vector<double> times_;
    std::vector<CMatrix> sum_rho_;
    std::vector<RMatrix> sum_sq_;
};

// Entrywise sums. An empty (default-constructed) accumulator is the identity.
EnsembleAccumulator merge(const EnsembleAccumulator& a, const EnsembleAccumulator& b);

// Sample standard deviation of each entry estimator divided by sqrt(n). Requires n >= 2.
std::vector<RMatrix> standard_error(const EnsembleAccumulator& acc);

struct RunConfig {
    std::size_t n_traj{1000};
    std::uint64_t seed{0};
    Variant variant{Variant::Nonlinear};
    double dt{0.01};
    double t_max{1.0};
    std::size_t output_stride{1};
    unsigned workers{1};
    // Aborted trajectories are dropped with a warning while their fraction stays below this.
    double abort_tolerance{0.01};
    // Trajectories per reduction block; part of the summation-order contract, not a tuning knob only.
    std::size_t block_size{32};
    NoiseOptions noise{};
};

struct DensityTrajectory {
    std::vector<double> times;
    std::vector<CMatrix> rho;
    std::vector<RMatrix> std_error;  // empty when fewer than two trajectories were kept
    std::size_t n_used{0};
    std::size_t n_aborted{0};
    std::vector<std::string> warnings;
};

class EnsembleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// True while aborted / total stays strictly below tolerance.
bool abort_fraction_acceptable(std::size_t aborted, std::size_t total, double tolerance);

// Noise for environment n of trajectory id is drawn from stream n of (seed, id).
DensityTrajectory run_ensemble(const HierarchyOperator& op, const SystemSpec& sys, const CVector& psi0,
                               const RunConfig& cfg);

// Same, returning the raw accumulator (used for scaling checks and custom reductions).
EnsembleAccumulator accumulate_ensemble(const HierarchyOperator& op, const SystemSpec& sys, const CVector& psi0,
                                        const RunConfig& cfg, std::size_t* aborted = nullptr,
                                        std::vector<std::string>* diagnostics = nullptr);

} // namespace hops
