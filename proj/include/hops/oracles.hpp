// oracles.hpp — Small exact reference solvers: dense Lindblad propagation, pseudo-modes, pure dephasing

#pragma once

#include <stdexcept>
#include <vector>

#include "hops/bath_model.hpp"
#include "hops/hierarchy.hpp"
#include "hops/types.hpp"

namespace hops {

class OracleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct LindbladResult {
    std::vector<double> times;
    std::vector<CMatrix> rho;
    double max_trace_error{0.0};
    double max_hermiticity_error{0.0};
};

// d rho/dt = -i[H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho}/2), classical RK4.
LindbladResult lindblad_solve(const CMatrix& H, const std::vector<CMatrix>& lindblad_ops, const CMatrix& rho0,
                              double dt, double t_max, std::size_t output_stride = 1);

struct PseudoModeConfig {
    std::vector<int> fock_cutoffs;  // starting cutoffs, one per mode; empty means 4 each
    int cutoff_step{2};
    int max_cutoff{60};
    double tolerance{1e-6};
    std::size_t max_dimension{400};  // system times Fock dimension
};

struct PseudoModeResult {
    std::vector<double> times;
    std::vector<CMatrix> rho;
    std::vector<int> fock_cutoffs;  // cutoffs of the accepted run
    double last_change{0.0};        // sup-norm change between the last two cutoff sets
};

// Every exponential term must have real g > 0; the system-mode coupling is sqrt(g) (L b^dag + L^dag b),
// mode frequency Im w and amplitude damping Re w.
PseudoModeResult pseudomode_evolve(const SystemSpec& sys, const PseudoModeConfig& cfg, const CMatrix& rho0, double dt,
                                   double t_max, std::size_t output_stride = 1);

// G(t) = int_0^t ds int_0^s du alpha(u), summed in closed form over the exponential terms.
Complex double_integral(const BathSpec& bath, double t);

// rho_01(t) / rho_01(0) for H = eps sigma_z / 2, L = sigma_z.
Complex dephasing_coherence(double epsilon, const BathSpec& bath, double t);

} // namespace hops
