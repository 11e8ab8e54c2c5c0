// integrator.hpp — Linear and nonlinear hierarchy right-hand sides, terminator, RK4 trajectories

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hops/hierarchy.hpp"
#include "hops/noise.hpp"
#include "hops/types.hpp"

namespace hops {

enum class Variant { Linear, Nonlinear };
enum class Terminator { Rescaled, Zero };

const char* to_string(Variant v);
const char* to_string(Terminator t);

// Flat hierarchy vector: psi[pos * dim + i] is component i of the auxiliary state at position pos.
struct HopsState {
    double t{0.0};
    std::vector<Complex> psi;
    std::vector<Complex> shift;  // u_j, nonlinear only
    double log_scale{0.0};
};

// Compressed sparse operator for the small system matrices (projectors, Pauli matrices, chains).
class SparseOp {
public:
    SparseOp() = default;
    explicit SparseOp(const CMatrix& m, double drop = 0.0);

    // y += scale * A x
    void apply_add(const Complex* x, Complex* y, Complex scale = 1.0) const {
        for (const auto& e : entries_) y[e.row] += scale * e.value * x[e.col];
    }
    // dense row-major block m (ld columns) += scale * A
    void add_dense(Complex* m, std::size_t ld, Complex scale = 1.0) const {
        for (const auto& e : entries_) m[e.row * ld + e.col] += scale * e.value;
    }
    std::size_t nonzeros() const { return entries_.size(); }
    // <x|A|x>
    Complex expectation(const Complex* x) const;

private:
    struct Entry {
        std::uint32_t row;
        std::uint32_t col;
        Complex value;
    };
    std::vector<Entry> entries_;
};

// Per-mode data flattened over environments: mode j belongs to environment env.
struct ModeInfo {
    std::size_t env;
    Complex g;
    Complex w;
};

// The hierarchy generator for one (space, system) pair. Read-only after construction, so a single
// instance may be shared by concurrently integrated trajectories.
class HierarchyOperator {
public:
    HierarchyOperator(const HierarchySpace& space, const SystemSpec& sys, Terminator terminator = Terminator::Rescaled);

    const HierarchySpace& space() const { return *space_; }
    std::size_t dim() const { return dim_; }
    std::size_t environments() const { return couplings_.size(); }
    std::size_t modes() const { return modes_.size(); }
    std::size_t state_size() const { return space_->size() * dim_; }
    const std::vector<ModeInfo>& mode_info() const { return modes_; }
    Terminator terminator() const { return terminator_; }

    HopsState initial_state(const CVector& psi0) const;

    // zstar holds one value z*_{n,t} per environment.
    void linear_rhs(const HopsState& state, std::span<const Complex> zstar, std::span<Complex> dpsi) const;
    void nonlinear_rhs(const HopsState& state, std::span<const Complex> zstar, std::span<Complex> dpsi,
                       std::span<Complex> dshift) const;

    // Closure value for psi^(k + e_j) with |k| = K under the given terminator mode.
    CVector terminator_value(const HopsState& state, std::size_t pos, std::size_t j, Terminator mode) const;

    // <L_n^dagger> in the normalized psi^(0); throws std::domain_error when psi^(0) = 0.
    std::vector<Complex> coupling_expectations(std::span<const Complex> psi) const;

private:
    void rhs_impl(std::span<const Complex> psi, std::span<const Complex> zeff, std::span<const Complex> mean_ldag,
                  std::span<Complex> dpsi) const;

    struct DownEdge {
        std::uint32_t from;
        std::uint32_t env;
        Complex coef;  // k_j g_j
    };
    struct UpEdge {
        std::uint32_t from;
        std::uint32_t env;
    };
    struct ClosureEdge {
        std::uint32_t from;     // position of k + e_j - e_i
        std::uint32_t env_out;  // n(j): operator L^dagger applied outside
        std::uint32_t env_in;   // n(i): operator L applied inside
        Complex coef;           // (k + e_j)_i g_i / ((k + e_j) . w)
    };

    const HierarchySpace* space_;
    std::size_t dim_;
    Terminator terminator_;
    std::vector<ModeInfo> modes_;
    std::vector<SparseOp> couplings_;
    std::vector<SparseOp> couplings_adj_;
    SparseOp minus_iH_;
    std::vector<Complex> kw_;  // -(k . w) per position
    std::vector<std::size_t> down_start_, up_start_, closure_start_;
    std::vector<DownEdge> down_;
    std::vector<UpEdge> up_;
    std::vector<ClosureEdge> closure_;
};

struct TrajectoryOptions {
    double dt{0.01};
    double t_max{1.0};
    Variant variant{Variant::Nonlinear};
    std::size_t output_stride{1};
    // Nonlinear variant rescales when |psi^(0)| leaves [rescale_low, rescale_high].
    double rescale_low{1e-2};
    double rescale_high{1e2};
    // Linear variant aborts when any amplitude exceeds this.
    double overflow_limit{1e150};
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CVector> psi0;  // raw psi^(0); for the nonlinear variant only its direction is meaningful
    double log_scale{0.0};
    std::vector<Complex> final_shift;  // u_j at the last completed step
    bool aborted{false};
    std::size_t abort_step{0};
    std::string diagnostic;
};

std::size_t step_count(const TrajectoryOptions& opts);

// noise: one path per environment, or empty for z* = 0.
Trajectory integrate_trajectory(const HierarchyOperator& op, std::span<const NoisePath> noise, const CVector& psi0,
                                const TrajectoryOptions& opts);

} // namespace hops
