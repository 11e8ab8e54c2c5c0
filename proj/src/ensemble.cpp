// ensemble.cpp — Blocked, order-fixed parallel accumulation of trajectory projectors

#include "hops/ensemble.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

namespace hops {

EnsembleAccumulator::EnsembleAccumulator(std::vector<double> times, Eigen::Index dim)
    : dim_(dim), times_(std::move(times)) {
    sum_rho_.assign(times_.size(), CMatrix::Zero(dim, dim));
    sum_sq_.assign(times_.size(), RMatrix::Zero(dim, dim));
}

void EnsembleAccumulator::add_states(const std::vector<CVector>& states, bool normalize) {
    if (states.size() != times_.size()) throw std::invalid_argument("EnsembleAccumulator: trajectory grid mismatch");
    for (std::size_t t = 0; t < states.size(); ++t) {
        const CVector& raw = states[t];
        if (raw.size() != dim_) throw std::invalid_argument("EnsembleAccumulator: state dimension mismatch");
        CVector psi = raw;
        if (normalize) psi /= raw.norm();
        CMatrix& s = sum_rho_[t];
        RMatrix& q = sum_sq_[t];
        // upper triangle, mirrored, so the sum stays exactly Hermitian
        for (Eigen::Index j = 0; j < dim_; ++j) {
            for (Eigen::Index i = 0; i <= j; ++i) {
                const Complex v = psi(i) * std::conj(psi(j));
                s(i, j) += v;
                q(i, j) += std::norm(v);
            }
        }
        for (Eigen::Index j = 0; j < dim_; ++j) {
            s(j, j) = Complex(s(j, j).real(), 0.0);
            for (Eigen::Index i = j + 1; i < dim_; ++i) {
                s(i, j) = std::conj(s(j, i));
                q(i, j) = q(j, i);
            }
        }
    }
    ++n_;
}

void EnsembleAccumulator::add(const Trajectory& traj, Variant variant) {
    add_states(traj.psi0, variant == Variant::Nonlinear);
}

std::vector<CMatrix> EnsembleAccumulator::mean() const {
    if (n_ == 0) throw std::invalid_argument("EnsembleAccumulator::mean: no trajectories");
    std::vector<CMatrix> out(sum_rho_.size());
    for (std::size_t t = 0; t < out.size(); ++t) out[t] = sum_rho_[t] / static_cast<double>(n_);
    return out;
}

EnsembleAccumulator merge(const EnsembleAccumulator& a, const EnsembleAccumulator& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.times_ != b.times_ || a.dim_ != b.dim_) throw std::invalid_argument("merge: grid or dimension mismatch");
    EnsembleAccumulator out = a;
    for (std::size_t t = 0; t < out.times_.size(); ++t) {
        out.sum_rho_[t] += b.sum_rho_[t];
        out.sum_sq_[t] += b.sum_sq_[t];
    }
    out.n_ += b.n_;
    return out;
}

std::vector<RMatrix> standard_error(const EnsembleAccumulator& acc) {
    if (acc.count() < 2) throw std::invalid_argument("standard_error: need at least two trajectories");
    const double n = static_cast<double>(acc.count());
    std::vector<RMatrix> out(acc.times().size());
    for (std::size_t t = 0; t < out.size(); ++t) {
        const CMatrix mean = acc.sum_rho()[t] / n;
        RMatrix var = (acc.sum_sq()[t] - n * mean.cwiseAbs2()) / (n - 1.0);
        out[t] = (var.cwiseMax(0.0) / n).cwiseSqrt();
    }
    return out;
}

bool abort_fraction_acceptable(std::size_t aborted, std::size_t total, double tolerance) {
    if (aborted == 0) return true;
    return static_cast<double>(aborted) / static_cast<double>(total) < tolerance;
}

namespace {

struct BlockResult {
    EnsembleAccumulator acc;
    std::vector<std::pair<std::size_t, std::string>> aborts;
};

} // namespace

EnsembleAccumulator accumulate_ensemble(const HierarchyOperator& op, const SystemSpec& sys, const CVector& psi0,
                                        const RunConfig& cfg, std::size_t* aborted,
                                        std::vector<std::string>* diagnostics) {
    if (cfg.n_traj < 1) throw std::invalid_argument("run_ensemble: n_traj must be >= 1");
    if (cfg.block_size < 1) throw std::invalid_argument("run_ensemble: block_size must be >= 1");
    TrajectoryOptions topts;
    topts.dt = cfg.dt;
    topts.t_max = cfg.t_max;
    topts.variant = cfg.variant;
    topts.output_stride = cfg.output_stride;
    const std::size_t n_steps = step_count(topts);
    const std::size_t stride = std::max<std::size_t>(1, cfg.output_stride);
    std::vector<double> times;
    for (std::size_t s = 0; s <= n_steps; s += stride) times.push_back(static_cast<double>(s) * cfg.dt);

    std::vector<NoiseSynthesizer> synth;
    for (const auto& c : sys.couplings) synth.emplace_back(c.bath, cfg.t_max, cfg.dt, cfg.noise);

    const std::size_t n_blocks = (cfg.n_traj + cfg.block_size - 1) / cfg.block_size;
    std::vector<std::optional<BlockResult>> blocks(n_blocks);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        try {
            std::vector<NoisePath> noise(synth.size());
            for (std::size_t b = next++; b < n_blocks; b = next++) {
                BlockResult res{EnsembleAccumulator(times, sys.dim()), {}};
                const std::size_t first = b * cfg.block_size;
                const std::size_t last = std::min(cfg.n_traj, first + cfg.block_size);
                for (std::size_t id = first; id < last; ++id) {
                    for (std::size_t n = 0; n < synth.size(); ++n) noise[n] = synth[n].sample(cfg.seed, id, n);
                    Trajectory traj = integrate_trajectory(op, noise, psi0, topts);
                    if (traj.aborted) {
                        res.aborts.emplace_back(id, traj.diagnostic);
                        continue;
                    }
                    res.acc.add(traj, cfg.variant);
                }
                blocks[b] = std::move(res);
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = n_blocks;
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(cfg.workers, static_cast<unsigned>(n_blocks)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    EnsembleAccumulator total;
    std::size_t n_aborted = 0;
    for (auto& b : blocks) {
        total = merge(total, b->acc);
        n_aborted += b->aborts.size();
        if (diagnostics)
            for (const auto& [id, why] : b->aborts)
                diagnostics->push_back("trajectory " + std::to_string(id) + ": " + why);
    }
    if (aborted) *aborted = n_aborted;

    const double frac = static_cast<double>(n_aborted) / static_cast<double>(cfg.n_traj);
    if (!abort_fraction_acceptable(n_aborted, cfg.n_traj, cfg.abort_tolerance)) {
        std::ostringstream os;
        os << "run_ensemble: " << n_aborted << " of " << cfg.n_traj << " trajectories aborted ("
           << 100.0 * frac << "%), at or above the tolerance of " << 100.0 * cfg.abort_tolerance << "%";
        if (diagnostics && !diagnostics->empty()) os << "; first: " << diagnostics->front();
        throw EnsembleError(os.str());
    }
    return total;
}

DensityTrajectory run_ensemble(const HierarchyOperator& op, const SystemSpec& sys, const CVector& psi0,
                               const RunConfig& cfg) {
    DensityTrajectory out;
    std::vector<std::string> diagnostics;
    const EnsembleAccumulator acc = accumulate_ensemble(op, sys, psi0, cfg, &out.n_aborted, &diagnostics);
    if (acc.count() == 0) throw EnsembleError("run_ensemble: no trajectories survived");
    out.times = acc.times();
    out.rho = acc.mean();
    out.n_used = acc.count();
    if (acc.count() >= 2) out.std_error = standard_error(acc);
    if (out.n_aborted > 0) {
        out.warnings.push_back(std::to_string(out.n_aborted) + " trajectories aborted and excluded");
        for (const auto& d : diagnostics) out.warnings.push_back(d);
    }
    return out;
}

} // namespace hops
