// integrator.cpp — Hierarchy generator assembly and fixed-step RK4 propagation

#include "hops/integrator.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hops {

const char* to_string(Variant v) { return v == Variant::Linear ? "linear" : "nonlinear"; }
const char* to_string(Terminator t) { return t == Terminator::Rescaled ? "rescaled" : "zero"; }

SparseOp::SparseOp(const CMatrix& m, double drop) {
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            if (std::abs(m(r, c)) > drop)
                entries_.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(c), m(r, c)});
}

Complex SparseOp::expectation(const Complex* x) const {
    Complex s{0.0, 0.0};
    for (const auto& e : entries_) s += std::conj(x[e.row]) * e.value * x[e.col];
    return s;
}

HierarchyOperator::HierarchyOperator(const HierarchySpace& space, const SystemSpec& sys, Terminator terminator)
    : space_(&space), dim_(static_cast<std::size_t>(sys.dim())), terminator_(terminator) {
    sys.validate();
    for (std::size_t n = 0; n < sys.couplings.size(); ++n)
        for (const auto& t : sys.couplings[n].bath.terms) modes_.push_back({n, t.g, t.w});
    if (modes_.size() != space.modes())
        throw std::invalid_argument("HierarchyOperator: space has " + std::to_string(space.modes()) +
                                    " modes but the system defines " + std::to_string(modes_.size()));

    minus_iH_ = SparseOp(CMatrix(-kI * sys.H));
    for (const auto& c : sys.couplings) {
        couplings_.emplace_back(c.L);
        couplings_adj_.emplace_back(CMatrix(c.L.adjoint()));
    }

    const std::size_t M = modes_.size();
    const int K = space.order();
    const std::size_t P = space.size();
    kw_.resize(P);
    down_start_.assign(P + 1, 0);
    up_start_.assign(P + 1, 0);
    closure_start_.assign(P + 1, 0);
    std::vector<int> kp(M);
    for (std::size_t p = 0; p < P; ++p) {
        const auto k = space.index(p);
        Complex kw{0.0, 0.0};
        for (std::size_t j = 0; j < M; ++j) kw += static_cast<double>(k[j]) * modes_[j].w;
        kw_[p] = -kw;

        down_start_[p] = down_.size();
        for (std::size_t j = 0; j < M; ++j) {
            if (k[j] == 0) continue;
            down_.push_back({space.down(p, j), static_cast<std::uint32_t>(modes_[j].env),
                             static_cast<double>(k[j]) * modes_[j].g});
        }
        up_start_[p] = up_.size();
        closure_start_[p] = closure_.size();
        if (space.level(p) < K) {
            for (std::size_t j = 0; j < M; ++j) up_.push_back({space.up(p, j), static_cast<std::uint32_t>(modes_[j].env)});
        } else if (terminator == Terminator::Rescaled) {
            for (std::size_t j = 0; j < M; ++j) {
                for (std::size_t i = 0; i < M; ++i) kp[i] = k[i];
                ++kp[j];
                Complex denom{0.0, 0.0};
                for (std::size_t i = 0; i < M; ++i) denom += static_cast<double>(kp[i]) * modes_[i].w;
                if (std::abs(denom) == 0.0) throw std::logic_error("HierarchyOperator: (k + e_j) . w = 0");
                for (std::size_t i = 0; i < M; ++i) {
                    if (kp[i] == 0) continue;
                    --kp[i];
                    const auto from = space.position(kp);
                    ++kp[i];
                    closure_.push_back({from, static_cast<std::uint32_t>(modes_[j].env),
                                        static_cast<std::uint32_t>(modes_[i].env),
                                        static_cast<double>(kp[i]) * modes_[i].g / denom});
                }
            }
        }
    }
    down_start_[P] = down_.size();
    up_start_[P] = up_.size();
    closure_start_[P] = closure_.size();
}

HopsState HierarchyOperator::initial_state(const CVector& psi0) const {
    if (static_cast<std::size_t>(psi0.size()) != dim_) throw std::invalid_argument("initial_state: wrong dimension");
    HopsState s;
    s.psi.assign(state_size(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < dim_; ++i) s.psi[i] = psi0(static_cast<Eigen::Index>(i));
    s.shift.assign(modes_.size(), Complex(0.0, 0.0));
    return s;
}

std::vector<Complex> HierarchyOperator::coupling_expectations(std::span<const Complex> psi) const {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) norm2 += std::norm(psi[i]);
    if (!(norm2 > 0.0) || !std::isfinite(norm2))
        throw std::domain_error("nonlinear_rhs: |psi^(0)| is zero or non-finite; normalized expectation undefined");
    std::vector<Complex> out(couplings_adj_.size());
    for (std::size_t n = 0; n < out.size(); ++n) out[n] = couplings_adj_[n].expectation(psi.data()) / norm2;
    return out;
}

void HierarchyOperator::rhs_impl(std::span<const Complex> psi, std::span<const Complex> zeff,
                                 std::span<const Complex> mean_ldag, std::span<Complex> dpsi) const {
    const std::size_t d = dim_;
    const std::size_t n_env = couplings_.size();
    thread_local std::vector<Complex> acc_down, acc_up, local;
    acc_down.assign(n_env * d, Complex(0.0, 0.0));
    acc_up.assign(n_env * d, Complex(0.0, 0.0));

    // -iH + sum_n z_n L_n as a dense row-major block, shared by every auxiliary state
    local.assign(d * d, Complex(0.0, 0.0));
    minus_iH_.add_dense(local.data(), d);
    for (std::size_t n = 0; n < n_env; ++n)
        if (zeff[n] != Complex(0.0, 0.0)) couplings_[n].add_dense(local.data(), d, zeff[n]);

    const std::size_t P = space_->size();
    for (std::size_t p = 0; p < P; ++p) {
        const Complex* x = psi.data() + p * d;
        Complex* y = dpsi.data() + p * d;
        const Complex kw = kw_[p];
        for (std::size_t i = 0; i < d; ++i) {
            const Complex* row = local.data() + i * d;
            Complex v = kw * x[i];
            for (std::size_t j = 0; j < d; ++j) v += row[j] * x[j];
            y[i] = v;
        }

        const std::size_t d0 = down_start_[p], d1 = down_start_[p + 1];
        if (d0 != d1) {
            std::fill(acc_down.begin(), acc_down.end(), Complex(0.0, 0.0));
            for (std::size_t e = d0; e < d1; ++e) {
                const auto& edge = down_[e];
                const Complex* src = psi.data() + static_cast<std::size_t>(edge.from) * d;
                Complex* acc = acc_down.data() + edge.env * d;
                for (std::size_t i = 0; i < d; ++i) acc[i] += edge.coef * src[i];
            }
            for (std::size_t n = 0; n < n_env; ++n) couplings_[n].apply_add(acc_down.data() + n * d, y);
        }

        const std::size_t u0 = up_start_[p], u1 = up_start_[p + 1];
        const std::size_t c0 = closure_start_[p], c1 = closure_start_[p + 1];
        if (u0 != u1 || c0 != c1) {
            std::fill(acc_up.begin(), acc_up.end(), Complex(0.0, 0.0));
            for (std::size_t e = u0; e < u1; ++e) {
                const auto& edge = up_[e];
                const Complex* src = psi.data() + static_cast<std::size_t>(edge.from) * d;
                Complex* acc = acc_up.data() + edge.env * d;
                for (std::size_t i = 0; i < d; ++i) acc[i] += src[i];
            }
            for (std::size_t e = c0; e < c1; ++e) {
                const auto& edge = closure_[e];
                const Complex* src = psi.data() + static_cast<std::size_t>(edge.from) * d;
                couplings_[edge.env_in].apply_add(src, acc_up.data() + edge.env_out * d, edge.coef);
            }
            for (std::size_t n = 0; n < n_env; ++n) {
                const Complex* acc = acc_up.data() + n * d;
                couplings_adj_[n].apply_add(acc, y, -1.0);
                if (!mean_ldag.empty())
                    for (std::size_t i = 0; i < d; ++i) y[i] += mean_ldag[n] * acc[i];
            }
        }
    }
}

void HierarchyOperator::linear_rhs(const HopsState& state, std::span<const Complex> zstar,
                                   std::span<Complex> dpsi) const {
    if (zstar.size() != couplings_.size()) throw std::invalid_argument("linear_rhs: one noise value per environment");
    rhs_impl(state.psi, zstar, {}, dpsi);
}

void HierarchyOperator::nonlinear_rhs(const HopsState& state, std::span<const Complex> zstar, std::span<Complex> dpsi,
                                      std::span<Complex> dshift) const {
    if (zstar.size() != couplings_.size())
        throw std::invalid_argument("nonlinear_rhs: one noise value per environment");
    const std::vector<Complex> mean = coupling_expectations(state.psi);
    thread_local std::vector<Complex> zeff;
    zeff.assign(zstar.begin(), zstar.end());
    for (std::size_t j = 0; j < modes_.size(); ++j) zeff[modes_[j].env] += state.shift[j];
    rhs_impl(state.psi, zeff, mean, dpsi);
    for (std::size_t j = 0; j < modes_.size(); ++j)
        dshift[j] = -std::conj(modes_[j].w) * state.shift[j] + std::conj(modes_[j].g) * mean[modes_[j].env];
}

CVector HierarchyOperator::terminator_value(const HopsState& state, std::size_t pos, std::size_t j,
                                            Terminator mode) const {
    if (space_->level(pos) != space_->order())
        throw std::invalid_argument("terminator_value: position is not on the top layer |k| = K");
    CVector out = CVector::Zero(static_cast<Eigen::Index>(dim_));
    if (mode == Terminator::Zero) return out;
    const auto k = space_->index(pos);
    const std::size_t M = modes_.size();
    std::vector<int> kp(k.begin(), k.end());
    ++kp[j];
    Complex denom{0.0, 0.0};
    for (std::size_t i = 0; i < M; ++i) denom += static_cast<double>(kp[i]) * modes_[i].w;
    for (std::size_t i = 0; i < M; ++i) {
        if (kp[i] == 0) continue;
        --kp[i];
        const auto from = space_->position(kp);
        ++kp[i];
        const Complex coef = static_cast<double>(kp[i]) * modes_[i].g / denom;
        couplings_[modes_[i].env].apply_add(state.psi.data() + static_cast<std::size_t>(from) * dim_, out.data(), coef);
    }
    return out;
}

std::size_t step_count(const TrajectoryOptions& opts) {
    if (!(opts.dt > 0.0) || !(opts.t_max >= opts.dt))
        throw std::invalid_argument("integrate_trajectory: need dt > 0 and t_max >= dt");
    const double ratio = opts.t_max / opts.dt;
    const double n = std::round(ratio);
    if (std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio))
        throw std::invalid_argument("integrate_trajectory: t_max must be an integer multiple of dt");
    return static_cast<std::size_t>(n);
}

namespace {

struct Workspace {
    HopsState stage;
    std::vector<Complex> k[4];
    std::vector<Complex> s[4];
};

} // namespace

Trajectory integrate_trajectory(const HierarchyOperator& op, std::span<const NoisePath> noise, const CVector& psi0,
                                const TrajectoryOptions& opts) {
    const std::size_t n_steps = step_count(opts);
    const std::size_t n_env = op.environments();
    if (!noise.empty()) {
        if (noise.size() != n_env) throw std::invalid_argument("integrate_trajectory: need one noise path per environment");
        for (const auto& p : noise)
            if (p.samples.size() < 2 * n_steps + 1 || std::abs(p.dt - opts.dt) > 1e-12 * opts.dt)
                throw std::invalid_argument("integrate_trajectory: noise grid does not cover [0, t_max] at dt/2");
    }
    const std::size_t stride = std::max<std::size_t>(1, opts.output_stride);
    const bool nonlinear = opts.variant == Variant::Nonlinear;
    const std::size_t d = op.dim();
    const std::size_t n_state = op.state_size();
    const std::size_t n_modes = op.modes();

    Trajectory traj;
    HopsState state = op.initial_state(psi0);
    Workspace ws;
    ws.stage = state;
    for (auto& v : ws.k) v.assign(n_state, Complex(0.0, 0.0));
    for (auto& v : ws.s) v.assign(n_modes, Complex(0.0, 0.0));
    std::vector<Complex> z(n_env, Complex(0.0, 0.0));

    auto record = [&]() {
        traj.times.push_back(state.t);
        traj.psi0.emplace_back(Eigen::Map<const CVector>(state.psi.data(), static_cast<Eigen::Index>(d)));
    };
    auto noise_at = [&](std::size_t step, int offset) {
        for (std::size_t n = 0; n < n_env; ++n) z[n] = noise.empty() ? Complex(0.0, 0.0) : noise[n].at_step(step, offset);
    };
    auto eval = [&](const HopsState& s, int stage_index) {
        if (nonlinear)
            op.nonlinear_rhs(s, z, ws.k[stage_index], ws.s[stage_index]);
        else
            op.linear_rhs(s, z, ws.k[stage_index]);
    };
    auto make_stage = [&](int from, double h) {
        for (std::size_t i = 0; i < n_state; ++i) ws.stage.psi[i] = state.psi[i] + h * ws.k[from][i];
        if (nonlinear)
            for (std::size_t j = 0; j < n_modes; ++j) ws.stage.shift[j] = state.shift[j] + h * ws.s[from][j];
    };
    auto abort_with = [&](std::size_t step, const std::string& why) {
        traj.aborted = true;
        traj.abort_step = step;
        std::ostringstream os;
        os << why << " at step " << step << " (t = " << step * opts.dt << ")";
        traj.diagnostic = os.str();
        traj.log_scale = state.log_scale;
        traj.final_shift = state.shift;
        return traj;
    };

    record();
    const double dt = opts.dt;
    for (std::size_t step = 0; step < n_steps; ++step) {
        try {
            noise_at(step, 0);
            eval(state, 0);
            noise_at(step, 1);
            make_stage(0, 0.5 * dt);
            eval(ws.stage, 1);
            make_stage(1, 0.5 * dt);
            eval(ws.stage, 2);
            noise_at(step, 2);
            make_stage(2, dt);
            eval(ws.stage, 3);
        } catch (const std::domain_error& e) {
            return abort_with(step, e.what());
        }

        double max_abs2 = 0.0;
        for (std::size_t i = 0; i < n_state; ++i) {
            state.psi[i] += dt / 6.0 * (ws.k[0][i] + 2.0 * ws.k[1][i] + 2.0 * ws.k[2][i] + ws.k[3][i]);
            max_abs2 = std::max(max_abs2, std::norm(state.psi[i]));
        }
        if (nonlinear)
            for (std::size_t j = 0; j < n_modes; ++j)
                state.shift[j] += dt / 6.0 * (ws.s[0][j] + 2.0 * ws.s[1][j] + 2.0 * ws.s[2][j] + ws.s[3][j]);
        state.t = static_cast<double>(step + 1) * dt;

        bool finite = std::isfinite(max_abs2);
        for (const auto& u : state.shift) finite = finite && std::isfinite(u.real()) && std::isfinite(u.imag());
        if (!finite) return abort_with(step + 1, "non-finite hierarchy amplitudes");

        double norm0 = 0.0;
        for (std::size_t i = 0; i < d; ++i) norm0 += std::norm(state.psi[i]);
        norm0 = std::sqrt(norm0);
        if (nonlinear) {
            if (!(norm0 > 0.0)) return abort_with(step + 1, "|psi^(0)| vanished");
            if (norm0 < opts.rescale_low || norm0 > opts.rescale_high) {
                const double inv = 1.0 / norm0;
                for (auto& v : state.psi) v *= inv;
                state.log_scale += std::log(norm0);
            }
        } else if (std::sqrt(max_abs2) > opts.overflow_limit) {
            return abort_with(step + 1, "linear hierarchy overflow");
        }

        if ((step + 1) % stride == 0) record();
    }
    traj.log_scale = state.log_scale;
    traj.final_shift = state.shift;
    return traj;
}

} // namespace hops
