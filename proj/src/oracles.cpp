// oracles.cpp — Reference solutions used to validate the hierarchy

#include "hops/oracles.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

namespace hops {

namespace {

using SparseC = Eigen::SparseMatrix<Complex>;

std::size_t steps_for(double dt, double t_max) {
    if (!(dt > 0.0) || !(t_max >= dt)) throw std::invalid_argument("oracle: need dt > 0 and t_max >= dt");
    const double r = t_max / dt;
    const double n = std::round(r);
    if (std::abs(r - n) > 1e-9 * std::max(1.0, r))
        throw std::invalid_argument("oracle: t_max must be an integer multiple of dt");
    return static_cast<std::size_t>(n);
}

// RK4 on d rho = -i Heff rho + i rho Heff^dag + sum L rho L^dag, Heff = H - (i/2) sum L^dag L.
void propagate(const SparseC& H, const std::vector<SparseC>& ops, const CMatrix& rho0, double dt, double t_max,
               std::size_t stride, const std::function<void(double, const CMatrix&)>& emit, double& trace_err,
               double& herm_err) {
    const std::size_t n_steps = steps_for(dt, t_max);
    stride = std::max<std::size_t>(1, stride);
    SparseC heff = H;
    for (const auto& L : ops) heff -= Complex(0.0, 0.5) * SparseC(SparseC(L.adjoint()) * L);
    heff.makeCompressed();
    const SparseC minus_i_heff = Complex(0.0, -1.0) * heff;

    auto rhs = [&](const CMatrix& rho) {
        const CMatrix a = minus_i_heff * rho;
        CMatrix out = a + a.adjoint();  // rho Hermitian: i rho Heff^dag = (-i Heff rho)^dag
        for (std::size_t k = 0; k < ops.size(); ++k) {
            const CMatrix lr = ops[k] * rho;
            out.noalias() += (ops[k] * CMatrix(lr.adjoint())).adjoint();
        }
        return out;
    };

    CMatrix rho = rho0;
    const Complex tr0 = rho0.trace();
    trace_err = 0.0;
    herm_err = 0.0;
    emit(0.0, rho);
    for (std::size_t s = 0; s < n_steps; ++s) {
        const CMatrix k1 = rhs(rho);
        const CMatrix k2 = rhs(rho + 0.5 * dt * k1);
        const CMatrix k3 = rhs(rho + 0.5 * dt * k2);
        const CMatrix k4 = rhs(rho + dt * k3);
        rho += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!rho.allFinite()) {
            std::ostringstream os;
            os << "lindblad_solve: non-finite density matrix at step " << s + 1 << "; reduce dt";
            throw OracleError(os.str());
        }
        trace_err = std::max(trace_err, std::abs(rho.trace() - tr0));
        herm_err = std::max(herm_err, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
        if ((s + 1) % stride == 0) emit(static_cast<double>(s + 1) * dt, rho);
    }
}

SparseC to_sparse(const CMatrix& m) {
    SparseC s = m.sparseView();
    s.makeCompressed();
    return s;
}

SparseC identity(Eigen::Index n) {
    SparseC id(n, n);
    id.setIdentity();
    return id;
}

SparseC annihilation(int n) {
    SparseC b(n, n);
    for (int k = 1; k < n; ++k) b.insert(k - 1, k) = std::sqrt(static_cast<double>(k));
    b.makeCompressed();
    return b;
}

struct ModeRef {
    std::size_t env;
    double g;
    double gamma;
    double omega;
};

PseudoModeResult run_pseudomodes(const SystemSpec& sys, const std::vector<ModeRef>& modes,
                                 const std::vector<int>& cutoffs, const CMatrix& rho0, double dt, double t_max,
                                 std::size_t stride) {
    const Eigen::Index d = sys.dim();
    Eigen::Index F = 1;
    for (int c : cutoffs) F *= c;

    // operator acting on slot `which` (0 = system, j + 1 = mode j) of the tensor product
    auto embed = [&](const SparseC& op, std::size_t which) {
        SparseC out = which == 0 ? op : identity(d);
        for (std::size_t j = 0; j < modes.size(); ++j) {
            const SparseC factor = (j + 1 == which) ? op : identity(cutoffs[j]);
            out = SparseC(Eigen::kroneckerProduct(out, factor));
        }
        return out;
    };

    SparseC H = embed(to_sparse(sys.H), 0);
    std::vector<SparseC> ops;
    for (std::size_t j = 0; j < modes.size(); ++j) {
        const SparseC b = embed(annihilation(cutoffs[j]), j + 1);
        const SparseC bd = b.adjoint();
        const SparseC L = embed(to_sparse(sys.couplings[modes[j].env].L), 0);
        const SparseC Ld = L.adjoint();
        H += modes[j].omega * SparseC(bd * b);
        H += std::sqrt(modes[j].g) * SparseC(SparseC(L * bd) + SparseC(Ld * b));
        ops.push_back(std::sqrt(2.0 * modes[j].gamma) * b);
    }

    CMatrix vac = CMatrix::Zero(F, F);
    vac(0, 0) = 1.0;
    const CMatrix full0 = Eigen::kroneckerProduct(rho0, vac);

    PseudoModeResult out;
    out.fock_cutoffs = cutoffs;
    auto emit = [&](double t, const CMatrix& rho) {
        CMatrix red = CMatrix::Zero(d, d);
        for (Eigen::Index a = 0; a < d; ++a)
            for (Eigen::Index b = 0; b < d; ++b)
                for (Eigen::Index m = 0; m < F; ++m) red(a, b) += rho(a * F + m, b * F + m);
        out.times.push_back(t);
        out.rho.push_back(red);
    };
    double tr = 0.0, he = 0.0;
    propagate(H, ops, full0, dt, t_max, stride, emit, tr, he);
    return out;
}

} // namespace

LindbladResult lindblad_solve(const CMatrix& H, const std::vector<CMatrix>& lindblad_ops, const CMatrix& rho0,
                              double dt, double t_max, std::size_t output_stride) {
    if (H.rows() != H.cols() || rho0.rows() != H.rows() || rho0.cols() != H.cols())
        throw std::invalid_argument("lindblad_solve: dimension mismatch");
    if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, rho0.cwiseAbs().maxCoeff()))
        throw std::invalid_argument("lindblad_solve: rho0 must be Hermitian");
    std::vector<SparseC> ops;
    for (const auto& L : lindblad_ops) {
        if (L.rows() != H.rows() || L.cols() != H.cols())
            throw std::invalid_argument("lindblad_solve: Lindblad operator dimension mismatch");
        ops.push_back(to_sparse(L));
    }
    LindbladResult out;
    auto emit = [&](double t, const CMatrix& rho) {
        out.times.push_back(t);
        out.rho.push_back(rho);
    };
    propagate(to_sparse(H), ops, rho0, dt, t_max, output_stride, emit, out.max_trace_error,
              out.max_hermiticity_error);
    return out;
}

PseudoModeResult pseudomode_evolve(const SystemSpec& sys, const PseudoModeConfig& cfg, const CMatrix& rho0, double dt,
                                   double t_max, std::size_t output_stride) {
    sys.validate();
    std::vector<ModeRef> modes;
    for (std::size_t n = 0; n < sys.couplings.size(); ++n) {
        const BathSpec& bath = sys.couplings[n].bath;
        if (bath.temperature != 0.0) throw OracleError("pseudomode_evolve: only zero-temperature baths are supported");
        for (const auto& t : bath.terms) {
            if (!(t.g.real() > 0.0) || std::abs(t.g.imag()) > 1e-12 * std::abs(t.g))
                throw OracleError("pseudomode_evolve: every term needs real g > 0");
            modes.push_back({n, t.g.real(), t.w.real(), t.w.imag()});
        }
    }
    std::vector<int> cutoffs = cfg.fock_cutoffs;
    if (cutoffs.empty()) cutoffs.assign(modes.size(), 4);
    if (cutoffs.size() != modes.size()) throw std::invalid_argument("pseudomode_evolve: one cutoff per mode");

    auto dimension = [&](const std::vector<int>& c) {
        double D = static_cast<double>(sys.dim());
        for (int v : c) D *= v;
        return D;
    };
    auto sup_change = [](const PseudoModeResult& a, const PseudoModeResult& b) {
        double worst = 0.0;
        for (std::size_t i = 0; i < a.rho.size(); ++i) worst = std::max(worst, (a.rho[i] - b.rho[i]).cwiseAbs().maxCoeff());
        return worst;
    };

    PseudoModeResult prev = run_pseudomodes(sys, modes, cutoffs, rho0, dt, t_max, output_stride);
    double change = std::numeric_limits<double>::infinity();
    for (;;) {
        std::vector<int> next = cutoffs;
        for (auto& c : next) c += cfg.cutoff_step;
        bool over = dimension(next) > static_cast<double>(cfg.max_dimension);
        for (int c : next) over = over || c > cfg.max_cutoff;
        if (over) {
            std::ostringstream os;
            os << "pseudomode_evolve: Fock cutoffs did not converge within the budget (last change " << change
               << ", tolerance " << cfg.tolerance << ")";
            throw OracleError(os.str());
        }
        PseudoModeResult cur = run_pseudomodes(sys, modes, next, rho0, dt, t_max, output_stride);
        change = sup_change(prev, cur);
        cutoffs = next;
        prev = std::move(cur);
        if (change < cfg.tolerance) break;
    }
    prev.last_change = change;
    return prev;
}

Complex double_integral(const BathSpec& bath, double t) {
    Complex G{0.0, 0.0};
    for (const auto& term : bath.terms) {
        const Complex w = term.w;
        const Complex x = w * t;
        Complex f;
        if (std::abs(x) < 1e-3) {
            // t/w + (e^{-wt} - 1)/w^2 = t^2 (1/2 - x/6 + x^2/24 - x^3/120)
            f = t * t * (0.5 - x / 6.0 + x * x / 24.0 - x * x * x / 120.0);
        } else {
            f = t / w + (std::exp(-x) - 1.0) / (w * w);
        }
        G += term.g * f;
    }
    return G;
}

Complex dephasing_coherence(double epsilon, const BathSpec& bath, double t) {
    // the imaginary part of G is a common level shift of both sigma_z eigenstates
    return std::exp(Complex(-4.0 * double_integral(bath, t).real(), -epsilon * t));
}

} // namespace hops
