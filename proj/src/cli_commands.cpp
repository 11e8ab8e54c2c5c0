// cli_commands.cpp — Config-driven runs and CSV writers for the command-line tool

#include "hops/cli_commands.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hops/models.hpp"
#include "hops/observables.hpp"
#include "hops/oracles.hpp"
#include "hops/version.hpp"

namespace hops::cli {

namespace fs = std::filesystem;

std::string num(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

namespace {

ExpansionOptions expansion_options_from(const Config& cfg) {
    ExpansionOptions e;
    e.tau_min = cfg.get_double("bath.tau_min", 0.0);
    e.tau_max = cfg.get_double("bath.tau_max", 10.0);
    e.grid_points = static_cast<int>(cfg.get_int("bath.grid_points", 101));
    e.tolerance = cfg.get_double("bath.tolerance", 1e-5);
    return e;
}

Config load_config(const Options& opts) {
    Config cfg = Config::load(opts.config_path);
    if (opts.seed) cfg.set("ensemble.seed", std::to_string(*opts.seed));
    if (opts.workers) cfg.set("ensemble.workers", std::to_string(*opts.workers));
    return cfg;
}

std::ofstream open_output(const Options& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    const fs::path p = fs::path(opts.out_dir) / name;
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write output file '" + p.string() + "'");
    return out;
}

std::vector<int> orders_from(const Config& cfg, const std::string& key) {
    std::vector<int> out;
    for (long k : cfg.get_ints(key)) {
        if (k < 0 || k > 255) throw ConfigError(cfg.source() + ": " + key + " entries must lie in [0, 255]");
        out.push_back(static_cast<int>(k));
    }
    if (out.empty()) throw ConfigError(cfg.source() + ": " + key + " is empty");
    return out;
}

struct CheckRow {
    std::string name;
    double value;
    double threshold;
    bool pass() const { return value < threshold; }
};

int write_checks(const Options& opts, const Config& cfg, const std::string& command, const std::string& file,
                 const std::vector<CheckRow>& rows, std::ostream& log) {
    auto out = open_output(opts, file);
    out << csv_header(cfg, command);
    out << "check,value,threshold,pass\n";
    bool ok = true;
    for (const auto& r : rows) {
        out << r.name << "," << num(r.value) << "," << num(r.threshold) << "," << (r.pass() ? "yes" : "no") << "\n";
        log << (r.pass() ? "  ok    " : "  FAIL  ") << r.name << " = " << r.value << " (threshold " << r.threshold
            << ")\n";
        ok = ok && r.pass();
    }
    return ok ? kOk : kRuntimeError;
}

} // namespace

std::optional<BathSpec> bath_from_config(const Config& cfg) {
    const std::string type = cfg.get_string("bath.type");
    if (type == "none") return std::nullopt;
    const double T = cfg.get_double("bath.temperature", 0.0);
    if (T < 0.0) throw ConfigError(cfg.source() + ": bath.temperature must be >= 0");
    const long n_pade = cfg.get_int("bath.pade_order", 0);
    if (n_pade < 0) throw ConfigError(cfg.source() + ": bath.pade_order must be >= 0");

    SpectralDensity J;
    if (type == "direct") {
        const auto g = cfg.get_complexes("bath.g");
        const auto w = cfg.get_complexes("bath.w");
        if (g.size() != w.size()) throw ConfigError(cfg.source() + ": bath.g and bath.w differ in length");
        DirectExpansion d;
        for (std::size_t j = 0; j < g.size(); ++j) d.terms.push_back({g[j], w[j]});
        J = d;
    } else if (type == "lorentzian") {
        const auto p = cfg.get_doubles("bath.weight");
        const auto c = cfg.get_doubles("bath.center");
        const auto w = cfg.get_doubles("bath.width");
        if (p.size() != c.size() || p.size() != w.size())
            throw ConfigError(cfg.source() + ": bath.weight, bath.center and bath.width differ in length");
        LorentzianSum s;
        for (std::size_t k = 0; k < p.size(); ++k) s.peaks.push_back({p[k], c[k], w[k]});
        if (cfg.has("bath.reorganization")) {
            // rescale the weights to the requested reorganization energy
            const double target = cfg.get_double("bath.reorganization");
            const double now = reorganization_energy(s);
            if (!(now > 0.0)) throw ConfigError(cfg.source() + ": bath has zero reorganization energy");
            for (auto& peak : s.peaks) peak.weight *= target / now;
        }
        J = s;
    } else if (type == "drude") {
        J = DrudeLorentz{cfg.get_double("bath.reorganization"), cfg.get_double("bath.cutoff")};
    } else {
        throw ConfigError(cfg.source() + ": unknown bath.type '" + type + "' (direct, lorentzian, drude, none)");
    }
    return expand_correlation(J, T, pade_coth_terms(static_cast<int>(n_pade)), expansion_options_from(cfg));
}

Model model_from_config(const Config& cfg) {
    const std::string type = cfg.get_string("model.type");
    Model m;
    m.unit = cfg.get_string("units.energy", "arbitrary");
    const long init = cfg.get_int("model.initial_state", 0);
    if (type == "spin_boson") {
        const auto bath = bath_from_config(cfg);
        if (!bath) throw ConfigError(cfg.source() + ": spin_boson needs a bath");
        m.sys = spin_boson(cfg.get_double("model.delta"), cfg.get_double("model.epsilon", 0.0), *bath);
    } else if (type == "chain") {
        const long sites = cfg.get_int("model.sites");
        if (sites < 1) throw ConfigError(cfg.source() + ": model.sites must be >= 1");
        const double eps = cfg.get_double("model.epsilon", 0.0);
        Aggregate agg = linear_chain(static_cast<int>(sites), eps, cfg.get_double("model.coupling", 0.0),
                                     bath_from_config(cfg), cfg.has("model.dipole") ? cfg.get_double("model.dipole") : 0.0);
        m.sys = std::move(agg.sys);
        if (cfg.has("model.dipole")) m.dipoles = agg.dipoles;
        m.frame_energy = eps;
    } else if (type == "fmo") {
        const double T = cfg.get_double("bath.temperature");
        const long n_pade = cfg.get_int("bath.pade_order", 1);
        if (n_pade < 0) throw ConfigError(cfg.source() + ": bath.pade_order must be >= 0");
        FmoModel fmo = fmo_from_file(cfg.resolve_path("model.data"), T, static_cast<int>(n_pade),
                                     expansion_options_from(cfg));
        m.sys = std::move(fmo.sys);
        m.unit = fmo.unit;
        m.dipoles = Eigen::VectorXd::Ones(m.sys.dim());
    } else {
        throw ConfigError(cfg.source() + ": unknown model.type '" + type + "' (spin_boson, chain, fmo)");
    }
    if (init < 0 || init >= m.sys.dim())
        throw ConfigError(cfg.source() + ": model.initial_state out of range");
    m.psi0 = CVector::Zero(m.sys.dim());
    m.psi0(init) = 1.0;
    m.sys.validate();
    return m;
}

NoiseOptions noise_options_from(const Config& cfg) {
    NoiseOptions n;
    n.omega_max_factor = cfg.get_double("noise.omega_max_factor", n.omega_max_factor);
    n.clip_tol = cfg.get_double("noise.clip_tol", n.clip_tol);
    n.period_pad_factor = cfg.get_double("noise.period_pad_factor", n.period_pad_factor);
    return n;
}

Terminator terminator_from(const Config& cfg) {
    const std::string t = cfg.get_string("hierarchy.terminator", "rescaled");
    if (t == "rescaled") return Terminator::Rescaled;
    if (t == "zero") return Terminator::Zero;
    throw ConfigError(cfg.source() + ": hierarchy.terminator must be 'rescaled' or 'zero'");
}

RunConfig run_config_from(const Config& cfg) {
    RunConfig r;
    const long n = cfg.get_int("ensemble.n_traj");
    if (n < 1) throw ConfigError(cfg.source() + ": ensemble.n_traj must be >= 1");
    r.n_traj = static_cast<std::size_t>(n);
    r.seed = cfg.get_uint("ensemble.seed", 0);
    const long workers = cfg.get_int("ensemble.workers", 1);
    if (workers < 1) throw ConfigError(cfg.source() + ": ensemble.workers must be >= 1");
    r.workers = static_cast<unsigned>(workers);
    r.abort_tolerance = cfg.get_double("ensemble.abort_tolerance", 0.01);
    const long block = cfg.get_int("ensemble.block_size", 32);
    if (block < 1) throw ConfigError(cfg.source() + ": ensemble.block_size must be >= 1");
    r.block_size = static_cast<std::size_t>(block);
    const std::string variant = cfg.get_string("integrator.variant", "nonlinear");
    if (variant == "nonlinear")
        r.variant = Variant::Nonlinear;
    else if (variant == "linear")
        r.variant = Variant::Linear;
    else
        throw ConfigError(cfg.source() + ": integrator.variant must be 'linear' or 'nonlinear'");
    r.dt = cfg.get_double("integrator.dt");
    r.t_max = cfg.get_double("integrator.t_max");
    const long stride = cfg.get_int("integrator.output_stride", 1);
    if (stride < 1) throw ConfigError(cfg.source() + ": integrator.output_stride must be >= 1");
    r.output_stride = static_cast<std::size_t>(stride);
    r.noise = noise_options_from(cfg);
    return r;
}

std::string csv_header(const Config& cfg, const std::string& command) {
    std::ostringstream os;
    os << "# hops " << kVersion << " " << command << "\n";
    os << "# config:\n";
    std::istringstream lines(cfg.resolved());
    std::string line;
    while (std::getline(lines, line)) {
        // worker count never changes results
        if (line.rfind("ensemble.workers ", 0) == 0) continue;
        os << "#   " << line << "\n";
    }
    return os.str();
}

void write_density_csv(std::ostream& out, const DensityTrajectory& rho) {
    const Eigen::Index d = rho.rho.empty() ? 0 : rho.rho.front().rows();
    out << "t";
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = i; j < d; ++j)
            out << ",re_rho_" << i << j << ",im_rho_" << i << j << ",stderr_" << i << j;
    out << "\n";
    for (std::size_t t = 0; t < rho.times.size(); ++t) {
        out << num(rho.times[t]);
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = i; j < d; ++j)
                out << "," << num(rho.rho[t](i, j).real()) << "," << num(rho.rho[t](i, j).imag()) << ","
                    << num(rho.std_error.empty() ? 0.0 : rho.std_error[t](i, j));
        out << "\n";
    }
}

void write_observables_csv(std::ostream& out, const DensityTrajectory& rho) {
    const Eigen::Index d = rho.rho.empty() ? 0 : rho.rho.front().rows();
    std::vector<std::pair<std::string, ObservableSeries>> cols;
    for (Eigen::Index i = 0; i < d; ++i) cols.emplace_back("pop_" + std::to_string(i), expectation(projector(d, i), rho));
    cols.emplace_back("trace", expectation(CMatrix::Identity(d, d), rho));
    if (d == 2) {
        cols.emplace_back("sigma_x", expectation(pauli_x(), rho));
        cols.emplace_back("sigma_z", expectation(pauli_z(), rho));
    }
    out << "t";
    for (const auto& [name, s] : cols) out << "," << name << "," << name << "_err";
    out << "\n";
    for (std::size_t t = 0; t < rho.times.size(); ++t) {
        out << num(rho.times[t]);
        for (const auto& [name, s] : cols) out << "," << num(s.value[t].real()) << "," << num(s.error[t]);
        out << "\n";
    }
}

int cmd_expand_bath(const Options& opts, std::ostream& log) {
    Config cfg = load_config(opts);
    const auto bath = bath_from_config(cfg);
    if (!bath) throw ConfigError(cfg.source() + ": bath.type = none has nothing to expand");
    auto out = open_output(opts, "bath_terms.csv");
    out << csv_header(cfg, "expand-bath");
    out << "# temperature = " << num(bath->temperature) << "\n";
    out << "# validation_error = " << num(bath->validation_error) << "\n";
    out << "j,re_g,im_g,re_w,im_w\n";
    for (std::size_t j = 0; j < bath->terms.size(); ++j) {
        const auto& t = bath->terms[j];
        out << j << "," << num(t.g.real()) << "," << num(t.g.imag()) << "," << num(t.w.real()) << ","
            << num(t.w.imag()) << "\n";
    }
    log << "expand-bath: " << bath->terms.size() << " terms, validation error " << bath->validation_error << "\n";
    return kOk;
}

int cmd_ensemble(const Options& opts, std::ostream& log) {
    Config cfg = load_config(opts);
    const Model m = model_from_config(cfg);
    const RunConfig run = run_config_from(cfg);
    const long order = cfg.get_int("hierarchy.order");
    if (order < 0 || order > 255) throw ConfigError(cfg.source() + ": hierarchy.order must lie in [0, 255]");
    const double budget = cfg.get_double("hierarchy.memory_budget", 4.0e9);
    const HierarchySpace space =
        build_space(m.sys.mode_count(), static_cast<int>(order), static_cast<std::size_t>(m.sys.dim()), budget);
    const HierarchyOperator op(space, m.sys, terminator_from(cfg));
    log << "ensemble: " << run.n_traj << " " << to_string(run.variant) << " trajectories, " << space.size()
        << " auxiliary states, " << run.workers << " worker(s)\n";
    const DensityTrajectory rho = run_ensemble(op, m.sys, m.psi0, run);
    for (const auto& w : rho.warnings) log << "warning: " << w << "\n";

    const std::string header = csv_header(cfg, "ensemble");
    auto dens = open_output(opts, "density.csv");
    dens << header;
    write_density_csv(dens, rho);
    auto obs = open_output(opts, "observables.csv");
    obs << header;
    write_observables_csv(obs, rho);
    return kOk;
}

int cmd_spectrum(const Options& opts, std::ostream& log) {
    Config cfg = load_config(opts);
    const Model m = model_from_config(cfg);
    if (m.dipoles.size() == 0) throw ConfigError(cfg.source() + ": missing required key 'model.dipole'");
    const std::vector<int> orders = orders_from(cfg, "hierarchy.order");
    CorrelationOptions copts;
    copts.terminator = terminator_from(cfg);
    copts.dt = cfg.get_double("integrator.dt");
    copts.t_max = cfg.get_double("integrator.t_max");
    copts.frame_energy = cfg.get_double("spectrum.frame", m.frame_energy);
    SpectrumOptions sopts;
    sopts.damping = cfg.get_double("spectrum.damping", 0.0);
    const long pad = cfg.get_int("spectrum.padding_factor", 4);
    if (pad < 4) throw ConfigError(cfg.source() + ": spectrum.padding_factor must be >= 4");
    sopts.padding_factor = static_cast<std::size_t>(pad);
    sopts.decay_fraction = cfg.get_double("spectrum.decay_fraction", 1e-3);
    const double nu_min = cfg.get_double("spectrum.nu_min", -std::numeric_limits<double>::infinity());
    const double nu_max = cfg.get_double("spectrum.nu_max", std::numeric_limits<double>::infinity());

    const std::string header = csv_header(cfg, "spectrum");
    for (int K : orders) {
        copts.order = K;
        const CorrelationResult M = dipole_autocorrelation(m.sys, m.dipoles, copts);
        const SpectrumResult S = absorption_spectrum(M, sopts);
        for (const auto& w : S.warnings) log << "warning (K=" << K << "): " << w << "\n";
        const std::string name = orders.size() == 1 ? "spectrum.csv" : "spectrum_K" + std::to_string(K) + ".csv";
        auto out = open_output(opts, name);
        out << header;
        out << "# order = " << K << ", damping = " << num(S.damping) << ", padding_factor = " << S.padding_factor
            << ", bin_width = " << num(S.bin_width()) << "\n";
        out << "nu,A\n";
        for (std::size_t i = 0; i < S.nu.size(); ++i)
            if (S.nu[i] >= nu_min && S.nu[i] <= nu_max) out << num(S.nu[i]) << "," << num(S.absorption[i]) << "\n";
        log << "spectrum: K=" << K << " peak at " << S.nu[S.peak_index()] << " -> " << name << "\n";
    }
    return kOk;
}

namespace {

int validate_noise(const Options& opts, Config& cfg, std::ostream& log) {
    const auto bath = bath_from_config(cfg);
    if (!bath) throw ConfigError(cfg.source() + ": noise validation needs a bath");
    const double dt = cfg.get_double("integrator.dt");
    const double t_max = cfg.get_double("integrator.t_max");
    const long n_paths = cfg.get_int("validate.paths", 10000);
    if (n_paths < 2) throw ConfigError(cfg.source() + ": validate.paths must be >= 2");
    const long grid = cfg.get_int("validate.grid_points", 8);
    const double threshold = cfg.get_double("validate.threshold", 5.0);
    const std::uint64_t seed = cfg.get_uint("ensemble.seed", 0);
    const NoiseSynthesizer synth(*bath, t_max, dt, noise_options_from(cfg));
    std::vector<NoisePath> a, b;
    for (long i = 0; i < n_paths; ++i) {
        a.push_back(synth.sample(seed, static_cast<std::uint64_t>(i)));
        b.push_back(synth.sample(seed + 1, static_cast<std::uint64_t>(i)));
    }
    const NoiseStatistics st = noise_statistics(a, *bath, static_cast<std::size_t>(grid));
    const double cross = noise_cross_deviation(a, b, static_cast<std::size_t>(grid));
    log << "validate noise: " << n_paths << " paths, omega_max " << synth.omega_max()
        << (synth.nyquist_limited() ? " (Nyquist limited)" : "") << ", " << synth.clipped_points()
        << " clipped spectral points\n";
    std::vector<CheckRow> rows{{"mean_deviation", st.mean_deviation, threshold},
                               {"pseudo_covariance_deviation", st.pseudo_covariance_deviation, threshold},
                               {"covariance_deviation", st.covariance_deviation, threshold},
                               {"cross_seed_deviation", cross, threshold}};
    return write_checks(opts, cfg, "validate noise", "noise_stats.csv", rows, log);
}

int validate_oracle(const Options& opts, Config& cfg, std::ostream& log) {
    const auto bath = bath_from_config(cfg);
    if (!bath) throw ConfigError(cfg.source() + ": oracle validation needs a bath");
    const double eps = cfg.get_double("model.epsilon", 0.0);
    const double dt = cfg.get_double("integrator.dt");
    const double t_max = cfg.get_double("integrator.t_max");
    const double pm_dt = cfg.get_double("validate.pseudomode_dt", dt);
    const long order = cfg.get_int("hierarchy.order");
    const double tol = cfg.get_double("validate.tolerance", 1e-4);

    // pseudo-mode coherence for H = eps sigma_z / 2, L = sigma_z
    const SystemSpec deph = spin_boson(0.0, eps, *bath);
    CMatrix rho0 = CMatrix::Constant(2, 2, 0.5);
    PseudoModeConfig pcfg;
    pcfg.tolerance = cfg.get_double("validate.fock_tolerance", 1e-6);
    const PseudoModeResult pm = pseudomode_evolve(deph, pcfg, rho0, pm_dt, t_max);
    double pm_dev = 0.0;
    for (std::size_t i = 0; i < pm.times.size(); ++i)
        pm_dev = std::max(pm_dev, std::abs(pm.rho[i](0, 1) / rho0(0, 1) - dephasing_coherence(eps, *bath, pm.times[i])));

    // deterministic linear hierarchy, reference level uncoupled: L = sigma_z + 1
    SystemSpec shifted = deph;
    shifted.couplings[0].L = pauli_z() + CMatrix::Identity(2, 2);
    const HierarchySpace space = build_space(shifted.mode_count(), static_cast<int>(order), 2);
    const HierarchyOperator op(space, shifted, terminator_from(cfg));
    TrajectoryOptions topts;
    topts.dt = dt;
    topts.t_max = t_max;
    topts.variant = Variant::Linear;
    const CVector psi0 = CVector::Constant(2, 1.0 / std::sqrt(2.0));
    const Trajectory traj = integrate_trajectory(op, {}, psi0, topts);
    if (traj.aborted) throw std::runtime_error("validate oracle: " + traj.diagnostic);
    double hops_dev = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Complex ratio = traj.psi0[i](0) * std::conj(traj.psi0[i](1)) / (psi0(0) * std::conj(psi0(1)));
        hops_dev = std::max(hops_dev, std::abs(ratio - dephasing_coherence(eps, *bath, traj.times[i])));
    }
    log << "validate oracle: pseudo-mode cutoffs";
    for (int c : pm.fock_cutoffs) log << " " << c;
    log << "\n";
    std::vector<CheckRow> rows{{"dephasing_vs_pseudomode", pm_dev, tol},
                               {"linear_hops_vs_dephasing", hops_dev, tol},
                               {"pseudomode_fock_change", pm.last_change, pcfg.tolerance}};
    return write_checks(opts, cfg, "validate oracle", "oracle_report.csv", rows, log);
}

int validate_convergence(const Options& opts, Config& cfg, std::ostream& log) {
    const Model m = model_from_config(cfg);
    const RunConfig run = run_config_from(cfg);
    const std::vector<int> orders = orders_from(cfg, "validate.orders");
    if (orders.size() < 2) throw ConfigError(cfg.source() + ": validate.orders needs at least two orders");
    const double order_tol = cfg.get_double("validate.order_tolerance", 0.01);
    const double dt_tol = cfg.get_double("validate.dt_tolerance", 1e-4);
    const Terminator term = terminator_from(cfg);
    const Eigen::Index d = m.sys.dim();

    std::vector<DensityTrajectory> runs;
    for (int K : orders) {
        const HierarchySpace space = build_space(m.sys.mode_count(), K, static_cast<std::size_t>(d));
        const HierarchyOperator op(space, m.sys, term);
        log << "validate convergence: K=" << K << ", " << space.size() << " auxiliary states\n";
        runs.push_back(run_ensemble(op, m.sys, m.psi0, run));
    }
    std::vector<CheckRow> rows;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        double worst = 0.0;
        for (std::size_t t = 0; t < runs[r].times.size(); ++t)
            for (Eigen::Index i = 0; i < d; ++i)
                worst = std::max(worst, std::abs(runs[r].rho[t](i, i) - runs[r - 1].rho[t](i, i)));
        rows.push_back({"populations_K" + std::to_string(orders[r - 1]) + "_vs_K" + std::to_string(orders[r]), worst,
                        order_tol});
    }

    // one trajectory at dt and dt/2 on the same noise realization
    const HierarchySpace space = build_space(m.sys.mode_count(), orders.back(), static_cast<std::size_t>(d));
    const HierarchyOperator op(space, m.sys, term);
    std::vector<std::vector<CVector>> psi;
    for (double h : {run.dt, 0.5 * run.dt}) {
        std::vector<NoisePath> noise;
        for (std::size_t n = 0; n < m.sys.couplings.size(); ++n)
            noise.push_back(NoiseSynthesizer(m.sys.couplings[n].bath, run.t_max, h, run.noise).sample(run.seed, 0, n));
        TrajectoryOptions topts;
        topts.dt = h;
        topts.t_max = run.t_max;
        topts.variant = run.variant;
        const Trajectory traj = integrate_trajectory(op, noise, m.psi0, topts);
        if (traj.aborted) throw std::runtime_error("validate convergence: " + traj.diagnostic);
        psi.push_back(traj.psi0);
    }
    double worst = 0.0;
    for (std::size_t s = 0; s < psi[0].size(); ++s) {
        const CVector a = psi[0][s].normalized();
        const CVector b = psi[1][2 * s].normalized();
        for (Eigen::Index i = 0; i < d; ++i) worst = std::max(worst, std::abs(std::norm(a(i)) - std::norm(b(i))));
    }
    rows.push_back({"single_trajectory_dt_vs_half_dt", worst, dt_tol});
    return write_checks(opts, cfg, "validate convergence", "convergence.csv", rows, log);
}

} // namespace

int cmd_validate(const Options& opts, const std::string& suite, std::ostream& log) {
    if (suite != "noise" && suite != "oracle" && suite != "convergence")
        throw ConfigError("unknown validation suite '" + suite + "' (noise, oracle, convergence)");
    Config cfg = load_config(opts);
    if (suite == "noise") return validate_noise(opts, cfg, log);
    if (suite == "oracle") return validate_oracle(opts, cfg, log);
    return validate_convergence(opts, cfg, log);
}

int run_guarded(const std::function<int()>& body, std::ostream& log) {
    try {
        return body();
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
}

} // namespace hops::cli
