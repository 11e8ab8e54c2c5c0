// acceptance.cpp — End-to-end acceptance checks, one PASS/FAIL line per criterion

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "hops/cli_commands.hpp"
#include "hops/models.hpp"
#include "hops/observables.hpp"
#include "hops/oracles.hpp"

using namespace hops;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

std::string config_path(const std::string& name) { return std::string(HOPS_CONFIG_DIR) + "/" + name + ".cfg"; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

std::vector<double> sigma_z_of(const DensityTrajectory& rho) {
    std::vector<double> out;
    for (const auto& r : rho.rho) out.push_back((pauli_z() * r).trace().real());
    return out;
}

std::vector<double> sigma_z_err(const DensityTrajectory& rho) {
    std::vector<double> out;
    for (const auto& e : expectation(pauli_z(), rho).error) out.push_back(e);
    return out;
}

double sup_diff(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::runtime_error("time grids differ");
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

DensityTrajectory ensemble_from(const Config& cfg, int order, Variant variant, const CVector* psi0 = nullptr) {
    const cli::Model m = cli::model_from_config(cfg);
    RunConfig run = cli::run_config_from(cfg);
    run.variant = variant;
    const HierarchySpace space = build_space(m.sys.mode_count(), order, static_cast<std::size_t>(m.sys.dim()));
    const HierarchyOperator op(space, m.sys, cli::terminator_from(cfg));
    return run_ensemble(op, m.sys, psi0 ? *psi0 : m.psi0, run);
}

// Spin-boson runs shared by criteria 1 to 3.
class SpinBoson {
public:
    SpinBoson() : cfg_(Config::load(config_path("spin_boson"))) {}

    const std::vector<double>& oracle() {
        if (oracle_.empty()) {
            const cli::Model m = cli::model_from_config(cfg_);
            const RunConfig run = cli::run_config_from(cfg_);
            const PseudoModeResult pm = pseudomode_evolve(m.sys, PseudoModeConfig{}, m.psi0 * m.psi0.adjoint(),
                                                          run.dt, run.t_max, run.output_stride);
            for (const auto& r : pm.rho) oracle_.push_back((pauli_z() * r).trace().real());
            std::ostringstream os;
            os << "cutoff";
            for (int c : pm.fock_cutoffs) os << " " << c;
            os << ", Fock change " << fmt(pm.last_change);
            oracle_note_ = os.str();
        }
        return oracle_;
    }
    const std::string& oracle_note() const { return oracle_note_; }

    const DensityTrajectory& run(int order, Variant variant) {
        const auto key = std::make_pair(order, variant);
        auto it = runs_.find(key);
        if (it == runs_.end()) it = runs_.emplace(key, ensemble_from(cfg_, order, variant)).first;
        return it->second;
    }

    std::size_t n_traj() const { return cli::run_config_from(cfg_).n_traj; }

private:
    Config cfg_;
    std::vector<double> oracle_;
    std::string oracle_note_;
    std::map<std::pair<int, Variant>, DensityTrajectory> runs_;
};

SpinBoson& spin_boson_runs() {
    static SpinBoson sb;
    return sb;
}

Outcome criterion_1() {
    auto& sb = spin_boson_runs();
    const auto& oracle = sb.oracle();
    const DensityTrajectory& rho = sb.run(8, Variant::Nonlinear);
    const double dev = sup_diff(sigma_z_of(rho), oracle);
    return {dev < 0.05, "K=8 nonlinear, N=" + std::to_string(rho.n_used) + ": sup |<sz> - pseudo-mode| = " +
                            fmt(dev) + " (< 0.05; " + sb.oracle_note() + ")"};
}

Outcome criterion_2() {
    auto& sb = spin_boson_runs();
    const double dev = sup_diff(sigma_z_of(sb.run(4, Variant::Nonlinear)), sigma_z_of(sb.run(8, Variant::Nonlinear)));
    return {dev < 0.01, "sup |<sz>_K4 - <sz>_K8| = " + fmt(dev) + " (< 0.01)"};
}

Outcome criterion_3() {
    auto& sb = spin_boson_runs();
    const auto& oracle = sb.oracle();
    const DensityTrajectory& nl = sb.run(8, Variant::Nonlinear);
    const DensityTrajectory& lin = sb.run(8, Variant::Linear);
    const auto e_nl = sigma_z_err(nl), e_lin = sigma_z_err(lin);
    const auto z_nl = sigma_z_of(nl), z_lin = sigma_z_of(lin);
    const double max_nl = *std::max_element(e_nl.begin(), e_nl.end());
    const double max_lin = *std::max_element(e_lin.begin(), e_lin.end());
    double worst_nl = 0.0, worst_lin = 0.0;
    for (std::size_t i = 0; i < oracle.size(); ++i) {
        const double se = std::hypot(e_nl[i], e_lin[i]);
        if (se == 0.0) continue;
        worst_nl = std::max(worst_nl, std::abs(z_nl[i] - oracle[i]) / se);
        worst_lin = std::max(worst_lin, std::abs(z_lin[i] - oracle[i]) / se);
    }
    const bool pass = max_lin > max_nl && worst_nl < 3.0 && worst_lin < 3.0;
    return {pass, "max SE linear " + fmt(max_lin) + " vs nonlinear " + fmt(max_nl) + " (" +
                      std::to_string(lin.n_aborted) + " linear aborts); worst deviation from oracle in combined SE: "
                      "nonlinear " + fmt(worst_nl) + ", linear " + fmt(worst_lin) + " (< 3)"};
}

Outcome criterion_4() {
    const Config cfg = Config::load(config_path("dephasing"));
    const cli::Model m = cli::model_from_config(cfg);
    const RunConfig run = cli::run_config_from(cfg);
    const BathSpec& bath = m.sys.couplings[0].bath;
    const double eps = cfg.get_double("model.epsilon");
    const int order = static_cast<int>(cfg.get_int("hierarchy.order"));
    const double tol = cfg.get_double("validate.tolerance");
    const CVector plus = CVector::Constant(2, 1.0 / std::sqrt(2.0));

    // stochastic part
    const DensityTrajectory rho = ensemble_from(cfg, order, Variant::Nonlinear, &plus);
    double worst_se = 0.0;
    for (std::size_t i = 0; i < rho.times.size(); ++i) {
        const double exact = 0.5 * std::abs(dephasing_coherence(eps, bath, rho.times[i]));
        const double dev = std::abs(std::abs(rho.rho[i](0, 1)) - exact);
        const double se = rho.std_error[i](0, 1);
        if (se == 0.0) {
            if (dev > 1e-12) worst_se = INFINITY;
            continue;
        }
        worst_se = std::max(worst_se, dev / se);
    }

    // oracle cross-validation, then the deterministic linear trajectory with the reference level uncoupled
    const CMatrix rho0 = plus * plus.adjoint();
    const PseudoModeResult pm = pseudomode_evolve(m.sys, PseudoModeConfig{}, rho0, run.dt, run.t_max, 1);
    double pm_dev = 0.0;
    for (std::size_t i = 0; i < pm.times.size(); ++i)
        pm_dev = std::max(pm_dev, std::abs(pm.rho[i](0, 1) / rho0(0, 1) - dephasing_coherence(eps, bath, pm.times[i])));

    SystemSpec shifted = m.sys;
    shifted.couplings[0].L = pauli_z() + CMatrix::Identity(2, 2);
    const HierarchySpace space = build_space(shifted.mode_count(), order, 2);
    const HierarchyOperator op(space, shifted, cli::terminator_from(cfg));
    TrajectoryOptions topts;
    topts.dt = run.dt;
    topts.t_max = run.t_max;
    topts.variant = Variant::Linear;
    const Trajectory traj = integrate_trajectory(op, {}, plus, topts);
    if (traj.aborted) throw std::runtime_error(traj.diagnostic);
    double lin_dev = 0.0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const Complex ratio = traj.psi0[i](0) * std::conj(traj.psi0[i](1)) / 0.5;
        lin_dev = std::max(lin_dev, std::abs(ratio - dephasing_coherence(eps, bath, traj.times[i])));
    }
    const bool pass = worst_se < 3.0 && pm_dev < tol && lin_dev < tol;
    return {pass, "N=" + std::to_string(rho.n_used) + ": worst ||rho01| - exact| = " + fmt(worst_se) +
                      " SE (< 3); pseudo-mode vs closed form " + fmt(pm_dev) + ", linear z*=0 vs closed form " +
                      fmt(lin_dev) + " (< " + fmt(tol) + ")"};
}

Outcome criterion_5() {
    const Config cfg = Config::load(config_path("drude"));
    const auto bath = cli::bath_from_config(cfg);
    const SpectralDensity J = DrudeLorentz{cfg.get_double("bath.reorganization"), cfg.get_double("bath.cutoff")};
    const double T = cfg.get_double("bath.temperature");
    const double gamma = cfg.get_double("bath.cutoff");
    const double tol = 1e-5;

    // the stated window includes tau = 0
    ExpansionOptions full;
    full.tau_min = 0.0;
    full.tau_max = 10.0 / gamma;
    full.grid_points = 101;
    std::string literal;
    bool pass = false;
    try {
        const double err = expansion_error(J, T, *bath, full);
        pass = err < tol;
        literal = "error on [0, 10/gamma] = " + fmt(err);
    } catch (const std::exception& e) {
        literal = "reference alpha(0) unavailable: " + std::string(e.what());
    }

    // pointwise relative error away from the origin, for context
    std::ostringstream os;
    os << literal << "; pointwise relative error with " << bath->terms.size() << " terms:";
    for (double tau : {1e-3, 1e-2, 0.1, 0.5, 1.0}) {
        const Complex ref = correlation_function(J, T, tau / gamma);
        os << " tau=" << tau << "/gamma " << fmt(std::abs(bath->correlation(tau / gamma) - ref) / std::abs(ref)) << ";";
    }
    os << " Re alpha(tau) grows like -(2 lambda / pi) ln(gamma tau) as tau -> 0 while the exponential sum stays finite";
    return {pass, os.str()};
}

Outcome criterion_6() {
    const Config cfg = Config::load(config_path("noise"));
    const auto bath = cli::bath_from_config(cfg);
    const long n_paths = cfg.get_int("validate.paths");
    const double threshold = cfg.get_double("validate.threshold");
    const NoiseSynthesizer synth(*bath, cfg.get_double("integrator.t_max"), cfg.get_double("integrator.dt"),
                                 cli::noise_options_from(cfg));
    const std::uint64_t seed = cfg.get_uint("ensemble.seed");
    std::vector<NoisePath> paths;
    for (long i = 0; i < n_paths; ++i) paths.push_back(synth.sample(seed, static_cast<std::uint64_t>(i)));
    const NoiseStatistics st =
        noise_statistics(paths, *bath, static_cast<std::size_t>(cfg.get_int("validate.grid_points")));
    const bool pass = n_paths >= 10000 && st.covariance_deviation < threshold &&
                      st.pseudo_covariance_deviation < threshold;
    return {pass, std::to_string(st.paths) + " paths: E[z z*] vs alpha " + fmt(st.covariance_deviation) +
                      " SE, |E[z z]| " + fmt(st.pseudo_covariance_deviation) + " SE, mean " +
                      fmt(st.mean_deviation) + " SE (< " + fmt(threshold) + ")"};
}

struct Spectra {
    cli::Model model;
    std::vector<SpectrumResult> by_order;
};

Spectra spectra_from(const std::string& name) {
    const Config cfg = Config::load(config_path(name));
    Spectra out{cli::model_from_config(cfg), {}};
    CorrelationOptions copts;
    copts.terminator = cli::terminator_from(cfg);
    copts.dt = cfg.get_double("integrator.dt");
    copts.t_max = cfg.get_double("integrator.t_max");
    copts.frame_energy = out.model.frame_energy;
    SpectrumOptions sopts;
    sopts.damping = cfg.get_double("spectrum.damping", 0.0);
    sopts.padding_factor = static_cast<std::size_t>(cfg.get_int("spectrum.padding_factor", 4));
    for (long K : cfg.get_ints("hierarchy.order")) {
        copts.order = static_cast<int>(K);
        out.by_order.push_back(absorption_spectrum(dipole_autocorrelation(out.model.sys, out.model.dipoles, copts),
                                                   sopts));
    }
    return out;
}

double sum_rule_error(const Spectra& s) {
    double worst = 0.0;
    const double mu2 = s.model.dipoles.squaredNorm();
    for (const auto& S : s.by_order) worst = std::max(worst, std::abs(S.integral() / (M_PI * mu2) - 1.0));
    return worst;
}

Outcome criterion_7() {
    const Config mono_cfg = Config::load(config_path("monomer"));
    const Config dimer_cfg = Config::load(config_path("dimer"));
    const Spectra mono = spectra_from("monomer");
    const Spectra dimer = spectra_from("dimer");
    const Spectra chain = spectra_from("chain7");

    const SpectrumResult& sm = mono.by_order.front();
    const double eps = mono_cfg.get_double("model.epsilon");
    const double mono_off = std::abs(sm.nu[sm.peak_index()] - eps);
    const SpectrumResult& sd = dimer.by_order.front();
    const double dimer_target = dimer_cfg.get_double("model.epsilon") + dimer_cfg.get_double("model.coupling");
    const double dimer_off = std::abs(sd.nu[sd.peak_index()] - dimer_target);
    const double sum_rule = std::max({sum_rule_error(mono), sum_rule_error(dimer), sum_rule_error(chain)});

    // every lower order against the highest
    bool ordered = true;
    std::ostringstream os;
    const SpectrumResult& ref = chain.by_order.back();
    for (std::size_t k = 0; k + 1 < chain.by_order.size(); ++k) {
        const RegionDeviation d = region_deviation(chain.by_order[k], ref);
        ordered = ordered && d.low < d.high;
        os << " order " << k + 1 << ": low " << fmt(d.low) << " < high " << fmt(d.high) << ";";
    }
    const bool pass = mono_off <= sm.bin_width() && dimer_off <= sd.bin_width() && sum_rule < 0.01 && ordered;
    return {pass, "monomer peak offset " + fmt(mono_off) + ", dimer " + fmt(dimer_off) + " (bin " +
                      fmt(sm.bin_width()) + "); sum rule " + fmt(sum_rule) + " (< 0.01); chain vs highest order:" +
                      os.str()};
}

Outcome criterion_8() {
    const Config cfg = Config::load(config_path("fmo"));
    std::vector<DensityTrajectory> runs;
    for (long K : cfg.get_ints("validate.orders")) runs.push_back(ensemble_from(cfg, static_cast<int>(K), Variant::Nonlinear));
    double bound = 0.0, trace = 0.0;
    for (const auto& rho : runs) {
        const Eigen::Index d = rho.rho.front().rows();
        for (std::size_t t = 0; t < rho.times.size(); ++t) {
            double sum = 0.0, sum_se = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) {
                const double p = rho.rho[t](i, i).real(), se = rho.std_error[t](i, i);
                sum += p;
                sum_se += se;
                const double outside = std::max(-p, p - 1.0);
                if (outside > 0.0) bound = std::max(bound, se > 0.0 ? outside / se : INFINITY);
            }
            const double miss = std::abs(sum - 1.0);
            if (miss > 1e-12) trace = std::max(trace, sum_se > 0.0 ? miss / sum_se : INFINITY);
        }
    }
    double order_dev = 0.0;
    for (std::size_t t = 0; t < runs[0].times.size(); ++t)
        for (Eigen::Index i = 0; i < runs[0].rho[t].rows(); ++i)
            order_dev = std::max(order_dev, std::abs(runs[0].rho[t](i, i).real() - runs[1].rho[t](i, i).real()));
    const bool pass = bound < 5.0 && trace < 5.0 && order_dev < 0.02;
    return {pass, "N=" + std::to_string(runs[0].n_used) + ": populations outside [0,1] by " + fmt(bound) +
                      " SE, trace off by " + fmt(trace) + " SE (< 5); sup |P_K1 - P_K2| = " + fmt(order_dev) +
                      " (< 0.02)"};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion_9() {
    const fs::path dir = fs::temp_directory_path() / ("hops_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ostringstream log;
    bool pass = true;
    std::ostringstream os;
    // smaller copies of the shipped demos
    const std::string root = fs::path(HOPS_CONFIG_DIR).parent_path().string() + "/";
    const std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> cases{
        {"spin_boson", {{"ensemble.n_traj = 10000", "ensemble.n_traj = 200"}}},
        {"spin_boson",
         {{"ensemble.n_traj = 10000", "ensemble.n_traj = 200"}, {"variant = nonlinear", "variant = linear"}}},
        {"fmo", {{"ensemble.n_traj = 400", "ensemble.n_traj = 40"}, {"model.data = ../", "model.data = " + root}}}};
    for (std::size_t c = 0; c < cases.size(); ++c) {
        std::string text = slurp(config_path(cases[c].first));
        for (const auto& [from, to] : cases[c].second) {
            const auto at = text.find(from);
            if (at == std::string::npos) throw std::runtime_error("demo config changed: " + cases[c].first);
            text.replace(at, from.size(), to);
        }
        const fs::path cfg = dir / ("case" + std::to_string(c) + ".cfg");
        std::ofstream(cfg) << text;
        std::string first_density, first_obs;
        for (unsigned w : {1u, 2u, 8u}) {
            cli::Options o;
            o.config_path = cfg.string();
            o.out_dir = (dir / ("c" + std::to_string(c) + "w" + std::to_string(w))).string();
            o.workers = w;
            if (cli::run_guarded([&] { return cli::cmd_ensemble(o, log); }, log) != cli::kOk)
                throw std::runtime_error("ensemble failed: " + log.str());
            const std::string d = slurp(fs::path(o.out_dir) / "density.csv");
            const std::string ob = slurp(fs::path(o.out_dir) / "observables.csv");
            if (w == 1) {
                first_density = d;
                first_obs = ob;
            } else if (d != first_density || ob != first_obs) {
                pass = false;
                os << " " << cases[c].first << " case " << c << " differs at " << w << " workers;";
            }
        }
    }
    fs::remove_all(dir);
    return {pass, "density.csv and observables.csv for spin-boson (nonlinear, linear) and FMO at 1/2/8 workers:" +
                      (pass ? std::string(" byte-identical") : os.str())};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance checks"};
    std::vector<int> only;
    app.add_option("criteria", only, "Run only these criteria (1-9)");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::function<Outcome()>> checks{criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
                                                       criterion_6, criterion_7, criterion_8, criterion_9};
    bool all = true;
    for (std::size_t c = 0; c < checks.size(); ++c) {
        const int id = static_cast<int>(c + 1);
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = checks[c]();
        } catch (const std::exception& e) {
            r = {false, std::string("error: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << "criterion " << id << ": " << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << " ["
                  << fmt(secs) << " s]" << std::endl;
        all = all && r.pass;
    }
    return all ? 0 : 1;
}
