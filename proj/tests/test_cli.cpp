// test_cli.cpp — Subcommands end to end: outputs, exit codes and reproducibility

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "hops/cli_commands.hpp"

using namespace hops;
using namespace hops::cli;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("hops_cli_" + std::to_string(::getpid()) + "_" +
                ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string config(const std::string& text, const std::string& name = "run.cfg") {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }
    Options options(const std::string& cfg, const std::string& out = "out") {
        Options o;
        o.config_path = cfg;
        o.out_dir = (dir_ / out).string();
        return o;
    }
    std::string read(const std::string& out, const std::string& file) {
        std::ifstream in(dir_ / out / file);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    int run(const std::function<int()>& f) { return run_guarded(f, log_); }

    fs::path dir_;
    std::ostringstream log_;
};

const char* kSpinBoson =
    "model.type = spin_boson\nmodel.delta = 1\nmodel.epsilon = 0\n"
    "bath.type = direct\nbath.g = 2\nbath.w = 0.5+2i\n"
    "hierarchy.order = 4\nintegrator.dt = 0.01\nintegrator.t_max = 1\nintegrator.output_stride = 10\n"
    "ensemble.n_traj = 40\nensemble.seed = 5\nensemble.block_size = 4\nvalidate.orders = 3, 4\n"
    "validate.order_tolerance = 0.05\n";

int exit_status(const std::string& cmd) {
    const int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

} // namespace

TEST_F(CliTest, ExpandBathDirectEcho) {
    const auto cfg = config("bath.type = direct\nbath.g = 2, 0.5-1i\nbath.w = 0.5+2i, 3\n");
    EXPECT_EQ(run([&] { return cmd_expand_bath(options(cfg), log_); }), kOk);
    const std::string csv = read("out", "bath_terms.csv");
    EXPECT_NE(csv.find("0,2,0,0.5,2\n"), std::string::npos);
    EXPECT_NE(csv.find("1,0.5,-1,3,0\n"), std::string::npos);
    EXPECT_NE(csv.find("# validation_error = 0\n"), std::string::npos);
}

TEST_F(CliTest, ExpandBathDrude) {
    const auto cfg = config(
        "bath.type = drude\nbath.reorganization = 1\nbath.cutoff = 1\nbath.temperature = 1\nbath.pade_order = 6\n"
        "bath.tau_min = 0.5\nbath.tolerance = 1e-5\n");
    EXPECT_EQ(run([&] { return cmd_expand_bath(options(cfg), log_); }), kOk);
    const std::string csv = read("out", "bath_terms.csv");
    EXPECT_NE(csv.find("\n6,"), std::string::npos);
    EXPECT_EQ(csv.find("\n7,"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorsMapToExitOne) {
    const auto bad = config("bath.type = direct\nbath.g = 2\nbath.w = x\n");
    EXPECT_EQ(run([&] { return cmd_expand_bath(options(bad), log_); }), kConfigError);
    EXPECT_NE(log_.str().find("run.cfg:3: key 'bath.w'"), std::string::npos);

    const auto none = config(std::string(kSpinBoson) + "ensemble.workers = 0\n", "w.cfg");
    EXPECT_EQ(run([&] { return cmd_ensemble(options(none), log_); }), kConfigError);

    std::string zero = kSpinBoson;
    zero.replace(zero.find("ensemble.n_traj = 40"), 20, "ensemble.n_traj = 0");
    EXPECT_EQ(run([&] { return cmd_ensemble(options(config(zero, "z.cfg")), log_); }), kConfigError);

    EXPECT_EQ(run([&] { return cmd_validate(options(config(kSpinBoson, "v.cfg")), "bogus", log_); }), kConfigError);
}

TEST_F(CliTest, RuntimeFailureMapsToExitTwo) {
    // validation tolerance unattainable for a two-term expansion
    const auto cfg = config(
        "bath.type = drude\nbath.reorganization = 1\nbath.cutoff = 1\nbath.temperature = 1\nbath.pade_order = 1\n"
        "bath.tau_min = 0.5\nbath.tolerance = 1e-9\n");
    EXPECT_EQ(run([&] { return cmd_expand_bath(options(cfg), log_); }), kRuntimeError);
}

TEST_F(CliTest, EnsembleOutputsAndHeader) {
    const auto cfg = config(kSpinBoson);
    EXPECT_EQ(run([&] { return cmd_ensemble(options(cfg), log_); }), kOk);
    const std::string dens = read("out", "density.csv"), obs = read("out", "observables.csv");
    EXPECT_EQ(dens.rfind("# hops ", 0), 0u);
    EXPECT_NE(dens.find("#   bath.w = 0.5+2i\n"), std::string::npos);
    EXPECT_NE(dens.find("#   ensemble.abort_tolerance = 0.01\n"), std::string::npos);
    EXPECT_EQ(dens.find("ensemble.workers"), std::string::npos);
    EXPECT_NE(dens.find("t,re_rho_00,im_rho_00,stderr_00,re_rho_01"), std::string::npos);
    EXPECT_NE(obs.find("t,pop_0,pop_0_err,pop_1,pop_1_err,trace,trace_err,sigma_x,sigma_x_err,sigma_z,sigma_z_err\n"),
              std::string::npos);
    EXPECT_NE(obs.find("\n0,1,0,0,0,1,0,0,0,1,0\n"), std::string::npos);
}

TEST_F(CliTest, EnsembleBitIdenticalAcrossWorkers) {
    const auto cfg = config(kSpinBoson);
    std::string first;
    for (unsigned w : {1u, 2u, 8u}) {
        Options o = options(cfg, "w" + std::to_string(w));
        o.workers = w;
        ASSERT_EQ(run([&] { return cmd_ensemble(o, log_); }), kOk);
        const std::string d = read("w" + std::to_string(w), "density.csv");
        if (first.empty())
            first = d;
        else
            EXPECT_EQ(d, first) << "workers=" << w;
    }
    Options other = options(cfg, "seed");
    other.seed = 6;
    ASSERT_EQ(run([&] { return cmd_ensemble(other, log_); }), kOk);
    EXPECT_NE(read("seed", "density.csv"), first);
}

TEST_F(CliTest, SpectrumMonomerAndOrders) {
    const auto mono = config(
        "model.type = chain\nmodel.sites = 1\nmodel.epsilon = 2\nmodel.dipole = 1\nbath.type = none\n"
        "hierarchy.order = 0\nintegrator.dt = 0.05\nintegrator.t_max = 100\nspectrum.damping = 0.1\n");
    EXPECT_EQ(run([&] { return cmd_spectrum(options(mono), log_); }), kOk);
    EXPECT_NE(read("out", "spectrum.csv").find("nu,A\n"), std::string::npos);
    EXPECT_NE(log_.str().find("peak at 2"), std::string::npos);

    const auto chain = config(
        "model.type = chain\nmodel.sites = 2\nmodel.epsilon = 0\nmodel.coupling = -0.5\nmodel.dipole = 1\n"
        "bath.type = direct\nbath.g = 0.2\nbath.w = 1\nhierarchy.order = 1, 2, 3\nintegrator.dt = 0.05\n"
        "integrator.t_max = 20\nspectrum.damping = 0.2\n",
        "chain.cfg");
    EXPECT_EQ(run([&] { return cmd_spectrum(options(chain, "k"), log_); }), kOk);
    for (int K : {1, 2, 3}) EXPECT_TRUE(fs::exists(dir_ / "k" / ("spectrum_K" + std::to_string(K) + ".csv")));

    const auto no_dipole = config(
        "model.type = chain\nmodel.sites = 1\nbath.type = none\nhierarchy.order = 0\nintegrator.dt = 0.05\n"
        "integrator.t_max = 10\n",
        "nd.cfg");
    EXPECT_EQ(run([&] { return cmd_spectrum(options(no_dipole), log_); }), kConfigError);
    EXPECT_NE(log_.str().find("model.dipole"), std::string::npos);
}

TEST_F(CliTest, ValidateSuites) {
    const auto noise = config(
        "bath.type = direct\nbath.g = 1\nbath.w = 1\nintegrator.dt = 0.01\nintegrator.t_max = 5\n"
        "validate.paths = 2000\nensemble.seed = 3\n");
    EXPECT_EQ(run([&] { return cmd_validate(options(noise), "noise", log_); }), kOk);
    EXPECT_NE(read("out", "noise_stats.csv").find("covariance_deviation,"), std::string::npos);

    const auto oracle = config(
        "model.epsilon = 1\nbath.type = direct\nbath.g = 1\nbath.w = 1\nhierarchy.order = 8\n"
        "integrator.dt = 0.01\nintegrator.t_max = 3\n",
        "o.cfg");
    EXPECT_EQ(run([&] { return cmd_validate(options(oracle, "o"), "oracle", log_); }), kOk);
    const std::string report = read("o", "oracle_report.csv");
    EXPECT_NE(report.find("linear_hops_vs_dephasing,"), std::string::npos);
    EXPECT_EQ(report.find(",no\n"), std::string::npos);

    EXPECT_EQ(run([&] { return cmd_validate(options(config(kSpinBoson, "c.cfg"), "c"), "convergence", log_); }), kOk);
    EXPECT_NE(read("c", "convergence.csv").find("populations_K3_vs_K4,"), std::string::npos);
}

TEST_F(CliTest, ExecutableExitCodes) {
    const std::string exe = HOPS_BINARY;
    EXPECT_EQ(exit_status(exe + " --version"), 0);
    EXPECT_EQ(exit_status(exe), 1);
    EXPECT_EQ(exit_status(exe + " ensemble"), 1);
    EXPECT_EQ(exit_status(exe + " frobnicate --config x"), 1);
    const auto cfg = config("bath.type = direct\nbath.g = 1\nbath.w = 1\n");
    EXPECT_EQ(exit_status(exe + " expand-bath --config " + cfg + " --out " + (dir_ / "x").string()), 0);
    const auto bad = config("bath.type = direct\nbath.g = 1\nbath.w = -1\n", "bad.cfg");
    EXPECT_EQ(exit_status(exe + " expand-bath --config " + bad + " --out " + (dir_ / "x").string()), 2);
}

TEST(CliConfigs, ShippedConfigsParse) {
    for (const char* name : {"spin_boson", "fmo", "dephasing", "noise", "drude", "monomer", "dimer", "chain7"}) {
        const Config cfg = Config::load(std::string(HOPS_CONFIG_DIR) + "/" + name + ".cfg");
        if (cfg.has("model.type")) EXPECT_NO_THROW(model_from_config(cfg)) << name;
        if (cfg.has("ensemble.n_traj")) EXPECT_NO_THROW(run_config_from(cfg)) << name;
        if (!cfg.has("model.type")) EXPECT_NO_THROW(bath_from_config(cfg)) << name;
    }
}
