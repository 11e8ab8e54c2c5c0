// cli_commands.hpp — Subcommand implementations behind the command-line front end

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hops/bath_model.hpp"
#include "hops/config.hpp"
#include "hops/ensemble.hpp"
#include "hops/hierarchy.hpp"
#include "hops/integrator.hpp"
#include "hops/noise.hpp"

namespace hops::cli {

enum ExitCode : int { kOk = 0, kConfigError = 1, kRuntimeError = 2 };

struct Options {
    std::string config_path;
    std::string out_dir{"."};
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> workers;
};

// Bath from `bath.*` keys: type = direct | lorentzian | drude | none.
// Returns nullopt for type = none.
std::optional<BathSpec> bath_from_config(const Config& cfg);

struct Model {
    SystemSpec sys;
    CVector psi0;
    Eigen::VectorXd dipoles;  // empty unless the model defines dipoles
    double frame_energy{0.0};
    std::string unit;
};

// model.type = spin_boson | chain | fmo
Model model_from_config(const Config& cfg);

RunConfig run_config_from(const Config& cfg);
NoiseOptions noise_options_from(const Config& cfg);
Terminator terminator_from(const Config& cfg);

// Comment header: version, command and the resolved config (without keys that cannot change results).
std::string csv_header(const Config& cfg, const std::string& command);

// Shortest round-trip text for a double.
std::string num(double v);

void write_density_csv(std::ostream& out, const DensityTrajectory& rho);
void write_observables_csv(std::ostream& out, const DensityTrajectory& rho);

// Each command loads the config itself, writes its CSVs into opts.out_dir and returns an exit code.
// ConfigError escapes for the caller to map to kConfigError.
int cmd_expand_bath(const Options& opts, std::ostream& log);
int cmd_ensemble(const Options& opts, std::ostream& log);
int cmd_spectrum(const Options& opts, std::ostream& log);
int cmd_validate(const Options& opts, const std::string& suite, std::ostream& log);

// Exception-to-exit-code mapping shared by the executable and the tests.
int run_guarded(const std::function<int()>& body, std::ostream& log);

} // namespace hops::cli
