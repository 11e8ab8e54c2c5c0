// models.hpp — Spin-boson, linear aggregate chain and FMO system builders; SystemSpec text I/O

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hops/bath_model.hpp"
#include "hops/hierarchy.hpp"
#include "hops/types.hpp"

namespace hops {

CMatrix pauli_x();
CMatrix pauli_y();
// sigma_z |0> = +|0>
CMatrix pauli_z();
CMatrix projector(Eigen::Index dim, Eigen::Index site);

// H = -(delta/2) sigma_x + (epsilon/2) sigma_z, L = sigma_z.
SystemSpec spin_boson(double delta, double epsilon, const BathSpec& bath);

struct Aggregate {
    SystemSpec sys;
    Eigen::VectorXd dipoles;
};

// Open chain of identical monomers in the one-exciton space, nearest-neighbor coupling V,
// L_n = |n><n| with an independent copy of the bath per site (none when bath is empty).
Aggregate linear_chain(int sites, double epsilon, double coupling, const std::optional<BathSpec>& bath,
                       double dipole);

struct FmoData {
    std::string provenance;
    std::string unit;
    CMatrix hamiltonian;                // as given in the file
    std::vector<DrudeLorentz> baths;    // one per site
};

// Key/value data file: dimension, unit, provenance, hamiltonian.row<i> (1-based rows),
// bath.reorganization / bath.cutoff defaults with optional site<i>.reorganization / site<i>.cutoff overrides.
FmoData read_fmo_data(const std::string& path);

struct FmoModel {
    SystemSpec sys;
    double energy_shift{0.0};  // mean site energy removed from H
    std::string unit;
    std::string provenance;
};

// Per-site projector couplings; every distinct site bath is expanded once and validated.
FmoModel fmo_from_file(const std::string& path, double temperature, int pade_order,
                       const ExpansionOptions& expansion);

// Text form of a SystemSpec; doubles are written so that reading restores them bit-exactly.
void write_system(std::ostream& out, const SystemSpec& sys);
SystemSpec read_system(std::istream& in);

} // namespace hops
