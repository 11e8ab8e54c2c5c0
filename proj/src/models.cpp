// models.cpp — Benchmark system builders

#include "hops/models.hpp"

#include <charconv>
#include <map>
#include <ostream>
#include <sstream>

#include "hops/config.hpp"

namespace hops {

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

CMatrix pauli_y() {
    CMatrix m(2, 2);
    m << 0.0, -kI, kI, 0.0;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

CMatrix projector(Eigen::Index dim, Eigen::Index site) {
    CMatrix p = CMatrix::Zero(dim, dim);
    p(site, site) = 1.0;
    return p;
}

SystemSpec spin_boson(double delta, double epsilon, const BathSpec& bath) {
    SystemSpec sys;
    sys.H = -0.5 * delta * pauli_x() + 0.5 * epsilon * pauli_z();
    sys.couplings.push_back({pauli_z(), bath});
    return sys;
}

Aggregate linear_chain(int sites, double epsilon, double coupling, const std::optional<BathSpec>& bath,
                       double dipole) {
    if (sites < 1) throw std::invalid_argument("linear_chain: need at least one site");
    Aggregate agg;
    agg.sys.H = CMatrix::Zero(sites, sites);
    for (int n = 0; n < sites; ++n) {
        agg.sys.H(n, n) = epsilon;
        if (n + 1 < sites) agg.sys.H(n, n + 1) = agg.sys.H(n + 1, n) = coupling;
    }
    if (bath)
        for (int n = 0; n < sites; ++n) agg.sys.couplings.push_back({projector(sites, n), *bath});
    agg.dipoles = Eigen::VectorXd::Constant(sites, dipole);
    return agg;
}

FmoData read_fmo_data(const std::string& path) {
    const Config cfg = Config::load(path);
    FmoData out;
    out.provenance = cfg.get_string("provenance");
    out.unit = cfg.get_string("unit");
    const long d = cfg.get_int("dimension");
    if (d < 1) throw ConfigError(path + ": dimension must be >= 1");
    out.hamiltonian = CMatrix::Zero(d, d);
    for (long i = 0; i < d; ++i) {
        const std::string key = "hamiltonian.row" + std::to_string(i + 1);
        const auto row = cfg.get_doubles(key);
        if (static_cast<long>(row.size()) != d)
            throw ConfigError(path + ": " + key + " has " + std::to_string(row.size()) + " entries, expected " +
                              std::to_string(d));
        for (long j = 0; j < d; ++j) out.hamiltonian(i, j) = row[j];
    }
    const double scale = std::max(1.0, out.hamiltonian.cwiseAbs().maxCoeff());
    if ((out.hamiltonian - out.hamiltonian.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw ConfigError(path + ": hamiltonian is not Hermitian");

    const std::string kind = cfg.get_string("bath.spectral_density");
    if (kind != "drude") throw ConfigError(path + ": unsupported bath.spectral_density '" + kind + "'");
    for (long i = 0; i < d; ++i) {
        const std::string site = "site" + std::to_string(i + 1) + ".";
        DrudeLorentz b;
        b.reorganization = cfg.has(site + "reorganization") ? cfg.get_double(site + "reorganization")
                                                            : cfg.get_double("bath.reorganization");
        b.cutoff = cfg.has(site + "cutoff") ? cfg.get_double(site + "cutoff") : cfg.get_double("bath.cutoff");
        out.baths.push_back(b);
    }
    return out;
}

FmoModel fmo_from_file(const std::string& path, double temperature, int pade_order,
                       const ExpansionOptions& expansion) {
    const FmoData data = read_fmo_data(path);
    FmoModel model;
    model.unit = data.unit;
    model.provenance = data.provenance;
    const Eigen::Index d = data.hamiltonian.rows();
    model.energy_shift = data.hamiltonian.diagonal().real().mean();
    model.sys.H = data.hamiltonian - model.energy_shift * CMatrix::Identity(d, d);

    const PadeScheme scheme = pade_coth_terms(pade_order);
    std::map<std::pair<double, double>, BathSpec> cache;
    for (Eigen::Index n = 0; n < d; ++n) {
        const DrudeLorentz& b = data.baths[static_cast<std::size_t>(n)];
        const auto key = std::make_pair(b.reorganization, b.cutoff);
        auto it = cache.find(key);
        if (it == cache.end()) it = cache.emplace(key, expand_correlation(b, temperature, scheme, expansion)).first;
        model.sys.couplings.push_back({projector(d, n), it->second});
    }
    model.sys.validate();
    return model;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fmt(Complex z) {
    std::string im = fmt(z.imag());
    if (im.front() != '-') im = "+" + im;
    return fmt(z.real()) + im + "i";
}

std::string join(const CMatrix& m) {
    std::string s;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) s += (s.empty() ? "" : ", ") + fmt(m(i, j));
    return s;
}

CMatrix unjoin(const std::vector<Complex>& v, Eigen::Index d, const std::string& key) {
    if (static_cast<Eigen::Index>(v.size()) != d * d)
        throw ConfigError("read_system: " + key + " needs " + std::to_string(d * d) + " entries");
    CMatrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) m(i, j) = v[static_cast<std::size_t>(i * d + j)];
    return m;
}

} // namespace

void write_system(std::ostream& out, const SystemSpec& sys) {
    out << "system.dimension = " << sys.dim() << "\n";
    out << "system.environments = " << sys.couplings.size() << "\n";
    out << "system.hamiltonian = " << join(sys.H) << "\n";
    for (std::size_t n = 0; n < sys.couplings.size(); ++n) {
        const auto& c = sys.couplings[n];
        const std::string p = "coupling" + std::to_string(n) + ".";
        out << p << "L = " << join(c.L) << "\n";
        out << p << "temperature = " << fmt(c.bath.temperature) << "\n";
        out << p << "validation_error = " << fmt(c.bath.validation_error) << "\n";
        std::string g, w;
        for (const auto& t : c.bath.terms) {
            g += (g.empty() ? "" : ", ") + fmt(t.g);
            w += (w.empty() ? "" : ", ") + fmt(t.w);
        }
        out << p << "g = " << g << "\n";
        out << p << "w = " << w << "\n";
    }
}

SystemSpec read_system(std::istream& in) {
    const Config cfg = Config::parse(in, "<system>");
    SystemSpec sys;
    const long d = cfg.get_int("system.dimension");
    const long n_env = cfg.get_int("system.environments");
    if (d < 1 || n_env < 0) throw ConfigError("read_system: bad dimension or environment count");
    sys.H = unjoin(cfg.get_complexes("system.hamiltonian"), d, "system.hamiltonian");
    for (long n = 0; n < n_env; ++n) {
        const std::string p = "coupling" + std::to_string(n) + ".";
        Coupling c;
        c.L = unjoin(cfg.get_complexes(p + "L"), d, p + "L");
        c.bath.temperature = cfg.get_double(p + "temperature");
        c.bath.validation_error = cfg.get_double(p + "validation_error");
        const auto g = cfg.get_complexes(p + "g");
        const auto w = cfg.get_complexes(p + "w");
        if (g.size() != w.size()) throw ConfigError("read_system: " + p + "g and " + p + "w differ in length");
        for (std::size_t j = 0; j < g.size(); ++j) c.bath.terms.push_back({g[j], w[j]});
        sys.couplings.push_back(std::move(c));
    }
    return sys;
}

} // namespace hops
