// bath_model.cpp — Correlation-function quadrature and residue expansion

#include "hops/bath_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

namespace hops {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void check_parametric(const SpectralDensity& J) {
    std::visit(overloaded{
                   [](const LorentzianSum& s) {
                       for (const auto& p : s.peaks) {
                           if (!(p.width > 0.0))
                               throw std::invalid_argument("LorentzianSum: width must be > 0 (pole on the real axis)");
                           if (p.weight < 0.0) throw std::invalid_argument("LorentzianSum: weight must be >= 0");
                       }
                   },
                   [](const DrudeLorentz& d) {
                       if (!(d.cutoff > 0.0))
                           throw std::invalid_argument("DrudeLorentz: cutoff must be > 0 (pole on the real axis)");
                       if (d.reorganization < 0.0)
                           throw std::invalid_argument("DrudeLorentz: reorganization energy must be >= 0");
                   },
                   [](const DirectExpansion& d) {
                       for (const auto& t : d.terms)
                           if (!(t.w.real() > 0.0))
                               throw std::invalid_argument("DirectExpansion: every term needs Re(w) > 0");
                   }},
               J);
}

// J(w)/w, finite at w = 0 for both parametric forms. Accepts complex arguments for residues.
Complex j_over_omega(const SpectralDensity& J, Complex w) {
    return std::visit(overloaded{
                          [&](const LorentzianSum& s) {
                              Complex acc{0.0, 0.0};
                              for (const auto& p : s.peaks) {
                                  const double g = p.width, c = p.center;
                                  const Complex d1 = (w - c) * (w - c) + g * g;
                                  const Complex d2 = (w + c) * (w + c) + g * g;
                                  acc += 4.0 * p.weight * g * c / (kPi * d1 * d2);
                              }
                              return acc;
                          },
                          [&](const DrudeLorentz& d) {
                              return Complex(2.0 * d.reorganization * d.cutoff / kPi) /
                                     (w * w + d.cutoff * d.cutoff);
                          },
                          [](const DirectExpansion&) -> Complex {
                              throw std::invalid_argument("DirectExpansion has no spectral density");
                          }},
                      J);
}

// w coth(w / 2T), with the removable singularity at w = 0 handled by its series.
double omega_coth(double w, double T) {
    const double x = w / (2.0 * T);
    if (std::abs(x) < 1e-4) return 2.0 * T * (1.0 + x * x / 3.0);
    return w / std::tanh(x);
}

struct Breakpoints {
    std::vector<double> points;  // sorted, starting at 0
    double tail_start{0.0};
};

Breakpoints breakpoints_for(const SpectralDensity& J, double T) {
    std::vector<double> pts{0.0};
    double reach = 0.0;
    auto add_feature = [&](double center, double width) {
        for (double k : {0.0, 1.0, 3.0, 10.0, 30.0, 100.0}) {
            for (double s : {-1.0, 1.0}) {
                const double x = center + s * k * width;
                if (x > 0.0) pts.push_back(x);
            }
        }
        reach = std::max(reach, std::abs(center) + 200.0 * width);
    };
    std::visit(overloaded{[&](const LorentzianSum& s) {
                              for (const auto& p : s.peaks) add_feature(p.center, p.width);
                          },
                          [&](const DrudeLorentz& d) { add_feature(0.0, d.cutoff); },
                          [](const DirectExpansion&) {}},
               J);
    if (T > 0.0) {
        for (double k : {1.0, 10.0, 40.0}) pts.push_back(k * T);
        reach = std::max(reach, 40.0 * T);
    }
    reach = std::max(reach, 1.0);
    pts.push_back(reach);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    while (!pts.empty() && pts.back() > reach) pts.pop_back();
    return {pts, reach};
}

struct Partial {
    double value{0.0};
    double error{0.0};
    double l1{0.0};
};

template <class F>
Partial integrate_panels(F f, const std::vector<double>& pts, double max_panel, const QuadratureOptions& opts) {
    using boost::math::quadrature::gauss_kronrod;
    Partial out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        const int pieces = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel)));
        const double h = (b - a) / pieces;
        for (int p = 0; p < pieces; ++p) {
            double err = 0.0, l1 = 0.0;
            const double lo = a + p * h, hi = (p + 1 == pieces) ? b : a + (p + 1) * h;
            out.value += gauss_kronrod<double, 21>::integrate(f, lo, hi, opts.max_depth, opts.rel_tol, &err, &l1);
            out.error += err;
            out.l1 += l1;
        }
    }
    return out;
}

} // namespace

std::string variant_name(const SpectralDensity& J) {
    return std::visit(overloaded{[](const LorentzianSum&) { return std::string("lorentzian_sum"); },
                                 [](const DrudeLorentz&) { return std::string("drude_lorentz"); },
                                 [](const DirectExpansion&) { return std::string("direct"); }},
                      J);
}

double spectral_density(const SpectralDensity& J, double omega) {
    return (j_over_omega(J, Complex(omega, 0.0)) * omega).real();
}

Complex BathSpec::alpha0() const {
    Complex s{0.0, 0.0};
    for (const auto& t : terms) s += t.g;
    return s;
}

Complex BathSpec::correlation(double tau) const {
    Complex s{0.0, 0.0};
    for (const auto& t : terms) s += t.g * std::exp(-t.w * tau);
    return s;
}

double BathSpec::spectrum(double omega) const {
    double s = 0.0;
    for (const auto& t : terms) s += 2.0 * (t.g / Complex(t.w.real(), t.w.imag() - omega)).real();
    return s;
}

Complex correlation_function(const SpectralDensity& J, double temperature, double tau,
                             const QuadratureOptions& opts) {
    if (temperature < 0.0) throw std::invalid_argument("correlation_function: negative temperature");
    if (tau < 0.0) throw std::invalid_argument("correlation_function: tau must be >= 0");
    check_parametric(J);
    if (const auto* direct = std::get_if<DirectExpansion>(&J)) {
        Complex s{0.0, 0.0};
        for (const auto& t : direct->terms) s += t.g * std::exp(-t.w * tau);
        return s;
    }

    const double T = temperature;
    auto real_weight = [&](double w) {
        const double jw = j_over_omega(J, Complex(w, 0.0)).real();
        return T > 0.0 ? jw * omega_coth(w, T) : jw * w;
    };
    auto imag_weight = [&](double w) { return j_over_omega(J, Complex(w, 0.0)).real() * w; };

    const Breakpoints bp = breakpoints_for(J, T);
    const double A = bp.tail_start;
    const double max_panel = tau > 0.0 ? 2.0 * kPi / tau : std::numeric_limits<double>::infinity();

    Partial re = integrate_panels([&](double w) { return real_weight(w) * std::cos(w * tau); }, bp.points,
                                  max_panel, opts);
    Partial im = integrate_panels([&](double w) { return imag_weight(w) * std::sin(w * tau); }, bp.points,
                                  max_panel, opts);

    double tail_re = 0.0, tail_im = 0.0, tail_err = 0.0;
    try {
        if (tau > 0.0) {
            thread_local boost::math::quadrature::ooura_fourier_cos<double> fcos(1e-11);
            thread_local boost::math::quadrature::ooura_fourier_sin<double> fsin(1e-11);
            auto fr = [&](double u) { return real_weight(A + u); };
            auto fi = [&](double u) { return imag_weight(A + u); };
            const auto rc = fcos.integrate(fr, tau);
            const auto rs = fsin.integrate(fr, tau);
            const auto ic = fcos.integrate(fi, tau);
            const auto is = fsin.integrate(fi, tau);
            const double c = std::cos(tau * A), s = std::sin(tau * A);
            tail_re = c * rc.first - s * rs.first;
            tail_im = s * ic.first + c * is.first;
            tail_err = std::abs(rc.first) * rc.second + std::abs(rs.first) * rs.second +
                       std::abs(ic.first) * ic.second + std::abs(is.first) * is.second;
        } else {
            using boost::math::quadrature::gauss_kronrod;
            double err = 0.0, l1 = 0.0;
            tail_re = gauss_kronrod<double, 21>::integrate(real_weight, A, std::numeric_limits<double>::infinity(),
                                                            opts.max_depth, opts.rel_tol, &err, &l1);
            tail_err = err;
            re.l1 += l1;
        }
    } catch (const std::exception& e) {
        throw QuadratureError(std::string("correlation_function: tail quadrature failed: ") + e.what(),
                              std::numeric_limits<double>::infinity());
    }

    const double total_err = re.error + im.error + tail_err;
    const double scale = std::max(re.l1 + im.l1, std::numeric_limits<double>::min());
    const double achieved = total_err / scale;
    const Complex value(re.value + tail_re, -(im.value + tail_im));
    if (!std::isfinite(value.real()) || !std::isfinite(value.imag()) || !(achieved <= opts.accept_tol)) {
        std::ostringstream os;
        os << "correlation_function: quadrature did not converge at tau=" << tau << " (achieved relative error "
           << achieved << ")";
        throw QuadratureError(os.str(), achieved);
    }
    return value;
}

BathSpec expand_correlation(const SpectralDensity& J, double temperature, const PadeScheme& scheme,
                            const ExpansionOptions& opts) {
    if (temperature < 0.0) throw std::invalid_argument("expand_correlation: negative temperature");
    check_parametric(J);
    BathSpec bath;
    bath.temperature = temperature;
    if (const auto* direct = std::get_if<DirectExpansion>(&J)) {
        bath.terms = direct->terms;
        return bath;
    }

    const double T = temperature;
    // Lower-half-plane poles of J with residues of J (not of J/w).
    struct Pole {
        Complex where;
        Complex residue;
    };
    std::vector<Pole> poles;
    std::visit(overloaded{[&](const LorentzianSum& s) {
                              for (const auto& p : s.peaks) {
                                  const Complex r = p.weight / kPi * Complex(0.0, 0.5);
                                  poles.push_back({Complex(p.center, -p.width), r});
                                  poles.push_back({Complex(-p.center, -p.width), -r});
                              }
                          },
                          [&](const DrudeLorentz& d) {
                              poles.push_back({Complex(0.0, -d.cutoff),
                                               Complex(d.reorganization * d.cutoff / kPi, 0.0)});
                          },
                          [](const DirectExpansion&) {}},
               J);

    // alpha(tau) = 1/2 int_R J(w) (1 + coth(w/2T)) exp(-i w tau) dw, closed in the lower half plane.
    for (const auto& pole : poles) {
        Complex coth_value;
        if (T > 0.0) {
            const Complex z = pole.where / (2.0 * T);
            const Complex th = std::tanh(z);
            if (std::abs(th) < 1e-12)
                throw ExpansionError("expand_correlation: bath pole coincides with a Matsubara frequency");
            coth_value = 1.0 / th;
        } else {
            if (pole.where.real() == 0.0)
                throw ExpansionError(
                    "expand_correlation: Drude-Lorentz at T = 0 has no finite exponential expansion");
            coth_value = pole.where.real() > 0.0 ? 1.0 : -1.0;
        }
        const Complex g = -kPi * kI * pole.residue * (1.0 + coth_value);
        if (std::abs(g) == 0.0) continue;
        bath.terms.push_back({g, kI * pole.where});
    }

    if (T > 0.0) {
        for (std::size_t k = 0; k < scheme.size(); ++k) {
            const double nu = scheme.poles[k] * T;
            for (const auto& pole : poles)
                if (std::abs(pole.where - Complex(0.0, -nu)) < 1e-9 * std::max(1.0, nu))
                    throw ExpansionError("expand_correlation: bath pole coincides with a Pade pole");
            const Complex j_at = j_over_omega(J, Complex(0.0, -nu)) * Complex(0.0, -nu);
            const Complex g = -2.0 * kPi * kI * scheme.residues[k] * T * j_at;
            bath.terms.push_back({g, Complex(nu, 0.0)});
        }
    }

    if (bath.alpha0().real() < 0.0) throw ExpansionError("expand_correlation: Re alpha(0) < 0");

    bath.validation_error = expansion_error(J, temperature, bath, opts);
    if (!(bath.validation_error <= opts.tolerance)) {
        std::ostringstream os;
        os << "expand_correlation: validation error " << bath.validation_error << " exceeds tolerance "
           << opts.tolerance << " on tau in [" << opts.tau_min << ", " << opts.tau_max << "]";
        throw ExpansionError(os.str());
    }
    return bath;
}

double expansion_error(const SpectralDensity& J, double temperature, const BathSpec& bath,
                       const ExpansionOptions& opts) {
    if (opts.grid_points < 2 || !(opts.tau_max > opts.tau_min) || opts.tau_min < 0.0)
        throw std::invalid_argument("expansion_error: need tau_max > tau_min >= 0 and >= 2 grid points");
    if (std::holds_alternative<DirectExpansion>(J)) return 0.0;
    const double step = (opts.tau_max - opts.tau_min) / (opts.grid_points - 1);
    double ref = 0.0, worst = 0.0;
    for (int i = 0; i < opts.grid_points; ++i) {
        const double tau = opts.tau_min + i * step;
        const Complex quad = correlation_function(J, temperature, tau);
        if (i == 0) ref = std::abs(quad);
        worst = std::max(worst, std::abs(quad - bath.correlation(tau)));
    }
    return ref > 0.0 ? worst / ref : worst;
}

double reorganization_energy(const SpectralDensity& J) {
    check_parametric(J);
    return std::visit(overloaded{[](const LorentzianSum& s) {
                                     double e = 0.0;
                                     for (const auto& p : s.peaks)
                                         e += p.weight * p.center / (p.center * p.center + p.width * p.width);
                                     return e;
                                 },
                                 [](const DrudeLorentz& d) { return d.reorganization; },
                                 [](const DirectExpansion&) -> double {
                                     throw std::invalid_argument(
                                         "reorganization_energy: DirectExpansion has no spectral density");
                                 }},
                      J);
}

} // namespace hops
