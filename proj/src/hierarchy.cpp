// hierarchy.cpp — SystemSpec checks and graded index-space enumeration

#include "hops/hierarchy.hpp"

#include <cmath>
#include <sstream>
#include <string>

namespace hops {

std::size_t SystemSpec::mode_count() const {
    std::size_t m = 0;
    for (const auto& c : couplings) m += c.bath.terms.size();
    return m;
}

void SystemSpec::validate() const {
    if (H.rows() == 0 || H.rows() != H.cols()) throw std::invalid_argument("SystemSpec: H must be square and non-empty");
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("SystemSpec: H is not Hermitian");
    for (std::size_t n = 0; n < couplings.size(); ++n) {
        const auto& c = couplings[n];
        const std::string where = "SystemSpec: coupling " + std::to_string(n);
        if (c.L.rows() != H.rows() || c.L.cols() != H.cols()) throw std::invalid_argument(where + ": L has wrong shape");
        if (c.bath.terms.empty()) throw std::invalid_argument(where + ": bath has no terms");
        for (const auto& t : c.bath.terms)
            if (!(t.w.real() > 0.0)) throw std::invalid_argument(where + ": bath term with Re(w) <= 0");
        if (c.bath.temperature > 0.0) {
            const double lscale = std::max(1.0, c.L.cwiseAbs().maxCoeff());
            if ((c.L - c.L.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * lscale)
                throw std::invalid_argument(where + ": finite-temperature bath requires L = L^dagger");
        }
    }
}

namespace {

// C(n, r) for small arguments, exact in 64 bits over the ranges we allow.
std::uint64_t binom(long n, long r) {
    if (r < 0 || n < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t out = 1;
    for (long i = 1; i <= r; ++i) out = out * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    return out;
}

void enumerate_level(std::size_t modes, int remaining, std::size_t pos, std::vector<std::uint8_t>& current,
                     std::vector<std::uint8_t>& out) {
    if (pos + 1 == modes) {
        current[pos] = static_cast<std::uint8_t>(remaining);
        out.insert(out.end(), current.begin(), current.end());
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        current[pos] = static_cast<std::uint8_t>(v);
        enumerate_level(modes, remaining - v, pos + 1, current, out);
    }
}

} // namespace

double hierarchy_size(std::size_t modes, int order) {
    // lgamma keeps this finite for huge M, K
    const double m = static_cast<double>(modes), k = static_cast<double>(order);
    return std::round(std::exp(std::lgamma(k + m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m + 1.0)));
}

std::uint32_t HierarchySpace::position(std::span<const int> k) const {
    if (k.size() != modes_) throw std::invalid_argument("HierarchySpace::position: wrong mode count");
    long n = 0;
    for (int v : k) {
        if (v < 0) return kNone;
        n += v;
    }
    if (n > order_) return kNone;
    const long M = static_cast<long>(modes_);
    std::uint64_t rank = level_start_[n];
    long rem = n;
    for (long i = 0; i + 1 < M; ++i) {
        const long larger = rem - k[i];
        if (larger >= 1) rank += binom(larger - 1 + M - i - 1, M - i - 1);
        rem -= k[i];
    }
    return static_cast<std::uint32_t>(rank);
}

HierarchySpace build_space(std::size_t modes, int order, std::size_t dim, double memory_budget_bytes) {
    if (modes < 1) throw std::invalid_argument("build_space: need at least one mode");
    if (order < 0 || order > 255) throw std::invalid_argument("build_space: order must be in [0, 255]");
    const double count = hierarchy_size(modes, order);
    // amplitudes plus RK4 work vectors, and the neighbor tables
    const double bytes = count * static_cast<double>(dim) * sizeof(Complex) * 6.0 +
                         count * static_cast<double>(modes) * (2.0 * sizeof(std::uint32_t) + 1.0);
    if (bytes > memory_budget_bytes || count >= static_cast<double>(HierarchySpace::kNone)) {
        std::ostringstream os;
        os << "build_space: hierarchy with M=" << modes << ", K=" << order << " has " << count
           << " auxiliary states (~" << bytes / 1e9 << " GB), over the budget of " << memory_budget_bytes / 1e9
           << " GB";
        throw SpaceTooLarge(os.str(), count);
    }

    HierarchySpace space;
    space.modes_ = modes;
    space.order_ = order;
    const auto total = static_cast<std::size_t>(count);
    space.indices_.reserve(total * modes);
    std::vector<std::uint8_t> current(modes, 0);
    for (int n = 0; n <= order; ++n) {
        space.level_start_.push_back(space.indices_.size() / modes);
        enumerate_level(modes, n, 0, current, space.indices_);
    }
    space.levels_.resize(total);
    for (int n = 0; n <= order; ++n) {
        const std::size_t end = n == order ? total : space.level_start_[n + 1];
        for (std::size_t p = space.level_start_[n]; p < end; ++p) space.levels_[p] = n;
    }

    space.up_.assign(total * modes, HierarchySpace::kNone);
    space.down_.assign(total * modes, HierarchySpace::kNone);
    std::vector<int> k(modes);
    for (std::size_t p = 0; p < total; ++p) {
        for (std::size_t j = 0; j < modes; ++j) k[j] = space.indices_[p * modes + j];
        for (std::size_t j = 0; j < modes; ++j) {
            ++k[j];
            space.up_[p * modes + j] = space.position(k);
            k[j] -= 2;
            space.down_[p * modes + j] = space.position(k);
            ++k[j];
        }
    }
    return space;
}

} // namespace hops
