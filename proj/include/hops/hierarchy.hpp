// hierarchy.hpp — System description and the auxiliary-state index space

#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "hops/bath_model.hpp"
#include "hops/types.hpp"

namespace hops {

struct Coupling {
    CMatrix L;
    BathSpec bath;
};

// H plus one (L_n, bath_n) pair per independent environment.
struct SystemSpec {
    CMatrix H;
    std::vector<Coupling> couplings;

    Eigen::Index dim() const { return H.rows(); }
    std::size_t mode_count() const;
    // Throws std::invalid_argument on a broken invariant (Hermiticity, empty bath, Re w <= 0,
    // non-self-adjoint L with a finite-temperature bath).
    void validate() const;
};

class SpaceTooLarge : public std::length_error {
public:
    SpaceTooLarge(const std::string& what, double entries) : std::length_error(what), entries_(entries) {}
    double entries() const { return entries_; }

private:
    double entries_;
};

// All multi-indices k in N^M with |k| <= K, in graded order (by |k|, then descending lexicographic),
// with dense up/down neighbor tables.
class HierarchySpace {
public:
    static constexpr std::uint32_t kNone = std::numeric_limits<std::uint32_t>::max();

    std::size_t modes() const { return modes_; }
    int order() const { return order_; }
    std::size_t size() const { return levels_.size(); }

    std::span<const std::uint8_t> index(std::size_t pos) const {
        return {indices_.data() + pos * modes_, modes_};
    }
    int level(std::size_t pos) const { return levels_[pos]; }
    std::uint32_t up(std::size_t pos, std::size_t j) const { return up_[pos * modes_ + j]; }
    std::uint32_t down(std::size_t pos, std::size_t j) const { return down_[pos * modes_ + j]; }
    // Position of k, or kNone when |k| > K.
    std::uint32_t position(std::span<const int> k) const;

private:
    friend HierarchySpace build_space(std::size_t, int, std::size_t, double);
    std::size_t modes_{0};
    int order_{0};
    std::vector<std::uint8_t> indices_;
    std::vector<int> levels_;
    std::vector<std::uint32_t> up_;
    std::vector<std::uint32_t> down_;
    std::vector<std::size_t> level_start_;
};

// Number of auxiliary states C(K + M, M), as a double to survive huge arguments.
double hierarchy_size(std::size_t modes, int order);

// Throws SpaceTooLarge if C(K+M, M) * dim complex amplitudes exceed memory_budget_bytes.
HierarchySpace build_space(std::size_t modes, int order, std::size_t dim = 1,
                           double memory_budget_bytes = 4.0e9);

} // namespace hops
