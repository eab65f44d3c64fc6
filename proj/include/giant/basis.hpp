#pragma once

#include <cstdint>
#include <vector>

#include "giant/linalg.hpp"

namespace giant {

inline constexpr int max_engine_atoms = 6;

// Product basis of N three-level atoms, atom 0 the slowest index. Optionally
// truncated to states with total excitation (sum of levels) <= max_excitation;
// the generator conserves or lowers this number, so truncation above the
// initial excitation is exact.
class Basis {
public:
    explicit Basis(int n_atoms, int max_excitation = -1);

    int atoms() const { return n_; }
    int max_excitation() const { return qmax_; }
    Eigen::Index dim() const { return static_cast<Eigen::Index>(states_.size()); }
    int level(Eigen::Index state, int atom) const { return levels_[static_cast<std::size_t>(state) * n_ + atom]; }
    int excitation(Eigen::Index state) const;
    // -1 when the configuration is outside the truncated space.
    Eigen::Index index(const std::vector<int>& levels) const;
    Eigen::Index full_index(Eigen::Index state) const { return states_[static_cast<std::size_t>(state)]; }

    // |to><from| acting on one atom.
    SpMat transition(int atom, int from, int to) const;
    // sum_l weights[l] |l><l| on one atom.
    SpMat diagonal(int atom, const double (&weights)[3]) const;

private:
    int n_;
    int qmax_;
    std::vector<Eigen::Index> states_;  // full base-3 index of each kept state
    std::vector<std::uint8_t> levels_;
    std::vector<Eigen::Index> lookup_;  // full index -> kept index or -1
};

}  // namespace giant
