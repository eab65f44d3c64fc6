#include "giant/basis.hpp"

#include <string>
#include <vector>

#include "giant/error.hpp"

namespace giant {

Basis::Basis(int n_atoms, int max_excitation) : n_(n_atoms), qmax_(max_excitation) {
    if (n_atoms < 1) throw ConfigError("basis: need at least one atom");
    if (n_atoms > max_engine_atoms)
        throw CapacityError("basis: " + std::to_string(n_atoms) + " atoms exceeds the engine limit of " +
                            std::to_string(max_engine_atoms));
    Eigen::Index full = 1;
    for (int i = 0; i < n_; ++i) full *= 3;
    if (qmax_ < 0 || qmax_ > 2 * n_) qmax_ = 2 * n_;
    lookup_.assign(static_cast<std::size_t>(full), -1);
    std::vector<int> lv(n_);
    for (Eigen::Index s = 0; s < full; ++s) {
        Eigen::Index r = s;
        int q = 0;
        for (int a = n_ - 1; a >= 0; --a) {
            lv[a] = static_cast<int>(r % 3);
            r /= 3;
            q += lv[a];
        }
        if (q > qmax_) continue;
        lookup_[static_cast<std::size_t>(s)] = static_cast<Eigen::Index>(states_.size());
        states_.push_back(s);
        for (int a = 0; a < n_; ++a) levels_.push_back(static_cast<std::uint8_t>(lv[a]));
    }
}

int Basis::excitation(Eigen::Index state) const {
    int q = 0;
    for (int a = 0; a < n_; ++a) q += level(state, a);
    return q;
}

Eigen::Index Basis::index(const std::vector<int>& levels) const {
    if (static_cast<int>(levels.size()) != n_) throw ConfigError("basis: level vector has wrong length");
    Eigen::Index full = 0;
    for (int l : levels) {
        if (l < 0 || l > 2) throw ConfigError("basis: level out of range");
        full = 3 * full + l;
    }
    return lookup_[static_cast<std::size_t>(full)];
}

SpMat Basis::transition(int atom, int from, int to) const {
    std::vector<Eigen::Triplet<cplx>> trips;
    Eigen::Index stride = 1;
    for (int a = n_ - 1; a > atom; --a) stride *= 3;
    for (Eigen::Index s = 0; s < dim(); ++s) {
        if (level(s, atom) != from) continue;
        const Eigen::Index target = lookup_[static_cast<std::size_t>(states_[s] + (to - from) * stride)];
        if (target >= 0) trips.emplace_back(target, s, 1.0);
    }
    SpMat m(dim(), dim());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

SpMat Basis::diagonal(int atom, const double (&weights)[3]) const {
    std::vector<Eigen::Triplet<cplx>> trips;
    for (Eigen::Index s = 0; s < dim(); ++s) {
        const double w = weights[level(s, atom)];
        if (w != 0.0) trips.emplace_back(s, s, w);
    }
    SpMat m(dim(), dim());
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

}  // namespace giant
