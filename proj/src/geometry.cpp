#include "giant/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "giant/error.hpp"
#include "giant/roots.hpp"
#include "giant/units.hpp"

namespace giant {

namespace {

constexpr double default_gamma = units::angular_from_mhz(2.0);
constexpr double default_omega0 = units::angular_from_ghz(3.2);

std::complex<double> phasor_sum(const std::vector<CouplingPoint>& pts, double omega, double omega0) {
    std::complex<double> s{0.0, 0.0};
    for (const auto& p : pts) s += std::sqrt(p.strength) * std::polar(1.0, accumulated_phase(omega, p.position, omega0));
    return s;
}

// Pair sum over shared waveguides. Atoms are visited in layout order so
// that (j, k) and (k, j) perform the identical floating-point sequence.
double pair_sum(const CouplingLayout& layout, int atom_j, int atom_k, double omega, PairRate kind) {
    std::size_t a = layout.index_of(atom_j);
    std::size_t b = layout.index_of(atom_k);
    if (a == b) throw ConfigError("pair rate requested for atom " + std::to_string(atom_j) + " with itself");
    if (a > b) std::swap(a, b);
    const auto& pa = layout.atoms[a].points;
    const auto& pb = layout.atoms[b].points;
    double total = 0.0;
    for (const auto& [wg, list_a] : pa) {
        auto it = pb.find(wg);
        if (it == pb.end()) continue;
        for (const auto& p : list_a) {
            for (const auto& q : it->second) {
                const double phi = accumulated_phase(omega, std::abs(p.position - q.position), layout.omega0);
                const double amp = std::sqrt(p.strength * q.strength);
                total += kind == PairRate::g ? 0.5 * amp * std::sin(phi) : amp * std::cos(phi);
            }
        }
    }
    return total;
}

double resolve(double v, double fallback) { return v > 0.0 ? v : fallback; }

}  // namespace

double AtomGeometry::max_strength() const {
    double m = 0.0;
    for (const auto& [wg, pts] : points)
        for (const auto& p : pts) m = std::max(m, p.strength);
    return m;
}

std::size_t CouplingLayout::index_of(int atom_id) const {
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i].atom_id == atom_id) return i;
    throw ConfigError("unknown atom id " + std::to_string(atom_id));
}

double CouplingLayout::max_strength() const {
    double m = 0.0;
    for (const auto& a : atoms) m = std::max(m, a.max_strength());
    return m;
}

void CouplingLayout::validate() const {
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) throw ConfigError("layout: omega0 must be positive");
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const auto& a = atoms[i];
        for (std::size_t j = 0; j < i; ++j)
            if (atoms[j].atom_id == a.atom_id) throw ConfigError("layout: duplicate atom id " + std::to_string(a.atom_id));
        if (a.points.empty()) throw ConfigError("layout: atom " + std::to_string(a.atom_id) + " has no coupling points");
        for (const auto& [wg, pts] : a.points) {
            if (std::find(waveguides.begin(), waveguides.end(), wg) == waveguides.end())
                throw ConfigError("layout: atom " + std::to_string(a.atom_id) + " references unknown waveguide " +
                                  std::to_string(wg));
            if (pts.empty())
                throw ConfigError("layout: atom " + std::to_string(a.atom_id) + " has an empty point list");
            for (std::size_t n = 0; n < pts.size(); ++n) {
                if (!(pts[n].strength > 0.0) || !std::isfinite(pts[n].strength))
                    throw ConfigError("layout: nonpositive coupling strength on atom " + std::to_string(a.atom_id));
                if (!std::isfinite(pts[n].position))
                    throw ConfigError("layout: non-finite position on atom " + std::to_string(a.atom_id));
                if (n > 0 && !(pts[n].position > pts[n - 1].position))
                    throw ConfigError("layout: positions not strictly increasing on atom " + std::to_string(a.atom_id));
            }
        }
    }
}

double accumulated_phase(double omega, double distance, double omega0) {
    return units::two_pi * (omega / omega0) * distance;
}

double individual_decay(const CouplingLayout& layout, int atom_id, double omega) {
    const auto& atom = layout.atom(atom_id);
    double total = 0.0;
    for (const auto& [wg, pts] : atom.points) total += std::norm(phasor_sum(pts, omega, layout.omega0));
    return total;
}

double exchange_coupling(const CouplingLayout& layout, int atom_j, int atom_k, double omega) {
    return pair_sum(layout, atom_j, atom_k, omega, PairRate::g);
}

double collective_decay(const CouplingLayout& layout, int atom_j, int atom_k, double omega) {
    return pair_sum(layout, atom_j, atom_k, omega, PairRate::gamma_coll);
}

double two_frequency_rate(const CouplingLayout& layout, int atom_j, int atom_k, double omega_j, double omega_k,
                          PairRate kind) {
    return pair_sum(layout, atom_j, atom_k, 0.5 * (omega_j + omega_k), kind);
}

RateTable rate_table(const CouplingLayout& layout, const std::vector<double>& frequencies) {
    const std::size_t n = layout.size();
    if (frequencies.size() != n)
        throw ConfigError("rate_table: expected " + std::to_string(n) + " frequencies, got " +
                          std::to_string(frequencies.size()));
    RateTable t;
    t.evaluated_at = frequencies;
    t.gamma_ind.resize(n);
    t.g.assign(n, std::vector<double>(n, 0.0));
    t.gamma_coll.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        t.gamma_ind[j] = individual_decay(layout, layout.atoms[j].atom_id, frequencies[j]);
        for (std::size_t k = j + 1; k < n; ++k) {
            const int a = layout.atoms[j].atom_id, b = layout.atoms[k].atom_id;
            t.g[j][k] = t.g[k][j] = two_frequency_rate(layout, a, b, frequencies[j], frequencies[k], PairRate::g);
            t.gamma_coll[j][k] = t.gamma_coll[k][j] =
                two_frequency_rate(layout, a, b, frequencies[j], frequencies[k], PairRate::gamma_coll);
        }
    }
    return t;
}

std::vector<double> find_df_frequencies(const CouplingLayout& layout, int atom_id, double band_lo, double band_hi,
                                        double tol) {
    if (!(tol > 0.0)) throw ConfigError("find_df_frequencies: tol must be positive");
    if (!(band_hi > band_lo)) throw ConfigError("find_df_frequencies: empty band");
    const double w0 = layout.omega0;
    if ((band_hi - band_lo) > 16.0 * w0) throw ConfigError("find_df_frequencies: band wider than 16 omega0");
    const auto& atom = layout.atom(atom_id);
    const auto& pts = atom.points.begin()->second;
    const double gmax = atom.max_strength();

    const std::function<double(double)> re = [&](double w) { return phasor_sum(pts, w, w0).real(); };
    const std::function<double(double)> im = [&](double w) { return phasor_sum(pts, w, w0).imag(); };
    const auto samples = static_cast<std::size_t>(std::ceil(512.0 * (band_hi - band_lo) / w0)) + 1;

    std::vector<double> candidates;
    for (const auto& fn : {re, im}) {
        for (const auto& b : sign_change_brackets(fn, band_lo, band_hi, samples))
            candidates.push_back(bisect(fn, b, 1e-12 * w0));
    }
    std::sort(candidates.begin(), candidates.end());

    // Re and Im usually vanish together; where one of them only touches zero its
    // bisection lands slightly off, so candidates within 1e-6 omega0 are merged
    // and the one with the smallest decay is kept.
    std::vector<double> roots, best;
    for (double c : candidates) {
        if (c < band_lo || c >= band_hi) continue;
        const double rate = individual_decay(layout, atom_id, c);
        if (!(rate < tol * gmax)) continue;
        if (!roots.empty() && c - roots.back() < 1e-6 * w0) {
            if (rate < best.back()) {
                roots.back() = c;
                best.back() = rate;
            }
            continue;
        }
        roots.push_back(c);
        best.push_back(rate);
    }
    return roots;
}

CouplingLayout preset_two_atom(PresetScale scale) {
    const double gamma = resolve(scale.gamma, default_gamma);
    CouplingLayout layout;
    layout.omega0 = resolve(scale.omega0, default_omega0);
    layout.waveguides = {0};
    const double pos[2][4] = {{0, 2, 4, 6}, {3, 5, 7, 9}};
    for (int a = 0; a < 2; ++a) {
        AtomGeometry atom;
        atom.atom_id = a;
        for (double x : pos[a]) atom.points[0].push_back({x, gamma});
        layout.atoms.push_back(std::move(atom));
    }
    return layout;
}

CouplingLayout preset_chain(int n_atoms, PresetScale scale, double neighbour_offset) {
    if (n_atoms < 1) throw ConfigError("preset_chain: n_atoms must be >= 1");
    const double gamma = resolve(scale.gamma, default_gamma);
    const double weights[6] = {1.0, 1.0, chain_middle_strength, chain_middle_strength, 1.0, 1.0};
    CouplingLayout layout;
    layout.omega0 = resolve(scale.omega0, default_omega0);
    layout.waveguides = {0};
    for (int k = 0; k < n_atoms; ++k) {
        AtomGeometry atom;
        atom.atom_id = k;
        for (int j = 0; j < 6; ++j) atom.points[0].push_back({neighbour_offset * k + 2.0 * j, weights[j] * gamma});
        layout.atoms.push_back(std::move(atom));
    }
    return layout;
}

int grid_atom_id(int cols, int row, int col) { return row * cols + col; }

// Waveguide w runs between rows w and w+1. Along it, row-w atoms occupy even
// slots and row-(w+1) atoms odd slots, so that each atom is braided with the two
// nearest atoms of the other row. A single row uses one waveguide with
// consecutive slots.
CouplingLayout preset_grid(int rows, int cols, PresetScale scale) {
    if (rows < 1 || cols < 1) throw ConfigError("preset_grid: rows and cols must be >= 1");
    const double gamma = resolve(scale.gamma, default_gamma);
    CouplingLayout layout;
    layout.omega0 = resolve(scale.omega0, default_omega0);
    const int n_wg = std::max(rows - 1, 1);
    for (int w = 0; w < n_wg; ++w) layout.waveguides.push_back(w);

    auto add_points = [&](AtomGeometry& atom, int wg, int slot) {
        auto& list = atom.points[wg];
        for (int j = 0; j < 10; ++j) list.push_back({grid_default_offset * slot + 2.0 * j, gamma});
    };
    for (int r = 0; r < rows; ++r) {
        for (int c = 0; c < cols; ++c) {
            AtomGeometry atom;
            atom.atom_id = grid_atom_id(cols, r, c);
            if (rows == 1) {
                add_points(atom, 0, c);
            } else {
                if (r >= 1) add_points(atom, r - 1, 2 * c + 1);
                if (r <= rows - 2) add_points(atom, r, 2 * c);
            }
            layout.atoms.push_back(std::move(atom));
        }
    }
    return layout;
}

MarkovRatio markovianity_ratio(double gamma_angular, double length_m, double v_m_per_s) {
    if (!(gamma_angular >= 0.0) || !std::isfinite(gamma_angular)) throw ConfigError("markovianity_ratio: gamma must be >= 0");
    if (!(length_m >= 0.0) || !std::isfinite(length_m)) throw ConfigError("markovianity_ratio: length must be >= 0");
    if (!(v_m_per_s > 0.0) || !std::isfinite(v_m_per_s)) throw ConfigError("markovianity_ratio: v must be > 0");
    const double r = gamma_angular * length_m / v_m_per_s;
    return {r, r / units::two_pi};
}

}  // namespace giant
