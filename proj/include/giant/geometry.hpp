#pragma once

#include <map>
#include <optional>
#include <vector>

namespace giant {

// One connection between an atom and a waveguide. Position in units of the
// elementary spacing dx, strength in rad/us.
struct CouplingPoint {
    double position;
    double strength;
};

struct AtomGeometry {
    int atom_id = 0;
    std::map<int, std::vector<CouplingPoint>> points;  // waveguide id -> points, ascending position

    double max_strength() const;
};

struct PhysicalScale {
    double dx_m;
    double v_m_per_s;
};

struct CouplingLayout {
    std::vector<AtomGeometry> atoms;
    std::vector<int> waveguides;
    double omega0 = 0.0;  // 2 pi v / dx, rad/us
    std::optional<PhysicalScale> scale;

    std::size_t size() const { return atoms.size(); }
    std::size_t index_of(int atom_id) const;
    const AtomGeometry& atom(int atom_id) const { return atoms[index_of(atom_id)]; }
    double max_strength() const;
    void validate() const;
};

struct RateTable {
    std::vector<double> gamma_ind;
    std::vector<std::vector<double>> g;
    std::vector<std::vector<double>> gamma_coll;
    std::vector<double> evaluated_at;
};

enum class PairRate { g, gamma_coll };

double accumulated_phase(double omega, double distance, double omega0);

double individual_decay(const CouplingLayout& layout, int atom_id, double omega);
double exchange_coupling(const CouplingLayout& layout, int atom_j, int atom_k, double omega);
double collective_decay(const CouplingLayout& layout, int atom_j, int atom_k, double omega);
double two_frequency_rate(const CouplingLayout& layout, int atom_j, int atom_k, double omega_j, double omega_k,
                          PairRate kind);

// Frequencies indexed by atom position in the layout (not by id).
RateTable rate_table(const CouplingLayout& layout, const std::vector<double>& frequencies);

// Zeros of the individual decay rate in [band_lo, band_hi). Returned roots satisfy
// Gamma_ind < tol * max coupling strength of the atom.
std::vector<double> find_df_frequencies(const CouplingLayout& layout, int atom_id, double band_lo, double band_hi,
                                        double tol = 1e-9);

struct PresetScale {
    double gamma = 0.0;   // rad/us, 0 selects 2pi * 2 MHz
    double omega0 = 0.0;  // rad/us, 0 selects 2pi * 3.2 GHz
};

CouplingLayout preset_two_atom(PresetScale scale = {});

inline constexpr double chain_default_offset = 7.0;
inline constexpr double chain_middle_strength = 1.4;
CouplingLayout preset_chain(int n_atoms, PresetScale scale = {}, double neighbour_offset = chain_default_offset);

inline constexpr double grid_default_offset = 9.0;
CouplingLayout preset_grid(int rows, int cols, PresetScale scale = {});
int grid_atom_id(int cols, int row, int col);

struct MarkovRatio {
    double angular;   // gamma in rad/s
    double ordinary;  // gamma/2pi in Hz
};
// gamma_angular in rad/s
MarkovRatio markovianity_ratio(double gamma_angular, double length_m, double v_m_per_s);

}  // namespace giant
