#include "commands.hpp"

#include <cmath>
#include <map>
#include <string>

#include "giant/error.hpp"
#include "giant/gates.hpp"
#include "giant/layout_io.hpp"
#include "giant/trotter.hpp"
#include "giant/units.hpp"

namespace giant::cli {

namespace {

const json& section(const RunContext& run, const char* name) {
    static const json empty = json::object();
    const auto& c = run.config();
    if (!c.contains(name)) return empty;
    if (!c.at(name).is_object()) throw ConfigError(std::string("config section '") + name + "' must be an object");
    return c.at(name);
}

double nonneg(const json& node, const char* key, double fallback) {
    const double v = node.value(key, fallback);
    if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(std::string(key) + " must be a finite number >= 0");
    return v;
}

double positive(const json& node, const char* key, double fallback) {
    const double v = node.value(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(key) + " must be a finite number > 0");
    return v;
}

std::vector<int> read_ints(const json& node, const char* key, std::vector<int> fallback) {
    if (!node.contains(key)) return fallback;
    auto v = node.at(key).get<std::vector<int>>();
    if (v.empty()) throw ConfigError(std::string(key) + " must be non-empty");
    return v;
}

std::vector<double> grid_or(const json& node, const char* key, std::vector<double> fallback) {
    return node.contains(key) ? read_grid(node.at(key), key) : fallback;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

struct LayoutSource {
    CouplingLayout layout;
    double gamma = 0.0;  // reference rate for normalised output, rad/us
};

LayoutSource resolve_layout(const RunContext& run, const char* default_preset) {
    const json& s = section(run, "layout");
    LayoutSource out;
    if (s.contains("file")) {
        out.layout = load_layout(s.at("file").get<std::string>());
        out.gamma = s.contains("gamma_mhz") ? units::angular_from_mhz(positive(s, "gamma_mhz", 2.0))
                                            : out.layout.max_strength();
        return out;
    }
    const std::string preset = s.value("preset", std::string(default_preset));
    const PresetScale scale{units::angular_from_mhz(positive(s, "gamma_mhz", 2.0)),
                            units::angular_from_ghz(positive(s, "omega0_ghz", 3.2))};
    if (preset == "two_atom") {
        out.layout = preset_two_atom(scale);
    } else if (preset == "chain") {
        out.layout = preset_chain(s.value("atoms", 4), scale);
    } else if (preset == "grid") {
        out.layout = preset_grid(s.value("rows", 3), s.value("cols", 3), scale);
    } else {
        throw ConfigError("unknown layout preset '" + preset + "' (two_atom, chain, grid)");
    }
    out.gamma = scale.gamma;
    return out;
}

std::vector<double> as_row(const json& j) { return j.get<std::vector<double>>(); }

// Runs the points that are not in the manifest yet and returns every point's
// result in order.
std::vector<json> sweep(RunContext& run, int jobs, const std::vector<std::string>& keys,
                        const std::function<json(std::size_t)>& compute) {
    std::vector<json> results(keys.size());
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (run.has_point(keys[i]))
            results[i] = run.point(keys[i]);
        else
            todo.push_back(i);
    }
    run_jobs(
        todo.size(), jobs, [&](std::size_t j) { return compute(todo[j]); },
        [&](std::size_t j, json r) {
            run.record_point(keys[todo[j]], r);
            results[todo[j]] = std::move(r);
            run.checkpoint(false);
        });
    return results;
}

std::string key_of(const char* tag, std::initializer_list<double> values) {
    std::string k = tag;
    for (double v : values) k += ":" + format_number(v);
    return k;
}

// rates ----------------------------------------------------------------------

void cmd_rates(RunContext& run, int jobs) {
    const auto src = resolve_layout(run, "two_atom");
    const auto& layout = src.layout;
    run.set_layout_hash(hex64(layout_hash(layout)));
    const json& s = section(run, "rates");
    const int samples = s.value("samples", 1601);
    if (samples < 1) throw ConfigError("rates.samples must be >= 1");
    const double lo = s.value("from", 0.0), hi = s.value("to", 1.0);
    if (!(hi >= lo)) throw ConfigError("rates: empty frequency band");
    const auto omega = s.contains("omega") ? read_grid(s.at("omega"), "rates.omega") : linspace(lo, hi, samples);

    std::vector<int> ids;
    for (const auto& a : layout.atoms) ids.push_back(a.atom_id);
    if (s.contains("atoms")) ids = s.at("atoms").get<std::vector<int>>();
    std::vector<std::pair<int, int>> pairs;
    if (s.contains("pairs")) {
        for (const auto& p : s.at("pairs")) pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    } else {
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j) pairs.emplace_back(ids[i], ids[j]);
    }
    for (int id : ids) layout.index_of(id);
    for (auto [a, b] : pairs) {
        layout.index_of(a);
        layout.index_of(b);
        if (a == b) throw ConfigError("rates: pair with identical atoms");
    }

    std::vector<std::string> header{"omega_over_omega0"};
    for (int id : ids) header.push_back("gamma_ind_" + std::to_string(id));
    for (auto [a, b] : pairs) header.push_back("g_" + std::to_string(a) + "_" + std::to_string(b));
    for (auto [a, b] : pairs) header.push_back("gamma_coll_" + std::to_string(a) + "_" + std::to_string(b));

    constexpr std::size_t block = 128;
    std::vector<std::string> keys;
    for (std::size_t b = 0; b * block < omega.size(); ++b) keys.push_back("block:" + std::to_string(b));
    const auto results = sweep(run, jobs, keys, [&](std::size_t b) {
        json rows = json::array();
        for (std::size_t i = b * block; i < std::min(omega.size(), (b + 1) * block); ++i) {
            const double w = omega[i] * layout.omega0;
            std::vector<double> row{omega[i]};
            for (int id : ids) row.push_back(individual_decay(layout, id, w) / src.gamma);
            for (auto [a, c] : pairs) row.push_back(exchange_coupling(layout, a, c, w) / src.gamma);
            for (auto [a, c] : pairs) row.push_back(collective_decay(layout, a, c, w) / src.gamma);
            rows.push_back(row);
        }
        return rows;
    });
    CsvWriter csv(header);
    for (const auto& r : results)
        for (const auto& row : r) csv.add(as_row(row));
    run.write_csv("rates.csv", csv);
}

// df -------------------------------------------------------------------------

void cmd_df(RunContext& run, int jobs) {
    const auto src = resolve_layout(run, "two_atom");
    const auto& layout = src.layout;
    run.set_layout_hash(hex64(layout_hash(layout)));
    const json& s = section(run, "df");
    const double lo = s.value("from", 0.0), hi = s.value("to", 1.0);
    const double tol = positive(s, "tolerance", 1e-9);
    if (!(hi > lo) || lo < 0.0) throw ConfigError("df: band must satisfy 0 <= from < to");

    std::vector<std::string> keys;
    for (const auto& a : layout.atoms) keys.push_back("atom:" + std::to_string(a.atom_id));
    const auto results = sweep(run, jobs, keys, [&](std::size_t i) {
        const int id = layout.atoms[i].atom_id;
        // Zero sits exactly at the lower edge for lo = 0; start just above it.
        const double from = std::max(lo * layout.omega0, 1e-9 * layout.omega0);
        const auto roots = find_df_frequencies(layout, id, from, hi * layout.omega0, tol);
        std::vector<double> scaled;
        for (double w : roots) scaled.push_back(w / layout.omega0);
        return json{{"atom", id}, {"df_over_omega0", scaled}};
    });
    json doc;
    doc["omega0_rad_per_us"] = layout.omega0;
    doc["band_over_omega0"] = {lo, hi};
    doc["atoms"] = results;
    run.write_json("df.json", doc);
}

// gate-fidelity --------------------------------------------------------------

TwoAtomSetup read_setup(const json& s, double omega0_over_gamma) {
    TwoAtomSetup setup;
    setup.gamma_mhz = positive(s, "gamma_mhz", setup.gamma_mhz);
    setup.omega0_over_gamma = positive(s, "omega0_over_gamma", omega0_over_gamma);
    setup.anharmonicity_over_omega0 = s.value("anharmonicity_over_omega0", setup.anharmonicity_over_omega0);
    if (s.contains("anharmonicity_mhz")) {
        const double w0_mhz = setup.omega0_over_gamma * setup.gamma_mhz;
        setup.anharmonicity_over_omega0 = s.at("anharmonicity_mhz").get<double>() / w0_mhz;
    }
    return setup;
}

GateKind read_two_qubit_gate(const json& s) {
    const std::string g = s.value("gate", std::string("iswap"));
    if (g == "iswap") return GateKind::rxy;
    if (g == "cz") return GateKind::cz;
    throw ConfigError("gate must be 'iswap' or 'cz', got '" + g + "'");
}

void cmd_gate_fidelity(RunContext& run, int jobs) {
    const json& s = section(run, "gate_fidelity");
    const GateKind kind = read_two_qubit_gate(s);
    const TwoAtomSetup setup = read_setup(s, 1600.0);
    const auto ctx0 = two_atom_context(setup, 0.0, 0.0);
    run.set_layout_hash(hex64(layout_hash(ctx0.layout)));
    const auto default_grid = linspace(0.0, 0.02, 11);
    const auto ex = grid_or(s, "ex_over_g", default_grid);
    const auto ph = grid_or(s, "phi_over_g", default_grid);
    for (double v : ex)
        if (v < 0.0) throw ConfigError("ex_over_g values must be >= 0");
    for (double v : ph)
        if (v < 0.0) throw ConfigError("phi_over_g values must be >= 0");

    std::vector<std::string> keys;
    std::vector<std::pair<double, double>> pts;
    for (double a : ex)
        for (double b : ph) {
            pts.emplace_back(a, b);
            keys.push_back(key_of("point", {a, b}));
        }
    // Extra point at the quoted hardware rates.
    const json point = s.value("point", json{{"gamma_ex", 0.02}, {"gamma_phi", 0.05}});
    const double pex = nonneg(point, "gamma_ex", 0.02), pphi = nonneg(point, "gamma_phi", 0.05);
    keys.push_back(key_of("rates", {pex, pphi}));

    const auto results = sweep(run, jobs, keys, [&](std::size_t i) {
        SweepResult r;
        if (i < pts.size()) {
            r = fidelity_sweep(kind, setup, {pts[i].first}, {pts[i].second});
        } else {
            const double g = std::abs(two_atom_gate(ctx0, kind, kind == GateKind::rxy ? 0.5 * units::pi : units::pi).coupling);
            r = fidelity_sweep(kind, setup, {pex / g}, {pphi / g});
        }
        const auto& p = r.points.front();
        return json{{"g", r.coupling}, {"gamma_ex", p.gamma_ex},  {"gamma_phi", p.gamma_phi},
                    {"fidelity", p.fidelity}, {"raw", p.raw_fidelity}, {"leakage", p.leakage}};
    });

    const double g = results.front().at("g").get<double>();
    CsvWriter csv({"gamma_ex_over_g", "gamma_phi_over_g", "process_fidelity", "average_fidelity", "raw_fidelity",
                   "leakage"});
    std::vector<SweepPoint> sweep_points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& r = results[i];
        const double f = r.at("fidelity").get<double>();
        csv.add({pts[i].first, pts[i].second, f, average_gate_fidelity(f, 4), r.at("raw").get<double>(),
                 r.at("leakage").get<double>()});
        sweep_points.push_back({r.at("gamma_ex").get<double>(), r.at("gamma_phi").get<double>(), f,
                                r.at("raw").get<double>(), r.at("leakage").get<double>()});
    }
    run.write_csv("sweep.csv", csv);

    json fit;
    fit["gate"] = kind == GateKind::rxy ? "iswap" : "cz";
    fit["gamma_mhz"] = setup.gamma_mhz;
    fit["g_over_gamma"] = g / units::angular_from_mhz(setup.gamma_mhz);
    if (sweep_points.size() >= 3) {
        const auto f = fit_plane(sweep_points, g);
        fit["process"] = {{"baseline", f.baseline}, {"slope_ex", f.slope_ex}, {"slope_phi", f.slope_phi},
                          {"rms_residual", f.residual}, {"nonlinear", f.nonlinear}};
        // F_ave = (4 F + 1) / 5 scales the slopes by 4/5.
        fit["average"] = {{"baseline", average_gate_fidelity(f.baseline, 4)},
                          {"slope_ex", 0.8 * f.slope_ex},
                          {"slope_phi", 0.8 * f.slope_phi}};
    } else {
        fit["process"] = nullptr;
    }
    const double fp = results.back().at("fidelity").get<double>();
    fit["point"] = {{"gamma_ex", pex},
                    {"gamma_phi", pphi},
                    {"process_fidelity", fp},
                    {"average_fidelity", average_gate_fidelity(fp, 4)},
                    {"leakage", results.back().at("leakage").get<double>()}};
    run.write_json("fit.json", fit);
}

// czphi-scan -----------------------------------------------------------------

void cmd_czphi_scan(RunContext& run, int jobs) {
    const json& s = section(run, "czphi_scan");
    const TwoAtomSetup setup = read_setup(s, 800.0);
    run.set_layout_hash(hex64(layout_hash(two_atom_context(setup, 0.0, 0.0).layout)));
    std::vector<double> phi_default;
    for (int i = 1; i < 32; ++i) phi_default.push_back(units::two_pi * i / 32);
    const auto phi = grid_or(s, "phi", phi_default);
    const auto ex = grid_or(s, "gamma_ex", {0.0, 0.01, 0.02, 0.04});
    const double gphi = nonneg(s, "gamma_phi", 0.0);
    for (double v : ex)
        if (v < 0.0) throw ConfigError("czphi_scan.gamma_ex values must be >= 0");

    std::vector<std::string> keys;
    std::vector<std::pair<double, double>> pts;
    for (double p : phi)
        for (double e : ex) {
            pts.emplace_back(p, e);
            keys.push_back(key_of("point", {p, e}));
        }
    const auto results = sweep(run, jobs, keys, [&](std::size_t i) {
        const auto row = czphi_fidelity_scan(setup, {pts[i].first}, {pts[i].second}, gphi).front();
        return json(std::vector<double>{row.phi, row.gamma_ex, row.detuning, row.duration, row.fidelity,
                                        row.raw_fidelity});
    });
    CsvWriter csv({"phi", "gamma_ex", "detuning", "duration_us", "process_fidelity", "raw_fidelity"});
    for (const auto& r : results) csv.add(as_row(r));
    run.write_csv("czphi_scan.csv", csv);
}

// xxz and trotter-error --------------------------------------------------------

XXZModel read_model(const json& s) {
    const json m = s.value("model", json::object());
    XXZModel model;
    model.sites = m.value("sites", 4);
    model.J = m.value("J", 1.0);
    model.Jz = m.value("Jz", 0.0);
    model.Gamma = m.value("Gamma", 0.0);
    model.validate();
    return model;
}

TrotterHardware read_hardware(const json& s) {
    const json h = s.value("hardware", json::object());
    TrotterHardware p;
    p.gamma_mhz = positive(h, "gamma_mhz", p.gamma_mhz);
    p.gamma_ex = nonneg(h, "gamma_ex", p.gamma_ex);
    p.gamma_phi = nonneg(h, "gamma_phi", p.gamma_phi);
    p.omega0_ghz = positive(h, "omega0_ghz", p.omega0_ghz);
    p.t3 = nonneg(h, "t3", p.t3);
    p.virtual_z = h.value("virtual_z", p.virtual_z);
    p.decay_target = positive(h, "decay_target", p.decay_target);
    p.decay_tolerance = nonneg(h, "decay_tolerance", p.decay_tolerance);
    p.secular_exchange = h.value("secular_exchange", p.secular_exchange);
    return p;
}

std::vector<double> read_times(const json& s) {
    const auto t = grid_or(s, "times", linspace(0.0, 4.0, 41));
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (!(t[i] >= 0.0)) throw ConfigError("times must be >= 0");
        if (i && t[i] < t[i - 1]) throw ConfigError("times must be ascending");
    }
    return t;
}

json simulate_point(const std::string& mode, const XXZModel& model, double t, int steps, const ChainHardware* hw) {
    std::vector<double> n;
    double leak = 0.0;
    if (mode == "exact") {
        n = oracle::exact_lindblad(model, {t}, oracle::excitation_state(model.sites, 0)).n.back();
    } else if (mode == "ideal") {
        n = ideal_simulation(model, {t}, steps).n.back();
    } else {
        const auto r = run_simulation(model, {t}, steps, *hw);
        n = r.n.back();
        leak = r.leakage.back();
    }
    return json{{"n", n}, {"leakage", leak}};
}

std::string read_mode(const json& s, const char* key, const char* fallback) {
    const std::string mode = s.value(key, std::string(fallback));
    if (mode != "hardware" && mode != "ideal" && mode != "exact")
        throw ConfigError(std::string(key) + " must be hardware, ideal or exact");
    return mode;
}

void cmd_xxz(RunContext& run, int jobs) {
    const json& s = section(run, "xxz");
    const XXZModel model = read_model(s);
    const int steps = s.value("steps", 30);
    if (steps < 1) throw ConfigError("xxz.steps must be >= 1");
    const auto times = read_times(s);
    const std::string mode = read_mode(s, "mode", "hardware");
    ChainHardware hw;
    if (mode == "hardware") {
        hw = chain_hardware(model.sites, read_hardware(s));
        run.set_layout_hash(hex64(layout_hash(hw.layout)));
    }
    std::vector<std::string> keys;
    for (double t : times) keys.push_back(key_of("t", {t}));
    const auto results = sweep(run, jobs, keys, [&](std::size_t i) {
        return simulate_point(mode, model, times[i], steps, mode == "hardware" ? &hw : nullptr);
    });
    std::vector<std::string> header{"t"};
    for (int k = 1; k <= model.sites; ++k) header.push_back("n" + std::to_string(k));
    header.push_back("leakage");
    CsvWriter csv(header);
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<double> row{times[i]};
        for (const auto& v : results[i].at("n")) row.push_back(v.get<double>());
        row.push_back(results[i].at("leakage").get<double>());
        csv.add(row);
    }
    run.write_csv("traces.csv", csv);
}

void cmd_trotter_error(RunContext& run, int jobs) {
    const json& s = section(run, "trotter_error");
    const XXZModel model = read_model(s);
    const auto steps = read_ints(s, "steps", {10, 20, 30});
    for (int l : steps)
        if (l < 1) throw ConfigError("trotter_error.steps must be >= 1");
    const auto times = read_times(s);
    const std::string mode = read_mode(s, "gates", "hardware");
    if (mode == "exact") throw ConfigError("trotter_error.gates must be hardware or ideal");
    ChainHardware hw;
    if (mode == "hardware") {
        hw = chain_hardware(model.sites, read_hardware(s));
        run.set_layout_hash(hex64(layout_hash(hw.layout)));
    }
    const bool sanity = s.value("sanity_row", true);

    // Exact reference first, then every (l, t) point.
    std::vector<std::string> keys{"exact"};
    for (int l : steps)
        for (double t : times) keys.push_back(key_of("l_t", {double(l), t}));
    const auto results = sweep(run, jobs, keys, [&](std::size_t i) {
        if (i == 0) {
            const auto ex = oracle::exact_lindblad(model, times, oracle::excitation_state(model.sites, 0));
            return json(ex.n);
        }
        const std::size_t li = (i - 1) / times.size(), ti = (i - 1) % times.size();
        return simulate_point(mode, model, times[ti], steps[li], mode == "hardware" ? &hw : nullptr);
    });
    oracle::Traces exact{times, results[0].get<std::vector<std::vector<double>>>()};

    std::vector<std::string> header{"l", "t"};
    for (int k = 1; k <= model.sites; ++k) header.push_back("dn" + std::to_string(k));
    header.push_back("max_abs");
    CsvWriter csv(header);
    auto emit = [&](double l, const oracle::ErrorReport& rep) {
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            std::vector<double> row{l, times[ti]};
            row.insert(row.end(), rep.dn[ti].begin(), rep.dn[ti].end());
            row.push_back(rep.max_per_time[ti]);
            csv.add(row);
        }
    };
    // l = 0 rows compare the reference with itself.
    if (sanity) emit(0.0, oracle::error_report(exact, exact));
    std::vector<oracle::ErrorReport> reports;
    for (std::size_t li = 0; li < steps.size(); ++li) {
        oracle::Traces sim{times, {}};
        for (std::size_t ti = 0; ti < times.size(); ++ti)
            sim.n.push_back(results[1 + li * times.size() + ti].at("n").get<std::vector<double>>());
        reports.push_back(oracle::error_report(sim, exact));
        emit(steps[li], reports.back());
    }
    run.write_csv("dn.csv", csv);

    const auto l_opt = oracle::optimal_steps(steps, reports);
    CsvWriter best({"t", "l_opt"});
    for (std::size_t ti = 0; ti < times.size(); ++ti) best.add({times[ti], double(l_opt[ti])});
    run.write_csv("l_opt.csv", best);

    json summary = json::array();
    for (std::size_t li = 0; li < steps.size(); ++li)
        summary.push_back({{"l", steps[li]}, {"max_abs", reports[li].max_abs}, {"mean_abs", reports[li].mean_abs}});
    run.write_json("summary.json", json{{"gates", mode}, {"steps", summary}});
}

// markov-check -----------------------------------------------------------------

void cmd_markov_check(RunContext& run, int) {
    const json& s = section(run, "markov_check");
    const double gamma_mhz = nonneg(s, "gamma_mhz", 2.0);
    const double v = positive(s, "v_m_per_s", 1.3e8);
    const double threshold = positive(s, "threshold", 0.1);
    const auto lengths = grid_or(s, "length_m", {0.01, 0.1, 1.0, 10.0, 130.0});
    CsvWriter csv({"length_m", "ratio_angular", "ratio_ordinary", "markovian"});
    for (double l : lengths) {
        const auto r = markovianity_ratio(units::angular_from_mhz(gamma_mhz) * 1e6, l, v);
        csv.add({l, r.angular, r.ordinary, r.angular < threshold ? 1.0 : 0.0});
    }
    run.write_csv("markov.csv", csv);
    // Longest waveguide that keeps gamma L / v (angular gamma) below the threshold.
    run.write_json("markov.json", json{{"gamma_mhz", gamma_mhz},
                                       {"v_m_per_s", v},
                                       {"threshold", threshold},
                                       {"max_length_m", threshold * v / (units::angular_from_mhz(gamma_mhz) * 1e6)}});
}

}  // namespace

std::vector<double> read_grid(const json& node, const std::string& what) {
    std::vector<double> v;
    if (node.is_array()) {
        v = node.get<std::vector<double>>();
    } else if (node.is_object()) {
        const int n = node.at("samples").get<int>();
        if (n < 1) throw ConfigError(what + ".samples must be >= 1");
        v = linspace(node.at("min").get<double>(), node.at("max").get<double>(), n);
    } else {
        throw ConfigError(what + " must be an array or {min, max, samples}");
    }
    if (v.empty()) throw ConfigError(what + " grid is empty");
    for (double x : v)
        if (!std::isfinite(x)) throw ConfigError(what + " contains a non-finite value");
    return v;
}

const std::vector<CommandInfo>& commands() {
    static const std::vector<CommandInfo> list = {
        {"rates", "individual decay, exchange and collective decay versus frequency", cmd_rates},
        {"df", "decoherence-free frequencies of every atom", cmd_df},
        {"gate-fidelity", "iSWAP or CZ fidelity over a (Gamma_ex, Gamma_phi) grid and plane fit", cmd_gate_fidelity},
        {"czphi-scan", "CZphi fidelity over phi and Gamma_ex", cmd_czphi_scan},
        {"xxz", "population traces of the dissipative XXZ chain", cmd_xxz},
        {"trotter-error", "deviation from the exact dynamics per number of Trotter steps", cmd_trotter_error},
        {"markov-check", "gamma L / v for a list of waveguide lengths", cmd_markov_check},
    };
    return list;
}

}  // namespace giant::cli
