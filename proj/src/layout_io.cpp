#include "giant/layout_io.hpp"

#include <cstdio>
#include <fstream>

#include "giant/error.hpp"
#include "giant/units.hpp"

namespace giant {

using nlohmann::json;

json layout_to_json(const CouplingLayout& layout) {
    json doc;
    doc["omega0_GHz"] = units::ghz_from_angular(layout.omega0);
    doc["waveguides"] = layout.waveguides;
    json atoms = json::array();
    for (const auto& a : layout.atoms) {
        json pts = json::array();
        for (const auto& [wg, list] : a.points)
            for (const auto& p : list)
                pts.push_back({{"waveguide", wg}, {"position_dx", p.position},
                               {"strength_MHz", units::mhz_from_angular(p.strength)}});
        atoms.push_back({{"id", a.atom_id}, {"points", pts}});
    }
    doc["atoms"] = atoms;
    if (layout.scale) doc["scale"] = {{"dx_m", layout.scale->dx_m}, {"v_m_per_s", layout.scale->v_m_per_s}};
    return doc;
}

CouplingLayout layout_from_json(const json& doc) {
    try {
        CouplingLayout layout;
        layout.omega0 = units::angular_from_ghz(doc.at("omega0_GHz").get<double>());
        layout.waveguides = doc.at("waveguides").get<std::vector<int>>();
        for (const auto& a : doc.at("atoms")) {
            AtomGeometry atom;
            atom.atom_id = a.at("id").get<int>();
            for (const auto& p : a.at("points"))
                atom.points[p.at("waveguide").get<int>()].push_back(
                    {p.at("position_dx").get<double>(), units::angular_from_mhz(p.at("strength_MHz").get<double>())});
            layout.atoms.push_back(std::move(atom));
        }
        if (doc.contains("scale"))
            layout.scale = PhysicalScale{doc["scale"].at("dx_m").get<double>(), doc["scale"].at("v_m_per_s").get<double>()};
        layout.validate();
        return layout;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("layout json: ") + e.what());
    }
}

CouplingLayout load_layout(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open layout file " + path);
    try {
        return layout_from_json(json::parse(in));
    } catch (const json::parse_error& e) {
        throw ConfigError("layout file " + path + ": " + e.what());
    }
}

void save_layout(const CouplingLayout& layout, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path);
    out << layout_to_json(layout).dump(2) << '\n';
}

std::uint64_t layout_hash(const CouplingLayout& layout) {
    const std::string s = layout_to_json(layout).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace giant
