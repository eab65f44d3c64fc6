#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "giant/geometry.hpp"

namespace giant {

// {omega0_GHz, waveguides, atoms:[{id, points:[{waveguide, position_dx, strength_MHz}]}]}
nlohmann::json layout_to_json(const CouplingLayout& layout);
CouplingLayout layout_from_json(const nlohmann::json& doc);

CouplingLayout load_layout(const std::string& path);
void save_layout(const CouplingLayout& layout, const std::string& path);

// FNV-1a over the canonical JSON dump.
std::uint64_t layout_hash(const CouplingLayout& layout);
std::string hex64(std::uint64_t v);

}  // namespace giant
