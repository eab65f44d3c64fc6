#pragma once

#include <string>
#include <vector>

#include "run_support.hpp"

namespace giant::cli {

// Each command reads its own section of the configuration (named after the
// subcommand with '-' replaced by '_') plus the shared "layout" section.
using Command = void (*)(RunContext& run, int jobs);

struct CommandInfo {
    const char* name;
    const char* help;
    Command run;
};

const std::vector<CommandInfo>& commands();

// A grid is either an explicit array or {"min", "max", "samples"}.
std::vector<double> read_grid(const json& node, const std::string& what);

}  // namespace giant::cli
