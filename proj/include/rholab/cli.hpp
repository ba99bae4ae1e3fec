#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "rholab/generators.hpp"
#include "rholab/grid.hpp"

namespace rholab {

inline constexpr std::string_view tool_name = "rholab";
inline constexpr std::string_view tool_version = "0.1.0";

enum ExitCode : int { exit_pass = 0, exit_violation = 1, exit_input = 2 };

/// Parses "gen:kind[:key=value,...]" into a generator spec. Center
/// coordinates are separated by '/'.
GeneratorSpec parse_generator_source(std::string_view text);

/// Flat "key = value" lines, '#' comments, turned into "--key=value" tokens.
/// A "command" key names the subcommand and is returned separately.
std::vector<std::string> read_flat_config(const std::string& path, std::string* command);

/// Runs one subcommand; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rholab
