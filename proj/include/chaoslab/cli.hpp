#pragma once

// Command-line front end: system registry, argument handling and the
// exit-code contract (0 success, 2 negative mathematical outcome, 1 usage
// or internal error).

#include "chaoslab/io.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace chaoslab::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_negative = 2;

struct RunConfig {
    /// systems, shadow, chain-graph, proximal, certify-bohr, check-cert, horseshoe
    std::string command;
    std::string system_id;
    /// Command-specific options by long name without dashes.
    std::map<std::string, std::string> parameters;
    std::string out_path;
    std::optional<std::uint64_t> seed;
};

struct SystemInfo {
    std::string id;
    std::string kind;
    std::string description;
    std::string source;
};

std::vector<SystemInfo> builtin_systems();
/// User system definitions (*.json) found in dir, sorted by file name.
std::vector<SystemInfo> user_systems(const std::string& dir);
/// A built-in id or a path to a JSON system definition.
io::AnySystem resolve_system(const std::string& id_or_path);

/// Symbolic points as "left|core|right|offset" or JSON.
symbolic::BiInfSeq parse_symbolic_point(const std::string& text, int alphabet);
/// Torus points as "x,y" (decimals or a/b) or JSON.
toral::TorusPoint parse_torus_point(const std::string& text);

int run(const RunConfig& config, std::ostream& out, std::ostream& err);
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace chaoslab::cli
