#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace hr::cli {

using ConfigEntries = std::vector<std::pair<std::string, std::string>>;

// "key = value" lines; '#' starts a comment, blank lines are ignored.
// Throws ParseError naming the offending line.
ConfigEntries parse_config_text(const std::string& text);
ConfigEntries load_config_file(const std::string& path);

// Appends "--key value" for every entry the subcommand accepts and the
// command line does not already set, so flags always win.
std::vector<std::string> merge_config(std::vector<std::string> args, const ConfigEntries& config,
                                      const std::function<bool(const std::string&)>& accepts);

// Shortest round-trip form is not used: 17 significant digits, '.' decimal.
std::string format_double(double x);

}  // namespace hr::cli
