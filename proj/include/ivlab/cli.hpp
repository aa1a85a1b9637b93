#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ivlab::cli {

inline constexpr std::string_view version = "0.1.0";

enum ExitCode : int {
    ok = 0,
    internal_error = 1,
    usage_error = 2,
    missing_file_error = 3,
    schema_error = 4,
    computation_error = 5,
    network_error = 6,
};

/// Effective settings of one invocation, in a fixed order.
using ConfigRecord = std::vector<std::pair<std::string, std::string>>;

/// FNV-1a 64 of the "key=value" lines.
std::uint64_t config_hash(const ConfigRecord& record);

/// Comment lines prefixed to every output file.
std::string output_header(const ConfigRecord& record, std::uint64_t seed);

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main(int argc, char** argv);

}  // namespace ivlab::cli
