#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "saldl/dataset.hpp"

namespace saldl::cli {

enum ExitCode : int {
    kOk = 0,
    kUsage = 1,
    kDataError = 2,
    kNumericFailure = 3,
    kPropertyFailure = 4,
};

/// Parses `args` (without the program name) and runs one subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

inline constexpr const char* kTripletManifest = "manifest.csv";

/// Writes three PGMs per triplet plus manifest.csv. The Laplacian is stored
/// offset-encoded as (v + 1) / 2.
void write_triplets(const std::vector<SampleTriplet>& triplets,
                    const std::vector<std::string>& source_names, const std::filesystem::path& dir);
std::vector<SampleTriplet> read_triplets(const std::filesystem::path& dir);

}  // namespace saldl::cli
