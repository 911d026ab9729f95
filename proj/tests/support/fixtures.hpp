// SPDX-License-Identifier: Apache-2.0
//
// Scratch directories and dataset corruptions shared by the test binaries.

#pragma once

#include "sgrecon/dataset.hpp"
#include "sgrecon/pipeline.hpp"
#include "sgrecon/table.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <unistd.h>

namespace fixtures {

namespace fs = std::filesystem;

/// Removes every scratch directory when the process exits.
struct ScratchRegistry {
    std::vector<fs::path> dirs;
    ~ScratchRegistry()
    {
        for (const auto& d : dirs) {
            std::error_code ec;
            fs::remove_all(d, ec);
        }
    }
};

inline ScratchRegistry& scratch_registry()
{
    static ScratchRegistry registry;
    return registry;
}

/// Fresh, empty directory under the system temp dir, unique per process.
inline fs::path scratch_dir(const std::string& name)
{
    const auto dir = fs::temp_directory_path() / ("sgrecon-" + name + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    scratch_registry().dirs.push_back(dir);
    return dir;
}

inline void copy_dataset(const fs::path& from, const fs::path& to)
{
    fs::remove_all(to);
    fs::copy(from, to, fs::copy_options::recursive);
}

/// Rewrites one entry of the digest list so only the intended corruption is visible.
inline void refresh_digest(const fs::path& dir, const std::string& file)
{
    const auto digest = sgrecon::sha256_hex(sgrecon::read_file(dir / file));
    std::istringstream in(sgrecon::read_file(dir / sgrecon::kDigestFile));
    std::string out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() > 66 && line.substr(66) == file) {
            line = digest + "  " + file;
        }
        out += line + "\n";
    }
    sgrecon::write_file(dir / sgrecon::kDigestFile, out);
}

/// Replaces the train-fit normalization with one fit on the validation split.
inline void corrupt_normalization(const fs::path& dir)
{
    const auto ds = sgrecon::load_dataset(dir);
    const auto val_fit = sgrecon::fit_standardizer(ds.tables[sgrecon::index(sgrecon::Split::Val)],
                                                   ds.config.features.std_floor);
    sgrecon::write_file(dir / sgrecon::kNormalizationFile, val_fit.to_json());
    refresh_digest(dir, sgrecon::kNormalizationFile);
}

/// Drops the last `rows` data lines of a CSV.
inline void truncate_csv(const fs::path& file, std::size_t rows)
{
    std::string text = sgrecon::read_file(file);
    for (std::size_t k = 0; k < rows && !text.empty(); ++k) {
        text.pop_back();
        text.erase(text.rfind('\n') + 1);
    }
    sgrecon::write_file(file, text);
}

} // namespace fixtures
