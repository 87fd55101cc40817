#pragma once

#include "fracocp/fracode.hpp"
#include "fracocp/trajectory.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace fracocp {

inline constexpr std::string_view kTrajectoryHeader =
    "t,S,E,I,R,u1,u2,lambda1,lambda2,lambda3,lambda4";

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Strict full-string parse; throws std::invalid_argument.
double parse_double(std::string_view text);

/// One row per node with the fixed trajectory header. Missing controls or
/// adjoints are written as zeros. Throws IoError.
void write_trajectory_csv(const std::filesystem::path& path, const TimeGrid& grid,
                          const Trajectory& states, const Trajectory* controls = nullptr,
                          const Trajectory* adjoints = nullptr);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Index of a header column; throws std::out_of_range.
    std::size_t column(std::string_view name) const;
    std::vector<double> numeric_column(std::string_view name) const;
};

CsvTable read_csv(const std::filesystem::path& path);

/// Writes `contents` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view contents);

} // namespace fracocp
