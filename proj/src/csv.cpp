#include "fracocp/csv.hpp"

#include "fracocp/errors.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracocp {

std::string format_double(double value)
{
    std::array<char, 32> buffer{};
    const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("format_double: conversion failed");
    }
    return std::string(buffer.data(), end);
}

double parse_double(std::string_view text)
{
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    }
    return value;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents)
{
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    file.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    file.flush();
    if (!file) {
        throw IoError("failed writing " + path.string());
    }
}

void write_trajectory_csv(const std::filesystem::path& path, const TimeGrid& grid,
                          const Trajectory& states, const Trajectory* controls,
                          const Trajectory* adjoints)
{
    const std::size_t nodes = grid.nodes();
    if (states.nodes() != nodes || states.dimension() != 4 ||
        (controls && (controls->nodes() != nodes || controls->dimension() != 2)) ||
        (adjoints && (adjoints->nodes() != nodes || adjoints->dimension() != 4))) {
        throw std::invalid_argument("write_trajectory_csv: trajectories not aligned with grid");
    }

    std::string out;
    out.reserve(nodes * 160);
    out.append(kTrajectoryHeader);
    out.push_back('\n');
    const auto cell = [&out](double v) {
        out.push_back(',');
        out += format_double(v);
    };
    for (std::size_t k = 0; k < nodes; ++k) {
        out += format_double(grid.time(k));
        for (std::size_t i = 0; i < 4; ++i) {
            cell(states(k, i));
        }
        for (std::size_t i = 0; i < 2; ++i) {
            cell(controls ? (*controls)(k, i) : 0.0);
        }
        for (std::size_t i = 0; i < 4; ++i) {
            cell(adjoints ? (*adjoints)(k, i) : 0.0);
        }
        out.push_back('\n');
    }
    write_text_file(path, out);
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream stream(line);
    while (std::getline(stream, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream file(path, std::ios::binary);
    if (!file) {
        throw IoError("cannot open " + path.string());
    }
    CsvTable table;
    std::string line;
    if (!std::getline(file, line)) {
        throw IoError(path.string() + ": empty file");
    }
    table.header = split(line);
    while (std::getline(file, line)) {
        if (line.empty()) {
            continue;
        }
        auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw IoError(path.string() + ": row with " + std::to_string(cells.size()) +
                          " cells, header has " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

std::size_t CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    throw std::out_of_range("no column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::numeric_column(std::string_view name) const
{
    const std::size_t index = column(name);
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& row : rows) {
        values.push_back(parse_double(row[index]));
    }
    return values;
}

} // namespace fracocp
