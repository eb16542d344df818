#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "afrac/grid.hpp"

namespace afrac {

// 17 significant digits, '.' decimal separator regardless of locale.
std::string format_number(double v);

// Comma-separated rows terminated by '\n'.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    void close();

private:
    std::ofstream out_;
    std::size_t columns_;
};

// `i,j,x,y,value,interior_flag` rows plus `<stem>.json` with {origin, h, nx, ny, s}.
void write_grid_csv(const GridFunction& u, const std::filesystem::path& csv_path);

// Files registered here are deleted on destruction unless commit() was called.
class OutputGuard {
public:
    OutputGuard() = default;
    OutputGuard(const OutputGuard&) = delete;
    OutputGuard& operator=(const OutputGuard&) = delete;
    ~OutputGuard();

    std::filesystem::path track(std::filesystem::path p);
    void commit() { committed_ = true; }

private:
    std::vector<std::filesystem::path> paths_;
    bool committed_ = false;
};

}  // namespace afrac
