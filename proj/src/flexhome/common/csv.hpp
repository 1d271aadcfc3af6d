#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace flexhome {

// Minimal CSV helpers for the fixed-schema artifacts this project exchanges.
// No quoting: none of our fields can contain commas or newlines. Writers emit
// LF-terminated rows; doubles use shortest round-trip formatting.

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void header(const std::vector<std::string>& cols);
    void field(const std::string& s);
    void field(double v);
    void field(std::int64_t v);
    void end_row();
    void close();

private:
    std::ofstream out_;
    std::string path_;
    bool row_open_ = false;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// Reads the whole file; validates that every row has the same width as the
// header and (optionally) that the header matches `expect_header` exactly.
// Parse problems report the 1-based line number.
CsvTable read_csv(const std::string& path, const std::vector<std::string>& expect_header = {});

double csv_double(const CsvTable& t, std::size_t row, std::size_t col, const std::string& path);
std::int64_t csv_i64(const CsvTable& t, std::size_t row, std::size_t col, const std::string& path);

}  // namespace flexhome
