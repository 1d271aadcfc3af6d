#include "flexhome/common/csv.hpp"

#include <sstream>

#include "flexhome/common/errors.hpp"
#include "flexhome/common/strconv.hpp"

namespace flexhome {

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw_io("cannot open for writing: " + path);
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (i) out_ << ',';
        out_ << cols[i];
    }
    out_ << '\n';
}

void CsvWriter::field(const std::string& s) {
    if (row_open_) out_ << ',';
    out_ << s;
    row_open_ = true;
}

void CsvWriter::field(double v) { field(format_double(v)); }
void CsvWriter::field(std::int64_t v) { field(format_i64(v)); }

void CsvWriter::end_row() {
    out_ << '\n';
    row_open_ = false;
}

void CsvWriter::close() {
    out_.close();
    if (out_.fail()) throw_io("failed writing: " + path_);
}

CsvTable read_csv(const std::string& path, const std::vector<std::string>& expect_header) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw_io("cannot open CSV: " + path);
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split(line, ',');
        if (lineno == 1) {
            t.header = std::move(fields);
            if (!expect_header.empty() && t.header != expect_header) {
                throw_io(path + ":1: unexpected CSV header `" + line + "`");
            }
            continue;
        }
        if (fields.size() != t.header.size()) {
            throw_io(path + ":" + format_u64(lineno) + ": expected " + format_u64(t.header.size()) +
                     " fields, got " + format_u64(fields.size()));
        }
        t.rows.push_back(std::move(fields));
    }
    if (t.header.empty()) throw_io(path + ": empty CSV (no header)");
    return t;
}

double csv_double(const CsvTable& t, std::size_t row, std::size_t col, const std::string& path) {
    double v;
    if (!parse_double(t.rows[row][col], v)) {
        throw_io(path + ":" + format_u64(row + 2) + ": bad number `" + t.rows[row][col] + "` in column " +
                 t.header[col]);
    }
    return v;
}

std::int64_t csv_i64(const CsvTable& t, std::size_t row, std::size_t col, const std::string& path) {
    std::int64_t v;
    if (!parse_i64(t.rows[row][col], v)) {
        throw_io(path + ":" + format_u64(row + 2) + ": bad integer `" + t.rows[row][col] + "` in column " +
                 t.header[col]);
    }
    return v;
}

}  // namespace flexhome
