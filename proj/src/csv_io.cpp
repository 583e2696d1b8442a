// SPDX-License-Identifier: Apache-2.0
#include "neimkit/csv_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "neimkit/errors.hpp"

namespace neimkit {

std::string format_double(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

double parse_double(const std::string& cell, const std::filesystem::path& path) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw IoError("csv: bad numeric cell '" + cell + "' in " + path.string());
    }
}

}  // namespace

void write_snapshot_csv(const std::filesystem::path& path, const SnapshotFile& file) {
    file.set.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << "# " << file.metadata << "\n";
    const std::size_t n = file.set.dimension();
    out << "mu";
    for (std::size_t i = 0; i < n; ++i) out << ",v" << i;
    out << "\n";
    for (std::size_t j = 0; j < file.set.count(); ++j) {
        out << format_double(file.set.parameters[j][0]);
        for (std::size_t i = 0; i < n; ++i) out << "," << format_double(file.set.snapshots(i, j));
        out << "\n";
    }
    if (!out) throw IoError("write failure on " + path.string());
}

SnapshotFile read_snapshot_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        throw IoError("snapshot csv: missing metadata line in " + path.string());
    }
    SnapshotFile file;
    file.metadata = line.substr(2);
    if (!std::getline(in, line)) throw IoError("snapshot csv: missing header in " + path.string());
    const std::size_t columns = split_line(line).size();
    if (columns < 2) throw IoError("snapshot csv: header too short in " + path.string());
    const std::size_t n = columns - 1;

    std::vector<Vector> params;
    std::vector<Vector> cols;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_line(line);
        if (cells.size() != columns) {
            throw IoError("snapshot csv: ragged row in " + path.string());
        }
        params.push_back({parse_double(cells[0], path)});
        Vector v(n);
        for (std::size_t i = 0; i < n; ++i) v[i] = parse_double(cells[i + 1], path);
        cols.push_back(std::move(v));
    }
    if (cols.empty()) throw IoError("snapshot csv: no data rows in " + path.string());
    file.set.parameters = std::move(params);
    file.set.snapshots = DenseMatrix::from_columns(cols);
    file.set.validate();
    return file;
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out << ",";
        out << table.header[i];
    }
    out << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << row[i];
        }
        out << "\n";
    }
    if (!out) throw IoError("write failure on " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw IoError("csv: empty file " + path.string());
    table.header = split_line(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        table.rows.push_back(split_line(line));
    }
    return table;
}

}  // namespace neimkit
