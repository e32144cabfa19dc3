#include "ptc/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "ptc/error.hpp"

namespace ptc {

namespace {

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) {
        // trim surrounding whitespace
        const auto first = field.find_first_not_of(" \t\r");
        const auto last = field.find_last_not_of(" \t\r");
        fields.push_back(first == std::string::npos
                             ? std::string()
                             : field.substr(first, last - first + 1));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& field, double& out) {
    if (field.empty()) return false;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    // from_chars accepts "nan"/"inf"; those are unusable as sample values
    return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

void write_samples_csv(const std::filesystem::path& path, const Matrix& samples) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    std::string line;
    for (std::size_t i = 0; i < samples.rows(); ++i) {
        line.clear();
        for (std::size_t k = 0; k < samples.cols(); ++k) {
            if (k) line += ',';
            line += format_double(samples(i, k));
        }
        line += '\n';
        out << line;
    }
    if (!out) throw IoError("failed writing " + path.string());
}

Matrix read_samples_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        std::vector<double> row(fields.size());
        bool numeric = true;
        for (std::size_t k = 0; k < fields.size(); ++k)
            numeric = numeric && parse_double(fields[k], row[k]);
        if (!numeric) {
            if (first) {  // header row
                first = false;
                continue;
            }
            throw IoError("non-numeric row in " + path.string());
        }
        first = false;
        if (!rows.empty() && row.size() != rows.front().size())
            throw IoError("ragged rows in " + path.string());
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("no data rows in " + path.string());
    Matrix samples(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k) samples(i, k) = rows[i][k];
    return samples;
}

IngestReport ingest_csv(const std::filesystem::path& path,
                        const std::vector<std::size_t>& requested_columns) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());

    std::vector<std::size_t> columns = requested_columns;
    if (columns.empty()) {
        // Default to every column of the first non-empty line.
        std::string probe;
        while (std::getline(in, probe) && probe.empty()) {
        }
        if (probe.empty()) throw IngestError("empty file " + path.string());
        for (std::size_t k = 0; k < split_fields(probe).size(); ++k) columns.push_back(k);
        in.clear();
        in.seekg(0);
    }

    IngestReport report;
    std::vector<std::vector<double>> rows;
    std::string line;
    bool first_line = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_fields(line);
        std::vector<double> row(columns.size());
        bool ok = true;
        for (std::size_t k = 0; k < columns.size() && ok; ++k)
            ok = columns[k] < fields.size() && parse_double(fields[columns[k]], row[k]);
        if (first_line && !ok) {
            report.header_skipped = true;  // non-numeric first row heuristic
            first_line = false;
            continue;
        }
        first_line = false;
        ++report.total_rows;
        if (!ok) {
            ++report.dropped_rows;
            continue;
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw IngestError("no usable rows in " + path.string() + " (" +
                          std::to_string(report.dropped_rows) + " dropped)");
    report.samples = Matrix(rows.size(), columns.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < columns.size(); ++k)
            report.samples(i, k) = rows[i][k];
    return report;
}

}  // namespace ptc
