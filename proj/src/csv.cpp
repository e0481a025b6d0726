#include "knn/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <system_error>

namespace knn {

namespace {

std::string_view trim(std::string_view token) {
    while (!token.empty() && (token.front() == ' ' || token.front() == '\t'))
        token.remove_prefix(1);
    while (!token.empty() && (token.back() == ' ' || token.back() == '\t' ||
                              token.back() == '\r'))
        token.remove_suffix(1);
    return token;
}

double parse_double(std::string_view token, std::size_t line) {
    token = trim(token);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw CsvError("cannot parse '" + std::string(token) + "' as a number", line);
    return value;
}

std::int64_t parse_int(std::string_view token, std::size_t line) {
    token = trim(token);
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
        throw CsvError("cannot parse '" + std::string(token) + "' as an integer", line);
    return value;
}

struct RawRow {
    std::vector<std::string> fields;
    std::size_t line;
};

std::vector<RawRow> read_rows(std::istream& in) {
    std::vector<RawRow> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        RawRow row{{}, line_no};
        std::size_t start = 0;
        const std::string text(view);
        while (true) {
            const std::size_t comma = text.find(',', start);
            row.fields.push_back(text.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (width == 0) {
            width = row.fields.size();
        } else if (row.fields.size() != width) {
            throw CsvError("expected " + std::to_string(width) + " fields, got " +
                               std::to_string(row.fields.size()),
                           line_no);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

std::ifstream open_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return in;
}

} // namespace

PointSet read_points_csv(std::istream& in, const std::string& name) {
    const std::vector<RawRow> rows = read_rows(in);
    if (rows.empty()) throw CsvError("no data rows in " + name, 0);
    const std::size_t d = rows.front().fields.size();
    std::vector<double> data;
    data.reserve(rows.size() * d);
    for (const RawRow& row : rows)
        for (const std::string& field : row.fields) data.push_back(parse_double(field, row.line));
    return PointSet(rows.size(), d, std::move(data));
}

PointSet read_points_csv(const std::filesystem::path& path) {
    std::ifstream in = open_file(path);
    return read_points_csv(in, path.string());
}

LabeledSet read_labeled_csv(std::istream& in, const std::string& name) {
    const std::vector<RawRow> rows = read_rows(in);
    if (rows.empty()) throw CsvError("no data rows in " + name, 0);
    const std::size_t width = rows.front().fields.size();
    if (width < 2)
        throw CsvError("labeled rows need at least one coordinate and a label", rows.front().line);
    const std::size_t d = width - 1;
    std::vector<double> data;
    data.reserve(rows.size() * d);
    std::vector<std::int64_t> labels;
    labels.reserve(rows.size());
    for (const RawRow& row : rows) {
        for (std::size_t c = 0; c < d; ++c) data.push_back(parse_double(row.fields[c], row.line));
        labels.push_back(parse_int(row.fields[d], row.line));
    }
    return LabeledSet(PointSet(rows.size(), d, std::move(data)), std::move(labels));
}

LabeledSet read_labeled_csv(const std::filesystem::path& path) {
    std::ifstream in = open_file(path);
    return read_labeled_csv(in, path.string());
}

DescriptorDatabase read_descriptors_csv(std::istream& in, const std::string& name) {
    const std::vector<RawRow> rows = read_rows(in);
    if (rows.empty()) throw CsvError("no data rows in " + name, 0);
    const std::size_t width = rows.front().fields.size();
    if (width < 2)
        throw CsvError("descriptor rows need an image identifier and at least one coordinate",
                       rows.front().line);
    const std::size_t d = width - 1;
    std::vector<double> data;
    data.reserve(rows.size() * d);
    std::vector<std::int64_t> owners;
    owners.reserve(rows.size());
    std::int64_t max_id = -1;
    for (const RawRow& row : rows) {
        const std::int64_t id = parse_int(row.fields[0], row.line);
        if (id < 0) throw CsvError("image identifier must be non-negative", row.line);
        max_id = std::max(max_id, id);
        owners.push_back(id);
        for (std::size_t c = 1; c < width; ++c)
            data.push_back(parse_double(row.fields[c], row.line));
    }
    return DescriptorDatabase(PointSet(rows.size(), d, std::move(data)), std::move(owners),
                              max_id + 1);
}

DescriptorDatabase read_descriptors_csv(const std::filesystem::path& path) {
    std::ifstream in = open_file(path);
    return read_descriptors_csv(in, path.string());
}

std::vector<double> read_matrix_csv(const std::filesystem::path& path, std::size_t& dim) {
    std::ifstream in = open_file(path);
    const std::vector<RawRow> rows = read_rows(in);
    if (rows.empty()) throw CsvError("no data rows in " + path.string(), 0);
    dim = rows.front().fields.size();
    if (rows.size() != dim) {
        throw CsvError("matrix must be square, got " + std::to_string(rows.size()) + "x" +
                           std::to_string(dim),
                       rows.back().line);
    }
    std::vector<double> matrix;
    matrix.reserve(dim * dim);
    for (const RawRow& row : rows)
        for (const std::string& field : row.fields)
            matrix.push_back(parse_double(field, row.line));
    return matrix;
}

std::string format_double(double value) {
    char buffer[32];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, ptr);
}

void write_points_csv(std::ostream& out, const PointSet& points) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto row = points.row(i);
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out << ',';
            out << format_double(row[c]);
        }
        out << '\n';
    }
}

} // namespace knn
