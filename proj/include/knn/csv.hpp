#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "knn/applications.hpp"
#include "knn/point_set.hpp"

namespace knn {

/// Malformed input file; line() is the 1-based offending line.
class CsvError : public std::runtime_error {
public:
    CsvError(const std::string& message, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Point files: one point per line, coordinates as comma-separated decimals,
// lines starting with '#' are comments. The dimension is inferred from the
// first data line; ragged rows are an error naming the line.

PointSet read_points_csv(std::istream& in, const std::string& name = "<stream>");
PointSet read_points_csv(const std::filesystem::path& path);

/// Points with a trailing integer label column.
LabeledSet read_labeled_csv(std::istream& in, const std::string& name = "<stream>");
LabeledSet read_labeled_csv(const std::filesystem::path& path);

/// Descriptors with a leading integer image-identifier column.
DescriptorDatabase read_descriptors_csv(std::istream& in, const std::string& name = "<stream>");
DescriptorDatabase read_descriptors_csv(const std::filesystem::path& path);

/// Square d x d matrix of decimals (for the Mahalanobis metric).
std::vector<double> read_matrix_csv(const std::filesystem::path& path, std::size_t& dim);

/// Shortest decimal representation that parses back to the same bits.
std::string format_double(double value);

void write_points_csv(std::ostream& out, const PointSet& points);

} // namespace knn
