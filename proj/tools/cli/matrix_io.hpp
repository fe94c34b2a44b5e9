#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

#include "pherm/matcore.hpp"
#include "pherm/pseudoherm.hpp"

namespace pherm::cli {

using Json = nlohmann::ordered_json;

/// Malformed matrix or parameter document. The message names the line or
/// field at fault.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The input file could not be opened or read.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"dim": n, "entries": [[[re, im], ...], ...]}
CMatrix parse_matrix_text(std::string_view text);
CMatrix parse_matrix_file(const std::filesystem::path& path);

Json complex_to_json(Complex z);
Json matrix_entries(const CMatrix& m);
/// The MatrixFile document for `m`.
Json matrix_document(const CMatrix& m);
std::string print_matrix(const CMatrix& m);
void write_matrix_file(const std::filesystem::path& path, const CMatrix& m);

/// {"x": [[x_{p+1}, ..., x_{2p}], ...], "xi": [[[re, im], ...], ...]}
MetricParameters parse_metric_parameters(std::string_view text);

std::string read_file(const std::filesystem::path& path);

/// "RE,IM" or "RE"; decimal point only, independent of the C locale.
Complex parse_complex_arg(std::string_view text);
double parse_double(std::string_view text);

}  // namespace pherm::cli
