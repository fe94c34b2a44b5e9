#include "cli/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pherm::cli {

namespace {

std::string locate(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

Json parse_document(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is one past the offending character
    throw ParseError(locate(text, e.byte == 0 ? 0 : e.byte - 1) + ": malformed JSON (" + e.what() + ")");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("unreadable JSON value (") + e.what() + ")");
  }
}

double finite_number(const Json& value, const std::string& field) {
  if (!value.is_number()) throw ParseError(field + ": expected a number");
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ParseError(field + ": value is not finite");
  return v;
}

Complex complex_pair(const Json& value, const std::string& field) {
  if (!value.is_array() || value.size() != 2) throw ParseError(field + ": expected a [re, im] pair");
  return {finite_number(value[0], field + "[0]"), finite_number(value[1], field + "[1]")};
}

}  // namespace

CMatrix parse_matrix_text(std::string_view text) {
  const Json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("document: expected an object with \"dim\" and \"entries\"");
  if (!doc.contains("dim")) throw ParseError("dim: missing");
  if (!doc.contains("entries")) throw ParseError("entries: missing");
  const Json& dim_field = doc["dim"];
  if (!dim_field.is_number_integer() || dim_field.get<long long>() <= 0) {
    throw ParseError("dim: expected a positive integer");
  }
  const auto dim = static_cast<Index>(dim_field.get<long long>());
  const Json& entries = doc["entries"];
  if (!entries.is_array()) throw ParseError("entries: expected an array of rows");
  if (static_cast<Index>(entries.size()) != dim) {
    throw ParseError("entries: expected " + std::to_string(dim) + " rows, got " + std::to_string(entries.size()));
  }
  CMatrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const std::string row_field = "entries[" + std::to_string(i) + "]";
    const Json& row = entries[static_cast<std::size_t>(i)];
    if (!row.is_array()) throw ParseError(row_field + ": expected an array");
    if (static_cast<Index>(row.size()) != dim) {
      throw ParseError(row_field + ": row has " + std::to_string(row.size()) + " entries, expected " +
                       std::to_string(dim) + " (matrix must be square)");
    }
    for (Index j = 0; j < dim; ++j) {
      m(i, j) = complex_pair(row[static_cast<std::size_t>(j)], row_field + "[" + std::to_string(j) + "]");
    }
  }
  return m;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw FileError("cannot read " + path.string());
  return buffer.str();
}

CMatrix parse_matrix_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_matrix_text(text);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json matrix_entries(const CMatrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json matrix_document(const CMatrix& m) {
  Json doc;
  doc["dim"] = m.rows();
  doc["entries"] = matrix_entries(m);
  return doc;
}

std::string print_matrix(const CMatrix& m) { return matrix_document(m).dump(); }

void write_matrix_file(const std::filesystem::path& path, const CMatrix& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write " + path.string());
  out << print_matrix(m) << '\n';
  if (!out) throw FileError("cannot write " + path.string());
}

MetricParameters parse_metric_parameters(std::string_view text) {
  const Json doc = parse_document(text);
  if (!doc.is_object()) throw ParseError("document: expected an object with \"x\" and \"xi\"");
  MetricParameters params;
  if (doc.contains("x")) {
    const Json& xs = doc["x"];
    if (!xs.is_array()) throw ParseError("x: expected an array of coefficient sequences");
    for (std::size_t r = 0; r < xs.size(); ++r) {
      const std::string field = "x[" + std::to_string(r) + "]";
      if (!xs[r].is_array()) throw ParseError(field + ": expected an array");
      std::vector<double> seq;
      for (std::size_t k = 0; k < xs[r].size(); ++k) {
        seq.push_back(finite_number(xs[r][k], field + "[" + std::to_string(k) + "]"));
      }
      params.x.push_back(std::move(seq));
    }
  }
  if (doc.contains("xi")) {
    const Json& xis = doc["xi"];
    if (!xis.is_array()) throw ParseError("xi: expected an array of coefficient sequences");
    for (std::size_t q = 0; q < xis.size(); ++q) {
      const std::string field = "xi[" + std::to_string(q) + "]";
      if (!xis[q].is_array()) throw ParseError(field + ": expected an array");
      std::vector<Complex> seq;
      for (std::size_t k = 0; k < xis[q].size(); ++k) {
        seq.push_back(complex_pair(xis[q][k], field + "[" + std::to_string(k) + "]"));
      }
      params.xi.push_back(std::move(seq));
    }
  }
  return params;
}

double parse_double(std::string_view text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw std::invalid_argument("not a finite decimal number: '" + std::string(text) + "'");
  }
  return value;
}

Complex parse_complex_arg(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos) return {parse_double(text), 0.0};
  return {parse_double(text.substr(0, comma)), parse_double(text.substr(comma + 1))};
}

}  // namespace pherm::cli
