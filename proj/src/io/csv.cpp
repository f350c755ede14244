#include "invasion/io/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace invasion::io {

std::string format_double(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf, static_cast<std::size_t>(n));
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns, const Metadata& meta)
    : path_(path), out_(path, std::ios::out | std::ios::trunc), columns_(columns.size())
{
    if (!out_) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    for (const auto& [k, v] : meta) {
        out_ << "# " << k << " = " << v << '\n';
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out_ << (i ? "," : "") << columns[i];
    }
    out_ << '\n';
}

void CsvWriter::row(std::span<const double> values)
{
    if (values.size() != columns_) {
        throw std::logic_error("CsvWriter: row width does not match the header");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        out_ << (i ? "," : "") << format_double(values[i]);
    }
    out_ << '\n';
}

void CsvWriter::row_text(const std::vector<std::string>& cells)
{
    if (cells.size() != columns_) {
        throw std::logic_error("CsvWriter: row width does not match the header");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << (i ? "," : "") << cells[i];
    }
    out_ << '\n';
}

void CsvWriter::close()
{
    out_.flush();
    if (!out_) {
        throw std::runtime_error("write to " + path_.string() + " failed");
    }
    out_.close();
}

}  // namespace invasion::io
