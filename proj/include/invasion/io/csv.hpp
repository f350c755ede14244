#pragma once

// CSV output with full round-trip precision. Run metadata goes into leading
// "# key = value" lines so a file stays self-describing.

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace invasion::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double x);

class CsvWriter {
public:
    /// Creates (truncates) `path`; throws std::runtime_error if it cannot be opened.
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns, const Metadata& meta = {});

    void row(std::span<const double> values);
    /// Row of preformatted cells; must match the column count.
    void row_text(const std::vector<std::string>& cells);
    /// Flushes and reports write errors.
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace invasion::io
