#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace tml::io {

// All writers produce byte-identical output for identical inputs: LF line
// endings, '.' decimal separator, fixed significant-digit formatting, and
// no timestamps. Files land via write-to-temp-then-rename.

void atomic_write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

// Shortest-round-trip decimal for a double (up to 17 significant digits).
std::string format_double(double v);

class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> columns);
    void add_row(const std::vector<std::string>& fields);
    const std::string& str() const { return out_; }
    void write(const std::string& path) const;
    static std::string escape(const std::string& field);

private:
    std::size_t n_cols_;
    std::string out_;
};

// Parses an RFC-4180 CSV produced by CsvWriter (quotes, embedded LF).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// Report envelope: {version, mode, seed, parameters} + payload, keys sorted.
nlohmann::json make_report(const std::string& mode, uint64_t seed,
                           const nlohmann::json& parameters);
void write_json(const std::string& path, const nlohmann::json& j);

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f6fb2";
    bool line = false;  // polyline instead of markers
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    int width = 720;
    int height = 480;
    bool log_x = false;
};

// Deterministic standalone SVG. Degenerate input (no finite points) still
// yields a valid document with axes only.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace tml::io
