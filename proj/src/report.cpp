#include "tml/report.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "tml/version.hpp"

namespace tml::io {

namespace fs = std::filesystem;

void atomic_write_file(const std::string& path, const std::string& contents) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.parent_path() /
                         (target.filename().string() + ".tmp-" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + tmp.string());
        out.write(contents.data(), std::streamsize(contents.size()));
        if (!out) throw std::runtime_error("short write: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    // Shortest representation that round-trips, capped at 17 significant digits.
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> columns) : n_cols_(columns.size()) {
    if (columns.empty()) throw std::invalid_argument("CsvWriter: no columns");
    add_row(columns);
}

std::string CsvWriter::escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

void CsvWriter::add_row(const std::vector<std::string>& fields) {
    if (fields.size() != n_cols_)
        throw std::invalid_argument("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out_ += ',';
        out_ += escape(fields[i]);
    }
    out_ += '\n';
}

void CsvWriter::write(const std::string& path) const { atomic_write_file(path, out_); }

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
        } else if (c == '\n') {
            row.push_back(std::move(field));
            field.clear();
            rows.push_back(std::move(row));
            row.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    if (!field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

nlohmann::json make_report(const std::string& mode, uint64_t seed,
                           const nlohmann::json& parameters) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["mode"] = mode;
    j["seed"] = seed;
    j["parameters"] = parameters;
    return j;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    atomic_write_file(path, j.dump(2) + "\n");
}

namespace {

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    const double W = spec.width, H = spec.height;
    const double ml = 70, mr = 20, mt = 40, mb = 55;  // margins
    const double pw = W - ml - mr, ph = H - mt - mb;

    // Data envelope over finite points.
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool have = false;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            double xv = s.x[i];
            if (spec.log_x) {
                if (!(xv > 0)) continue;
                xv = std::log10(xv);
            }
            if (!std::isfinite(xv) || !std::isfinite(s.y[i])) continue;
            if (!have) {
                xmin = xmax = xv;
                ymin = ymax = s.y[i];
                have = true;
            } else {
                xmin = std::min(xmin, xv);
                xmax = std::max(xmax, xv);
                ymin = std::min(ymin, s.y[i]);
                ymax = std::max(ymax, s.y[i]);
            }
        }
    }
    if (!have) { xmin = 0; xmax = 1; ymin = 0; ymax = 1; }
    if (xmax == xmin) { xmax = xmin + 1; }
    if (ymax == ymin) { ymax = ymin + 1; }
    const double xpad = 0.04 * (xmax - xmin), ypad = 0.06 * (ymax - ymin);
    xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

    auto X = [&](double v) {
        if (spec.log_x) v = std::log10(std::max(v, 1e-300));
        return ml + (v - xmin) / (xmax - xmin) * pw;
    };
    auto Y = [&](double v) { return mt + (ymax - v) / (ymax - ymin) * ph; };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) +
           "\" height=\"" + std::to_string(spec.height) + "\" viewBox=\"0 0 " +
           std::to_string(spec.width) + " " + std::to_string(spec.height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
    svg += "<text x=\"" + fmt_coord(W / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"15\">" + xml_escape(spec.title) + "</text>\n";

    // Axes box and ticks.
    svg += "<rect x=\"" + fmt_coord(ml) + "\" y=\"" + fmt_coord(mt) + "\" width=\"" +
           fmt_coord(pw) + "\" height=\"" + fmt_coord(ph) +
           "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / ticks;
        const double fy = ymin + (ymax - ymin) * i / ticks;
        const double px = ml + pw * i / ticks;
        const double py = mt + ph - ph * i / ticks;
        const double label_x = spec.log_x ? std::pow(10.0, fx) : fx;
        char lab[40];
        std::snprintf(lab, sizeof lab, "%.4g", label_x);
        svg += "<line x1=\"" + fmt_coord(px) + "\" y1=\"" + fmt_coord(mt + ph) + "\" x2=\"" +
               fmt_coord(px) + "\" y2=\"" + fmt_coord(mt + ph + 5) +
               "\" stroke=\"#333333\"/>\n";
        svg += "<text x=\"" + fmt_coord(px) + "\" y=\"" + fmt_coord(mt + ph + 18) +
               "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">" + lab +
               "</text>\n";
        std::snprintf(lab, sizeof lab, "%.4g", fy);
        svg += "<line x1=\"" + fmt_coord(ml - 5) + "\" y1=\"" + fmt_coord(py) + "\" x2=\"" +
               fmt_coord(ml) + "\" y2=\"" + fmt_coord(py) + "\" stroke=\"#333333\"/>\n";
        svg += "<text x=\"" + fmt_coord(ml - 8) + "\" y=\"" + fmt_coord(py + 4) +
               "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" + lab +
               "</text>\n";
    }
    svg += "<text x=\"" + fmt_coord(ml + pw / 2) + "\" y=\"" + fmt_coord(H - 12) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\">" +
           xml_escape(spec.x_label) + "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt_coord(mt + ph / 2) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"12\" transform=\"rotate(-90 18 " +
           fmt_coord(mt + ph / 2) + ")\">" + xml_escape(spec.y_label) + "</text>\n";

    double legend_y = mt + 16;
    for (const auto& s : series) {
        if (s.line) {
            std::string pts;
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (spec.log_x && !(s.x[i] > 0)) continue;
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                if (!pts.empty()) pts += ' ';
                pts += fmt_coord(X(s.x[i])) + "," + fmt_coord(Y(s.y[i]));
            }
            svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + s.color +
                   "\" stroke-width=\"1.5\"/>\n";
        } else {
            for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
                if (spec.log_x && !(s.x[i] > 0)) continue;
                if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
                svg += "<circle cx=\"" + fmt_coord(X(s.x[i])) + "\" cy=\"" + fmt_coord(Y(s.y[i])) +
                       "\" r=\"2.5\" fill=\"" + s.color + "\"/>\n";
            }
        }
        if (!s.label.empty()) {
            svg += "<rect x=\"" + fmt_coord(ml + 10) + "\" y=\"" + fmt_coord(legend_y - 8) +
                   "\" width=\"10\" height=\"10\" fill=\"" + s.color + "\"/>\n";
            svg += "<text x=\"" + fmt_coord(ml + 26) + "\" y=\"" + fmt_coord(legend_y + 1) +
                   "\" font-family=\"monospace\" font-size=\"11\">" + xml_escape(s.label) +
                   "</text>\n";
            legend_y += 16;
        }
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace tml::io
