#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <string>

#include "tml/report.hpp"
#include "tml/version.hpp"

using namespace tml;

namespace {

std::string tmp_path(const std::string& name) {
    std::filesystem::create_directories("build/test_tmp");
    return "build/test_tmp/" + name;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("format_double is shortest round trip") {
    CHECK(io::format_double(0.1) == "0.1");
    CHECK(io::format_double(1.0) == "1");
    CHECK(io::format_double(-2.5) == "-2.5");
    CHECK(io::format_double(0.0) == "0");
    const double third = 1.0 / 3.0;
    CHECK(std::stod(io::format_double(third)) == third);
    const double big = 1.2345678901234567e300;
    CHECK(std::stod(io::format_double(big)) == big);
}

TEST_CASE("csv writer escapes per rfc 4180") {
    io::CsvWriter w({"a", "b"});
    w.add_row({"plain", "with,comma"});
    w.add_row({"with\"quote", "with\nnewline"});
    const std::string expect =
        "a,b\n"
        "plain,\"with,comma\"\n"
        "\"with\"\"quote\",\"with\nnewline\"\n";
    CHECK(w.str() == expect);
}

TEST_CASE("parse_csv round trips the writer") {
    io::CsvWriter w({"x", "y", "note"});
    w.add_row({"1", "2.5", "plain"});
    w.add_row({"3", "-0.125", "a,b\"c\"\nd"});
    const auto rows = io::parse_csv(w.str());
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"x", "y", "note"});
    CHECK(rows[1] == std::vector<std::string>{"1", "2.5", "plain"});
    CHECK(rows[2] == std::vector<std::string>{"3", "-0.125", "a,b\"c\"\nd"});
}

TEST_CASE("atomic write then read round trips") {
    const std::string p = tmp_path("roundtrip.txt");
    io::atomic_write_file(p, "first\n");
    CHECK(io::read_file(p) == "first\n");
    io::atomic_write_file(p, "second\n");
    CHECK(io::read_file(p) == "second\n");
    std::remove(p.c_str());
}

TEST_CASE("report envelope carries the required keys sorted") {
    const auto r = io::make_report("demo", 17, {{"x", 1.5}, {"a", 2}});
    CHECK(r.at("version").get<std::string>() == kVersion);
    CHECK(r.at("mode") == "demo");
    CHECK(r.at("seed") == 17);
    CHECK(r.at("parameters").at("a") == 2);
    const std::string dumped = r.dump();
    // Object keys serialize lexicographically.
    CHECK(dumped.find("\"mode\"") < dumped.find("\"parameters\""));
    CHECK(dumped.find("\"parameters\"") < dumped.find("\"seed\""));
    CHECK(dumped.find("\"seed\"") < dumped.find("\"version\""));
    CHECK(dumped.find("\"a\"") < dumped.find("\"x\""));
}

TEST_CASE("write_json lands on disk with trailing newline") {
    const std::string p = tmp_path("report.json");
    io::write_json(p, io::make_report("demo", 0, {}));
    const std::string text = io::read_file(p);
    CHECK(text.back() == '\n');
    CHECK(text.find("\"version\"") != std::string::npos);
    std::remove(p.c_str());
}

TEST_CASE("svg render is byte deterministic") {
    io::PlotSpec spec;
    spec.title = "demo";
    spec.x_label = "x";
    spec.y_label = "y";
    io::PlotSeries pts{"data", {1, 2, 3}, {2, 4, 8}, "#1f6fb2", false};
    io::PlotSeries line{"ref", {1, 3}, {2, 8}, "#3a9a3a", true};
    const std::string a = io::render_svg(spec, {pts, line});
    const std::string b = io::render_svg(spec, {pts, line});
    CHECK(a == b);
    CHECK(a.find("<svg") == 0);
    CHECK(a.find("circle") != std::string::npos);
    CHECK(a.find("polyline") != std::string::npos);
}

TEST_CASE("svg with no points still draws axes") {
    io::PlotSpec spec;
    spec.title = "empty";
    const std::string svg = io::render_svg(spec, {});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("<rect") != std::string::npos);
    CHECK(svg.find("circle") == std::string::npos);
}

}
