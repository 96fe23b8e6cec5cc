#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tml/characters.hpp"
#include "tml/hecke.hpp"
#include "tml/mollifier.hpp"
#include "tml/moments.hpp"
#include "tml/primes.hpp"
#include "tml/transfer.hpp"
#include "tml/version.hpp"

namespace py = pybind11;
using namespace tml;

PYBIND11_MODULE(_tml, m) {
    m.doc() = "moment laboratory core operations";
    m.attr("__version__") = kVersion;

    m.def(
        "lambda_table",
        [](std::size_t limit) { return hecke::build_hecke_table(limit).lambda; },
        py::arg("limit"),
        "Normalized eigenvalues lambda(1..limit); index 0 is unused.");

    m.def(
        "all_twisted_sums",
        [](uint64_t q, const std::vector<double>& coeffs) {
            const auto ci = chars::build_index(q);
            return chars::all_twisted_sums(ci, coeffs).values;
        },
        py::arg("q"), py::arg("coeffs"),
        "T(chi_a) for every character mod prime q; coeffs is 1-indexed.");

    m.def(
        "moment",
        [](uint64_t q, uint64_t x, double k) {
            const auto ci = chars::build_index(q);
            const auto t = hecke::build_hecke_table(x);
            const auto r = moments::moment(ci, t, x, k);
            py::dict d;
            d["q"] = r.q;
            d["x"] = r.x;
            d["k"] = r.k;
            d["S_k"] = r.s_k;
            d["normalized"] = r.normalized;
            d["k1_identity_residual"] = r.second_moment_residual;
            return d;
        },
        py::arg("q"), py::arg("x"), py::arg("k"),
        "2k-th moment of twisted eigenvalue sums over characters mod q.");

    m.def(
        "build_schedule",
        [](double x, double k, double c0, const std::string& mode) {
            moll::BuildOptions opt;
            opt.mode = moll::parse_mode(mode);
            const auto s = moll::build_schedule(x, k, c0, opt);
            py::dict d;
            d["y"] = s.y;
            d["m_count"] = s.m_count;
            d["y_edges"] = s.y_m;
            d["j"] = s.j_m;
            d["l_range"] = s.l_range();
            d["flags"] = s.flags;
            return d;
        },
        py::arg("x"), py::arg("k"), py::arg("c0"), py::arg("mode") = "desk",
        "Interval subdivision and truncation exponents for the mollifier.");

    m.def(
        "transfer_check",
        [](uint64_t q, uint64_t x, double y1, uint64_t j1, double k) {
            const auto s =
                moll::manual_schedule(double(q), k, {y1}, {j1}, moll::Mode::desk);
            const uint64_t cover = std::max<uint64_t>(x, uint64_t(y1) + 1);
            const auto t = hecke::build_hecke_table(cover);
            const auto pl = primes::sieve(cover);
            const auto r = transfer::orthogonality_transfer_check(q, x, s, t, pl);
            py::dict d;
            d["char_side"] = r.char_side;
            d["expected_side"] = r.expected_side;
            d["rel_gap"] = r.rel_gap;
            d["max_monomial"] = r.max_monomial;
            d["diagonal_exact"] = r.diagonal_exact;
            return d;
        },
        py::arg("q"), py::arg("x"), py::arg("y1") = 6.0, py::arg("j1") = 1,
        py::arg("k") = 2.0,
        "Character average of the mollified second moment vs the model expectation.");
}
