#include "chaoslab/cli.hpp"
#include "chaoslab/io.hpp"
#include "chaoslab/sign_sequence.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace chaoslab;

PYBIND11_MODULE(_chaoslab, m)
{
    m.doc() = "chaoslab core bindings";
    m.attr("__version__") = io::tool_version;

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            std::vector<std::string> full{"chaoslab"};
            full.insert(full.end(), args.begin(), args.end());
            std::vector<const char*> argv;
            for (const auto& a : full) argv.push_back(a.c_str());
            std::ostringstream out, err;
            int code = 0;
            {
                py::gil_scoped_release release;
                code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs one CLI command in-process; returns (exit_code, stdout, stderr).");

    m.def("systems", [] {
        py::list out;
        for (const auto& s : cli::builtin_systems())
            out.append(py::dict(py::arg("id") = s.id, py::arg("kind") = s.kind, py::arg("description") = s.description));
        return out;
    });

    m.def(
        "shift_metric",
        [](const std::string& x, const std::string& y, int alphabet) {
            return symbolic::shift_metric(cli::parse_symbolic_point(x, alphabet), cli::parse_symbolic_point(y, alphabet));
        },
        py::arg("x"), py::arg("y"), py::arg("alphabet") = 2);

    m.def(
        "torus_distance",
        [](std::pair<double, double> p, std::pair<double, double> q) {
            return toral::torus_distance({p.first, p.second}, {q.first, q.second});
        },
        py::arg("p"), py::arg("q"));

    m.def(
        "generate_sequence",
        [](const std::string& spec, std::size_t n) { return bohr::generate(bohr::SignSequenceSpec::parse(spec), n); },
        py::arg("spec"), py::arg("n"));

    py::register_exception<Error>(m, "ChaoslabError");
}
