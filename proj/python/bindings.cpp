#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "blockgrader/formats.hpp"
#include "blockgrader/grader.hpp"
#include "blockgrader/graph.hpp"
#include "blockgrader/parser.hpp"
#include "blockgrader/problem_store.hpp"

namespace py = pybind11;
using namespace blockgrader;

namespace {

py::dict dag_dict(const CollapsedDag& dag) {
    py::dict d;
    d["nodes"] = dag.nodes;
    d["edges"] = dag.edges;
    d["chosen_group"] = dag.chosen_group;
    return d;
}

// Accepts [("A", 0), ...] or [{"tag": "A", "indent": 0}, ...].
Submission to_submission(const py::iterable& placed) {
    Submission s;
    for (const auto& item : placed) {
        if (py::isinstance<py::dict>(item)) {
            auto d = item.cast<py::dict>();
            int indent = d.contains("indent") ? d["indent"].cast<int>() : 0;
            s.placed.push_back({d["tag"].cast<std::string>(), indent});
        } else if (py::isinstance<py::str>(item)) {
            s.placed.push_back({item.cast<std::string>(), 0});
        } else {
            auto t = item.cast<std::pair<std::string, int>>();
            s.placed.push_back({t.first, t.second});
        }
    }
    return s;
}

py::dict report_dict(const GradeReport& r) {
    py::dict d;
    d["score"] = r.score;
    d["exact"] = r.exact;
    d["edit_distance"] = r.edit_distance;
    d["best_dag"] = r.best_dag;
    d["first_error_index"] = r.first_error_index ? py::object(py::int_(*r.first_error_index)) : py::none();
    d["message"] = r.message;
    return d;
}

}  // namespace

PYBIND11_MODULE(_blockgrader, mod) {
    mod.doc() = "Block-ordering problems with optional blocks: collapse, enumerate, grade";

    // Kept alive for the life of the interpreter.
    static PyObject* error_type = py::exception<Error>(mod, "BlockGraderError").release().ptr();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object exc = py::handle(error_type)(e.what());
            exc.attr("code") = std::string(error_name(e.code()));
            PyErr_SetObject(error_type, exc.ptr());
        }
    });

    mod.def("parse_depends", [](const std::string& expr) {
        std::vector<std::vector<std::string>> out;
        for (auto& g : parse_depends(expr)) out.push_back(std::move(g.members));
        return out;
    }, py::arg("expr"), "Alternatives of a depends expression as lists of tags.");

    py::class_<ProblemMultigraph>(mod, "Problem")
        .def_property_readonly("tags", [](const ProblemMultigraph& m) {
            std::vector<std::string> out;
            for (const auto& b : m.blocks()) out.push_back(b.tag);
            return out;
        })
        .def_property_readonly("final_tag", &ProblemMultigraph::final_tag)
        .def("groups", [](const ProblemMultigraph& m, const std::string& tag) {
            std::vector<std::vector<std::string>> out;
            for (const auto& g : m.groups(tag)) out.push_back(g.members);
            return out;
        }, py::arg("tag"))
        .def("stats", [](const ProblemMultigraph& m) {
            auto s = stats(m);
            py::dict d;
            d["n"] = s.n;
            d["m"] = s.m;
            d["d"] = s.d;
            d["bound"] = s.bound;
            return d;
        })
        .def("collapse", [](const ProblemMultigraph& m, bool reverse) {
            py::list out;
            for (const auto& dag : collapse(m, {reverse ? TieBreak::Reverse : TieBreak::Forward})) {
                out.append(dag_dict(dag));
            }
            return out;
        }, py::arg("reverse") = false)
        .def("solutions", [](const ProblemMultigraph& m, std::size_t limit) {
            std::vector<std::vector<std::pair<std::string, int>>> out;
            for (const auto& s : enumerate_solutions(m, limit)) {
                auto& row = out.emplace_back();
                for (const auto& p : s) row.emplace_back(p.tag, p.indent);
            }
            return out;
        }, py::arg("limit") = kDefaultSolutionCap)
        .def("grade", [](const ProblemMultigraph& m, const py::iterable& placed, bool lenient_indent,
                         double score_floor) {
            GradingPolicy policy;
            policy.indent_strict = !lenient_indent;
            policy.score_floor = score_floor;
            auto submission = to_submission(placed);
            GradeReport report;
            {
                py::gil_scoped_release release;
                report = grade(m, submission, policy);
            }
            return report_dict(report);
        }, py::arg("placed"), py::arg("lenient_indent") = false, py::arg("score_floor") = 0.0)
        .def("export_dot", [](const ProblemMultigraph& m) { return export_dot(m); })
        .def("to_canonical", [](const ProblemMultigraph& m) { return to_canonical(m); })
        .def("__len__", &ProblemMultigraph::size)
        .def("__eq__", [](const ProblemMultigraph& a, const ProblemMultigraph& b) { return a == b; });

    mod.def("load_problem", [](const std::string& text) { return load_problem_text(text); }, py::arg("text"),
            "Parse a problem from markup or canonical JSON.");
    mod.def("load_problem_file", [](const std::string& path) { return load_problem_file({"", path}).graph; },
            py::arg("path"));
}
