#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "iplab/blockseq.hpp"
#include "iplab/cli.hpp"
#include "iplab/hildebrand.hpp"
#include "iplab/hindman.hpp"
#include "iplab/serialize.hpp"
#include "iplab/witness.hpp"

namespace py = pybind11;
using namespace iplab;

// Python int <-> mpz_class through little-endian bytes, which sidesteps the
// interpreter's limit on decimal string conversion.
namespace pybind11::detail {

template <>
struct type_caster<mpz_class> {
  PYBIND11_TYPE_CASTER(mpz_class, const_name("int"));

  bool load(handle src, bool) {
    if (!PyLong_Check(src.ptr())) return false;
    auto obj = reinterpret_borrow<pybind11::int_>(src);
    const bool negative = PyObject_RichCompareBool(obj.ptr(), pybind11::int_(0).ptr(), Py_LT) == 1;
    object mag = negative ? reinterpret_steal<object>(PyNumber_Negative(obj.ptr())) : object(obj);
    const auto bits = mag.attr("bit_length")().cast<std::size_t>();
    const std::size_t len = std::max<std::size_t>(1, (bits + 7) / 8);
    auto raw = mag.attr("to_bytes")(len, "little").cast<std::string>();
    mpz_import(value.get_mpz_t(), raw.size(), -1, 1, 0, 0, raw.data());
    if (negative) value = -value;
    return true;
  }

  static handle cast(const mpz_class& z, return_value_policy, handle) {
    std::string raw((mpz_sizeinbase(z.get_mpz_t(), 2) + 7) / 8, '\0');
    std::size_t count = 0;
    mpz_export(raw.data(), &count, -1, 1, 0, 0, z.get_mpz_t());
    raw.resize(count);
    object v = module_::import("builtins").attr("int").attr("from_bytes")(bytes(raw), "little");
    if (sgn(z) < 0) v = reinterpret_steal<object>(PyNumber_Negative(v.ptr()));
    return v.release();
  }
};

}  // namespace pybind11::detail

namespace {

SearchOptions make_options(unsigned threads, bool deterministic, std::uint64_t max_nodes,
                           double time_limit) {
  SearchOptions o;
  o.threads = threads;
  o.deterministic = deterministic;
  o.max_nodes = max_nodes;
  o.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(time_limit * 1000.0));
  return o;
}

py::dict stats_dict(const SearchStats& s) {
  py::dict d;
  d["nodes"] = s.nodes;
  d["backtracks"] = s.backtracks;
  d["max_depth"] = s.max_depth;
  d["wall_seconds"] = s.wall_seconds;
  return d;
}

std::vector<std::vector<unsigned>> sets_to_lists(const std::vector<IndexSet>& sets) {
  std::vector<std::vector<unsigned>> out;
  for (const auto& s : sets) out.push_back(s.elements());
  return out;
}

std::vector<IndexSet> lists_to_sets(const std::vector<std::vector<unsigned>>& lists) {
  std::vector<IndexSet> out;
  for (const auto& l : lists) out.emplace_back(l);
  return out;
}

#define IPLAB_SEARCH_KWARGS                                                          \
  py::kw_only(), py::arg("threads") = 1u, py::arg("deterministic") = false,          \
      py::arg("max_nodes") = std::uint64_t{0}, py::arg("time_limit") = 0.0

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Completely multiplicative functions into roots of unity, avoidance search, "
            "block sequences, Hindman search and IP-witnesses";

  py::register_exception<InvalidCertificate>(m, "InvalidCertificate", PyExc_ValueError);
  py::register_exception<UnsupportedMode>(m, "UnsupportedMode", PyExc_ValueError);
  py::register_exception<CapExceeded>(m, "CapExceeded", PyExc_ValueError);
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  py::class_<MultiplicativeFunction>(m, "MultiplicativeFunction")
      .def(py::init<>())
      .def_static("finite_support", &MultiplicativeFunction::finite_support, py::arg("k"),
                  py::arg("assignment") = PrimeAssignment{})
      .def_static("sieve_bounded", &MultiplicativeFunction::sieve_bounded, py::arg("k"),
                  py::arg("assignment"), py::arg("limit"), py::arg("default_class") = py::none())
      .def_property_readonly("k", &MultiplicativeFunction::modulus)
      .def_property_readonly("mode",
                             [](const MultiplicativeFunction& f) {
                               return f.mode() == FunctionMode::FiniteSupport ? "finite-support"
                                                                              : "sieve-bounded";
                             })
      .def_property_readonly("limit", &MultiplicativeFunction::limit)
      .def_property_readonly("default_class", &MultiplicativeFunction::default_class)
      .def_property_readonly("assignment", &MultiplicativeFunction::assignment)
      .def("evaluate",
           [](const MultiplicativeFunction& f, const mpz_class& n) {
             if (sgn(n) <= 0) throw std::invalid_argument("n must be positive");
             return f.evaluate(n).value;
           })
      .def("in_kernel",
           [](const MultiplicativeFunction& f, const mpz_class& n) {
             if (sgn(n) <= 0) throw std::invalid_argument("n must be positive");
             return f.in_kernel(n);
           })
      .def("to_json", [](const MultiplicativeFunction& f) { return to_json(f).dump(); })
      .def_static("from_json",
                  [](const std::string& s) { return function_from_json(json::parse(s)); });

  m.def(
      "find_runs",
      [](const MultiplicativeFunction& f, unsigned r, std::uint64_t bound) {
        std::vector<std::uint64_t> out;
        for (const auto& run : find_runs(f, r, bound)) out.push_back(run.start);
        return out;
      },
      py::arg("f"), py::arg("r"), py::arg("bound"), py::call_guard<py::gil_scoped_release>());

  py::class_<AvoidanceCertificate>(m, "AvoidanceCertificate")
      .def(py::init([](unsigned k, unsigned r, std::uint64_t bound, PrimeAssignment a,
                       std::optional<unsigned> dflt) {
             return AvoidanceCertificate{k, r, bound, std::move(a), dflt};
           }),
           py::arg("k"), py::arg("r"), py::arg("bound"), py::arg("assignment"),
           py::arg("default_class") = py::none())
      .def_readonly("k", &AvoidanceCertificate::k)
      .def_readonly("r", &AvoidanceCertificate::r)
      .def_readonly("bound", &AvoidanceCertificate::bound)
      .def_readonly("assignment", &AvoidanceCertificate::assignment)
      .def_readonly("default_class", &AvoidanceCertificate::default_class)
      .def("horizon", &AvoidanceCertificate::horizon)
      .def("to_json", [](const AvoidanceCertificate& c) { return to_json(c).dump(); })
      .def_static("from_json",
                  [](const std::string& s) { return certificate_from_json(json::parse(s)); })
      .def(py::self == py::self);

  m.def("verify_certificate", &verify_certificate, py::arg("certificate"),
        py::call_guard<py::gil_scoped_release>());
  m.def("relabel", &relabel, py::arg("assignment"), py::arg("unit"), py::arg("k"));

  m.def(
      "avoidance_search",
      [](unsigned k, unsigned r, std::uint64_t bound, bool symmetry, unsigned threads,
         bool deterministic, std::uint64_t max_nodes, double time_limit) {
        AvoidanceOptions o;
        static_cast<SearchOptions&>(o) = make_options(threads, deterministic, max_nodes, time_limit);
        o.symmetry = symmetry;
        AvoidanceResult res;
        {
          py::gil_scoped_release nogil;
          res = avoidance_search(k, r, bound, o);
        }
        py::dict d;
        d["status"] = to_string(res.status);
        d["certificate"] = res.certificate ? py::cast(*res.certificate) : py::none();
        d["stats"] = stats_dict(res.stats);
        return d;
      },
      py::arg("k"), py::arg("r"), py::arg("bound"), py::kw_only(), py::arg("symmetry") = false,
      py::arg("threads") = 1u, py::arg("deterministic") = false,
      py::arg("max_nodes") = std::uint64_t{0}, py::arg("time_limit") = 0.0);

  m.def(
      "hildebrand_constant",
      [](unsigned k, unsigned r, std::uint64_t max_bound, bool symmetry, unsigned threads,
         bool deterministic, std::uint64_t max_nodes, double time_limit) {
        AvoidanceOptions o;
        static_cast<SearchOptions&>(o) = make_options(threads, deterministic, max_nodes, time_limit);
        o.symmetry = symmetry;
        ConstantResult res;
        {
          py::gil_scoped_release nogil;
          res = hildebrand_constant(k, r, max_bound, o);
        }
        py::dict d;
        d["status"] = to_string(res.status());
        d["constant"] = res.constant ? py::cast(*res.constant) : py::none();
        d["extremal"] = res.extremal ? py::cast(*res.extremal) : py::none();
        d["last_bound"] = res.last_bound;
        d["budget_exhausted"] = res.budget_exhausted;
        d["stats"] = stats_dict(res.stats);
        return d;
      },
      py::arg("k"), py::arg("r") = 2u, py::arg("max_bound") = std::uint64_t{1000}, py::kw_only(),
      py::arg("symmetry") = false, py::arg("threads") = 1u, py::arg("deterministic") = false,
      py::arg("max_nodes") = std::uint64_t{0}, py::arg("time_limit") = 0.0);

  m.def(
      "generate_block_sequence",
      [](unsigned n, unsigned cap) { return generate_block_sequence(n, cap).terms(); },
      py::arg("n"), py::arg("cap") = kDefaultBlockCap);
  m.def("estimated_digits", &estimated_digits, py::arg("n"));
  m.def(
      "verify_block_divisibility",
      [](std::vector<mpz_class> terms) {
        DivisibilityReport rep;
        {
          py::gil_scoped_release nogil;
          rep = verify_block_divisibility(BlockSequence(std::move(terms)));
        }
        py::dict d;
        d["holds"] = rep.holds;
        if (rep.counterexample) {
          d["counterexample"] = py::make_tuple(rep.counterexample->first.elements(),
                                               rep.counterexample->second.elements());
        } else {
          d["counterexample"] = py::none();
        }
        d["pairs_checked"] = rep.pairs_checked;
        return d;
      },
      py::arg("terms"));

  m.def(
      "fu_closure",
      [](const std::vector<std::vector<unsigned>>& blocks) {
        return sets_to_lists(fu_closure(BlockFamily{lists_to_sets(blocks)}));
      },
      py::arg("blocks"));

  m.def(
      "monochromatic_fu_search",
      [](unsigned n, unsigned classes, const py::function& color, unsigned m, unsigned threads,
         bool deterministic, std::uint64_t max_nodes, double time_limit) {
        // The callback is only referenced, never copied, while the GIL is released.
        const py::function* fn = &color;
        SubsetColoring coloring{n, classes, [fn](const IndexSet& s) {
                                  py::gil_scoped_acquire gil;
                                  return (*fn)(s.elements()).cast<unsigned>();
                                }};
        HindmanResult res;
        {
          py::gil_scoped_release nogil;
          res = monochromatic_fu_search(coloring, m,
                                        make_options(threads, deterministic, max_nodes, time_limit));
        }
        py::dict d;
        d["status"] = to_string(res.status);
        d["blocks"] = res.family ? py::cast(sets_to_lists(res.family->blocks)) : py::none();
        d["color"] = res.family ? py::cast(res.color) : py::none();
        d["stats"] = stats_dict(res.stats);
        return d;
      },
      py::arg("n"), py::arg("classes"), py::arg("color"), py::arg("m"), IPLAB_SEARCH_KWARGS);

  m.def(
      "fs_closure",
      [](const std::vector<mpz_class>& gens) {
        std::vector<std::pair<mpz_class, std::uint64_t>> out;
        for (auto& s : fs_closure(std::span<const mpz_class>(gens))) {
          out.emplace_back(s.value, s.multiplicity);
        }
        return out;
      },
      py::arg("generators"));

  py::class_<IPWitness>(m, "IPWitness")
      .def_readonly("f", &IPWitness::f)
      .def_readonly("base", &IPWitness::base)
      .def_readonly("generators", &IPWitness::generators)
      .def_property_readonly("provenance",
                             [](const IPWitness& w) { return to_string(w.provenance); })
      .def_property_readonly("blocks",
                             [](const IPWitness& w) { return sets_to_lists(w.blocks); })
      .def_readonly("b_values", &IPWitness::b_values)
      .def("to_json", [](const IPWitness& w) { return to_json(w).dump(); })
      .def_static("from_json", [](const std::string& s) { return witness_from_json(json::parse(s)); });

  auto witness_result = [](const WitnessResult& res) {
    py::dict d;
    d["status"] = to_string(res.status);
    d["witness"] = res.witness ? py::cast(*res.witness) : py::none();
    d["stats"] = stats_dict(res.stats);
    return d;
  };

  m.def(
      "ip_witness_from_proof",
      [witness_result](const MultiplicativeFunction& f, unsigned m, unsigned n_prefix,
                       unsigned cap, unsigned threads, bool deterministic,
                       std::uint64_t max_nodes, double time_limit) {
        WitnessResult res;
        {
          py::gil_scoped_release nogil;
          res = ip_witness_from_proof(f, m, n_prefix,
                                      make_options(threads, deterministic, max_nodes, time_limit),
                                      cap);
        }
        return witness_result(res);
      },
      py::arg("f"), py::arg("m"), py::arg("n_prefix") = 6u, py::arg("cap") = kDefaultBlockCap,
      IPLAB_SEARCH_KWARGS);

  m.def(
      "ip_witness_direct",
      [witness_result](const MultiplicativeFunction& f, unsigned m, std::uint64_t bound,
                       unsigned threads, bool deterministic, std::uint64_t max_nodes,
                       double time_limit) {
        WitnessResult res;
        {
          py::gil_scoped_release nogil;
          res = ip_witness_direct(f, m, bound,
                                  make_options(threads, deterministic, max_nodes, time_limit));
        }
        return witness_result(res);
      },
      py::arg("f"), py::arg("m"), py::arg("bound"), IPLAB_SEARCH_KWARGS);

  m.def("verify_witness", &verify_witness, py::arg("witness"),
        py::call_guard<py::gil_scoped_release>());

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "iplab");
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release nogil;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
