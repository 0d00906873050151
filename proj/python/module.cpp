#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "descriptor/commands.hpp"
#include "descriptor/fractional.hpp"
#include "descriptor/pencil.hpp"

namespace py = pybind11;
using namespace descriptor;

namespace {

Pencil float_pencil(const Matrix& f, const Matrix& g) { return Pencil{f, g}; }

/// Entries may be numbers or strings like "-3/4"; numbers go through their
/// shortest decimal text so 0.1 becomes 1/10.
RationalMatrix exact_matrix(const py::sequence& rows, const char* what) {
  const Index r = static_cast<Index>(py::len(rows));
  Index c = -1;
  RationalMatrix out;
  for (Index i = 0; i < r; ++i) {
    const py::sequence row = rows[static_cast<size_t>(i)];
    if (c < 0) {
      c = static_cast<Index>(py::len(row));
      out.resize(r, c);
    }
    if (static_cast<Index>(py::len(row)) != c)
      throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has ragged rows");
    for (Index j = 0; j < c; ++j) out(i, j) = Rational::parse(std::string(py::str(row[static_cast<size_t>(j)])));
  }
  return out;
}

Matrix stack(const std::vector<Vector>& rows, Index cols) {
  Matrix out(static_cast<Index>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = rows[i].transpose();
  return out;
}

SampleSequence to_sequence(const Matrix& rows, long start) {
  SampleSequence s;
  s.start_index = start;
  for (Index i = 0; i < rows.rows(); ++i) s.vectors.push_back(rows.row(i).transpose());
  return s;
}

py::dict spectrum_dict(const SpectralStructure& s) {
  py::list eig;
  for (const auto& f : s.finite) {
    py::dict d;
    d["value"] = f.value;
    d["multiplicity"] = f.multiplicity;
    d["exact"] = f.exact ? py::object(py::str(f.exact->str())) : py::object(py::none());
    eig.append(d);
  }
  py::dict out;
  out["p"] = s.p;
  out["q"] = s.q;
  out["eigenvalues"] = eig;
  return out;
}

py::dict decomposition_dict(const WeierstrassDecomposition& d) {
  py::dict out;
  out["P"] = d.P;
  out["Q"] = d.Q;
  out["Q_inv"] = d.Q_inv;
  out["Jp"] = d.Jp;
  out["Hq"] = d.Hq;
  out["p"] = d.p;
  out["q"] = d.q;
  out["q_star"] = d.q_star;
  out["infinite_blocks"] = d.infinite_blocks;
  py::list blocks;
  for (const auto& b : d.finite_blocks) blocks.append(py::make_tuple(b.eigenvalue, b.size));
  out["finite_blocks"] = blocks;
  return out;
}

py::dict trajectory_dict(const Trajectory& t, Index m) {
  py::dict out;
  out["times"] = t.times;
  out["states"] = stack(t.states, m);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
  mod.doc() = "Descriptor systems: pencil analysis, continuous solutions, discretization, fractional comparison";

  // Raised with a .code attribute naming the error kind.
  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> exc_type;
  exc_type.call_once_and_store_result([&]() { return py::exception<Error>(mod, "DescriptorError"); });
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = exc_type.get_stored();
      py::object err = type(e.what());
      err.attr("code") = std::string(error_code_name(e.code()));
      PyErr_SetObject(type.ptr(), err.ptr());
    }
  });

  // Pencil analysis
  mod.def("classify_pencil", [](const Matrix& f, const Matrix& g) { return std::string(to_string(classify_pencil(float_pencil(f, g)))); },
          py::arg("F"), py::arg("G"));
  mod.def("det_polynomial", [](const Matrix& f, const Matrix& g) { return det_polynomial(float_pencil(f, g)).coefficients(); },
          py::arg("F"), py::arg("G"), "Coefficients of det(sF - G), constant term first.");
  mod.def("spectral_structure", [](const Matrix& f, const Matrix& g) { return spectrum_dict(spectral_structure(float_pencil(f, g))); },
          py::arg("F"), py::arg("G"));
  mod.def("weierstrass_decompose", [](const Matrix& f, const Matrix& g) { return decomposition_dict(weierstrass_decompose(float_pencil(f, g))); },
          py::arg("F"), py::arg("G"));
  mod.def(
      "elementary_divisors",
      [](const py::sequence& f, const py::sequence& g) {
        const auto d = elementary_divisors(ExactPencil{exact_matrix(f, "F"), exact_matrix(g, "G")});
        py::list finite;
        for (const auto& e : d.finite) {
          py::dict item;
          item["value"] = e.value;
          item["degree"] = e.degree;
          item["exact"] = e.exact ? py::object(py::str(e.exact->str())) : py::object(py::none());
          finite.append(item);
        }
        py::dict out;
        out["finite"] = finite;
        out["infinite"] = d.infinite;
        out["p"] = d.p();
        out["q"] = d.q();
        out["q_star"] = d.q_star();
        return out;
      },
      py::arg("F"), py::arg("G"), "Exact arithmetic; entries may be numbers or 'p/q' strings.");

  // Inputs
  py::class_<InputSignal>(mod, "InputSignal")
      .def_static("zero", &InputSignal::zero, py::arg("dim"))
      .def_static("constant", &InputSignal::constant, py::arg("value"))
      .def_static("polynomial", &InputSignal::polynomial, py::arg("coeffs"))
      .def_static("exponential", &InputSignal::exponential, py::arg("amplitude"), py::arg("rate"))
      .def_static("sinusoid", &InputSignal::sinusoid, py::arg("sin_amplitude"), py::arg("cos_amplitude"), py::arg("omega"))
      .def_static("samples", &InputSignal::samples, py::arg("values"), py::arg("period"), py::arg("start") = 0.0)
      .def_static("custom", &InputSignal::custom, py::arg("dim"), py::arg("fn"), py::arg("max_order"))
      .def("__add__", &InputSignal::operator+)
      .def("scaled", &InputSignal::scaled, py::arg("factor"))
      .def("value", &InputSignal::value, py::arg("t"))
      .def("derivative", &InputSignal::derivative, py::arg("t"), py::arg("order"))
      .def_property_readonly("kind", &InputSignal::kind);

  // Continuous solver
  py::class_<DescriptorSystem>(mod, "DescriptorSystem")
      .def_property_readonly("m", &DescriptorSystem::m)
      .def_property_readonly("r", &DescriptorSystem::r)
      .def_property_readonly("p", &DescriptorSystem::p)
      .def_property_readonly("q", &DescriptorSystem::q)
      .def_property_readonly("q_star", [](const DescriptorSystem& s) { return s.dec.q_star; })
      .def_property_readonly("decomposition", [](const DescriptorSystem& s) { return decomposition_dict(s.dec); });

  mod.def("build_system", [](const Matrix& f, const Matrix& g, const Matrix& b) { return build_system(f, g, b); },
          py::arg("F"), py::arg("G"), py::arg("B"));
  mod.def("uniform_grid", &uniform_grid, py::arg("t0"), py::arg("t1"), py::arg("n"));
  mod.def(
      "consistency_check",
      [](const DescriptorSystem& s, const Vector& y0, const InputSignal& v, double t0) {
        const auto r = consistency_check(s, y0, v, t0);
        py::dict out;
        out["consistent"] = r.consistent;
        out["defect"] = r.defect;
        out["projected_Y0"] = r.projected_Y0;
        return out;
      },
      py::arg("system"), py::arg("Y0"), py::arg("input"), py::arg("t0") = 0.0);
  mod.def(
      "solve_continuous",
      [](const DescriptorSystem& s, const Vector& y0, const InputSignal& v, const std::vector<double>& times, double t0) {
        return trajectory_dict(solve_continuous(s, y0, v, times, t0), s.m());
      },
      py::arg("system"), py::arg("Y0"), py::arg("input"), py::arg("times"), py::arg("t0") = 0.0);
  mod.def(
      "solve_via_fundamental",
      [](const DescriptorSystem& s, const Vector& y0, const InputSignal& v, const std::vector<double>& times, double t0) {
        return trajectory_dict(solve_via_fundamental(s, y0, v, times, t0), s.m());
      },
      py::arg("system"), py::arg("Y0"), py::arg("input"), py::arg("times"), py::arg("t0") = 0.0);
  mod.def(
      "residual_check",
      [](const DescriptorSystem& s, const Vector& y0, const InputSignal& v, const std::vector<double>& times, double t0) {
        return residual_check(s, solve_continuous(s, y0, v, times, t0), v);
      },
      py::arg("system"), py::arg("Y0"), py::arg("input"), py::arg("times"), py::arg("t0") = 0.0,
      "Solves on the grid, then returns the finite-difference equation residual.");
  mod.def("fundamental_matrix", [](const DescriptorSystem& s, double t, double t0) { return fundamental_matrix(s.dec, t, t0); },
          py::arg("system"), py::arg("t"), py::arg("t0") = 0.0);

  // Discretizer
  py::class_<DiscretizedSystem>(mod, "DiscretizedSystem")
      .def_readonly("T", &DiscretizedSystem::T)
      .def_readonly("A", &DiscretizedSystem::A)
      .def_readonly("Phi_int", &DiscretizedSystem::Phi_int)
      .def_readonly("fast_coeffs", &DiscretizedSystem::fast_coeffs)
      .def_readonly("q_star", &DiscretizedSystem::q_star)
      .def_readonly("memory_depth", &DiscretizedSystem::memory_depth);
  mod.def("discretize", &discretize, py::arg("system"), py::arg("T"));
  mod.def("fast_correction_coeffs", &fast_correction_coeffs, py::arg("i"));
  mod.def(
      "discrete_simulate",
      [](const DiscretizedSystem& d, const Vector& y0, const Matrix& inputs, long start, long steps, bool extend) {
        const auto sim = discrete_simulate(d, y0, to_sequence(inputs, start), steps, extend);
        py::dict out;
        out["states"] = stack(sim.states.vectors, y0.size());
        out["inputs"] = stack(sim.inputs.vectors, y0.size());
        out["history_extended"] = sim.history_extended;
        return out;
      },
      py::arg("dsys"), py::arg("Y0"), py::arg("inputs"), py::arg("start_index") = 0, py::arg("steps") = -1,
      py::arg("extend_history") = true, "inputs holds one sample V_k per row, starting at start_index.");
  mod.def(
      "compare_with_continuous",
      [](const DescriptorSystem& s, const DiscretizedSystem& d, const Vector& y0, const InputSignal& v, long steps, double t0) {
        const auto r = compare_with_continuous(s, d, y0, v, steps, t0);
        py::dict out;
        out["max_error"] = r.max_error;
        out["max_error_half"] = r.max_error_half;
        out["observed_order"] = r.observed_order;
        out["times"] = r.times;
        out["discrete"] = stack(r.discrete, s.m());
        out["continuous"] = stack(r.continuous, s.m());
        return out;
      },
      py::arg("system"), py::arg("dsys"), py::arg("Y0"), py::arg("input"), py::arg("steps"), py::arg("t0") = 0.0);

  // Fractional
  mod.def("rising_factorial", &rising_factorial, py::arg("k"), py::arg("a"));
  mod.def("nabla_coefficients", [](double n, long K) { return nabla_coefficients(FractionalOrder(n), K).c; },
          py::arg("n"), py::arg("K"));
  mod.def("nabla_coefficient_direct", [](double n, long j) { return nabla_coefficient_direct(FractionalOrder(n), j); },
          py::arg("n"), py::arg("j"));
  mod.def(
      "solve_fractional",
      [](const Matrix& f, const Matrix& g, double n, const Matrix& inputs, const Vector& y0, long K) {
        const auto fsys = make_fractional_system(f, g, FractionalOrder(n));
        return stack(solve_fractional_system(fsys, to_sequence(inputs, 0), y0, K).vectors, y0.size());
      },
      py::arg("F"), py::arg("G"), py::arg("n"), py::arg("inputs"), py::arg("Y0"), py::arg("K"),
      "inputs holds V_0 .. V_K, one per row.");
  mod.def(
      "telescope_recursion",
      [](const Matrix& a, const Matrix& u, const Vector& y0, long K) {
        return stack(telescope_recursion(a, to_sequence(u, 0), y0, K).vectors, y0.size());
      },
      py::arg("A"), py::arg("U"), py::arg("Y0"), py::arg("K"));
  mod.def(
      "correspondence_diagnostic",
      [](const DiscretizedSystem& d, const Matrix& f, double n, long K) {
        const auto r = correspondence_diagnostic(d, f, FractionalOrder(n), K);
        py::list lags;
        for (const auto& l : r.lags) {
          py::dict item;
          item["lag"] = l.lag;
          item["coefficient"] = l.coefficient;
          item["delta"] = l.delta;
          lags.append(item);
        }
        py::dict out;
        out["n"] = r.n;
        out["lags"] = lags;
        out["max_delta"] = r.max_delta;
        out["best_fit_n"] = r.best_fit_n;
        out["best_fit_total"] = r.best_fit_total;
        out["corresponds"] = r.corresponds;
        out["verdict"] = r.verdict;
        return out;
      },
      py::arg("dsys"), py::arg("F"), py::arg("n"), py::arg("K"));

  // Command layer
  mod.def(
      "run_command",
      [](const std::string& command, const std::string& spec_text, std::optional<double> T, std::optional<double> order_n,
         std::optional<long> steps, std::optional<double> rank_tol, bool project, bool crosscheck, bool exact) {
        CommandOptions opts{T, order_n, steps, rank_tol, project, crosscheck, exact};
        const auto out = run_command(command, parse_spec(spec_text), opts);
        return py::make_tuple(out.exit_code, render_bundle(out.bundle));
      },
      py::arg("command"), py::arg("spec_text"), py::kw_only(), py::arg("T") = py::none(), py::arg("order_n") = py::none(),
      py::arg("steps") = py::none(), py::arg("rank_tol") = py::none(), py::arg("project") = false,
      py::arg("crosscheck") = false, py::arg("exact") = false,
      "Runs a CLI command on a JSON system definition; returns (exit_code, bundle_json).");
}
