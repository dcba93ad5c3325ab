#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pentadrive/config.hpp"
#include "pentadrive/fsmpc.hpp"
#include "pentadrive/metrics.hpp"
#include "pentadrive/sweep.hpp"
#include "pentadrive/transforms.hpp"
#include "pentadrive/vsi.hpp"

namespace py = pybind11;
using namespace pentadrive;

namespace {

py::dict report_dict(const MetricsReport& r) {
  py::dict d;
  d["variant"] = r.variant;
  d["lambda_xy"] = r.lambda_xy;
  d["lambda_sc"] = r.lambda_sc;
  d["fe"] = r.op.fe;
  d["Is_star"] = r.op.Is_star;
  d["PZ"] = r.PZ;
  d["E_ab"] = r.E_ab;
  d["E_xy"] = r.E_xy;
  d["ASF"] = r.ASF;
  d["THD_V"] = r.THD_V ? py::cast(*r.THD_V) : py::none();
  d["feasible"] = r.feasible;
  d["note"] = r.note;
  return d;
}

py::dict trace_dict(const std::vector<TraceRow>& trace) {
  const auto n = static_cast<py::ssize_t>(trace.size());
  py::array_t<double> t(n), ia(n), ib(n), ix(n), iy(n), va(n);
  py::array_t<int> applied(n);
  for (py::ssize_t k = 0; k < n; ++k) {
    const auto& r = trace[k];
    t.mutable_at(k) = r.t;
    ia.mutable_at(k) = r.i_alpha;
    ib.mutable_at(k) = r.i_beta;
    ix.mutable_at(k) = r.i_x;
    iy.mutable_at(k) = r.i_y;
    applied.mutable_at(k) = r.applied;
    va.mutable_at(k) = r.v_a;
  }
  py::dict d;
  d["t"] = t;
  d["i_alpha"] = ia;
  d["i_beta"] = ib;
  d["i_x"] = ix;
  d["i_y"] = iy;
  d["applied"] = applied;
  d["v_a"] = va;
  return d;
}

}  // namespace

PYBIND11_MODULE(_pentadrive, m) {
  m.doc() = "Five-phase induction machine FSMPC simulator";

  py::class_<MachineParams>(m, "MachineParams")
      .def(py::init<>())
      .def_readwrite("Rs", &MachineParams::Rs)
      .def_readwrite("Rr", &MachineParams::Rr)
      .def_readwrite("Lls", &MachineParams::Lls)
      .def_readwrite("Llr", &MachineParams::Llr)
      .def_readwrite("LM", &MachineParams::LM)
      .def_readwrite("Jm", &MachineParams::Jm)
      .def_readwrite("P", &MachineParams::P)
      .def_readwrite("Vdc", &MachineParams::Vdc)
      .def("c1", &MachineParams::c1)
      .def("c2", &MachineParams::c2)
      .def("c3", &MachineParams::c3)
      .def("c4", &MachineParams::c4)
      .def("a2", &MachineParams::a2)
      .def("a3", &MachineParams::a3)
      .def("a4", &MachineParams::a4, py::arg("omega_r"))
      .def("validate", &MachineParams::validate);

  m.def("clarke", [](const Phase5& v) {
    const auto c = clarke(v);
    return std::array<double, 5>{c.alpha, c.beta, c.x, c.y, c.zero};
  }, py::arg("phase_values"));
  m.def("park", [](double d, double q, double theta) {
    const auto ab = park(d, q, theta);
    return std::pair{ab.alpha, ab.beta};
  }, py::arg("d"), py::arg("q"), py::arg("theta_a"));
  m.def("phase_voltages", [](int index, double vdc) {
    return phase_voltages(legs_from_index(index), vdc);
  }, py::arg("index"), py::arg("Vdc"));
  m.def("switch_changes", [](int a, int b) {
    return switch_changes(legs_from_index(a), legs_from_index(b));
  }, py::arg("u_prev"), py::arg("u_next"));

  m.def("vv_table", [](double vdc) {
    py::list rows;
    for (const auto& v : build_vv_table(vdc)) {
      py::dict d;
      d["index"] = v.index;
      d["v_alpha"] = v.v_ab.alpha;
      d["v_beta"] = v.v_ab.beta;
      d["v_x"] = v.v_xy.alpha;
      d["v_y"] = v.v_xy.beta;
      d["corona"] = std::string(to_string(v.corona));
      rows.append(d);
    }
    return rows;
  }, py::arg("Vdc") = 300.0);
  m.def("vvv_table", [](double vdc) {
    py::list rows;
    for (const auto& v : build_vvv_table(build_vv_table(vdc))) {
      py::dict d;
      d["id"] = v.id;
      d["large"] = v.large ? py::cast(v.large->index) : py::none();
      d["medium"] = v.medium ? py::cast(v.medium->index) : py::none();
      d["tL"] = v.tL;
      d["tM"] = v.tM;
      d["v_alpha_avg"] = v.v_ab_avg.alpha;
      d["v_beta_avg"] = v.v_ab_avg.beta;
      d["is_null"] = v.is_null;
      rows.append(d);
    }
    return rows;
  }, py::arg("Vdc") = 300.0);

  m.def("thd", [](const std::vector<double>& samples, std::size_t periods) {
    return thd(samples, periods);
  }, py::arg("samples"), py::arg("periods"));

  m.def("validate_config", [](const std::string& text) {
    const auto r = validate_config(text);
    return std::pair{r.ok() ? py::cast(to_config_text(*r.config)) : py::none(), r.errors};
  }, py::arg("text"),
     "Returns (canonical config text or None, list of errors).");

  m.def("run_single", [](const std::string& variant, double fe, double Is_star, double lambda_xy,
                         double lambda_sc, double Ts, double Vdc, bool trace) {
    MachineParams params;
    params.Vdc = Vdc;
    PlantConfig plant;
    plant.Ts = Ts;
    RunOptions options;
    options.keep_trace = trace;
    const auto cfg = make_controller_config(variant, lambda_xy, lambda_sc, Ts);
    RunResult run;
    {
      py::gil_scoped_release release;
      run = run_single({fe, Is_star, 0.03}, cfg, params, plant, options);
    }
    auto out = report_dict(run.report);
    if (trace) out["trace"] = trace_dict(run.trace);
    return out;
  }, py::arg("variant"), py::arg("fe"), py::arg("Is_star"), py::arg("lambda_xy") = 0.0,
     py::arg("lambda_sc") = 0.0, py::arg("Ts") = 35e-6, py::arg("Vdc") = 300.0,
     py::arg("trace") = false);

  m.def("run_sweep", [](const std::string& config_text) {
    const auto r = validate_config(config_text);
    if (!r.ok()) {
      std::string msg = "invalid configuration:";
      for (const auto& e : r.errors) msg += "\n  " + e;
      throw py::value_error(msg);
    }
    SweepResult result;
    {
      py::gil_scoped_release release;
      result = run_sweep(r.config->sweep, r.config->machine, r.config->plant);
    }
    py::list rows;
    for (const auto& row : result.rows) rows.append(report_dict(row));
    return rows;
  }, py::arg("config_text") = std::string(),
     "Runs a sweep described by key = value configuration text.");

  m.def("metrics_csv_header", &metrics_csv_header);
}
