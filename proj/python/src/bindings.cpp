// Copyright 2026 The hemacd Authors
// SPDX-License-Identifier: Apache-2.0

// Python surface: the plain oracle, local runs on any engine, and a small
// encrypt/evaluate/decrypt session over the real scheme.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hemacd/backend.hpp"
#include "hemacd/config.hpp"
#include "hemacd/decision.hpp"
#include "hemacd/errors.hpp"
#include "hemacd/indicators.hpp"
#include "hemacd/pipeline.hpp"
#include "hemacd/prices.hpp"

namespace py = pybind11;
using namespace hemacd;

namespace {

Windows make_windows(int fast, int slow, int signal) {
  Windows w{fast, slow, signal};
  w.validate();
  return w;
}

PriceSeries make_prices(const std::vector<double>& closes) {
  PriceSeries p;
  p.closes = closes;
  for (std::size_t i = 0; i < closes.size(); ++i) p.dates.push_back(std::to_string(i));
  return p;
}

py::dict macd_dict(const std::vector<double>& prices, int fast, int slow, int signal) {
  const auto r = macd(PlainSeries{prices, 0}, make_windows(fast, slow, signal));
  py::dict d;
  d["alpha"] = r.alpha.values;
  d["beta"] = r.beta.values;
  d["theta"] = r.theta.values;
  d["gamma"] = r.gamma.values;
  d["m"] = r.m.values;
  return d;
}

// Owns an engine with the secret key; values cross the boundary as opaque
// handles.
class Session {
 public:
  Session(std::size_t ring_degree, std::uint64_t seed) {
    SchemeParams p;
    p.ring_degree = ring_degree;
    engine_ = HeEngine::create(p, seed);
  }
  CipherHandle encrypt(double x) { return engine_->b_encrypt(x); }
  double decrypt(const CipherHandle& h) const { return engine_->b_decrypt(h); }
  CipherHandle add(const CipherHandle& a, const CipherHandle& b) { return engine_->b_add(a, b); }
  CipherHandle sub(const CipherHandle& a, const CipherHandle& b) { return engine_->b_sub(a, b); }
  CipherHandle mul(const CipherHandle& a, const CipherHandle& b) {
    return engine_->b_rescale(engine_->b_mul(a, b));
  }
  int top_level() const { return engine_->top_level(); }

 private:
  std::unique_ptr<HeEngine> engine_;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "hemacd native core";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<DepthError>(m, "DepthError", PyExc_RuntimeError);

  py::enum_<Engine>(m, "Engine")
      .value("ORACLE", Engine::kOracle)
      .value("EXACT_SIM", Engine::kExactSim)
      .value("HE", Engine::kHe);

  m.def("load_prices", [](const std::string& path) {
        const PriceSeries p = load_prices(path);
        return py::make_tuple(p.dates, p.closes);
      }, py::arg("path"), "Read a date,close CSV; returns (dates, closes).");

  m.def("wma", [](const std::vector<double>& values, int n) {
        return wma(PlainSeries{values, 0}, n).values;
      }, py::arg("values"), py::arg("n"));
  m.def("macd", &macd_dict, py::arg("prices"), py::arg("fast") = 12, py::arg("slow") = 26,
        py::arg("signal") = 9, "Plain MACD stages as a dict of lists.");
  m.def("o1", [](const std::vector<double>& v) { return o1(v); }, py::arg("m"));
  m.def("o2", [](const std::vector<double>& v) { return o2(v); }, py::arg("m"));
  m.def("o2_hat", [](const std::vector<double>& v) { return o2_hat(v); }, py::arg("m"));

  py::class_<LocalRun>(m, "RunResult")
      .def_property_readonly("m", [](const LocalRun& r) { return r.m_dec; })
      .def_property_readonly("m_oracle", [](const LocalRun& r) { return r.plain.m.values; })
      .def_readonly("o2hat", &LocalRun::o2hat_dec)
      .def_readonly("o2hat_oracle", &LocalRun::o2hat_plain)
      .def_readonly("orders", &LocalRun::orders)
      .def_readonly("o1", &LocalRun::o1)
      .def_readonly("tau", &LocalRun::tau)
      .def_readonly("depth", &LocalRun::depth)
      .def_property_readonly("report", [](const LocalRun& r) { return r.report.to_text(); })
      .def_property_readonly("order_log", [](const LocalRun& r) { return r.order_log.to_csv(); });

  m.def("run_local",
        [](const std::vector<double>& prices, Engine engine, std::size_t ring_degree,
           std::optional<double> tau, double norm, std::uint64_t seed) {
          RunConfig c;
          c.engine = engine;
          c.params.ring_degree = ring_degree;
          c.tau = tau;
          c.norm = norm;
          c.seed = seed;
          c.validate();
          py::gil_scoped_release release;
          return run_local(c, make_prices(prices));
        },
        py::arg("prices"), py::arg("engine") = Engine::kExactSim, py::arg("ring_degree") = 8192,
        py::arg("tau") = py::none(), py::arg("norm") = 100.0, py::arg("seed") = 1,
        "Full local pipeline over in-memory prices.");

  py::class_<CipherHandle>(m, "Cipher")
      .def_readonly("level", &CipherHandle::level)
      .def_readonly("scale", &CipherHandle::scale);
  py::class_<Session>(m, "Session")
      .def(py::init<std::size_t, std::uint64_t>(), py::arg("ring_degree") = 8192,
           py::arg("seed") = 1)
      .def("encrypt", &Session::encrypt)
      .def("decrypt", &Session::decrypt)
      .def("add", &Session::add)
      .def("sub", &Session::sub)
      .def("mul", &Session::mul, "Multiply, relinearize and rescale.")
      .def_property_readonly("top_level", &Session::top_level);
}
