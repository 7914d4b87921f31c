#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <optional>
#include <sstream>

#include "ensim/demos.hpp"
#include "ensim/engine.hpp"
#include "ensim/oracle.hpp"
#include "ensim/report.hpp"

namespace py = pybind11;

namespace {

std::string run_report(ensim::Scenario scenario, std::optional<std::uint64_t> seed,
                       bool verbose) {
  ensim::RunOptions opts;
  opts.seed_override = seed;
  opts.event_log = verbose;
  ensim::RunResult result = ensim::run_scenario(scenario, opts);
  ensim::OracleResult oracle = ensim::compute_oracle(scenario);
  return ensim::report_json(result, &oracle);
}

ensim::TemporaryExposureKey tek_from_bytes(const py::bytes& key, ensim::DayIndex day) {
  std::string raw = key;
  if (raw.size() != 16) throw std::invalid_argument("key must be exactly 16 bytes");
  ensim::TemporaryExposureKey tek;
  tek.day = day;
  std::copy(raw.begin(), raw.end(), tek.key.begin());
  return tek;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of the exposure-notification ecosystem simulator";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ensim::ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  m.def(
      "run_scenario_json",
      [](const std::string& text, std::optional<std::uint64_t> seed, bool verbose) {
        return run_report(ensim::parse_scenario(text), seed, verbose);
      },
      py::arg("scenario_json"), py::arg("seed") = std::nullopt, py::arg("verbose") = false,
      "Simulate a scenario given as a JSON string; returns the report as JSON.");

  m.def(
      "run_scenario_file",
      [](const std::string& path, std::optional<std::uint64_t> seed, bool verbose) {
        return run_report(ensim::load_scenario(path), seed, verbose);
      },
      py::arg("path"), py::arg("seed") = std::nullopt, py::arg("verbose") = false,
      "Simulate a scenario file; returns the report as JSON.");

  m.def(
      "oracle_json",
      [](const std::string& text) {
        return ensim::oracle_report_json(ensim::compute_oracle(ensim::parse_scenario(text)));
      },
      py::arg("scenario_json"),
      "Ground-truth expectation for a scenario JSON string, as JSON.");

  m.def(
      "oracle_file",
      [](const std::string& path) {
        return ensim::oracle_report_json(ensim::compute_oracle(ensim::load_scenario(path)));
      },
      py::arg("path"), "Ground-truth expectation for a scenario file, as JSON.");

  m.def(
      "validate_json", [](const std::string& text) { ensim::parse_scenario(text); },
      py::arg("scenario_json"), "Raises ScenarioError when the scenario is invalid.");

  m.def(
      "validate_file", [](const std::string& path) { ensim::load_scenario(path); },
      py::arg("path"), "Raises ScenarioError when the scenario file is invalid.");

  m.def("demo_names", &ensim::demo_names, "Names of the bundled attack demonstrations.");

  m.def(
      "demo",
      [](const std::string& name) {
        std::ostringstream out;
        bool ok = ensim::run_demo(name, out);
        return py::make_tuple(ok, out.str());
      },
      py::arg("name"), "Runs a bundled demo; returns (passed, transcript).");

  m.def(
      "derive_epi",
      [](const py::bytes& key, ensim::DayIndex day, ensim::IntervalIndex interval,
         int intervals_per_day) {
        ensim::EphemeralId epi =
            ensim::derive_epi(tek_from_bytes(key, day), interval, intervals_per_day);
        return py::bytes(reinterpret_cast<const char*>(epi.bytes.data()), epi.bytes.size());
      },
      py::arg("key"), py::arg("day"), py::arg("interval"),
      py::arg("intervals_per_day") = ensim::kDefaultIntervalsPerDay,
      "Ephemeral identifier broadcast for (daily key, rotation interval).");

  m.def(
      "derive_day_identifiers",
      [](const py::bytes& key, ensim::DayIndex day, int intervals_per_day) {
        std::vector<py::bytes> out;
        for (const ensim::EphemeralId& epi :
             ensim::derive_day_identifiers(tek_from_bytes(key, day), intervals_per_day)) {
          out.emplace_back(reinterpret_cast<const char*>(epi.bytes.data()), epi.bytes.size());
        }
        return out;
      },
      py::arg("key"), py::arg("day"), py::arg("intervals_per_day") = ensim::kDefaultIntervalsPerDay,
      "All identifiers a daily key produces over one day.");

  m.def(
      "attenuation_db",
      [](double distance_m, double a_db, double b_db) {
        ensim::ChannelConfig cfg;
        cfg.a_db = a_db;
        cfg.b_db = b_db;
        return ensim::attenuation_at(distance_m, cfg);
      },
      py::arg("distance_m"), py::arg("a_db") = 45.0, py::arg("b_db") = 20.0,
      "Zero-noise path-loss attenuation at a distance.");
}
