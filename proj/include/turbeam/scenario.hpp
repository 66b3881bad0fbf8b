#pragma once

#include <optional>
#include <string>
#include <vector>

#include "turbeam/beam.hpp"
#include "turbeam/fluctuations.hpp"
#include "turbeam/mc.hpp"
#include "turbeam/quadrature.hpp"
#include "turbeam/spectrum.hpp"

namespace turbeam {

enum class SweepVariable { Time, G2, Amplitude, R0 };

struct Sweep {
  SweepVariable variable = SweepVariable::Time;
  std::vector<double> grid;  // strictly increasing
};

enum class OutputFormat { Csv, Json };

struct OutputSpec {
  OutputFormat format = OutputFormat::Csv;
  std::string path;  // empty: stdout
};

// One self-describing run: everything a command needs, parsed from an INI-ish
// key-value file (see docs/scenario_format.md) or a JSON document. Unknown
// keys are hard errors.
struct Scenario {
  BeamParams beam;
  SpectrumModel spectrum = SpectrumModel::gaussian(0.0, 0.05);
  std::optional<DiffuserParams> diffuser;
  std::optional<Sweep> sweep;
  std::optional<McConfig> mc;
  QuadratureSettings quadrature;
  OutputSpec output;

  // Copies of this scenario along the sweep grid (or just *this if no sweep).
  std::vector<Scenario> sweep_points() const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text);

// Number formatting used by the writers: 17 significant digits in JSON
// (bitwise round-trip), 9 in CSV (human-readable).
std::string fmt_json(double v);
std::string fmt_csv(double v);

// "1550nm", "300km", "2ms", or a plain SI number.
double parse_length(const std::string& text, const std::string& field);
double parse_time_value(const std::string& text, const std::string& field);

}  // namespace turbeam
