#include "turbeam/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "turbeam/errors.hpp"

namespace turbeam {

std::string fmt_json(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_csv(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& field) {
  try {
    std::size_t pos = 0;
    double v = std::stod(text, &pos);
    if (pos != text.size())
      throw ConfigError(field + ": trailing characters in number '" + text + "'");
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError(field + ": cannot parse number '" + text + "'");
  }
}

double parse_with_units(const std::string& raw, const std::string& field,
                        const std::map<std::string, double>& units) {
  std::string text = trim(raw);
  std::size_t split = text.size();
  while (split > 0 && std::isalpha(static_cast<unsigned char>(text[split - 1])))
    --split;
  std::string suffix = text.substr(split);
  std::string body = trim(text.substr(0, split));
  if (suffix.empty()) return parse_number(body, field);
  // exponent letters ("1e6") end up in the suffix scan; retry as plain number
  auto it = units.find(suffix);
  if (it == units.end()) {
    try {
      return parse_number(text, field);
    } catch (const ConfigError&) {
      throw ConfigError(field + ": unknown unit suffix '" + suffix + "'");
    }
  }
  return parse_number(body, field) * it->second;
}

}  // namespace

double parse_length(const std::string& text, const std::string& field) {
  static const std::map<std::string, double> units = {
      {"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3}, {"cm", 1e-2},
      {"m", 1.0},   {"km", 1e3}};
  return parse_with_units(text, field, units);
}

double parse_time_value(const std::string& text, const std::string& field) {
  static const std::map<std::string, double> units = {
      {"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}};
  return parse_with_units(text, field, units);
}

namespace {

using Section = std::map<std::string, std::string>;
using Document = std::map<std::string, Section>;

bool parse_bool(const std::string& raw, const std::string& field) {
  std::string v = trim(raw);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError(field + ": expected a boolean, got '" + raw + "'");
}

std::vector<double> parse_grid(const std::string& raw, const std::string& field) {
  std::string text = raw;
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream is(text);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) out.push_back(parse_number(tok, field));
  if (out.empty()) throw ConfigError(field + ": empty list");
  return out;
}

Document parse_ini(const std::string& text) {
  Document doc;
  std::istringstream is(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("scenario line " + std::to_string(lineno) +
                          ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("scenario line " + std::to_string(lineno) +
                          ": empty section name");
      doc[section];
      continue;
    }
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("scenario line " + std::to_string(lineno) +
                        ": expected 'key = value'");
    if (section.empty())
      throw ConfigError("scenario line " + std::to_string(lineno) +
                        ": key before any [section]");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("scenario line " + std::to_string(lineno) +
                                       ": empty key");
    if (doc[section].count(key))
      throw ConfigError("scenario: duplicate key " + section + "." + key);
    doc[section][key] = value;
  }
  return doc;
}

// JSON scenarios share the INI applier: scalars are rendered back to strings
// (17 digits round-trip doubles exactly), arrays become space-joined lists.
Document parse_json_doc(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scenario: JSON root must be an object");
  auto render = [](const nlohmann::json& v, const std::string& field) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
    if (v.is_number_integer())
      return std::to_string(v.get<long long>());
    if (v.is_number()) return fmt_json(v.get<double>());
    throw ConfigError(field + ": unsupported JSON value type");
  };
  Document doc;
  for (auto& [section, body] : j.items()) {
    if (!body.is_object())
      throw ConfigError("scenario." + section + ": expected an object");
    for (auto& [key, value] : body.items()) {
      std::string field = section + "." + key;
      if (value.is_array()) {
        std::string joined;
        for (const auto& el : value) {
          if (!joined.empty()) joined += ' ';
          joined += render(el, field);
        }
        doc[section][key] = joined;
      } else {
        doc[section][key] = render(value, field);
      }
    }
  }
  return doc;
}

// Pops a key from the section; whatever is left at the end is unknown and
// rejected with its field path.
class SectionReader {
 public:
  SectionReader(Document& doc, std::string name)
      : name_(std::move(name)) {
    auto it = doc.find(name_);
    if (it != doc.end()) section_ = &it->second;
  }

  bool present() const { return section_ != nullptr; }

  std::optional<std::string> take(const std::string& key) {
    if (!section_) return std::nullopt;
    auto it = section_->find(key);
    if (it == section_->end()) return std::nullopt;
    std::string v = it->second;
    section_->erase(it);
    return v;
  }

  std::string field(const std::string& key) const { return name_ + "." + key; }

  void finish() const {
    if (section_ && !section_->empty())
      throw ConfigError("scenario: unknown key " + name_ + "." +
                        section_->begin()->first);
  }

 private:
  std::string name_;
  Section* section_ = nullptr;
};

SpectrumModel build_spectrum(SectionReader& sec) {
  std::string model = sec.take("model").value_or("gaussian");
  auto number = [&](const std::string& key,
                    std::optional<double> fallback) -> double {
    auto raw = sec.take(key);
    if (!raw) {
      if (fallback) return *fallback;
      throw ConfigError("scenario: missing key " + sec.field(key) +
                        " for spectrum model '" + model + "'");
    }
    return parse_number(*raw, sec.field(key));
  };
  if (model == "gaussian") {
    double a = number("amplitude", std::nullopt);
    auto lraw = sec.take("corr_length");
    if (!lraw)
      throw ConfigError("scenario: missing key " + sec.field("corr_length"));
    return SpectrumModel::gaussian(a, parse_length(*lraw, sec.field("corr_length")));
  }
  if (model == "von_karman") {
    double a = number("amplitude", std::nullopt);
    double outer = number("outer_scale", std::nullopt);
    double inner = number("inner_scale", 0.0);
    double p = number("exponent", 11.0 / 3.0);
    return SpectrumModel::von_karman(a, outer, inner, p);
  }
  if (model == "tabulated") {
    auto raw = sec.take("samples");
    if (!raw)
      throw ConfigError("scenario: missing key " + sec.field("samples"));
    std::string text = *raw;
    std::replace(text.begin(), text.end(), ',', ' ');
    std::istringstream is(text);
    std::vector<std::pair<double, double>> samples;
    std::string tok;
    while (is >> tok) {
      std::size_t colon = tok.find(':');
      if (colon == std::string::npos)
        throw ConfigError(sec.field("samples") + ": expected k:psi pairs");
      samples.emplace_back(
          parse_number(tok.substr(0, colon), sec.field("samples")),
          parse_number(tok.substr(colon + 1), sec.field("samples")));
    }
    return SpectrumModel::tabulated(std::move(samples));
  }
  throw ConfigError(sec.field("model") + ": unknown spectrum model '" + model +
                    "'");
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  std::size_t first = text.find_first_not_of(" \t\r\n");
  Document doc = (first != std::string::npos && text[first] == '{')
                     ? parse_json_doc(text)
                     : parse_ini(text);
  Scenario sc;

  {
    SectionReader sec(doc, "spectrum");
    if (sec.present()) sc.spectrum = build_spectrum(sec);
    sec.finish();
  }
  {
    SectionReader sec(doc, "beam");
    if (auto v = sec.take("wavelength"))
      sc.beam.wavelength = parse_length(*v, sec.field("wavelength"));
    if (auto v = sec.take("r0")) sc.beam.r0 = parse_length(*v, sec.field("r0"));
    if (auto v = sec.take("n_photons"))
      sc.beam.n_photons = parse_number(*v, sec.field("n_photons"));
    auto time_v = sec.take("time");
    auto dist_v = sec.take("distance");
    if (time_v && dist_v)
      throw ConfigError("scenario: beam.time and beam.distance are exclusive");
    if (time_v) sc.beam.time = parse_time_value(*time_v, sec.field("time"));
    if (dist_v)
      sc.beam.time =
          parse_length(*dist_v, sec.field("distance")) / kSpeedOfLight;
    sec.finish();
    sc.beam.validate();
  }
  {
    SectionReader sec(doc, "diffuser");
    if (sec.present()) {
      DiffuserParams d;
      if (auto v = sec.take("g2")) d.g2 = parse_number(*v, sec.field("g2"));
      d.validate();
      sc.diffuser = d;
    }
    sec.finish();
  }
  {
    SectionReader sec(doc, "sweep");
    if (sec.present()) {
      Sweep sw;
      std::string var = sec.take("variable").value_or("");
      if (var == "time") sw.variable = SweepVariable::Time;
      else if (var == "g2") sw.variable = SweepVariable::G2;
      else if (var == "amplitude") sw.variable = SweepVariable::Amplitude;
      else if (var == "r0") sw.variable = SweepVariable::R0;
      else
        throw ConfigError("scenario: sweep.variable must be one of "
                          "time/g2/amplitude/r0, got '" + var + "'");
      auto grid = sec.take("grid");
      if (!grid) throw ConfigError("scenario: missing key sweep.grid");
      sw.grid = parse_grid(*grid, sec.field("grid"));
      for (std::size_t i = 1; i < sw.grid.size(); ++i)
        if (!(sw.grid[i] > sw.grid[i - 1]))
          throw ConfigError("scenario: sweep.grid must be strictly increasing");
      sc.sweep = sw;
    }
    sec.finish();
  }
  {
    SectionReader sec(doc, "mc");
    if (sec.present()) {
      McConfig mc;
      if (auto v = sec.take("n_photons"))
        mc.n_photons =
            static_cast<std::int64_t>(parse_number(*v, sec.field("n_photons")));
      if (auto v = sec.take("seed"))
        mc.seed =
            static_cast<std::uint64_t>(parse_number(*v, sec.field("seed")));
      if (auto v = sec.take("record_times")) {
        std::string text2 = *v;
        std::replace(text2.begin(), text2.end(), ',', ' ');
        std::istringstream is(text2);
        std::string tok;
        while (is >> tok)
          mc.record_times.push_back(
              parse_time_value(tok, sec.field("record_times")));
      }
      if (auto v = sec.take("max_events_per_photon"))
        mc.max_events_per_photon = static_cast<std::int64_t>(
            parse_number(*v, sec.field("max_events_per_photon")));
      if (auto v = sec.take("initial_width")) {
        if (*v == "point") mc.initial_width_mode = InitialWidthMode::PointSource;
        else if (*v == "waist")
          mc.initial_width_mode = InitialWidthMode::GaussianWaist;
        else if (*v == "diffuser")
          mc.initial_width_mode = InitialWidthMode::DiffuserWaist;
        else
          throw ConfigError(sec.field("initial_width") +
                            ": expected point/waist/diffuser, got '" + *v + "'");
      }
      if (auto v = sec.take("g2")) mc.g2 = parse_number(*v, sec.field("g2"));
      if (auto v = sec.take("histogram_bins"))
        mc.histogram_bins =
            static_cast<int>(parse_number(*v, sec.field("histogram_bins")));
      if (auto v = sec.take("histogram_rmax"))
        mc.histogram_rmax =
            parse_length(*v, sec.field("histogram_rmax"));
      if (auto v = sec.take("threads"))
        mc.n_threads = static_cast<int>(parse_number(*v, sec.field("threads")));
      mc.validate();
      sc.mc = mc;
    }
    sec.finish();
  }
  {
    SectionReader sec(doc, "quadrature");
    if (auto v = sec.take("rel_tol_1d"))
      sc.quadrature.rel_tol_1d = parse_number(*v, sec.field("rel_tol_1d"));
    if (auto v = sec.take("rel_tol_4d"))
      sc.quadrature.rel_tol_4d = parse_number(*v, sec.field("rel_tol_4d"));
    if (auto v = sec.take("max_nodes_1d"))
      sc.quadrature.max_nodes_1d =
          static_cast<int>(parse_number(*v, sec.field("max_nodes_1d")));
    if (auto v = sec.take("hermite_order"))
      sc.quadrature.hermite_order =
          static_cast<int>(parse_number(*v, sec.field("hermite_order")));
    if (auto v = sec.take("k_cutoff_factor"))
      sc.quadrature.k_cutoff_factor =
          parse_number(*v, sec.field("k_cutoff_factor"));
    if (auto v = sec.take("check_convergence"))
      sc.quadrature.check_convergence =
          parse_bool(*v, sec.field("check_convergence"));
    sec.finish();
    sc.quadrature.validate();
  }
  {
    SectionReader sec(doc, "output");
    if (auto v = sec.take("format")) {
      if (*v == "csv") sc.output.format = OutputFormat::Csv;
      else if (*v == "json") sc.output.format = OutputFormat::Json;
      else
        throw ConfigError("scenario: output.format must be csv or json, got '" +
                          *v + "'");
    }
    if (auto v = sec.take("path")) sc.output.path = *v;
    sec.finish();
  }
  for (const auto& [name, body] : doc) {
    static const char* known[] = {"spectrum", "beam",       "diffuser", "sweep",
                                  "mc",       "quadrature", "output"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return name == k;
        }) == std::end(known))
      throw ConfigError("scenario: unknown section [" + name + "]");
    (void)body;
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("scenario: cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str());
}

std::vector<Scenario> Scenario::sweep_points() const {
  if (!sweep) return {*this};
  std::vector<Scenario> out;
  out.reserve(sweep->grid.size());
  for (double v : sweep->grid) {
    Scenario pt = *this;
    pt.sweep.reset();
    switch (sweep->variable) {
      case SweepVariable::Time:
        pt.beam.time = v;
        break;
      case SweepVariable::G2: {
        DiffuserParams d = pt.diffuser.value_or(DiffuserParams{});
        d.g2 = v;
        d.validate();
        pt.diffuser = d;
        break;
      }
      case SweepVariable::Amplitude:
        switch (spectrum.kind()) {
          case SpectrumKind::Gaussian:
            pt.spectrum = SpectrumModel::gaussian(v, spectrum.corr_length());
            break;
          case SpectrumKind::VonKarman:
            pt.spectrum = SpectrumModel::von_karman(
                v, spectrum.outer_scale(), spectrum.inner_scale(),
                spectrum.exponent());
            break;
          case SpectrumKind::Tabulated:
            throw ConfigError(
                "scenario: amplitude sweep needs a parametric spectrum model");
        }
        break;
      case SweepVariable::R0:
        pt.beam.r0 = v;
        pt.beam.validate();
        break;
    }
    out.push_back(std::move(pt));
  }
  return out;
}

}  // namespace turbeam
