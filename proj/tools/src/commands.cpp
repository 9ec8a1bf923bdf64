// Copyright 2026 The casimir-twin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "casimir/analysis.hpp"
#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/scan_io.hpp"
#include "casimir/synth.hpp"
#include "casimir/units.hpp"
#include "run_config.hpp"

#ifndef CASIMIR_VERSION
#define CASIMIR_VERSION "0.0.0"
#endif

namespace casimir::cli {
namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Options {
  std::string config_path;
  std::string z_range;
  std::string energy_range = "0.001:1000:61";
  std::string material;
  bool drude_only = false;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  bool emit_curve = false;
  bool synth = false;
  std::vector<std::string> inputs;
};

struct Range {
  double lo, hi;
  std::size_t n;
};

Range parse_range(const std::string& text, const std::string& flag) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  Range r{};
  try {
    if (parts.size() != 3) throw std::invalid_argument("shape");
    std::size_t used = 0;
    r.lo = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("lo");
    r.hi = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("hi");
    const long long n = std::stoll(parts[2], &used);
    if (used != parts[2].size() || n < 1) throw std::invalid_argument("n");
    r.n = static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw ParseError(fmt::format("{} expects lo:hi:n, got '{}'", flag, text), 0);
  }
  if (!(r.hi >= r.lo) || (r.n > 1 && r.hi == r.lo)) throw ParseError(flag + " needs hi > lo", 0);
  return r;
}

std::vector<double> linear_nodes(const Range& r) {
  if (r.n == 1) return {r.lo};
  std::vector<double> v(r.n);
  for (std::size_t i = 0; i < r.n; ++i) v[i] = r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(r.n - 1);
  v.back() = r.hi;
  return v;
}

std::vector<double> log_nodes(const Range& r) {
  if (!(r.lo > 0.0)) throw ParseError("log-spaced range needs lo > 0", 0);
  if (r.n == 1) return {r.lo};
  std::vector<double> v(r.n);
  const double a = std::log(r.lo), b = std::log(r.hi);
  for (std::size_t i = 0; i < r.n; ++i) v[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(r.n - 1));
  v.front() = r.lo;
  v.back() = r.hi;
  return v;
}

std::string g9(double v) { return fmt::format("{:.9g}", v); }

class Context {
 public:
  Context(std::string command, const Options& opt, std::ostream& out) : command_(std::move(command)), opt_(opt), out_(out) {
    if (!opt.config_path.empty()) cfg_.merge_file(opt.config_path);
    if (!opt.material.empty()) {
      cfg_.set("material", "tabulated", "--material");
      cfg_.set("material_file", opt.material, "--material");
    }
    if (opt.drude_only) cfg_.set("material", "drude", "--drude-only");
    if (opt.seed) cfg_.set("seed", std::to_string(*opt.seed), "--seed");
  }

  const RunConfig& cfg() const { return cfg_; }
  const Options& opt() const { return opt_; }

  std::vector<std::pair<std::string, std::string>> metadata() const {
    std::vector<std::pair<std::string, std::string>> m{{"tool", "casimir-twin"},
                                                       {"version", CASIMIR_VERSION},
                                                       {"command", command_},
                                                       {"config_hash", cfg_.hash_hex()},
                                                       {"seed", cfg_.text("seed")}};
    for (const auto& [k, v] : cfg_.values()) m.emplace_back("config." + k, v);
    return m;
  }

  std::string csv_header() const {
    std::string s;
    for (const auto& [k, v] : metadata()) s += "# " + k + "=" + v + "\n";
    return s;
  }

  ordered_json json_metadata() const {
    ordered_json j = ordered_json::object();
    for (const auto& [k, v] : metadata()) j[k] = v;
    return j;
  }

  std::map<std::string, std::string> metadata_map() const {
    std::map<std::string, std::string> m;
    for (const auto& [k, v] : metadata()) m[k] = v;
    return m;
  }

  void emit(const std::string& name, const std::string& content) const {
    if (opt_.out_dir.empty()) {
      out_ << content;
      return;
    }
    fs::create_directories(opt_.out_dir);
    write_atomic((fs::path(opt_.out_dir) / name).string(), content);
  }

  const TheoryCurve& theory() {
    if (!theory_) theory_.emplace(cfg_.theory_params(), cfg_.theory_range(), cfg_.threads());
    return *theory_;
  }

 private:
  std::string command_;
  const Options& opt_;
  std::ostream& out_;
  RunConfig cfg_;
  std::optional<TheoryCurve> theory_;
};

std::vector<std::string> csv_files(const fs::path& dir) {
  std::vector<std::string> files;
  if (!fs::is_directory(dir)) return files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path().string());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<ForceCurve> load_scans(const std::vector<std::string>& inputs) {
  std::vector<ForceCurve> scans;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      for (const auto& f : csv_files(in)) scans.push_back(load_scan_file(f));
    } else {
      scans.push_back(load_scan_file(in));
    }
  }
  if (scans.empty()) throw DataError("no scan files given");
  return scans;
}

Campaign load_campaign(const std::string& dir) {
  if (!fs::is_directory(dir)) throw DataError("campaign directory '" + dir + "' does not exist");
  Campaign c;
  for (const auto& f : csv_files(fs::path(dir) / "calibration")) c.calibration.push_back(load_scan_file(f));
  for (const auto& f : csv_files(fs::path(dir) / "electrostatic")) c.electrostatic.push_back(load_scan_file(f));
  for (const auto& f : csv_files(fs::path(dir) / "casimir")) c.casimir.push_back(load_scan_file(f));
  if (c.electrostatic.empty()) throw DataError("'" + dir + "/electrostatic' holds no scan files");
  if (c.casimir.empty()) throw DataError("'" + dir + "/casimir' holds no scan files");
  return c;
}

std::string scan_text(const ForceCurve& c) {
  std::ostringstream s;
  write_scan(s, c);
  return s.str();
}

// ---- subcommands ----

int cmd_epsilon(Context& ctx) {
  const auto params = ctx.cfg().theory_params();
  const auto energies = log_nodes(parse_range(ctx.opt().energy_range, "--energy"));
  std::string s = ctx.csv_header();
  s += "# model=" + params.model.describe() + "\n";
  s += "xi_ev,eps\n";
  for (double e : energies)
    s += g9(e) + "," + g9(eps_imag_axis(params.model, energy_ev_to_angular_frequency(e))) + "\n";
  ctx.emit("epsilon.csv", s);
  return kExitOk;
}

int cmd_theory(Context& ctx) {
  const auto params = ctx.cfg().theory_params();
  const auto r = parse_range(ctx.opt().z_range.empty() ? "100:500:441" : ctx.opt().z_range, "--z");
  auto sep = linear_nodes(r);
  for (auto& v : sep) v *= units::nm;
  auto f = casimir_force_grid(sep, params.geom, params.model, params.quad, ctx.cfg().threads());
  std::string s = ctx.csv_header();
  s += "separation_nm,force_pn\n";
  for (std::size_t i = 0; i < sep.size(); ++i)
    s += g9(units::m_to_nm(sep[i])) + "," + g9(units::n_to_pn(f[i] * correction_factor(sep[i], params))) + "\n";
  ctx.emit("theory.csv", s);
  return kExitOk;
}

int cmd_electro(Context& ctx) {
  const auto e = ctx.cfg().electrostatic_config();
  const auto r = parse_range(ctx.opt().z_range.empty() ? "100:500:41" : ctx.opt().z_range, "--z");
  std::string s = ctx.csv_header();
  s += "z_nm,exact_pn,pfa_pn,exact_over_pfa,terms,tail_bound\n";
  for (double znm : linear_nodes(r)) {
    const double z = znm * units::nm;
    const auto ex = sphere_plane_force_exact_detailed(z, e);
    const double pfa = sphere_plane_force_pfa(z, e);
    s += fmt::format("{},{},{},{},{},{}\n", g9(znm), g9(units::n_to_pn(ex.force)), g9(units::n_to_pn(pfa)),
                     g9(ex.force / pfa), ex.terms, g9(ex.tail_bound));
  }
  ctx.emit("electro.csv", s);
  return kExitOk;
}

int cmd_calibrate_k(Context& ctx) {
  const auto scans = load_scans(ctx.opt().inputs);
  const auto acfg = ctx.cfg().analysis_config();
  const auto cal = ctx.cfg().calibration_params();
  auto base = acfg.electro;
  base.v2 = cal.residual_potential;
  const auto& theory = ctx.theory();
  const auto fit = calibrate_spring_constant(scans, cal.deflection_sensitivity,
                                             ctx.cfg().number("assumed_z0_nm") * units::nm, base, acfg,
                                             [&theory](double g) { return theory.at_gap(g); });
  ordered_json j;
  j["spring_constant_n_per_m"] = std::stod(g9(fit.k));
  j["spring_constant_sigma_n_per_m"] = std::stod(g9(fit.k_sigma));
  j["n_points"] = fit.n_points;
  j["metadata"] = ctx.json_metadata();
  ctx.emit("calibration.json", j.dump(2) + "\n");
  return kExitOk;
}

int cmd_fit_z0(Context& ctx) {
  const auto scans = load_scans(ctx.opt().inputs);
  const auto acfg = ctx.cfg().analysis_config();
  const auto cal = ctx.cfg().calibration_params();
  auto residual = acfg.electro;
  residual.v1 = 0.0;
  residual.v2 = cal.residual_potential;
  const auto& theory = ctx.theory();
  const GapForce at_gap = [&theory](double g) { return theory.at_gap(g); };

  ordered_json fits = ordered_json::array();
  std::string curve = ctx.csv_header() + "scan_id,z_nm,measured_pn,model_pn,electrostatic_pn,casimir_pn\n";
  double sum = 0.0;
  for (const auto& raw : scans) {
    const ForceCurve c = prepare_scan(raw, cal, acfg);
    const auto r = fit_contact_separation(c, at_gap, residual, acfg);
    sum += r.z0;
    fits.push_back({{"scan_id", c.scan_id},
                    {"voltage_v", std::stod(g9(r.voltage))},
                    {"z0_nm", std::stod(g9(units::m_to_nm(r.z0)))},
                    {"z0_sigma_nm", std::stod(g9(units::m_to_nm(r.z0_sigma)))},
                    {"chi2", std::stod(g9(r.chi2))},
                    {"n_points", r.n_points}});
    if (ctx.opt().emit_curve) {
      auto e = residual;
      e.v1 = c.applied_voltage;
      const auto& f = c.force();
      for (std::size_t i = 0; i < c.size(); ++i) {
        const double z = c.piezo[i];
        if (z < acfg.fit_z_min || z > acfg.fit_z_max) continue;
        const double fe = electrostatic_force(z + r.z0, e, acfg.electro_model);
        const double fc = at_gap(z + r.z0);
        curve += fmt::format("{},{},{},{},{},{}\n", c.scan_id, g9(units::m_to_nm(z)), g9(units::n_to_pn(f[i])),
                             g9(units::n_to_pn(fe + fc)), g9(units::n_to_pn(fe)), g9(units::n_to_pn(fc)));
      }
    }
  }
  ordered_json j;
  j["z0_mean_nm"] = std::stod(g9(units::m_to_nm(sum / static_cast<double>(scans.size()))));
  j["fits"] = fits;
  j["metadata"] = ctx.json_metadata();
  ctx.emit("fit_z0.json", j.dump(2) + "\n");
  if (ctx.opt().emit_curve) ctx.emit("fit_z0_curve.csv", curve);
  return kExitOk;
}

Campaign synth_campaign(Context& ctx) {
  return generate_campaign(ctx.cfg().synth_truth(), ctx.theory());
}

std::string measured_csv(const Context& ctx, const MeasuredCurve& m) {
  std::string s = ctx.csv_header();
  s += fmt::format("# n_scans={}\n", m.n_scans);
  s += "separation_nm,force_pn,stddev_pn\n";
  for (std::size_t i = 0; i < m.separation.size(); ++i)
    s += g9(units::m_to_nm(m.separation[i])) + "," + g9(units::n_to_pn(m.force[i])) + "," +
         g9(m.stddev.empty() ? 0.0 : units::n_to_pn(m.stddev[i])) + "\n";
  return s;
}

int cmd_analyze(Context& ctx) {
  const auto& in = ctx.opt().inputs;
  if (in.size() > 1) throw ParseError("analyze takes one campaign directory", 0);
  if (in.empty() && !ctx.opt().synth) throw ParseError("analyze needs a campaign directory or --synth", 0);
  const Campaign campaign = in.empty() ? synth_campaign(ctx) : load_campaign(in.front());
  const auto acfg = ctx.cfg().analysis_config();
  const auto r = run_campaign(campaign, ctx.theory(), ctx.cfg().calibration_params(), acfg);
  ctx.emit("results.json", results_json(r, acfg, ctx.metadata_map()));
  if (ctx.opt().emit_curve) ctx.emit("measured.csv", measured_csv(ctx, r.measured));
  return kExitOk;
}

MeasuredCurve load_measured(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open measured curve", 0, path);
  MeasuredCurve m;
  m.n_scans = 1;
  std::string line;
  std::size_t n = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.rfind("# n_scans=", 0) == 0) {
        try {
          m.n_scans = static_cast<std::size_t>(std::stoull(line.substr(10)));
        } catch (const std::exception&) {
          throw ParseError("bad n_scans", n, path);
        }
      }
      continue;
    }
    if (!header) {
      if (line.rfind("separation_nm,force_pn", 0) != 0)
        throw ParseError("expected header 'separation_nm,force_pn[,stddev_pn]'", n, path);
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::vector<double> v;
    for (std::string cell; std::getline(ss, cell, ',');) {
      try {
        std::size_t used = 0;
        v.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw ParseError("bad number '" + cell + "'", n, path);
      }
    }
    if (v.size() < 2 || v.size() > 3) throw ParseError("expected 2 or 3 columns", n, path);
    if (!m.separation.empty() && !(v[0] * units::nm > m.separation.back()))
      throw ParseError("non-increasing separation", n, path);
    m.separation.push_back(v[0] * units::nm);
    m.force.push_back(v[1] * units::pN);
    if (v.size() == 3) m.stddev.push_back(v[2] * units::pN);
  }
  if (!m.stddev.empty() && m.stddev.size() != m.force.size()) throw ParseError("stddev column incomplete", n, path);
  return m;
}

int cmd_compare(Context& ctx) {
  if (ctx.opt().inputs.size() != 1) throw ParseError("compare takes one measured-curve CSV", 0);
  const auto m = load_measured(ctx.opt().inputs.front());
  const auto acfg = ctx.cfg().analysis_config();
  const auto& theory = ctx.theory();
  const SeparationForce at_sep = [&theory](double s) { return theory.at_separation(s); };
  const auto st = compare_to_theory(m, at_sep, theory.cap_offset(), acfg);
  ordered_json j;
  j["sigma_rms_pn"] = std::stod(g9(units::n_to_pn(st.sigma_rms)));
  j["reduced_chi2"] = std::stod(g9(st.reduced_chi2));
  j["n_points"] = st.n_points;
  j["pooled_noise_pn"] = std::stod(g9(units::n_to_pn(st.pooled_noise)));
  ordered_json v = ordered_json::object();
  for (const auto& [k, val] : st.variants) v[k] = std::stod(g9(units::n_to_pn(val)));
  j["variants"] = v;
  j["window_nm"] = {std::stod(g9(units::m_to_nm(acfg.window_lo))), std::stod(g9(units::m_to_nm(acfg.window_hi)))};
  j["metadata"] = ctx.json_metadata();
  ctx.emit("comparison.json", j.dump(2) + "\n");
  if (ctx.opt().emit_curve) {
    std::string s = ctx.csv_header() + "separation_nm,measured_pn,theory_pn,residual_pn,stddev_pn\n";
    for (std::size_t i = 0; i < m.separation.size(); ++i) {
      const double x = m.separation[i];
      if (x < acfg.window_lo || x > acfg.window_hi) continue;
      const double t = at_sep(x);
      s += fmt::format("{},{},{},{},{}\n", g9(units::m_to_nm(x)), g9(units::n_to_pn(m.force[i])),
                       g9(units::n_to_pn(t)), g9(units::n_to_pn(m.force[i] - t)),
                       g9(m.stddev.empty() ? 0.0 : units::n_to_pn(m.stddev[i])));
    }
    ctx.emit("comparison.csv", s);
  }
  return kExitOk;
}

int cmd_synth(Context& ctx) {
  if (ctx.opt().out_dir.empty()) throw ParseError("synth needs --out <dir>", 0);
  const auto truth = ctx.cfg().synth_truth();
  const auto campaign = generate_campaign(truth, ctx.theory());
  const fs::path root(ctx.opt().out_dir);
  auto write_set = [&](const std::string& sub, const std::vector<ForceCurve>& scans) {
    fs::create_directories(root / sub);
    for (auto c : scans) {
      for (const auto& [k, v] : ctx.metadata())
        if (k.rfind("config.", 0) != 0) c.metadata[k] = v;
      write_atomic((root / sub / (c.scan_id + ".csv")).string(), scan_text(c));
    }
  };
  write_set("calibration", campaign.calibration);
  write_set("electrostatic", campaign.electrostatic);
  write_set("casimir", campaign.casimir);
  auto truth_doc = ordered_json::parse(truth_json(truth));
  truth_doc["metadata"] = ctx.json_metadata();
  write_atomic((root / "truth.json").string(), truth_doc.dump(2) + "\n");
  return kExitOk;
}

}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("cannot write '" + tmp.string() + "'");
    f << content;
    f.flush();
    if (!f) throw DataError("write to '" + tmp.string() + "' failed");
  }
  fs::rename(tmp, target);
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Casimir force measurement twin: theory, electrostatics, calibration and analysis", "casimir-twin"};
  app.set_version_flag("--version", CASIMIR_VERSION);
  app.require_subcommand(1);
  Options opt;
  app.add_option("--config", opt.config_path, "key=value run configuration file");
  app.add_option("--z", opt.z_range, "separation range lo:hi:n in nm");
  app.add_option("--energy", opt.energy_range, "log-spaced imaginary-frequency range lo:hi:n in eV (epsilon)");
  app.add_option("--material", opt.material, "optical table CSV; selects the tabulated model");
  app.add_flag("--drude-only", opt.drude_only, "use the Drude model regardless of the config");
  app.add_option("--seed", opt.seed, "64-bit seed for synthesis");
  app.add_option("--out", opt.out_dir, "output directory (stdout when omitted)");
  app.add_flag("--emit-curve", opt.emit_curve, "also write plot-data CSVs");

  struct Sub {
    const char* name;
    const char* help;
    int (*fn)(Context&);
    bool takes_inputs;
  };
  const Sub subs[] = {
      {"epsilon", "permittivity on the imaginary axis", cmd_epsilon, false},
      {"theory", "theoretical force table at Al-Al separations", cmd_theory, false},
      {"electro", "exact and proximity sphere-plane electrostatic force", cmd_electro, false},
      {"calibrate-k", "spring constant from large-separation electrostatic scans", cmd_calibrate_k, true},
      {"fit-z0", "contact separation from electrostatic scans", cmd_fit_z0, true},
      {"analyze", "full pipeline on a campaign directory", cmd_analyze, true},
      {"synth", "write a synthetic campaign directory", cmd_synth, false},
      {"compare", "compare a measured curve with theory", cmd_compare, true},
  };
  std::vector<CLI::App*> handles;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    if (s.takes_inputs) sub->add_option("inputs", opt.inputs, "scan files or directories");
    if (std::string(s.name) == "analyze") sub->add_flag("--synth", opt.synth, "synthesize the campaign in memory");
    handles.push_back(sub);
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << CASIMIR_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  std::string stage;
  try {
    for (std::size_t i = 0; i < handles.size(); ++i) {
      if (!handles[i]->parsed()) continue;
      stage = subs[i].name;
      Context ctx(stage, opt, out);
      return subs[i].fn(ctx);
    }
    return kExitInput;
  } catch (const ConvergenceError& e) {
    err << stage << ": convergence error: " << e.what() << "\n";
    return kExitConvergence;
  } catch (const FitError& e) {
    err << stage << ": fit error: " << e.what() << "\n";
    return kExitFit;
  } catch (const CalibrationError& e) {
    err << stage << ": calibration error: " << e.what() << "\n";
    return kExitFit;
  } catch (const Error& e) {
    err << stage << ": " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << stage << ": " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace casimir::cli
