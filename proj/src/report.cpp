#include "raidkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "raidkit/error.hpp"
#include "raidkit/kernels.hpp"
#include "raidkit/matrix_io.hpp"
#include "raidkit/svg_plot.hpp"

namespace raidkit {
namespace {

using Json = nlohmann::ordered_json;

double six(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return std::strtod(buf, nullptr);
}

std::string hex(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

std::string six_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

Json metric(double v) { return Json{{"value", six(v)}, {"hex", hex(v)}}; }

Json spectrum(const std::vector<double>& values) {
  Json rounded = Json::array();
  Json exact = Json::array();
  for (double v : values) {
    rounded.push_back(six(v));
    exact.push_back(hex(v));
  }
  return Json{{"values", rounded}, {"hex", exact}};
}

Json certificate_json(const IDCertificate& c) {
  return Json{{"max_abs_entry", metric(c.max_abs_entry)},
              {"p_spectral_norm", metric(c.p_spectral_norm)},
              {"p_min_singular", metric(c.p_min_singular)},
              {"achieved_error", metric(c.achieved_error)},
              {"sigma_next", metric(c.sigma_next)},
              {"sigma_is_estimate", c.sigma_is_estimate},
              {"growth", metric(c.growth)},
              {"bound", metric(c.bound)},
              {"roundoff_allowance", metric(c.roundoff_allowance)},
              {"b_norm", metric(c.b_norm)},
              {"identity_condition_met", c.identity_condition_met},
              {"entry_condition_met", c.entry_condition_met},
              {"norm_condition_met", c.norm_condition_met},
              {"singular_condition_met", c.singular_condition_met},
              {"exact_case", c.exact_case},
              {"error_condition_met", c.error_condition_met}};
}

Json id_json(const IDResult& id, const char* p_file) {
  return Json{{"k", id.k()}, {"selected", id.selected}, {"p_file", p_file},
              {"certificate", certificate_json(id.certificate)}};
}

bool needs_k(const std::string& command) {
  return command == "id" || command == "raid" || command == "rapca";
}

// Analyses to run for one pair.
struct Plan {
  bool id = false, raid = false, rapca = false, cca = false, plots = false;
};

Plan plan_for(const std::string& command) {
  Plan p;
  if (command == "id") p.id = true;
  if (command == "raid") p.raid = true;
  if (command == "rapca") p.rapca = true;
  if (command == "cca") p.cca = true;
  if (command == "preset") p.id = p.raid = p.rapca = p.cca = p.plots = true;
  return p;
}

double frobenius_id_error(const DenseMatrix& b, const IDResult& id) {
  DenseMatrix diff = b;
  diff -= matmul(b.columns(id.selected), id.p);
  return diff.frobenius_norm();
}

double tail_norm(const std::vector<double>& sigma, std::size_t k, NormKind norm) {
  if (k >= sigma.size()) return 0.0;
  if (norm == NormKind::spectral) return sigma[k];
  double s = 0.0;
  for (std::size_t i = k; i < sigma.size(); ++i) s += sigma[i] * sigma[i];
  return std::sqrt(s);
}

std::size_t rank_for_eps(const std::vector<double>& sigma, double eps) {
  std::size_t k = 0;
  while (k < sigma.size() && sigma[k] > eps) ++k;
  return std::max<std::size_t>(k, 1);
}

ExperimentReport analyze(const RunConfig& config, const ExperimentPair& pair) {
  const Plan plan = plan_for(config.command);
  ExperimentReport report;
  report.command = config.command;
  IDOptions id_options;
  id_options.strengthen = config.strengthen;
  const bool spectral = config.norm == NormKind::spectral;

  if (plan.id) {
    report.id = config.eps ? id_fixed_precision(pair.b, *config.eps, id_options)
                           : id_fixed_rank(pair.b, *config.k, id_options);
    report.metrics["id_error"] = spectral ? report.id->certificate.achieved_error
                                          : frobenius_id_error(pair.b, *report.id);
  }
  if (plan.raid) {
    report.raid = config.eps ? raid_fixed_precision(pair.a, pair.b, *config.eps, config.method,
                                                    config.rank_tol, id_options)
                             : raid(pair.a, pair.b, *config.k, config.method, config.rank_tol,
                                    id_options);
    report.metrics["raid_error"] =
        spectral ? report.raid->raid_error : report.raid->raid_error_frobenius;
    report.metrics["min_residual"] =
        spectral ? report.raid->min_residual : report.raid->min_residual_frobenius;
  }
  if (plan.rapca) {
    std::size_t k = config.k.value_or(0);
    if (config.eps) k = rank_for_eps(rapca_spectrum(pair.a, pair.b, config.rank_tol), *config.eps);
    report.rapca = rapca(pair.a, pair.b, k, config.method, config.rank_tol);
    report.rapca_spectrum = report.rapca->projected_spectrum;
    report.metrics["rapca_error"] = tail_norm(report.rapca_spectrum, k, config.norm);
  }
  if (plan.cca) {
    report.cca_spectrum = cca_spectrum(pair.a, pair.b, config.rank_tol).sigma;
  }
  if (plan.plots && report.rapca) {
    // Scores: sigma_j times the left singular vectors A T of A A^+ B, one
    // point per row of B. Loadings: the right singular vectors.
    std::optional<RAPCAResult> two;
    if (report.rapca->sigma.size() >= 2) {
      two = report.rapca;
    } else if (std::min(report.rapca->design_rank, pair.b.cols()) >= 2) {
      two = rapca(pair.a, pair.b, 2, config.method, config.rank_tol);
    }
    if (two) {
      const std::vector<std::size_t> first_two = {0, 1};
      DenseMatrix scores = matmul(pair.a, two->t.columns(first_two));
      for (std::size_t j = 0; j < 2; ++j) kernels::scal(two->sigma[j], scores.col(j));
      report.biplot_scores = std::move(scores);
      report.biplot_loadings = two->v.columns(first_two);
    }
  }
  return report;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
}

std::string metrics_csv(const ExperimentReport& report) {
  std::string csv = "metric,value,hex\n";
  for (const auto& [name, value] : report.metrics) {
    csv += name + "," + six_text(value) + "," + hex(value) + "\n";
  }
  return csv;
}

const char* kSummaryColumns[] = {"min_residual", "id_error", "raid_error", "rapca_error"};

std::string summary_header() {
  std::string h = "preset,l,k";
  for (const char* c : kSummaryColumns) h += std::string(",") + c;
  return h + "\n";
}

std::string summary_row(const ExperimentReport& report) {
  auto param = [&](const char* key) {
    auto it = report.parameters.find(key);
    return it == report.parameters.end() ? std::string() : it->second;
  };
  std::string row = report.preset + "," + param("l") + "," + param("k");
  for (const char* c : kSummaryColumns) {
    auto it = report.metrics.find(c);
    row += ",";
    if (it != report.metrics.end()) row += six_text(it->second);
  }
  return row + "\n";
}

void write_outputs(const ExperimentReport& report, const ExperimentPair& pair,
                   const std::filesystem::path& dir, bool save_pair_matrices) {
  std::filesystem::create_directories(dir);
  const auto bin = MatrixFormat::binary;
  if (report.id) save_matrix(dir / "id_p.radm", report.id->p, bin);
  if (report.raid) {
    save_matrix(dir / "raid_p.radm", report.raid->id.p, bin);
    save_matrix(dir / "raid_y.radm", report.raid->y, bin);
  }
  if (report.rapca) {
    save_matrix(dir / "rapca_t.radm", report.rapca->t, bin);
    save_matrix(dir / "rapca_v.radm", report.rapca->v, bin);
  }
  if (!report.biplot_scores.empty()) {
    save_matrix(dir / "biplot_scores.radm", report.biplot_scores, bin);
    save_matrix(dir / "biplot_loadings.radm", report.biplot_loadings, bin);
  }
  std::vector<Series> spectra;
  if (!report.cca_spectrum.empty()) spectra.push_back({"CCA", report.cca_spectrum});
  if (!report.rapca_spectrum.empty()) spectra.push_back({"RAPCA", report.rapca_spectrum});
  std::string title = report.preset.empty() ? report.command : report.preset;
  if (auto it = report.parameters.find("l"); it != report.parameters.end()) {
    title += " l=" + it->second;
  }
  if (!spectra.empty()) emit_svplot(spectra, dir / "svplot.svg", title);
  if (!report.biplot_scores.empty()) {
    emit_biplot(report.biplot_scores, report.biplot_loadings, dir / "biplot.svg", title);
  }
  if (save_pair_matrices) {
    save_pair(pair, dir / "pair");
  } else if (!report.preset.empty()) {
    std::filesystem::create_directories(dir / "pair");
    Json j;
    j["a_shape"] = {pair.a.rows(), pair.a.cols()};
    j["b_shape"] = {pair.b.rows(), pair.b.cols()};
    j["scale_factor"] = six(pair.scale_factor);
    j["scale_factor_hex"] = hex(pair.scale_factor);
    j["provenance"] = pair.provenance;
    write_text(dir / "pair" / "pair.json", j.dump(2) + "\n");
  }
  write_text(dir / "metrics.csv", metrics_csv(report));
  write_text(dir / "report.json", report_json(report));
}

const char* remedy_for(const std::exception& e) {
  if (dynamic_cast<const NumericalError*>(&e)) {
    return "check the inputs for extreme scaling, or pass a larger --rank-tol";
  }
  if (dynamic_cast<const DataError*>(&e)) {
    return "check the input paths; preset datasets are looked up in --data-dir or RAIDKIT_DATA_DIR";
  }
  return "correct the argument named above; run with --help for the accepted values";
}

}  // namespace

void validate(const RunConfig& config) {
  const std::string& cmd = config.command;
  if (cmd != "id" && cmd != "raid" && cmd != "rapca" && cmd != "cca" && cmd != "preset") {
    throw ContractViolation("unknown command '" + cmd + "'");
  }
  const bool has_paths = config.a_path || config.b_path;
  if (config.preset && has_paths) {
    throw ContractViolation("give either a preset or --a/--b input files, not both");
  }
  if (!config.preset) {
    if (cmd == "preset") throw ContractViolation("preset name missing");
    if (!config.b_path) throw ContractViolation("--b is required (or use --preset)");
    if (cmd != "id" && !config.a_path) throw ContractViolation("--a is required for " + cmd);
  } else {
    parse_preset(*config.preset);
  }
  if (config.k && *config.k < 1) throw ContractViolation("k must be ≥ 1");
  if (config.eps && !(*config.eps > 0.0 && std::isfinite(*config.eps))) {
    throw ContractViolation("eps must be a positive finite number");
  }
  if (config.k && config.eps) throw ContractViolation("give either --k or --eps, not both");
  if (needs_k(cmd) && !config.k && !config.eps && !config.preset) {
    throw ContractViolation("one of --k or --eps is required for " + cmd);
  }
  if (cmd == "preset" && config.eps) {
    throw ContractViolation("presets run at a fixed k; use --k instead of --eps");
  }
  if (cmd == "cca" && (config.k || config.eps)) {
    throw ContractViolation("cca takes neither --k nor --eps");
  }
  if (config.rank_tol && !(*config.rank_tol >= 0.0 && *config.rank_tol < 1.0)) {
    throw ContractViolation("rank-tol must lie in [0, 1)");
  }
  if (config.rows < 3) throw ContractViolation("rows must be at least 3");
  for (std::size_t l : config.lags) {
    if (l < 1) throw ContractViolation("lag l must be ≥ 1");
  }
  if (!config.lags.empty()) {
    if (!config.preset) throw ContractViolation("--l applies only to lagged presets");
    const Preset p = parse_preset(*config.preset);
    if (preset_defaults(p).lags.empty()) {
      throw ContractViolation("preset " + *config.preset + " has no lag; drop --l");
    }
  }
}

std::string report_json(const ExperimentReport& report) {
  Json j;
  j["command"] = report.command;
  j["preset"] = report.preset.empty() ? Json(nullptr) : Json(report.preset);
  j["parameters"] = report.parameters;
  Json metrics = Json::object();
  for (const char* name : kSummaryColumns) {
    if (auto it = report.metrics.find(name); it != report.metrics.end()) {
      metrics[name] = metric(it->second);
    }
  }
  j["metrics"] = metrics;
  Json spectra = Json::object();
  if (!report.cca_spectrum.empty()) spectra["cca"] = spectrum(report.cca_spectrum);
  if (!report.rapca_spectrum.empty()) spectra["rapca"] = spectrum(report.rapca_spectrum);
  j["spectra"] = spectra;
  Json selected = Json::object();
  if (report.id) selected["id"] = report.id->selected;
  if (report.raid) selected["raid"] = report.raid->id.selected;
  j["selected_columns"] = selected;
  j["index_base"] = 0;
  if (report.id) j["id"] = id_json(*report.id, "id_p.radm");
  if (report.raid) {
    Json r = id_json(report.raid->id, "raid_p.radm");
    r["y_file"] = "raid_y.radm";
    r["method"] = method_name(report.raid->method);
    r["design_rank"] = report.raid->design_rank;
    r["raid_error"] = metric(report.raid->raid_error);
    r["raid_error_frobenius"] = metric(report.raid->raid_error_frobenius);
    r["min_residual"] = metric(report.raid->min_residual);
    r["min_residual_frobenius"] = metric(report.raid->min_residual_frobenius);
    j["raid"] = r;
  }
  if (report.rapca) {
    Json r;
    r["k"] = report.rapca->sigma.size();
    r["method"] = method_name(report.rapca->method);
    r["design_rank"] = report.rapca->design_rank;
    r["sigma"] = spectrum(report.rapca->sigma);
    r["t_file"] = "rapca_t.radm";
    r["v_file"] = "rapca_v.radm";
    r["rapca_error"] = metric(report.rapca->rapca_error);
    j["rapca"] = r;
  }
  if (!report.biplot_scores.empty()) {
    j["biplot"] = Json{{"scores_file", "biplot_scores.radm"},
                       {"scores_shape", {report.biplot_scores.rows(), 2}},
                       {"loadings_file", "biplot_loadings.radm"},
                       {"loadings_shape", {report.biplot_loadings.rows(), 2}}};
  }
  return j.dump(2) + "\n";
}

RunOutcome run(const RunConfig& config_in, std::ostream& out, std::ostream& err) {
  RunOutcome outcome;
  try {
    validate(config_in);
    RunConfig config = config_in;

    std::vector<LabeledPair> pairs;
    bool generated = false;
    if (config.preset) {
      const Preset preset = parse_preset(*config.preset);
      if (!config.k && !config.eps) config.k = preset_defaults(preset).k;
      if (config.download) download_datasets(resolve_data_dir(config), err);
      generated = preset == Preset::potential || preset == Preset::timeseries;
      pairs = preset_pairs(config);
    } else {
      ExperimentPair pair;
      pair.b = load_matrix(*config.b_path);
      pair.a = config.a_path ? load_matrix(*config.a_path) : DenseMatrix(pair.b.rows(), 0);
      pairs.push_back({std::nullopt, std::move(pair)});
    }

    for (const auto& [lag, pair] : pairs) {
      ExperimentReport report = analyze(config, pair);
      report.preset = config.preset.value_or("");
      auto& params = report.parameters;
      if (config.k) params["k"] = std::to_string(*config.k);
      if (config.eps) params["eps"] = six_text(*config.eps);
      if (lag) params["l"] = std::to_string(*lag);
      params["method"] = std::string(method_name(config.method));
      params["norm"] = config.norm == NormKind::spectral ? "spectral" : "frobenius";
      if (config.rank_tol) params["rank_tol"] = hex(*config.rank_tol);
      if (config.preset == "timeseries") {
        params["m"] = std::to_string(config.rows);
        params["seed"] = std::to_string(config.seed);
      }
      if (config.strengthen) params["strengthen"] = "true";
      report.subdir = pairs.size() > 1 && lag ? std::filesystem::path("l" + std::to_string(*lag))
                                              : std::filesystem::path();
      write_outputs(report, pair, config.out_dir / report.subdir, generated);
      outcome.reports.push_back(std::move(report));
    }

    if (outcome.reports.size() > 1) {
      std::string table = "l,min_residual,id_error,raid_error\n";
      for (const auto& r : outcome.reports) {
        auto m = [&](const char* key) {
          auto it = r.metrics.find(key);
          return it == r.metrics.end() ? std::string() : six_text(it->second);
        };
        table += r.parameters.at("l") + "," + m("min_residual") + "," + m("id_error") + "," +
                 m("raid_error") + "\n";
      }
      write_text(config.out_dir / "table.csv", table);
    }

    if (config.format == OutputFormat::json) {
      std::string all = "[\n";
      for (std::size_t i = 0; i < outcome.reports.size(); ++i) {
        all += report_json(outcome.reports[i]);
        if (i + 1 < outcome.reports.size()) all.insert(all.size() - 1, ",");
      }
      out << all << "]\n";
    } else {
      out << summary_header();
      for (const auto& r : outcome.reports) out << summary_row(r);
    }
    outcome.exit_status = 0;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\nremedy: " << remedy_for(e) << '\n';
    outcome.exit_status = 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\nremedy: " << remedy_for(e) << '\n';
    outcome.exit_status = 2;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\nremedy: check that the output directory is writable\n";
    outcome.exit_status = 2;
  }
  return outcome;
}

}  // namespace raidkit
