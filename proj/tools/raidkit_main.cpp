#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "raidkit/kernels.hpp"
#include "raidkit/report.hpp"

namespace {

void add_common(CLI::App& cmd, raidkit::RunConfig& cfg, std::string& method, std::string& norm,
                std::string& format, bool decomposition) {
  cmd.add_option("--a", cfg.a_path, "design matrix A (.csv or RADM binary)");
  cmd.add_option("--b", cfg.b_path, "target matrix B (.csv or RADM binary)");
  cmd.add_option("--preset", cfg.preset, "use a preset pair instead of --a/--b");
  if (decomposition) {
    cmd.add_option("--k", cfg.k, "rank (number of selected columns)");
    cmd.add_option("--eps", cfg.eps, "target spectral-norm accuracy instead of --k");
    cmd.add_flag("--strengthen", cfg.strengthen, "swap columns until every |P_ij| <= 2");
  }
  cmd.add_option("--method", method, "qr or whitened")->check(CLI::IsMember({"qr", "whitened"}));
  cmd.add_option("--norm", norm, "norm for reported errors")
      ->check(CLI::IsMember({"spectral", "frobenius"}));
  cmd.add_option("--rank-tol", cfg.rank_tol, "relative rank cutoff for A");
  cmd.add_option("--seed", cfg.seed, "seed for the timeseries preset");
  cmd.add_option("--rows", cfg.rows, "rows of the timeseries preset");
  cmd.add_option("--l", cfg.lags, "lag(s) for the lagged presets");
  cmd.add_option("--data-dir", cfg.data_dir, "dataset directory (default $RAIDKIT_DATA_DIR, then ./data)");
  cmd.add_option("--out", cfg.out_dir, "output directory");
  cmd.add_option("--format", format, "summary format on stdout")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_flag("--download", cfg.download, "fetch the datasets into the data directory first");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"raidkit: interpolative and regression-aware decompositions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "raidkit 1.0.0");

  raidkit::RunConfig cfg;
  std::string method = "qr", norm = "spectral", format = "csv";
  std::string preset_name;
  bool show_isa = false;
  app.add_flag("--isa-info", show_isa, "print the selected SIMD kernel set to stderr");

  const std::map<std::string, std::string> help = {
      {"id", "interpolative decomposition of B"},
      {"raid", "regression-aware ID of B for design A"},
      {"rapca", "regression-aware PCA of B for design A"},
      {"cca", "canonical correlations between A and B"}};
  for (const auto& [name, text] : help) {
    auto* cmd = app.add_subcommand(name, text);
    add_common(*cmd, cfg, method, norm, format, name != "cca");
    cmd->callback([&cfg, name = name] { cfg.command = name; });
  }
  auto* preset = app.add_subcommand("preset", "run a full experiment preset");
  preset->add_option("name", preset_name, "potential, timeseries, electricity, electricity-t or motion")
      ->required();
  add_common(*preset, cfg, method, norm, format, true);
  preset->callback([&] {
    cfg.command = "preset";
    cfg.preset = preset_name;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (show_isa) std::cerr << "isa: " << raidkit::kernels::isa_name(raidkit::kernels::active().isa) << '\n';
  cfg.method = method == "whitened" ? raidkit::Method::whitened : raidkit::Method::qr;
  cfg.norm = norm == "frobenius" ? raidkit::NormKind::frobenius : raidkit::NormKind::spectral;
  cfg.format = format == "json" ? raidkit::OutputFormat::json : raidkit::OutputFormat::csv;
  return raidkit::run(cfg, std::cout, std::cerr).exit_status;
}
