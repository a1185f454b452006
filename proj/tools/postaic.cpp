#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "postaic/analysis.hpp"
#include "postaic/error.hpp"
#include "postaic/simulation.hpp"

namespace {

using namespace postaic;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct DataArgs {
  std::string data;
  std::string response;
  std::vector<std::string> ignore;
  bool intercept = true;
  std::string criterion = "aic";
  double alpha = 0.05;
  std::vector<std::string> sigmas{"mse-full"};
  std::string skip_supersets = "on";
  std::optional<std::size_t> max_size;
  bool include_empty = false;
};

struct OutputArgs {
  std::string format = "json";
  std::string out;
};

void add_data_options(CLI::App* app, DataArgs& a, bool intervals) {
  app->add_option("--data", a.data, "CSV file with a header row")->required()->check(CLI::ExistingFile);
  app->add_option("--response", a.response, "response column")->required();
  app->add_option("--ignore", a.ignore, "non-numeric columns to drop")->delimiter(',');
  app->add_flag("--intercept,!--no-intercept", a.intercept, "force an intercept into every model (default on)");
  app->add_option("--criterion", a.criterion, "aic, bic or aicc")
      ->check(CLI::IsMember({"aic", "bic", "aicc"}, CLI::ignore_case));
  app->add_option("--max-size", a.max_size, "largest number of free columns in a candidate");
  app->add_flag("--include-empty", a.include_empty, "let the model without free columns compete");
  if (!intervals) return;
  app->add_option("--alpha", a.alpha, "miscoverage level")->check(CLI::Range(0.0, 1.0));
  app->add_option("--sigma", a.sigmas, "known:<v>, mse-aic, mse-full or external:<v>")->delimiter(',');
  app->add_option("--skip-supersets", a.skip_supersets, "skip comparisons with supersets of the selected model")
      ->check(CLI::IsMember({"on", "off"}));
}

void add_output_options(CLI::App* app, OutputArgs& o) {
  app->add_option("--format", o.format, "json, csv or plotdata")->check(CLI::IsMember({"json", "csv", "plotdata"}));
  app->add_option("--out", o.out, "output directory; standard output when omitted");
}

AnalysisOptions to_options(const DataArgs& a) {
  AnalysisOptions o;
  o.response = a.response;
  o.ignore = a.ignore;
  o.intercept = a.intercept;
  o.criterion = parse_criterion(a.criterion);
  o.alpha = a.alpha;
  o.sigmas.clear();
  for (const auto& s : a.sigmas) o.sigmas.push_back(SigmaSpec::parse(s));
  o.skip_supersets = a.skip_supersets == "on";
  o.policy.max_size = a.max_size;
  o.policy.include_empty = a.include_empty;
  return o;
}

void write(Report report, const OutputArgs& o) {
  report.timestamp = utc_timestamp();
  const ReportFormat format = parse_format(o.format);
  if (!o.out.empty()) {
    for (const auto& path : emit_report(report, format, o.out)) std::cout << path << '\n';
    return;
  }
  switch (format) {
    case ReportFormat::Json: std::cout << to_json_text(report); break;
    case ReportFormat::Csv:
      std::cout << (report.coverage.empty() ? targets_csv(report) : coverage_csv(report));
      break;
    case ReportFormat::PlotData: std::cout << coverage_plot_data(report); break;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Best-subset selection with AIC/BIC/AICc and selection-corrected confidence intervals"};
  app.require_subcommand(1);

  DataArgs select_args;
  OutputArgs select_out;
  auto* select = app.add_subcommand("select", "score every candidate model and report the chosen one");
  add_data_options(select, select_args, false);
  add_output_options(select, select_out);

  DataArgs ci_args;
  OutputArgs ci_out;
  std::vector<std::string> ci_targets;
  auto* ci = app.add_subcommand("ci", "classical and corrected intervals for chosen targets");
  add_data_options(ci, ci_args, true);
  add_output_options(ci, ci_out);
  ci->add_option("--target", ci_targets, "coef:<column>, point:<v1,...> or combo:<c1,...>")->required();

  DataArgs analyze_args;
  OutputArgs analyze_out;
  auto* analyze_cmd = app.add_subcommand("analyze", "selection plus intervals for every selected coefficient");
  add_data_options(analyze_cmd, analyze_args, true);
  add_output_options(analyze_cmd, analyze_out);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> reps;
  std::optional<int> workers;
  std::optional<std::string> sim_criterion;
  std::optional<double> sim_alpha;
  std::vector<std::string> sim_sigmas;
  std::optional<std::string> sim_skip;
  OutputArgs sim_out;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo coverage study from a config file");
  simulate->add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "master seed");
  simulate->add_option("--reps", reps, "number of replications");
  simulate->add_option("--workers", workers, "worker threads");
  simulate->add_option("--criterion", sim_criterion, "aic, bic or aicc")
      ->check(CLI::IsMember({"aic", "bic", "aicc"}, CLI::ignore_case));
  simulate->add_option("--alpha", sim_alpha, "miscoverage level")->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--sigma", sim_sigmas, "sigma strategies")->delimiter(',');
  simulate->add_option("--skip-supersets", sim_skip, "on or off")->check(CLI::IsMember({"on", "off"}));
  add_output_options(simulate, sim_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (select->parsed()) {
      const auto options = to_options(select_args);
      const Dataset data = load_dataset(select_args.data, options);
      Report r = selection_report(data, best_subset(data, CriterionSpec(options.criterion, data.n()), options.policy),
                                  options);
      r.config["data"] = select_args.data;
      write(std::move(r), select_out);
    } else if (ci->parsed()) {
      const auto options = to_options(ci_args);
      const Dataset data = load_dataset(ci_args.data, options);
      std::vector<NamedTarget> targets;
      for (const auto& t : ci_targets) targets.push_back(parse_target(t, data));
      Report r = analysis_report(data, run_analysis(data, options, targets), options, "ci");
      r.config["data"] = ci_args.data;
      write(std::move(r), ci_out);
    } else if (analyze_cmd->parsed()) {
      write(analyze(analyze_args.data, to_options(analyze_args)), analyze_out);
    } else if (simulate->parsed()) {
      SimulationConfig config = config_path.empty() ? SimulationConfig{} : load_config(config_path);
      if (seed) config.master_seed = *seed;
      if (reps) config.reps = *reps;
      if (workers) config.workers = *workers;
      if (sim_criterion) config.criterion = parse_criterion(*sim_criterion);
      if (sim_alpha) config.alpha = *sim_alpha;
      if (!sim_sigmas.empty()) {
        config.sigma_strategies.clear();
        for (const auto& s : sim_sigmas)
          config.sigma_strategies.push_back(s == "known" ? SigmaSpec::known(config.sigma) : SigmaSpec::parse(s));
      }
      if (sim_skip) config.skip_supersets = *sim_skip == "on";
      write(to_report(simulate_coverage(config)), sim_out);
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}
