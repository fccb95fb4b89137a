// Command-line front end: hypothesis evaluation, credible regions, cubes,
// table reproduction, calibration runs and the Monte Carlo oracle.
//
// Exit codes: 0 ok, 2 input error, 3 unsupported hypothesis, 4 I/O error.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vacuous/io.hpp"
#include "vacuous/vacuous.hpp"

namespace {

using nlohmann::ordered_json;
using namespace vacuous;

enum ExitCode : int { ok = 0, input_error = 2, unsupported = 3, io_failure = 4 };

struct Options {
  std::string y_path;
  std::string contrast_path;
  std::string rhs_path;
  std::string side = "two";
  std::string variance = "known:s2=1";
  double alpha = 0.05;
  std::optional<double> halfwidth;
  int k = 0;
  std::optional<int> reps;
  std::uint64_t seed = 0;
  std::vector<double> alphas{0.05, 0.2};
  int workers = 1;
  std::string out;
  std::string format = "json";
  int table = 0;
};

void emit(const Options& options, const ordered_json& record) {
  const std::string text = options.format == "text" ? io::aligned_text(record) : record.dump() + "\n";
  if (options.out.empty()) {
    std::cout << text;
  } else {
    io::write_text(options.out, text);
  }
}

ObservationVector load_observation(const std::string& path) { return ObservationVector(io::read_vector(path)); }

LinearHypothesis load_hypothesis(const Options& options, int k) {
  Eigen::MatrixXd contrast = io::read_matrix(options.contrast_path);
  Eigen::VectorXd rhs = io::read_vector(options.rhs_path);
  if (contrast.cols() != k) {
    throw io::InputError(options.contrast_path + ":1: contrast has " + std::to_string(contrast.cols()) +
                         " columns but " + options.y_path + " has " + std::to_string(k) + " values");
  }
  if (rhs.size() != contrast.rows()) {
    throw io::InputError(options.rhs_path + ":" + std::to_string(std::min(rhs.size(), contrast.rows()) + 1) +
                         ": right-hand side has " + std::to_string(rhs.size()) + " values but " +
                         options.contrast_path + " has " + std::to_string(contrast.rows()) + " rows");
  }
  const Side side = options.side == "le" ? Side::less_equal : Side::equality;
  return {std::move(contrast), std::move(rhs), side};
}

ordered_json with_triple(ordered_json record, const PosteriorTriple& triple) {
  record["p"] = triple.p();
  record["q"] = triple.q();
  record["r"] = triple.r();
  return record;
}

double known_sd(const VarianceSpec& spec, const char* command) {
  const auto* known = std::get_if<KnownVariance>(&spec);
  if (known == nullptr) {
    throw io::InputError(std::string(command) + ": this mode needs a known variance (known:s2=<float>)");
  }
  return std::sqrt(known->s2);
}

int run_test(const Options& options) {
  const ObservationVector y = load_observation(options.y_path);
  const LinearHypothesis hypothesis = load_hypothesis(options, y.dimension());
  const auto law = radius_law(y.dimension(), io::parse_variance(options.variance));
  const PosteriorTriple triple = linear_triple(hypothesis, y, law);
  const SphereStatistic stat = t_statistic(hypothesis, y);
  ordered_json record{{"t_y", stat.t_y}};
  record = with_triple(std::move(record), triple);
  record["consistent"] = stat.consistent;
  emit(options, record);
  return ok;
}

int run_region(const Options& options) {
  const ObservationVector y = load_observation(options.y_path);
  const auto law = radius_law(y.dimension(), io::parse_variance(options.variance));
  const BallRegion region = credible_region(options.alpha, y, law);
  ordered_json record{{"alpha", options.alpha},
                      {"threshold", region.threshold()},
                      {"radius", std::sqrt(region.threshold())}};
  emit(options, with_triple(std::move(record), ball_triple(region, y, law)));
  return ok;
}

int run_rect(const Options& options) {
  const ObservationVector y = load_observation(options.y_path);
  const VarianceSpec spec = io::parse_variance(options.variance);
  const auto law = radius_law(y.dimension(), spec);
  const double bonferroni = bonferroni_halfwidth(options.alpha, y.dimension());
  const double halfwidth = options.halfwidth ? *options.halfwidth : bonferroni * known_sd(spec, "rect");
  if (!(halfwidth > 0.0)) throw io::InputError("rect: --halfwidth must be positive");
  ordered_json record{{"alpha", options.alpha}, {"halfwidth", halfwidth}};
  record = with_triple(std::move(record), rect_triple(RectRegion(y, halfwidth), y, law));
  record["lower_calibrated"] = lower_calibrated_halfwidth(options.alpha, law);
  record["upper_calibrated"] = upper_calibrated_halfwidth(options.alpha, law);
  record["bonferroni"] = bonferroni;
  emit(options, record);
  return ok;
}

int run_tables(const Options& options) {
  if (options.table != 1 && options.table != 2) {
    throw io::InputError("tables: selector must be 1 or 2, got " + std::to_string(options.table));
  }
  const std::string text = render_table(options.table);
  if (options.out.empty()) {
    std::cout << text;
  } else {
    io::write_text(options.out, text);
  }
  return ok;
}

int run_calibrate(const Options& options) {
  const VarianceSpec spec = io::parse_variance(options.variance);
  const double s = known_sd(spec, "calibrate");
  SimulationConfig config{.k = options.k,
                          .reps = options.reps.value_or(5000),
                          .seed = options.seed,
                          .s2 = s * s,
                          .alphas = options.alphas,
                          .workers = options.workers};
  if (config.k < 2) throw io::InputError("calibrate: --k must be >= 2");
  try {
    config.validate();
  } catch (const std::invalid_argument& e) {
    throw io::InputError(std::string("calibrate: ") + e.what());
  }
  const CalibrationReport report = calibrate(config);
  const std::string directory = options.out.empty() ? "calibration" : options.out;
  io::write_calibration(report, directory);
  std::cout << "ks_uniform " << io::format_full(report.ks_uniform) << "\n";
  for (std::size_t i = 0; i < config.alphas.size(); ++i) {
    std::cout << "alpha " << io::format_full(config.alphas[i]) << " fwer_bonferroni "
              << io::format_full(report.fwer_bonferroni[i]) << " coverage " << io::format_full(report.coverage[i])
              << "\n";
  }
  return ok;
}

int run_oracle(const Options& options) {
  const ObservationVector y = load_observation(options.y_path);
  const VarianceSpec spec = io::parse_variance(options.variance);
  const auto law = radius_law(y.dimension(), spec);
  const int draws = options.reps.value_or(100000);
  if (draws < 1) throw io::InputError("oracle: --reps must be >= 1");

  std::optional<OracleQuery> query;
  std::optional<PosteriorTriple> closed;
  if (!options.contrast_path.empty()) {
    const LinearHypothesis hypothesis = load_hypothesis(options, y.dimension());
    closed = linear_triple(hypothesis, y, law);
    query = hypothesis;
  } else if (options.halfwidth) {
    const RectRegion region(y, *options.halfwidth);
    closed = rect_triple(region, y, law);
    query = region;
  } else {
    const BallRegion region = credible_region(options.alpha, y, law);
    closed = ball_triple(region, y, law);
    query = region;
  }
  const PosteriorTriple mc = mc_triple_oracle(*query, y, law, draws, options.seed);
  ordered_json record{{"n", draws}, {"seed", options.seed}};
  record["closed"] = io::triple_json(*closed);
  record["mc"] = io::triple_json(mc);
  emit(options, record);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dempster-Shafer (p, q, r) inference for normal means under vacuous orientation"};
  app.require_subcommand(1);
  Options options;

  const auto add_y = [&](CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--y", options.y_path, "observation vector, one value per line")->check(CLI::ExistingFile);
    if (required) opt->required();
  };
  const auto add_hypothesis = [&](CLI::App* cmd, bool required) {
    auto* c = cmd->add_option("--contrast", options.contrast_path, "contrast matrix, comma-separated rows")
                  ->check(CLI::ExistingFile);
    auto* a = cmd->add_option("--rhs", options.rhs_path, "right-hand side, one value per line")->check(CLI::ExistingFile);
    cmd->add_option("--side", options.side, "two (C M = a) or le (C M <= a)")
        ->check(CLI::IsMember({"two", "le"}));
    if (required) {
      c->required();
      a->required();
    } else {
      c->needs(a);
      a->needs(c);
    }
  };
  const auto add_variance = [&](CLI::App* cmd) {
    cmd->add_option("--var", options.variance, "known:s2=<float> or invchisq:nu=<int>")->capture_default_str();
  };
  const auto add_output = [&](CLI::App* cmd) {
    cmd->add_option("--out", options.out, "output path (default stdout)");
    cmd->add_option("--format", options.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };

  auto* test = app.add_subcommand("test", "evaluate a linear hypothesis C M = a or C M <= a");
  add_y(test, true);
  add_hypothesis(test, true);
  add_variance(test);
  add_output(test);

  auto* region = app.add_subcommand("region", "(1 - alpha) credible ball centred at y");
  add_y(region, true);
  add_variance(region);
  region->add_option("--alpha", options.alpha)->capture_default_str();
  add_output(region);

  auto* rect = app.add_subcommand("rect", "(p, q, r) of a y-centred cube (Bonferroni width by default)");
  add_y(rect, true);
  add_variance(rect);
  rect->add_option("--alpha", options.alpha)->capture_default_str();
  rect->add_option("--halfwidth", options.halfwidth, "absolute half-width in data units");
  add_output(rect);

  auto* tables = app.add_subcommand("tables", "print table 1 (half widths) or 2 (Bonferroni cubes)");
  tables->add_option("which", options.table, "1 or 2")->required();
  tables->add_option("--out", options.out, "output path (default stdout)");

  auto* calibrate_cmd = app.add_subcommand("calibrate", "null-model calibration run writing ecdf.csv and summary.csv");
  calibrate_cmd->add_option("--k", options.k, "dimension (>= 2)")->required();
  calibrate_cmd->add_option("--reps", options.reps, "replicates (default 5000)");
  calibrate_cmd->add_option("--seed", options.seed, "root seed")->capture_default_str();
  calibrate_cmd->add_option("--alpha", options.alphas, "alpha levels, comma-separated")->delimiter(',');
  calibrate_cmd->add_option("--workers", options.workers, "worker threads")->capture_default_str();
  add_variance(calibrate_cmd);
  calibrate_cmd->add_option("--out", options.out, "output directory (default ./calibration)");

  auto* oracle = app.add_subcommand("oracle", "closed-form triple next to its Monte Carlo estimate");
  add_y(oracle, true);
  add_hypothesis(oracle, false);
  add_variance(oracle);
  oracle->add_option("--alpha", options.alpha, "credible ball level when no hypothesis is given")
      ->capture_default_str();
  oracle->add_option("--halfwidth", options.halfwidth, "evaluate the y-centred cube of this half-width");
  oracle->add_option("--reps", options.reps, "Monte Carlo draws (default 100000)");
  oracle->add_option("--seed", options.seed)->capture_default_str();
  add_output(oracle);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return input_error;
  }

  try {
    if (*test) return run_test(options);
    if (*region) return run_region(options);
    if (*rect) return run_rect(options);
    if (*tables) return run_tables(options);
    if (*calibrate_cmd) return run_calibrate(options);
    if (*oracle) return run_oracle(options);
  } catch (const io::OutputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return io_failure;
  } catch (const UnsupportedHypothesis& e) {
    std::cerr << "error: " << e.what() << "\n";
    return unsupported;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return input_error;
  }
  return input_error;
}
