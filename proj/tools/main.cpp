#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "retlab/cohort_csv.hpp"
#include "retlab/errors.hpp"
#include "retlab/io.hpp"
#include "retlab/metrics.hpp"
#include "retlab/shap.hpp"
#include "retlab/shap_report.hpp"
#include "retlab/synth.hpp"
#include "retlab/train.hpp"
#include "retlab/train_config_file.hpp"

namespace {

using namespace retlab;

Cohort load_cohort_or_warn(const std::string& path) {
  LoadedCohort loaded = load_cohort_csv(path);
  const auto& errors = loaded.report.row_errors;
  for (std::size_t i = 0; i < errors.size() && i < 10; ++i) {
    std::fprintf(stderr, "warning: %s line %zu: %s\n", path.c_str(), errors[i].line,
                 errors[i].message.c_str());
  }
  if (errors.size() > 10) {
    std::fprintf(stderr, "warning: %s: %zu more rejected rows\n", path.c_str(),
                 errors.size() - 10);
  }
  if (loaded.rows.empty()) throw DataError(path + " holds no usable rows");
  return std::move(loaded.rows);
}

// Rebuilds the exact held-out split the model was trained with.
std::pair<Cohort, Cohort> reconstruct_split(const Ensemble& model, const Cohort& cohort,
                                            const std::string& cohort_path) {
  if (static_cast<std::int64_t>(cohort.size()) != model.train_rows) {
    throw DataError(cohort_path + " holds " + std::to_string(cohort.size()) +
                    " rows but the model was trained from " +
                    std::to_string(model.train_rows) +
                    "; the held-out split cannot be reconstructed");
  }
  return split_train_test(cohort, model.config.split_ratio, model.config.seed,
                          model.config.stratified);
}

struct SynthFlags {
  SynthConfig cfg;
  std::string out;
};

int cmd_synth(const SynthFlags& flags) {
  const Cohort cohort = synth_cohort(flags.cfg);
  save_cohort_csv(flags.out, cohort);
  double rate = 0.0;
  for (const FeatureVector& row : cohort) rate += row.label;
  rate /= static_cast<double>(cohort.size());
  std::printf("wrote %s: %zu rows, dropout rate %.4f\n", flags.out.c_str(),
              cohort.size(), rate);
  return 0;
}

struct TrainFlags {
  std::string cohort_path;
  std::string model_out = "model.json";
  std::string history_out = "history.csv";
  std::optional<std::string> config_path;
  std::optional<int> iterations;
  std::optional<double> learning_rate;
  std::optional<int> num_leaves;
  std::optional<int> min_data;
  std::optional<int> max_bin;
  std::optional<bool> boost_from_average;
  std::optional<double> lambda_l2;
  std::optional<double> split_ratio;
  std::optional<std::uint64_t> seed;
  std::optional<int> early_stopping;
  bool stratified = false;
};

TrainConfig merge_train_config(const TrainFlags& flags) {
  TrainConfig cfg;
  if (flags.config_path) apply_config_file(*flags.config_path, cfg);
  if (flags.iterations) cfg.num_iterations = *flags.iterations;
  if (flags.learning_rate) cfg.learning_rate = *flags.learning_rate;
  if (flags.num_leaves) cfg.num_leaves = *flags.num_leaves;
  if (flags.min_data) cfg.min_data = *flags.min_data;
  if (flags.max_bin) cfg.max_bin = *flags.max_bin;
  if (flags.boost_from_average) cfg.boost_from_average = *flags.boost_from_average;
  if (flags.lambda_l2) cfg.lambda_l2 = *flags.lambda_l2;
  if (flags.split_ratio) cfg.split_ratio = *flags.split_ratio;
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.early_stopping) cfg.early_stopping_rounds = *flags.early_stopping;
  cfg.stratified = flags.stratified;
  return cfg;
}

int cmd_train(const TrainFlags& flags) {
  const TrainConfig cfg = merge_train_config(flags);
  validate(cfg);
  const Cohort cohort = load_cohort_or_warn(flags.cohort_path);

  const PipelineResult result = train_on_cohort(cohort, cfg);
  save_ensemble(flags.model_out, result.model);

  std::string history = "iteration,valid_logloss\n";
  for (std::size_t i = 0; i < result.history.valid_logloss.size(); ++i) {
    history += std::to_string(i + 1);
    history += ',';
    history += format_double(result.history.valid_logloss[i]);
    history += '\n';
  }
  atomic_write_file(flags.history_out, history);

  std::printf("wrote %s: %zu trees over %zu train / %zu held-out rows\n",
              flags.model_out.c_str(), result.model.trees.size(),
              result.train_split.size(), result.test_split.size());
  if (!result.history.valid_logloss.empty()) {
    std::printf("valid logloss %s -> %s (%s)\n",
                format_double(result.history.valid_logloss.front()).c_str(),
                format_double(result.history.valid_logloss.back()).c_str(),
                flags.history_out.c_str());
  }
  return 0;
}

struct EvaluateFlags {
  std::string model_path;
  std::string cohort_path;
  std::string out = "eval.json";
  double threshold = 0.5;
};

int cmd_evaluate(const EvaluateFlags& flags) {
  if (!(flags.threshold >= 0.0 && flags.threshold <= 1.0)) {
    throw ConfigError("threshold must lie in [0,1]");
  }
  const Ensemble model = load_ensemble(flags.model_path);
  const Cohort cohort = load_cohort_or_warn(flags.cohort_path);
  const auto [train_split, test_split] =
      reconstruct_split(model, cohort, flags.cohort_path);

  std::vector<std::uint8_t> labels;
  std::vector<double> probas;
  labels.reserve(test_split.size());
  probas.reserve(test_split.size());
  for (const FeatureVector& row : test_split) {
    labels.push_back(static_cast<std::uint8_t>(row.label));
    probas.push_back(model.predict_proba(row));
  }

  const EvalReport report = evaluate(labels, probas, flags.threshold);
  atomic_write_file(flags.out, report_to_json(report));

  std::printf("held-out rows %zu, threshold %s\n", test_split.size(),
              format_double(report.threshold).c_str());
  std::printf("accuracy  %.4f\n", report.accuracy);
  std::printf("precision %.4f\n", report.precision);
  std::printf("recall    %.4f\n", report.recall);
  std::printf("f1        %.4f\n", report.f1);
  std::printf("roc_auc   %.4f\n", report.roc_auc);
  std::printf("log_loss  %.4f\n", report.log_loss);
  return 0;
}

struct ExplainFlags {
  std::string model_path;
  std::string cohort_path;
  std::string out_dir = "report";
  std::string split = "test";
  std::vector<std::string> interactions;
};

std::pair<std::string, std::string> parse_pair(const std::string& spec) {
  const std::size_t comma = spec.find(',');
  if (comma == std::string::npos || spec.find(',', comma + 1) != std::string::npos) {
    throw ConfigError("--interactions wants 'FeatureA,FeatureB', got '" + spec + "'");
  }
  return {spec.substr(0, comma), spec.substr(comma + 1)};
}

int cmd_explain(const ExplainFlags& flags) {
  const Ensemble model = load_ensemble(flags.model_path);
  const Cohort cohort = load_cohort_or_warn(flags.cohort_path);

  Cohort rows;
  if (flags.split == "all") {
    rows = cohort;
  } else {
    auto [train_split, test_split] = reconstruct_split(model, cohort, flags.cohort_path);
    rows = flags.split == "train" ? std::move(train_split) : std::move(test_split);
  }

  std::filesystem::create_directories(flags.out_dir);
  const auto path_in_dir = [&](const std::string& name) {
    return (std::filesystem::path(flags.out_dir) / name).string();
  };

  const std::vector<ShapVector> shap_rows = tree_shap_batch(model, rows);
  atomic_write_file(path_in_dir("shap_values.csv"), shap_matrix_csv(shap_rows));

  const ImportanceTable table = importance_table(shap_rows);
  atomic_write_file(path_in_dir("importance.csv"), importance_table_csv(table));
  const std::string table_text = importance_table_text(table);
  atomic_write_file(path_in_dir("importance.txt"), table_text);

  for (const std::string_view feature : kFeatureNames) {
    const DependenceSeries series = dependence_series(feature, rows, shap_rows);
    const std::string stem = "dependence_" + std::string(feature);
    atomic_write_file(path_in_dir(stem + ".csv"), dependence_csv(series));
    atomic_write_file(path_in_dir(stem + ".svg"), dependence_svg(series));
  }

  if (!flags.interactions.empty()) {
    const std::vector<InteractionMatrix> matrices = interaction_values_batch(model, rows);
    for (const std::string& spec : flags.interactions) {
      const auto [a, b] = parse_pair(spec);
      const InteractionSeries series = interaction_dependence(a, b, rows, matrices);
      atomic_write_file(path_in_dir("interaction_" + a + "_" + b + ".csv"),
                        interaction_csv(series));
    }
  }

  std::printf("explained %zu rows (%s split) into %s\n", rows.size(),
              flags.split.c_str(), flags.out_dir.c_str());
  std::fputs(table_text.c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"student-retention modelling toolkit"};
  app.require_subcommand(1);

  SynthFlags synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic cohort CSV");
  synth_cmd->add_option("--n", synth.cfg.n_students, "number of students")->required();
  synth_cmd->add_option("--seed", synth.cfg.seed, "generator seed")->default_val(7);
  synth_cmd->add_option("--base-rate", synth.cfg.dropout_base_rate,
                        "expected dropout rate in (0,1)");
  synth_cmd->add_option("--noise", synth.cfg.noise_scale,
                        "sd of unexplained risk noise");
  synth_cmd->add_option("--out", synth.out, "cohort CSV path")->required();

  TrainFlags train;
  CLI::App* train_cmd = app.add_subcommand("train", "train a boosted-tree model");
  train_cmd->add_option("--cohort", train.cohort_path, "cohort CSV")->required();
  train_cmd->add_option("--out", train.model_out, "model JSON path");
  train_cmd->add_option("--history", train.history_out, "per-iteration logloss CSV path");
  train_cmd->add_option("--config", train.config_path, "key = value config file");
  train_cmd->add_option("--iterations", train.iterations, "boosting iterations");
  train_cmd->add_option("--learning-rate", train.learning_rate, "shrinkage in (0,1]");
  train_cmd->add_option("--num-leaves", train.num_leaves, "max leaves per tree");
  train_cmd->add_option("--min-data", train.min_data, "min rows per leaf");
  train_cmd->add_option("--max-bin", train.max_bin, "histogram bins per feature");
  train_cmd->add_option("--boost-from-average", train.boost_from_average,
                        "start from the average log-odds");
  train_cmd->add_option("--lambda-l2", train.lambda_l2, "L2 leaf regularization");
  train_cmd->add_option("--split-ratio", train.split_ratio, "train fraction in (0,1)");
  train_cmd->add_option("--seed", train.seed, "split shuffle seed");
  train_cmd->add_option("--early-stopping", train.early_stopping,
                        "stop after this many non-improving iterations");
  train_cmd->add_flag("--stratified", train.stratified, "stratify the split by label");

  EvaluateFlags evaluate;
  CLI::App* eval_cmd =
      app.add_subcommand("evaluate", "score a model on its held-out split");
  eval_cmd->add_option("--model", evaluate.model_path, "model JSON")->required();
  eval_cmd->add_option("--cohort", evaluate.cohort_path, "cohort CSV the model was trained from")
      ->required();
  eval_cmd->add_option("--out", evaluate.out, "metrics JSON path");
  eval_cmd->add_option("--threshold", evaluate.threshold, "positive-class threshold");

  ExplainFlags explain;
  CLI::App* explain_cmd =
      app.add_subcommand("explain", "write the attribution report bundle");
  explain_cmd->add_option("--model", explain.model_path, "model JSON")->required();
  explain_cmd->add_option("--cohort", explain.cohort_path, "cohort CSV the model was trained from")
      ->required();
  explain_cmd->add_option("--out-dir", explain.out_dir, "report bundle directory");
  explain_cmd->add_option("--split", explain.split, "rows to explain")
      ->check(CLI::IsMember({"train", "test", "all"}));
  explain_cmd->add_option("--interactions", explain.interactions,
                          "feature pair 'A,B' for interaction output, repeatable");

  try {
    app.parse(argc, argv);
    if (synth_cmd->parsed()) return cmd_synth(synth);
    if (train_cmd->parsed()) return cmd_train(train);
    if (eval_cmd->parsed()) return cmd_evaluate(evaluate);
    return cmd_explain(explain);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 4;
  }
}
