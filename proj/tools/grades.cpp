#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include "CLI11.hpp"
#include "grades/errors.hpp"
#include "grades/experiments.hpp"
#include "grades/network.hpp"

namespace {

using namespace grades;

NetworkCondition parse_condition(const std::string& text) {
  if (text == "base") return NetworkCondition::base();
  if (text == "fully-connected" || text == "fc")
    return NetworkCondition::fully_connected();
  if (text == "random") return NetworkCondition::random();
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const std::string kind = text.substr(0, colon);
    double pct = std::stod(text.substr(colon + 1));
    if (pct > 1.0) pct /= 100.0;  // "augmented:10" means 10%
    if (pct <= 0.0 || pct > 1.0)
      throw CLI::ValidationError("--condition", "percentage out of (0,1]");
    if (kind == "augmented") return NetworkCondition::augmented(pct);
    if (kind == "error") return NetworkCondition::error_injected(pct);
  }
  throw CLI::ValidationError("--condition", "unrecognized condition '" + text + "'");
}

TrainingMode parse_mode(const std::string& text) {
  if (text == "path-same-facts") return TrainingMode::PathSameFacts;
  if (text == "path-random-facts") return TrainingMode::PathRandomFacts;
  if (text == "multi-path-same-facts") return TrainingMode::MultiPathSameFacts;
  if (text == "multi-path-random-facts") return TrainingMode::MultiPathRandomFacts;
  throw CLI::ValidationError("--mode", "unrecognized mode '" + text + "'");
}

int parse_parallelism(const std::string& text) {
  if (text == "auto") {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
  }
  const int p = std::stoi(text);
  if (p < 1) throw CLI::ValidationError("--parallelism", "must be >= 1 or auto");
  return p;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

struct SpecFlags {
  ExperimentSpec spec;
  std::string condition = "base";
  std::string mode = "path-same-facts";
  std::string parallelism = "1";

  void attach(CLI::App* cmd, bool with_trials = true) {
    cmd->add_option("--facts", spec.num_facts, "Number of facts")
        ->capture_default_str();
    cmd->add_option("--rules", spec.num_rules, "Number of rules")
        ->capture_default_str();
    cmd->add_option("--condition", condition,
                    "Trainee derivation: base, fully-connected, random, "
                    "augmented:<pct>, error:<pct> (values > 1 are percent, "
                    "<= 1 are fractions, so augmented:1 means 100%)")
        ->capture_default_str();
    cmd->add_option("--epochs", spec.config.epochs, "Training epochs")
        ->capture_default_str();
    cmd->add_option("--velocity", spec.config.velocity,
                    "Fraction of the error applied per epoch")
        ->capture_default_str();
    cmd->add_option("--mode", mode,
                    "Training mode: path-same-facts, path-random-facts, "
                    "multi-path-same-facts, multi-path-random-facts")
        ->capture_default_str();
    if (with_trials)
      cmd->add_option("--trials", spec.trials, "Monte-Carlo trials")
          ->capture_default_str();
    cmd->add_option("--seed", spec.base_seed, "Random seed")
        ->envname("GRADES_SEED")
        ->capture_default_str();
  }

  ExperimentSpec resolve() {
    spec.condition = parse_condition(condition);
    spec.config.mode = parse_mode(mode);
    return spec;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Machine-learning expert system: rule-fact networks with "
               "velocity-scaled weight training and a Monte-Carlo harness"};
  app.require_subcommand(1);
  app.set_config("--config")->description("key = value config file");

  // generate
  auto* generate = app.add_subcommand("generate", "Write a random network file");
  int gen_facts = 100, gen_rules = 100;
  bool gen_fc = false;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "network.txt";
  generate->add_option("--facts", gen_facts)->capture_default_str();
  generate->add_option("--rules", gen_rules)->capture_default_str();
  generate->add_flag("--fully-connected", gen_fc, "Generate every possible rule");
  generate->add_option("--seed", gen_seed)->envname("GRADES_SEED")
      ->capture_default_str();
  generate->add_option("-o,--output", gen_out)->capture_default_str();

  // run-trial
  auto* run_trial_cmd =
      app.add_subcommand("run-trial", "Run one trial with per-epoch reports");
  SpecFlags trial_flags;
  trial_flags.attach(run_trial_cmd, /*with_trials=*/false);
  int trial_index = 0;
  run_trial_cmd->add_option("--trial", trial_index, "Trial index")
      ->capture_default_str();

  // experiment
  auto* experiment =
      app.add_subcommand("experiment", "Run one experiment, write both CSVs");
  SpecFlags exp_flags;
  exp_flags.attach(experiment);
  std::string exp_out = "experiment";
  experiment->add_option("-o,--output", exp_out, "Output path prefix")
      ->capture_default_str();
  experiment->add_option("--parallelism", exp_flags.parallelism,
                         "Worker threads, or auto")
      ->capture_default_str();

  // reproduce
  auto* reproduce =
      app.add_subcommand("reproduce", "Run a preset suite, write a summary CSV");
  std::string preset;
  reproduce->add_option("preset", preset, "One of the preset table groups")
      ->required();
  int rep_trials = 1000;
  std::uint64_t rep_seed = 1;
  std::string rep_out = "summary.csv";
  std::string rep_parallelism = "1";
  bool paired = false;
  reproduce->add_option("--trials", rep_trials)->capture_default_str();
  reproduce->add_option("--seed", rep_seed)->envname("GRADES_SEED")
      ->capture_default_str();
  reproduce->add_option("-o,--output", rep_out)->capture_default_str();
  reproduce->add_option("--parallelism", rep_parallelism)->capture_default_str();
  reproduce->add_flag("--paired", paired,
                      "Reuse the same truth networks across conditions");

  // convert
  auto* convert =
      app.add_subcommand("convert", "Validate and round-trip a network file");
  std::string conv_in, conv_out;
  convert->add_option("-i,--input", conv_in)->required();
  convert->add_option("-o,--output", conv_out,
                      "Rewritten copy (omit to validate only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*generate) {
      Rng rng(gen_seed);
      const RuleFactNetwork net =
          gen_fc ? build_fully_connected(gen_facts, rng)
                 : generate_random_network(gen_facts, gen_rules, rng);
      save_network_file(net, gen_out);
      std::cout << "wrote " << net.num_facts() << " facts, " << net.num_rules()
                << " rules to " << gen_out << "\n";
    } else if (*run_trial_cmd) {
      const ExperimentSpec spec = trial_flags.resolve();
      std::vector<EpochReport> epochs;
      const TrialRecord record = run_trial(spec, trial_index, &epochs);
      for (const EpochReport& e : epochs)
        std::printf("epoch %d: truth=%.6f trainee=%.6f error=%+.6f updated=%d\n",
                    e.epoch_index, e.truth_value, e.trainee_value, e.error,
                    e.updated_rules);
      std::printf("trial %d: %s truth=%.6f trained=%.6f abs_error=%.6f\n",
                  record.trial_index, trial_status_label(record.status),
                  record.truth_value, record.trained_value, record.abs_error);
    } else if (*experiment) {
      const ExperimentSpec spec = exp_flags.resolve();
      const ExperimentResult result =
          run_experiment(spec, parse_parallelism(exp_flags.parallelism));
      auto trials_out = open_output(exp_out + "_trials.csv");
      write_trials_csv(trials_out, result.records);
      auto summary_out = open_output(exp_out + "_summary.csv");
      write_summary_header(summary_out);
      write_summary_row(summary_out, "", spec, result.summary);
      std::cout << "wrote " << exp_out << "_trials.csv and " << exp_out
                << "_summary.csv\n";
    } else if (*reproduce) {
      std::vector<PresetSpec> suite = preset_suite(preset);
      const int workers = parse_parallelism(rep_parallelism);
      auto out = open_output(rep_out);
      write_summary_header(out);
      for (std::size_t i = 0; i < suite.size(); ++i) {
        ExperimentSpec spec = suite[i].spec;
        spec.trials = rep_trials;
        spec.base_seed = paired ? rep_seed : mix_seed(rep_seed, i);
        const ExperimentResult result = run_experiment(spec, workers);
        write_summary_row(out, suite[i].preset, spec, result.summary);
        out.flush();
        std::cout << suite[i].preset << " [" << spec.condition.label()
                  << ", epochs " << spec.config.epochs << ", velocity "
                  << spec.config.velocity << ", "
                  << training_mode_label(spec.config.mode)
                  << "]: avg_abs_err=" << result.summary.avg_abs_error
                  << " evaluated=" << result.summary.evaluated_count << "\n";
      }
      std::cout << "wrote " << rep_out << "\n";
    } else if (*convert) {
      const RuleFactNetwork net = load_network_file(conv_in);
      if (!conv_out.empty()) save_network_file(net, conv_out);
      std::cout << conv_in << ": valid (" << net.num_facts() << " facts, "
                << net.num_rules() << " rules)\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
