// imhdc: train, evaluate and sweep hyperdimensional classifiers on the ideal
// or the crossbar backend.
//
// Exit codes: 0 ok, 1 usage, 2 ingest/training, 3 config/model mismatch,
// 4 internal invariant breach.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "imhdc/crossbar.hpp"
#include "imhdc/datasets.hpp"
#include "imhdc/errors.hpp"
#include "imhdc/model_io.hpp"
#include "imhdc/pipeline.hpp"
#include "imhdc/report.hpp"

namespace fs = std::filesystem;
using namespace imhdc;

namespace {

enum Exit { kOk = 0, kUsage = 1, kIngest = 2, kMismatch = 3, kInvariant = 4 };

// Options that mirror RunConfig. Only flags given on the command line are
// applied, so defaults come from the task (or the model for infer/sweep).
class ConfigFlags {
 public:
  explicit ConfigFlags(CLI::App& app) : app_(app) {
    app.add_option("-c,--config", config_file_, "JSON config file; its keys override flags");
    text("--task", "language | news | emg | synth",
         [](RunConfig& c, const std::string& v) { c.task = parse_task(v); });
    number<std::size_t>("-d,--dim", "hypervector dimension",
                        [](RunConfig& c, std::size_t v) { c.dim = v; });
    number<std::size_t>("-n,--ngram", "n-gram size",
                        [](RunConfig& c, std::size_t v) { c.encoder.n = v; });
    text("--encoder", "exact | all_minterm | two_minterm",
         [](RunConfig& c, const std::string& v) { c.encoder.kind = parse_encoder_kind(v); });
    text("--permutation", "circular | plain_shift", [](RunConfig& c, const std::string& v) {
      c.encoder.permutation = parse_permutation_mode(v);
    });
    text("--metric", "dotp | invhamm",
         [](RunConfig& c, const std::string& v) { c.metric = parse_metric(v); });
    text("--backend", "ideal | crossbar",
         [](RunConfig& c, const std::string& v) { c.backend = parse_backend(v); });
    number<std::size_t>("-f,--partitions", "partition factor of the AM crossbar",
                        [](RunConfig& c, std::size_t v) { c.partitions = v; });
    number<std::uint64_t>("--seed", "item-memory seed",
                          [](RunConfig& c, std::uint64_t v) { c.seed = v; });
    number<std::uint64_t>("--layout-seed", "partition permutation seed",
                          [](RunConfig& c, std::uint64_t v) { c.layout_seed = v; });
    number<std::uint64_t>("--noise-seed", "device noise seed",
                          [](RunConfig& c, std::uint64_t v) { c.noise.seed = v; });
    number<double>("--gradient", "spatial conductance gradient along columns",
                   [](RunConfig& c, double v) { c.noise.gradient_cols = v; });
    number<double>("--read-noise", "relative read-noise sigma",
                   [](RunConfig& c, double v) { c.noise.read_noise_sigma = v; });
    flag("--ideal-devices", "no variability, leakage, gradient or read noise", [](RunConfig& c) {
      const auto seed = c.noise.seed;
      c.noise = NoiseModel::ideal();
      c.noise.seed = seed;
    });
    flag("--adc-bypass", "pass bitline currents through unquantized",
         [](RunConfig& c) { c.periph.adc_bypass = true; });
    number<unsigned>("--adc-bits", "ADC resolution",
                     [](RunConfig& c, unsigned v) { c.periph.adc_bits = v; });
    text("--complement-shift", "same | opposite", [](RunConfig& c, const std::string& v) {
      c.complement_shift = parse_complement_shift(v);
    });
    text("--data-root", "base for relative data paths (default: $IMHDC_DATA_ROOT)",
         [](RunConfig& c, const std::string& v) { c.data_root = v; });
    text("--train-manifest", "label<TAB>path manifest of the training split",
         [](RunConfig& c, const std::string& v) { c.train_manifest = v; });
    text("--test-manifest", "label<TAB>path manifest of the test split",
         [](RunConfig& c, const std::string& v) { c.test_manifest = v; });
    text("--emg-file", "EMG recording (ch1,ch2,ch3,ch4,label)",
         [](RunConfig& c, const std::string& v) { c.emg_file = v; });
    number<std::size_t>("--synth-classes", "synthetic corpus classes",
                        [](RunConfig& c, std::size_t v) { c.synth.classes = v; });
    number<std::uint64_t>("--synth-seed", "synthetic corpus seed",
                          [](RunConfig& c, std::uint64_t v) { c.synth.seed = v; });
    number<double>("--synth-mixing", "share of letters drawn from the common chain",
                   [](RunConfig& c, double v) { c.synth.mixing = v; });
    number<std::size_t>("--synth-train-length", "training symbols per class",
                        [](RunConfig& c, std::size_t v) { c.synth.train_length = v; });
    number<std::size_t>("--synth-test-per-class", "queries per class",
                        [](RunConfig& c, std::size_t v) { c.synth.test_per_class = v; });
    number<std::size_t>("--synth-test-length", "mean query length",
                        [](RunConfig& c, std::size_t v) { c.synth.test_length = v; });
    number<std::size_t>("-j,--workers", "query worker threads",
                        [](RunConfig& c, std::size_t v) { c.workers = v; });
    number<std::size_t>("--max-queries", "evaluate at most this many queries (0: all)",
                        [](RunConfig& c, std::size_t v) { c.max_queries = v; });
  }

  // Starting config for train/synth: the defaults of the selected task.
  [[nodiscard]] RunConfig task_defaults() const {
    Task task = Task::synth;
    if (auto* opt = app_.get_option("--task"); opt->count() > 0) {
      task = parse_task(opt->as<std::string>());
    }
    if (!config_file_.empty()) {
      RunConfig probe;
      apply_config_file(probe, config_file_);
      std::ifstream in(config_file_);
      if (nlohmann::json::parse(in).contains("task")) task = probe.task;
    }
    return RunConfig::defaults_for(task);
  }

  void apply(RunConfig& cfg) const {
    for (const auto& fn : appliers_) fn(cfg);
    if (!config_file_.empty()) apply_config_file(cfg, config_file_);
  }

 private:
  void text(const std::string& name, const std::string& help,
            std::function<void(RunConfig&, const std::string&)> fn) {
    auto value = std::make_shared<std::string>();
    CLI::Option* opt = app_.add_option(name, *value, help);
    appliers_.push_back([opt, value, fn](RunConfig& c) {
      if (opt->count() > 0) fn(c, *value);
    });
  }

  template <class T>
  void number(const std::string& name, const std::string& help,
              std::function<void(RunConfig&, T)> fn) {
    auto value = std::make_shared<T>();
    CLI::Option* opt = app_.add_option(name, *value, help);
    appliers_.push_back([opt, value, fn](RunConfig& c) {
      if (opt->count() > 0) fn(c, *value);
    });
  }

  void flag(const std::string& name, const std::string& help, std::function<void(RunConfig&)> fn) {
    CLI::Option* opt = app_.add_flag(name, help);
    appliers_.push_back([opt, fn](RunConfig& c) {
      if (opt->count() > 0) fn(c);
    });
  }

  CLI::App& app_;
  std::string config_file_;
  std::vector<std::function<void(RunConfig&)>> appliers_;
};

// Task, dimension, encoder, metric and seed come from the model; flags and
// the config file may restate them but must agree.
RunConfig config_from_model(const Model& model, const ConfigFlags& flags) {
  RunConfig cfg = RunConfig::defaults_for(model.task);
  cfg.dim = model.dim;
  cfg.encoder = model.encoder;
  cfg.metric = model.metric;
  cfg.seed = model.seed;
  flags.apply(cfg);
  check_compatible(model, cfg);
  return cfg;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IngestError("cannot create directory '" + dir.string() + "': " + ec.message());
}

std::string model_hash(const Model& model) { return content_hash(serialize_model(model)); }

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  for (char ch : text + ",") {
    if (ch == ',') {
      if (!item.empty()) out.push_back(item);
      item.clear();
    } else if (ch != ' ') {
      item += ch;
    }
  }
  return out;
}

int run_train(const ConfigFlags& flags, const fs::path& model_path, const std::string& stats_path,
              const std::string& conductance_path) {
  RunConfig cfg = flags.task_defaults();
  flags.apply(cfg);
  cfg.validate();
  const TaskData data = load_task_data(cfg);
  std::vector<ClassStats> stats;
  const Model model = train_model(cfg, data, &stats);
  write_model(model, model_path);

  const std::string table = train_stats_csv(stats);
  std::cout << table;
  if (!stats_path.empty()) write_text_file(stats_path, table);
  if (!conductance_path.empty()) {
    const AmCrossbar am(model.am, cfg.partitions, cfg.layout_seed, cfg.noise, cfg.periph, false);
    std::ofstream out(conductance_path);
    if (!out) throw IngestError("cannot write '" + conductance_path + "'");
    am.array().write_csv(out);
  }
  std::cout << "model " << model_path.string() << " classes=" << model.am.classes()
            << " d=" << model.dim << " hash=" << model_hash(model) << '\n';
  return kOk;
}

int run_infer(const ConfigFlags& flags, const fs::path& model_path, const fs::path& out_dir) {
  const Model model = read_model(model_path);
  const RunConfig cfg = config_from_model(model, flags);
  cfg.validate();
  const TaskData data = load_task_data(cfg);
  const Evaluation ev = evaluate(model, data, cfg);
  const std::string hash = model_hash(model);

  ensure_dir(out_dir);
  write_text_file(out_dir / "report.csv", per_class_csv(ev));
  write_text_file(out_dir / "confusion.csv", confusion_csv(ev));
  write_text_file(out_dir / "report.json",
                  infer_json(cfg, hash, ev, uses_crossbar_encoder(cfg)).dump(2) + "\n");
  std::cout << "accuracy " << format_fixed(ev.accuracy()) << " (" << ev.correct() << "/"
            << ev.truth.size() << ") backend=" << to_string(cfg.backend)
            << " metric=" << to_string(cfg.metric) << '\n';
  return kOk;
}

struct SweepOptions {
  std::string model_path;
  std::string partitions = "1,2,10";
  std::string gradients;
  std::string metrics;
  std::string encoders;
  bool no_ideal = false;
};

int run_sweep_cmd(const ConfigFlags& flags, const SweepOptions& opts, const fs::path& out_dir) {
  std::optional<Model> model;
  RunConfig cfg;
  if (!opts.model_path.empty()) {
    model = read_model(opts.model_path);
    cfg = config_from_model(*model, flags);
  } else {
    cfg = flags.task_defaults();
    flags.apply(cfg);
  }
  cfg.validate();

  SweepGrid grid;
  grid.partitions.clear();
  for (const auto& f : split_list(opts.partitions)) grid.partitions.push_back(std::stoul(f));
  grid.gradients = {cfg.noise.gradient_cols};
  if (!opts.gradients.empty()) {
    grid.gradients.clear();
    for (const auto& g : split_list(opts.gradients)) grid.gradients.push_back(std::stod(g));
  }
  grid.metrics = {cfg.metric};
  if (!opts.metrics.empty()) {
    grid.metrics.clear();
    for (const auto& m : split_list(opts.metrics)) grid.metrics.push_back(parse_metric(m));
  }
  for (const auto& e : split_list(opts.encoders)) grid.encoders.push_back(parse_encoder_kind(e));
  grid.ideal_baseline = !opts.no_ideal;

  const TaskData data = load_task_data(cfg);
  if (!model) model = train_model(cfg, data);
  const auto rows = run_sweep(cfg, data, grid, &*model);
  const std::string hash = model_hash(*model);

  ensure_dir(out_dir);
  const std::string table = sweep_csv(rows);
  write_text_file(out_dir / "sweep.csv", table);
  write_text_file(out_dir / "sweep.json", sweep_json(cfg, hash, rows).dump(2) + "\n");
  std::cout << table;
  return kOk;
}

int run_synth_text(const ConfigFlags& flags, const fs::path& out_dir) {
  RunConfig cfg = flags.task_defaults();
  flags.apply(cfg);
  const TextDataset data = synth_corpus(cfg.synth);
  write_text_corpus(data, out_dir);
  std::cout << "wrote " << data.classes.size() << " classes, " << data.test.size()
            << " queries to " << out_dir.string() << '\n';
  return kOk;
}

int run_synth_emg(const SynthEmgSpec& spec, const fs::path& out_file) {
  write_text_file(out_file, synth_emg_csv(spec));
  std::cout << "wrote " << spec.raw_rows << " rows to " << out_file.string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hyperdimensional classifiers on ideal and simulated in-memory hardware"};
  app.require_subcommand(1);

  auto* train = app.add_subcommand("train", "train a model and write the model file");
  ConfigFlags train_flags(*train);
  std::string train_model_path;
  std::string stats_path;
  std::string conductance_path;
  train->add_option("-m,--model", train_model_path, "output model file")->required();
  train->add_option("--stats", stats_path, "also write per-class statistics CSV here");
  train->add_option("--export-conductance", conductance_path,
                    "write the programmed AM crossbar conductances (S) as CSV");

  auto* infer = app.add_subcommand("infer", "classify the test split and write reports");
  ConfigFlags infer_flags(*infer);
  std::string infer_model_path;
  std::string infer_out = "report";
  infer->add_option("-m,--model", infer_model_path, "model file")->required();
  infer->add_option("-o,--out", infer_out, "report directory")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "accuracy over partition factors and noise settings");
  ConfigFlags sweep_flags(*sweep);
  SweepOptions sweep_opts;
  std::string sweep_out = "sweep";
  sweep->add_option("-m,--model", sweep_opts.model_path, "model file (trained if omitted)");
  sweep->add_option("--f-list", sweep_opts.partitions, "partition factors")->capture_default_str();
  sweep->add_option("--gradients", sweep_opts.gradients, "spatial gradients, e.g. 0,0.1,0.2");
  sweep->add_option("--metrics", sweep_opts.metrics, "dotp,invhamm");
  sweep->add_option("--encoders", sweep_opts.encoders, "e.g. all_minterm,two_minterm");
  sweep->add_flag("--no-ideal", sweep_opts.no_ideal, "skip the ideal-backend baseline rows");
  sweep->add_option("-o,--out", sweep_out, "report directory")->capture_default_str();

  auto* synth = app.add_subcommand("synth-gen", "write a synthetic corpus");
  synth->require_subcommand(1);
  auto* synth_text = synth->add_subcommand("text", "text corpus with train/test manifests");
  ConfigFlags synth_flags(*synth_text);
  std::string synth_out;
  synth_text->add_option("-o,--out", synth_out, "output directory")->required();
  auto* synth_emg = synth->add_subcommand("emg", "EMG recording CSV");
  SynthEmgSpec emg_spec;
  std::string emg_out;
  synth_emg->add_option("-o,--out", emg_out, "output CSV file")->required();
  synth_emg->add_option("--classes", emg_spec.classes, "gestures")->capture_default_str();
  synth_emg->add_option("--seed", emg_spec.seed, "seed")->capture_default_str();
  synth_emg->add_option("--rows", emg_spec.raw_rows, "raw rows")->capture_default_str();
  synth_emg->add_option("--hold-rows", emg_spec.hold_rows, "raw rows per gesture block")
      ->capture_default_str();
  synth_emg->add_option("--level-sigma", emg_spec.level_sigma, "level noise")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train) return run_train(train_flags, train_model_path, stats_path, conductance_path);
    if (*infer) return run_infer(infer_flags, infer_model_path, infer_out);
    if (*sweep) return run_sweep_cmd(sweep_flags, sweep_opts, sweep_out);
    if (*synth_text) return run_synth_text(synth_flags, synth_out);
    if (*synth_emg) return run_synth_emg(emg_spec, emg_out);
  } catch (const IngestError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIngest;
  } catch (const TrainingError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kIngest;
  } catch (const EncodeError& e) {
    std::cerr << "encode error: " << e.what() << '\n';
    return kIngest;
  } catch (const ConfigMismatch& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kMismatch;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kMismatch;
  } catch (const LookupError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kMismatch;
  } catch (const InvariantBreach& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInvariant;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad value: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInvariant;
  }
  return kUsage;
}
