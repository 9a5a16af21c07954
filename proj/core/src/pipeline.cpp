#include "imhdc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "imhdc/errors.hpp"
#include "imhdc/rng.hpp"

namespace imhdc {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view to_string(Backend backend) {
  return backend == Backend::ideal ? "ideal" : "crossbar";
}

Backend parse_backend(std::string_view text) {
  if (text == "ideal") return Backend::ideal;
  if (text == "crossbar") return Backend::crossbar;
  throw InvalidArgument("unknown backend '" + std::string(text) + "'");
}

RunConfig RunConfig::defaults_for(Task task) {
  RunConfig cfg;
  cfg.task = task;
  cfg.encoder.n = (task == Task::news || task == Task::emg) ? 5 : 4;
  return cfg;
}

void RunConfig::validate() const {
  if (dim == 0) throw InvalidArgument("dimension must be >= 1");
  encoder.validate();
  noise.validate();
  periph.validate();
  if (partitions == 0) throw InvalidArgument("partition factor must be >= 1");
  if (backend == Backend::crossbar && dim % partitions != 0) {
    throw InvalidArgument("partition factor " + std::to_string(partitions) +
                          " does not divide d = " + std::to_string(dim));
  }
  if (workers == 0) throw InvalidArgument("worker count must be >= 1");
  if (emg_downsample == 0) throw InvalidArgument("EMG down-sampling factor must be >= 1");
  if (!(emg_train_fraction > 0.0 && emg_train_fraction < 1.0)) {
    throw InvalidArgument("EMG train fraction must lie in (0, 1)");
  }
}

json to_json(const RunConfig& c) {
  json noise = {
      {"g_set_mean", c.noise.g_set_mean},
      {"g_set_sigma", c.noise.g_set_sigma},
      {"g_reset_mean", c.noise.g_reset_mean},
      {"g_reset_sigma", c.noise.g_reset_sigma},
      {"gradient_cols", c.noise.gradient_cols},
      {"gradient_rows", c.noise.gradient_rows},
      {"read_noise_sigma", c.noise.read_noise_sigma},
      {"drift_exponent", c.noise.drift_exponent},
      {"drift_time_ratio", c.noise.drift_time_ratio},
      {"seed", c.noise.seed},
  };
  json periph = {
      {"read_voltage", c.periph.read_voltage},
      {"adc_bits", c.periph.adc_bits},
      {"adc_bypass", c.periph.adc_bypass},
      {"adc_full_scale", c.periph.adc_full_scale ? json(*c.periph.adc_full_scale) : json(nullptr)},
      {"sense_threshold",
       c.periph.sense_threshold ? json(*c.periph.sense_threshold) : json(nullptr)},
  };
  json synth = {
      {"classes", c.synth.classes},
      {"seed", c.synth.seed},
      {"train_length", c.synth.train_length},
      {"test_per_class", c.synth.test_per_class},
      {"test_length", c.synth.test_length},
      {"mixing", c.synth.mixing},
  };
  return {
      {"task", to_string(c.task)},
      {"dim", c.dim},
      {"n", c.encoder.n},
      {"encoder", to_string(c.encoder.kind)},
      {"permutation", to_string(c.encoder.permutation)},
      {"metric", to_string(c.metric)},
      {"backend", to_string(c.backend)},
      {"partitions", c.partitions},
      {"noise", noise},
      {"peripherals", periph},
      {"complement_shift", to_string(c.complement_shift)},
      {"seed", c.seed},
      {"layout_seed", c.layout_seed},
      {"data_root", c.data_root.generic_string()},
      {"train_manifest", c.train_manifest.generic_string()},
      {"test_manifest", c.test_manifest.generic_string()},
      {"emg_file", c.emg_file.generic_string()},
      {"emg_downsample", c.emg_downsample},
      {"emg_train_fraction", c.emg_train_fraction},
      {"synth", synth},
      {"max_queries", c.max_queries},
  };
}

namespace {

template <class T>
void take(const json& j, std::string_view key, T& field) {
  if (auto it = j.find(key); it != j.end()) field = it->template get<T>();
}

void take_path(const json& j, std::string_view key, fs::path& field) {
  if (auto it = j.find(key); it != j.end()) field = it->get<std::string>();
}

void take_optional(const json& j, std::string_view key, std::optional<double>& field) {
  if (auto it = j.find(key); it != j.end()) {
    if (it->is_null()) {
      field.reset();
    } else {
      field = it->get<double>();
    }
  }
}

void reject_unknown(const json& j, std::initializer_list<std::string_view> known,
                    std::string_view where) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigMismatch("unknown config key '" + std::string(where) + key + "'");
    }
  }
}

}  // namespace

void apply_json(RunConfig& c, const json& j) {
  try {
    if (!j.is_object()) throw ConfigMismatch("config must be a JSON object");
    reject_unknown(j,
                   {"task", "dim", "n", "encoder", "permutation", "metric", "backend",
                    "partitions", "noise", "peripherals", "complement_shift", "seed",
                    "layout_seed", "data_root", "train_manifest", "test_manifest", "emg_file",
                    "emg_downsample", "emg_train_fraction", "synth", "workers", "max_queries"},
                   "");
    if (auto it = j.find("task"); it != j.end()) c.task = parse_task(it->get<std::string>());
    take(j, "dim", c.dim);
    take(j, "n", c.encoder.n);
    if (auto it = j.find("encoder"); it != j.end()) {
      c.encoder.kind = parse_encoder_kind(it->get<std::string>());
    }
    if (auto it = j.find("permutation"); it != j.end()) {
      c.encoder.permutation = parse_permutation_mode(it->get<std::string>());
    }
    if (auto it = j.find("metric"); it != j.end()) c.metric = parse_metric(it->get<std::string>());
    if (auto it = j.find("backend"); it != j.end()) {
      c.backend = parse_backend(it->get<std::string>());
    }
    take(j, "partitions", c.partitions);
    if (auto it = j.find("noise"); it != j.end()) {
      const json& n = *it;
      reject_unknown(n,
                     {"g_set_mean", "g_set_sigma", "g_reset_mean", "g_reset_sigma",
                      "gradient_cols", "gradient_rows", "read_noise_sigma", "drift_exponent",
                      "drift_time_ratio", "seed", "ideal"},
                     "noise.");
      if (n.value("ideal", false)) {
        const auto seed = c.noise.seed;
        c.noise = NoiseModel::ideal();
        c.noise.seed = seed;
      }
      take(n, "g_set_mean", c.noise.g_set_mean);
      take(n, "g_set_sigma", c.noise.g_set_sigma);
      take(n, "g_reset_mean", c.noise.g_reset_mean);
      take(n, "g_reset_sigma", c.noise.g_reset_sigma);
      take(n, "gradient_cols", c.noise.gradient_cols);
      take(n, "gradient_rows", c.noise.gradient_rows);
      take(n, "read_noise_sigma", c.noise.read_noise_sigma);
      take(n, "drift_exponent", c.noise.drift_exponent);
      take(n, "drift_time_ratio", c.noise.drift_time_ratio);
      take(n, "seed", c.noise.seed);
    }
    if (auto it = j.find("peripherals"); it != j.end()) {
      const json& p = *it;
      reject_unknown(p, {"read_voltage", "adc_bits", "adc_bypass", "adc_full_scale",
                         "sense_threshold"},
                     "peripherals.");
      take(p, "read_voltage", c.periph.read_voltage);
      take(p, "adc_bits", c.periph.adc_bits);
      take(p, "adc_bypass", c.periph.adc_bypass);
      take_optional(p, "adc_full_scale", c.periph.adc_full_scale);
      take_optional(p, "sense_threshold", c.periph.sense_threshold);
    }
    if (auto it = j.find("complement_shift"); it != j.end()) {
      c.complement_shift = parse_complement_shift(it->get<std::string>());
    }
    take(j, "seed", c.seed);
    take(j, "layout_seed", c.layout_seed);
    take_path(j, "data_root", c.data_root);
    take_path(j, "train_manifest", c.train_manifest);
    take_path(j, "test_manifest", c.test_manifest);
    take_path(j, "emg_file", c.emg_file);
    take(j, "emg_downsample", c.emg_downsample);
    take(j, "emg_train_fraction", c.emg_train_fraction);
    if (auto it = j.find("synth"); it != j.end()) {
      const json& s = *it;
      reject_unknown(s, {"classes", "seed", "train_length", "test_per_class", "test_length",
                         "mixing"},
                     "synth.");
      take(s, "classes", c.synth.classes);
      take(s, "seed", c.synth.seed);
      take(s, "train_length", c.synth.train_length);
      take(s, "test_per_class", c.synth.test_per_class);
      take(s, "test_length", c.synth.test_length);
      take(s, "mixing", c.synth.mixing);
    }
    take(j, "workers", c.workers);
    take(j, "max_queries", c.max_queries);
  } catch (const json::exception& e) {
    throw ConfigMismatch(std::string("config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigMismatch(std::string("config: ") + e.what());
  }
}

void apply_config_file(RunConfig& cfg, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot read config file '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigMismatch("config file '" + path.string() + "': " + e.what());
  }
  apply_json(cfg, j);
}

fs::path resolve_data_path(const RunConfig& cfg, const fs::path& p) {
  if (p.empty() || p.is_absolute()) return p;
  fs::path root = cfg.data_root;
  if (root.empty()) {
    if (const char* env = std::getenv(kDataRootEnv); env != nullptr) root = env;
  }
  return root.empty() ? p : root / p;
}

std::size_t TaskData::query_count() const {
  return task == Task::emg ? emg.queries.size() : text.test.size();
}

TaskData load_task_data(const RunConfig& cfg) {
  TaskData data;
  data.task = cfg.task;
  switch (cfg.task) {
    case Task::synth:
      data.text = synth_corpus(cfg.synth);
      break;
    case Task::language:
    case Task::news: {
      if (cfg.train_manifest.empty() || cfg.test_manifest.empty()) {
        throw IngestError("text tasks need train_manifest and test_manifest");
      }
      const auto train = resolve_data_path(cfg, cfg.train_manifest);
      const auto test = resolve_data_path(cfg, cfg.test_manifest);
      data.text = cfg.task == Task::language ? load_language(train, test) : load_news(train, test);
      break;
    }
    case Task::emg: {
      if (cfg.emg_file.empty()) throw IngestError("the EMG task needs emg_file");
      data.emg = load_emg(resolve_data_path(cfg, cfg.emg_file), cfg.emg_downsample,
                          cfg.encoder.n, cfg.emg_train_fraction);
      for (int label : data.emg.classes) data.classes.push_back(std::to_string(label));
      break;
    }
  }
  if (cfg.task != Task::emg) data.classes = data.text.classes;
  if (cfg.max_queries != 0) {
    if (data.text.test.size() > cfg.max_queries) data.text.test.resize(cfg.max_queries);
    if (data.emg.queries.size() > cfg.max_queries) data.emg.queries.resize(cfg.max_queries);
  }
  return data;
}

namespace {

struct EmgMemories {
  ItemMemory channels;
  ContinuousItemMemory levels;
  Hypervector tie;
};

EmgMemories make_emg_memories(std::size_t dim, std::uint64_t seed) {
  return {generate_im({"ch1", "ch2", "ch3", "ch4"}, dim, seed),
          generate_cim(kEmgLevels, dim, seed),
          Hypervector::random(dim, rng::derive(seed, "emg-tie"))};
}

std::vector<Hypervector> spatial_items(const Model& model, std::span<const EmgSample> samples) {
  std::vector<Hypervector> items;
  items.reserve(samples.size());
  for (const auto& s : samples) items.push_back(spatial_encode_emg(s, model.im, *model.cim, *model.tie));
  return items;
}

std::size_t class_index(const std::map<std::string, std::size_t, std::less<>>& index,
                        std::string_view label) {
  auto it = index.find(label);
  if (it == index.end()) {
    throw ConfigMismatch("query label '" + std::string(label) + "' is not a model class");
  }
  return it->second;
}

std::map<std::string, std::size_t, std::less<>> index_labels(const std::vector<std::string>& labels) {
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  return index;
}

}  // namespace

Model train_model(const RunConfig& cfg, const TaskData& data, std::vector<ClassStats>* stats) {
  cfg.validate();
  if (data.task != cfg.task) throw InvalidArgument("data was loaded for a different task");
  if (data.classes.empty()) throw TrainingError("no classes to train");

  const auto index = index_labels(data.classes);
  Trainer trainer(data.classes, cfg.dim, cfg.encoder);
  std::optional<ItemMemory> im;
  std::optional<ContinuousItemMemory> cim;
  std::optional<Hypervector> tie;

  if (cfg.task == Task::emg) {
    auto mem = make_emg_memories(cfg.dim, cfg.seed);
    Model probe{cfg.task, cfg.dim, cfg.encoder, cfg.metric, cfg.seed, mem.channels, mem.levels,
                mem.tie, AssociativeMemory({"probe"}, {Hypervector(cfg.dim)})};
    for (const auto& rec : data.emg.train) {
      const auto items = spatial_items(probe, rec.samples);
      trainer.add_items(class_index(index, std::to_string(rec.label)), items);
    }
    im = std::move(mem.channels);
    cim = std::move(mem.levels);
    tie = std::move(mem.tie);
  } else {
    im = generate_im(text_symbol_names(), cfg.dim, cfg.seed);
    const NgramEncoder encoder(*im, cfg.encoder);
    for (const auto& rec : data.text.train) {
      trainer.add_symbols(class_index(index, rec.label), rec.symbols, encoder);
    }
  }

  Model model{cfg.task, cfg.dim, cfg.encoder, cfg.metric, cfg.seed, std::move(*im),
              std::move(cim), std::move(tie), trainer.finish()};
  if (stats != nullptr) {
    stats->clear();
    for (std::size_t i = 0; i < data.classes.size(); ++i) {
      stats->push_back({data.classes[i], trainer.ngram_count(i), popcount(model.am.prototype(i))});
    }
  }
  return model;
}

void check_compatible(const Model& model, const RunConfig& cfg) {
  auto mismatch = [](std::string_view what, const std::string& model_value,
                     const std::string& config_value) {
    throw ConfigMismatch(std::string(what) + " mismatch: model has " + model_value +
                         ", config has " + config_value);
  };
  if (model.task != cfg.task) {
    mismatch("task", std::string(to_string(model.task)), std::string(to_string(cfg.task)));
  }
  if (model.dim != cfg.dim) mismatch("dimension", std::to_string(model.dim), std::to_string(cfg.dim));
  if (model.encoder.n != cfg.encoder.n) {
    mismatch("n-gram size", std::to_string(model.encoder.n), std::to_string(cfg.encoder.n));
  }
  if (model.encoder.kind != cfg.encoder.kind) {
    mismatch("encoder", std::string(to_string(model.encoder.kind)),
             std::string(to_string(cfg.encoder.kind)));
  }
  if (model.encoder.permutation != cfg.encoder.permutation) {
    mismatch("permutation", std::string(to_string(model.encoder.permutation)),
             std::string(to_string(cfg.encoder.permutation)));
  }
  if (model.seed != cfg.seed) {
    mismatch("item-memory seed", std::to_string(model.seed), std::to_string(cfg.seed));
  }
}

void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

bool uses_crossbar_encoder(const RunConfig& cfg) {
  return cfg.backend == Backend::crossbar && cfg.task != Task::emg &&
         cfg.encoder.kind == EncoderKind::two_minterm &&
         cfg.encoder.permutation == PermutationMode::plain_shift && cfg.encoder.n >= 2;
}

EncodedQueries encode_queries(const Model& model, const TaskData& data, const RunConfig& cfg) {
  return encode_queries(model, data, cfg, cfg.noise);
}

EncodedQueries encode_queries(const Model& model, const TaskData& data, const RunConfig& cfg,
                              const NoiseModel& noise) {
  check_compatible(model, cfg);
  const auto index = index_labels(model.am.labels());
  const std::size_t n = cfg.encoder.n;
  EncodedQueries out;

  // Select the encodable queries first so that results do not depend on the
  // worker count.
  std::vector<std::size_t> keep;
  if (cfg.task == Task::emg) {
    for (std::size_t i = 0; i < data.emg.queries.size(); ++i) {
      if (data.emg.queries[i].samples.size() >= n) {
        keep.push_back(i);
        out.labels.push_back(class_index(index, std::to_string(data.emg.queries[i].label)));
      } else {
        ++out.skipped_short;
      }
    }
  } else {
    for (std::size_t i = 0; i < data.text.test.size(); ++i) {
      if (data.text.test[i].symbols.size() >= n) {
        keep.push_back(i);
        out.labels.push_back(class_index(index, data.text.test[i].label));
      } else {
        ++out.skipped_short;
      }
    }
  }

  out.vectors.assign(keep.size(), Hypervector(model.dim));
  if (cfg.task == Task::emg) {
    parallel_for(keep.size(), cfg.workers, [&](std::size_t q) {
      const auto items = spatial_items(model, data.emg.queries[keep[q]].samples);
      out.vectors[q] = encode_items(items, cfg.encoder);
    });
  } else if (uses_crossbar_encoder(cfg)) {
    const ImCrossbar xbar(model.im, noise, cfg.periph, cfg.complement_shift);
    parallel_for(keep.size(), cfg.workers, [&](std::size_t q) {
      out.vectors[q] = xbar.encode_sequence(data.text.test[keep[q]].symbols, cfg.encoder, keep[q]);
    });
  } else {
    const NgramEncoder encoder(model.im, cfg.encoder);
    parallel_for(keep.size(), cfg.workers, [&](std::size_t q) {
      out.vectors[q] = encoder.encode_sequence(data.text.test[keep[q]].symbols);
    });
  }
  return out;
}

std::vector<std::size_t> classify_queries(const Model& model, std::span<const Hypervector> queries,
                                          const RunConfig& cfg) {
  std::vector<std::size_t> predicted(queries.size());
  if (cfg.backend == Backend::ideal) {
    parallel_for(queries.size(), cfg.workers,
                 [&](std::size_t q) { predicted[q] = model.am.classify(queries[q], cfg.metric); });
  } else {
    const AmCrossbar am(model.am, cfg.partitions, cfg.layout_seed, cfg.noise, cfg.periph,
                        cfg.metric == Metric::invhamm);
    parallel_for(queries.size(), cfg.workers,
                 [&](std::size_t q) { predicted[q] = am.search(queries[q], cfg.metric, q); });
  }
  return predicted;
}

std::size_t Evaluation::correct() const {
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) hits += truth[i] == predicted[i] ? 1 : 0;
  return hits;
}

double Evaluation::accuracy() const {
  return truth.empty() ? 0.0 : static_cast<double>(correct()) / static_cast<double>(truth.size());
}

Evaluation score(std::vector<std::string> classes, std::vector<std::size_t> truth,
                 std::vector<std::size_t> predicted) {
  if (truth.size() != predicted.size()) throw InvalidArgument("score: length mismatch");
  Evaluation ev;
  ev.confusion.assign(classes.size(), std::vector<std::size_t>(classes.size(), 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] >= classes.size() || predicted[i] >= classes.size()) {
      throw InvalidArgument("score: class index out of range");
    }
    ++ev.confusion[truth[i]][predicted[i]];
  }
  ev.classes = std::move(classes);
  ev.truth = std::move(truth);
  ev.predicted = std::move(predicted);
  return ev;
}

Evaluation evaluate(const Model& model, const TaskData& data, const RunConfig& cfg) {
  cfg.validate();
  auto queries = encode_queries(model, data, cfg);
  auto predicted = classify_queries(model, queries.vectors, cfg);
  auto ev = score(model.am.labels(), std::move(queries.labels), std::move(predicted));
  ev.skipped_short = queries.skipped_short;
  return ev;
}

std::vector<SweepRow> run_sweep(const RunConfig& cfg, const TaskData& data, const SweepGrid& grid,
                                const Model* trained) {
  cfg.validate();
  std::vector<EncoderKind> encoders = grid.encoders;
  if (encoders.empty()) encoders.push_back(cfg.encoder.kind);
  std::vector<SweepRow> rows;

  for (EncoderKind kind : encoders) {
    RunConfig run = cfg;
    run.encoder.kind = kind;
    std::optional<Model> own;
    if (trained == nullptr || trained->encoder != run.encoder) own = train_model(run, data);
    const Model& model = own ? *own : *trained;

    if (grid.ideal_baseline) {
      run.backend = Backend::ideal;
      const auto queries = encode_queries(model, data, run);
      for (Metric metric : grid.metrics) {
        run.metric = metric;
        const auto ev = score(model.am.labels(), queries.labels,
                              classify_queries(model, queries.vectors, run));
        rows.push_back({kind, metric, Backend::ideal, 0, 0.0, ev.truth.size(), ev.correct(),
                        ev.accuracy()});
      }
    }

    run.backend = Backend::crossbar;
    std::optional<EncodedQueries> shared;
    for (double gradient : grid.gradients) {
      run.noise = cfg.noise;
      run.noise.gradient_cols = gradient;
      // Software-encoded queries do not depend on the noise setting.
      if (uses_crossbar_encoder(run)) {
        shared = encode_queries(model, data, run, run.noise);
      } else if (!shared) {
        RunConfig soft = run;
        soft.backend = Backend::ideal;
        shared = encode_queries(model, data, soft);
      }
      for (Metric metric : grid.metrics) {
        run.metric = metric;
        for (std::size_t f : grid.partitions) {
          run.partitions = f;
          run.validate();
          const auto ev = score(model.am.labels(), shared->labels,
                                classify_queries(model, shared->vectors, run));
          rows.push_back({kind, metric, Backend::crossbar, f, gradient, ev.truth.size(),
                          ev.correct(), ev.accuracy()});
        }
      }
    }
  }
  return rows;
}

}  // namespace imhdc
