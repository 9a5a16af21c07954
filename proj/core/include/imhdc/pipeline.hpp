#pragma once

// End-to-end learning and inference for the language, news, EMG and
// synthetic tasks on either backend: the ideal digital reference or the
// crossbar simulator.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "imhdc/assoc_memory.hpp"
#include "imhdc/crossbar.hpp"
#include "imhdc/datasets.hpp"
#include "imhdc/encoder.hpp"
#include "imhdc/model_io.hpp"

namespace imhdc {

enum class Backend { ideal, crossbar };

std::string_view to_string(Backend backend);
Backend parse_backend(std::string_view text);

// Relative data paths resolve against this variable when the config does not
// set data_root.
inline constexpr const char* kDataRootEnv = "IMHDC_DATA_ROOT";

struct RunConfig {
  Task task = Task::synth;
  std::size_t dim = 10000;
  EncoderConfig encoder;
  Metric metric = Metric::dotp;
  Backend backend = Backend::ideal;
  std::size_t partitions = 10;
  NoiseModel noise;
  Peripherals periph;
  ComplementShift complement_shift = ComplementShift::same;
  std::uint64_t seed = 1;         // item memories
  std::uint64_t layout_seed = 1;  // partition permutations

  std::filesystem::path data_root;
  std::filesystem::path train_manifest;
  std::filesystem::path test_manifest;
  std::filesystem::path emg_file;
  std::size_t emg_downsample = 175;
  double emg_train_fraction = kEmgTrainFraction;
  SynthSpec synth;

  std::size_t workers = 1;
  std::size_t max_queries = 0;  // 0: all

  // language n=4, news n=5, emg n=5, synth n=4; d=10000 everywhere.
  static RunConfig defaults_for(Task task);
  void validate() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

nlohmann::json to_json(const RunConfig& cfg);
// Overrides the fields present in j. Unknown keys and bad values throw
// ConfigMismatch.
void apply_json(RunConfig& cfg, const nlohmann::json& j);
void apply_config_file(RunConfig& cfg, const std::filesystem::path& path);

std::filesystem::path resolve_data_path(const RunConfig& cfg, const std::filesystem::path& p);

struct TaskData {
  Task task = Task::synth;
  std::vector<std::string> classes;
  TextDataset text;
  EmgDataset emg;

  [[nodiscard]] std::size_t query_count() const;
};

TaskData load_task_data(const RunConfig& cfg);

struct ClassStats {
  std::string label;
  std::uint64_t ngrams = 0;
  std::size_t prototype_popcount = 0;
};

Model train_model(const RunConfig& cfg, const TaskData& data,
                  std::vector<ClassStats>* stats = nullptr);

// Throws ConfigMismatch when the model was trained with a different task,
// dimension or encoder.
void check_compatible(const Model& model, const RunConfig& cfg);

// Runs fn(i) for i < count on `workers` threads; the first exception is
// rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& fn);

// True when the crossbar backend also encodes queries in memory: text tasks
// with the two-minterm encoder and plain shifts.
bool uses_crossbar_encoder(const RunConfig& cfg);

struct EncodedQueries {
  std::vector<Hypervector> vectors;
  std::vector<std::size_t> labels;  // indices into the model's classes
  std::size_t skipped_short = 0;    // shorter than n
};

EncodedQueries encode_queries(const Model& model, const TaskData& data, const RunConfig& cfg);
EncodedQueries encode_queries(const Model& model, const TaskData& data, const RunConfig& cfg,
                              const NoiseModel& noise);

std::vector<std::size_t> classify_queries(const Model& model,
                                          std::span<const Hypervector> queries,
                                          const RunConfig& cfg);

struct Evaluation {
  std::vector<std::string> classes;
  std::vector<std::size_t> truth;
  std::vector<std::size_t> predicted;
  std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
  std::size_t skipped_short = 0;

  [[nodiscard]] std::size_t correct() const;
  [[nodiscard]] double accuracy() const;
};

Evaluation evaluate(const Model& model, const TaskData& data, const RunConfig& cfg);
Evaluation score(std::vector<std::string> classes, std::vector<std::size_t> truth,
                 std::vector<std::size_t> predicted);

struct SweepGrid {
  std::vector<std::size_t> partitions{1, 2, 10};
  std::vector<double> gradients{0.10};
  std::vector<Metric> metrics{Metric::dotp};
  std::vector<EncoderKind> encoders;  // empty: the config's encoder
  bool ideal_baseline = true;
};

struct SweepRow {
  EncoderKind encoder = EncoderKind::exact;
  Metric metric = Metric::dotp;
  Backend backend = Backend::ideal;
  std::size_t partitions = 0;  // 0 on ideal rows
  double gradient = 0.0;
  std::size_t queries = 0;
  std::size_t correct = 0;
  double accuracy = 0.0;
};

// One row per (encoder, metric) on the ideal backend and one per
// (encoder, gradient, metric, f) on the crossbar backend. A model whose
// encoder matches is reused; other encoders are trained from `data`.
std::vector<SweepRow> run_sweep(const RunConfig& cfg, const TaskData& data, const SweepGrid& grid,
                                const Model* trained = nullptr);

}  // namespace imhdc
