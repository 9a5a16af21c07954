#include "imhdc/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "imhdc/errors.hpp"
#include "imhdc/rng.hpp"

namespace imhdc {

using nlohmann::json;

std::string format_fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

namespace {

std::vector<std::size_t> support_of(const Evaluation& ev) {
  std::vector<std::size_t> support(ev.classes.size(), 0);
  for (std::size_t t : ev.truth) ++support[t];
  return support;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

std::string per_class_csv(const Evaluation& ev) {
  std::ostringstream os;
  os << "class,support,correct,accuracy\n";
  const auto support = support_of(ev);
  for (std::size_t c = 0; c < ev.classes.size(); ++c) {
    const std::size_t hits = ev.confusion[c][c];
    os << ev.classes[c] << ',' << support[c] << ',' << hits << ','
       << format_fixed(ratio(hits, support[c])) << '\n';
  }
  os << "overall," << ev.truth.size() << ',' << ev.correct() << ','
     << format_fixed(ev.accuracy()) << '\n';
  return os.str();
}

std::string confusion_csv(const Evaluation& ev) {
  std::ostringstream os;
  os << "truth\\predicted";
  for (const auto& c : ev.classes) os << ',' << c;
  os << '\n';
  for (std::size_t t = 0; t < ev.classes.size(); ++t) {
    os << ev.classes[t];
    for (std::size_t count : ev.confusion[t]) os << ',' << count;
    os << '\n';
  }
  return os.str();
}

std::string train_stats_csv(std::span<const ClassStats> stats) {
  std::ostringstream os;
  os << "class,ngrams,prototype_ones\n";
  for (const auto& s : stats) os << s.label << ',' << s.ngrams << ',' << s.prototype_popcount << '\n';
  return os.str();
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  std::ostringstream os;
  os << "encoder,metric,backend,partitions,gradient,queries,correct,accuracy\n";
  for (const auto& r : rows) {
    os << to_string(r.encoder) << ',' << to_string(r.metric) << ',' << to_string(r.backend) << ','
       << r.partitions << ',' << format_fixed(r.gradient) << ',' << r.queries << ','
       << r.correct << ',' << format_fixed(r.accuracy) << '\n';
  }
  return os.str();
}

json run_metadata(const RunConfig& cfg, const std::string& model_hash) {
  return {
      {"config", to_json(cfg)},
      {"generator", {{"name", rng::kGeneratorName}, {"version", rng::kGeneratorVersion}}},
      {"seeds",
       {{"item_memory", cfg.seed},
        {"layout", cfg.layout_seed},
        {"noise", cfg.noise.seed},
        {"synth", cfg.synth.seed}}},
      {"model_hash", model_hash},
      {"model_format_version", kModelVersion},
  };
}

json infer_json(const RunConfig& cfg, const std::string& model_hash, const Evaluation& ev,
                bool crossbar_encoder) {
  json j = run_metadata(cfg, model_hash);
  const auto support = support_of(ev);
  json per_class = json::array();
  for (std::size_t c = 0; c < ev.classes.size(); ++c) {
    per_class.push_back({{"class", ev.classes[c]},
                         {"support", support[c]},
                         {"correct", ev.confusion[c][c]},
                         {"accuracy", ratio(ev.confusion[c][c], support[c])}});
  }
  j["results"] = {
      {"queries", ev.truth.size()},
      {"skipped_short", ev.skipped_short},
      {"correct", ev.correct()},
      {"accuracy", ev.accuracy()},
      {"crossbar_encoder", crossbar_encoder},
      {"per_class", per_class},
      {"confusion", ev.confusion},
  };
  return j;
}

json sweep_json(const RunConfig& cfg, const std::string& model_hash,
                std::span<const SweepRow> rows) {
  json j = run_metadata(cfg, model_hash);
  json table = json::array();
  for (const auto& r : rows) {
    table.push_back({{"encoder", to_string(r.encoder)},
                     {"metric", to_string(r.metric)},
                     {"backend", to_string(r.backend)},
                     {"partitions", r.partitions},
                     {"gradient", r.gradient},
                     {"queries", r.queries},
                     {"correct", r.correct},
                     {"accuracy", r.accuracy}});
  }
  j["rows"] = table;
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IngestError("write failed for '" + path.string() + "'");
}

}  // namespace imhdc
