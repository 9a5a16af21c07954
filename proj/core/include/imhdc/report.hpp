#pragma once

// Deterministic run reports: CSV for tables, JSON for run metadata. Nothing
// time- or host-dependent is written, so identical runs give identical bytes.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "imhdc/pipeline.hpp"

namespace imhdc {

// Fixed six-decimal rendering used in every CSV.
std::string format_fixed(double value);

// class,support,correct,accuracy, one row per class and a final "overall" row.
std::string per_class_csv(const Evaluation& ev);
// Header "truth\predicted" then one row per true class.
std::string confusion_csv(const Evaluation& ev);
std::string train_stats_csv(std::span<const ClassStats> stats);
std::string sweep_csv(std::span<const SweepRow> rows);

nlohmann::json run_metadata(const RunConfig& cfg, const std::string& model_hash);
nlohmann::json infer_json(const RunConfig& cfg, const std::string& model_hash,
                          const Evaluation& ev, bool crossbar_encoder);
nlohmann::json sweep_json(const RunConfig& cfg, const std::string& model_hash,
                          std::span<const SweepRow> rows);

void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace imhdc
