#pragma once

// Versioned binary model file:
//
//   "IMHDCMDL"  u32 version  u32 header_len  header (JSON, UTF-8)
//   item memory:    u32 count, then per symbol: u32 len, bytes, hypervector
//   continuous IM:  u8 present [u32 levels, hypervectors]
//   tie vector:     u8 present [hypervector]
//   assoc. memory:  u32 classes, then per class: u32 len, label bytes, hypervector
//
// Integers are little-endian; hypervectors use append_serialized().

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "imhdc/assoc_memory.hpp"
#include "imhdc/encoder.hpp"
#include "imhdc/item_memory.hpp"

namespace imhdc {

enum class Task { language, news, emg, synth };

std::string_view to_string(Task task);
Task parse_task(std::string_view text);

inline constexpr std::string_view kModelMagic = "IMHDCMDL";
inline constexpr std::uint32_t kModelVersion = 1;

struct Model {
  Task task = Task::synth;
  std::size_t dim = 0;
  EncoderConfig encoder;
  Metric metric = Metric::dotp;
  std::uint64_t seed = 0;
  ItemMemory im;
  std::optional<ContinuousItemMemory> cim;
  std::optional<Hypervector> tie;
  AssociativeMemory am;

  friend bool operator==(const Model&, const Model&) = default;
};

std::vector<std::uint8_t> serialize_model(const Model& model);
// Throws ConfigMismatch on a bad magic, version or layout.
Model deserialize_model(std::span<const std::uint8_t> bytes);

void write_model(const Model& model, const std::filesystem::path& path);
// Throws IngestError if the file cannot be read.
Model read_model(const std::filesystem::path& path);

// Git blob id: SHA-1 of "blob <size>\0" followed by the bytes.
std::string content_hash(std::span<const std::uint8_t> bytes);

}  // namespace imhdc
