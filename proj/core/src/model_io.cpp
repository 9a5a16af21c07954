#include "imhdc/model_io.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "imhdc/errors.hpp"
#include "imhdc/rng.hpp"

namespace imhdc {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_string(std::vector<std::uint8_t>& out, std::string_view s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.insert(out.end(), s.begin(), s.end());
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void need(std::size_t n) const {
    if (offset_ + n > bytes_.size()) throw ConfigMismatch("model file is truncated");
  }
  std::uint8_t u8() {
    need(1);
    return bytes_[offset_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[offset_ + i]) << (8 * i);
    offset_ += 4;
    return v;
  }
  std::string string(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + offset_), n);
    offset_ += n;
    return s;
  }
  Hypervector vector() {
    try {
      return parse_serialized(bytes_, offset_);
    } catch (const InvalidArgument& e) {
      throw ConfigMismatch(std::string("model file: ") + e.what());
    }
  }
  [[nodiscard]] bool done() const { return offset_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t offset_ = 0;
};

nlohmann::json header_of(const Model& m) {
  nlohmann::json h{
      {"task", to_string(m.task)},
      {"dim", m.dim},
      {"n", m.encoder.n},
      {"encoder", to_string(m.encoder.kind)},
      {"permutation", to_string(m.encoder.permutation)},
      {"metric", to_string(m.metric)},
      {"classes", m.am.classes()},
      {"seed", m.seed},
      {"generator", std::string(rng::kGeneratorName) + "/v" + std::to_string(rng::kGeneratorVersion)},
  };
  if (m.cim) h["cim_seed"] = m.cim->seed();
  return h;
}

}  // namespace

std::string_view to_string(Task task) {
  switch (task) {
    case Task::language: return "language";
    case Task::news: return "news";
    case Task::emg: return "emg";
    case Task::synth: return "synth";
  }
  return "?";
}

Task parse_task(std::string_view text) {
  if (text == "language") return Task::language;
  if (text == "news") return Task::news;
  if (text == "emg") return Task::emg;
  if (text == "synth") return Task::synth;
  throw InvalidArgument("unknown task '" + std::string(text) + "'");
}

std::vector<std::uint8_t> serialize_model(const Model& m) {
  std::vector<std::uint8_t> out(kModelMagic.begin(), kModelMagic.end());
  put_u32(out, kModelVersion);
  put_string(out, header_of(m).dump());

  put_u32(out, static_cast<std::uint32_t>(m.im.size()));
  for (std::size_t i = 0; i < m.im.size(); ++i) {
    put_string(out, m.im.symbols()[i]);
    append_serialized(m.im.at(i), out);
  }
  out.push_back(m.cim ? 1 : 0);
  if (m.cim) {
    put_u32(out, static_cast<std::uint32_t>(m.cim->levels()));
    for (const auto& v : m.cim->vectors()) append_serialized(v, out);
  }
  out.push_back(m.tie ? 1 : 0);
  if (m.tie) append_serialized(*m.tie, out);
  put_u32(out, static_cast<std::uint32_t>(m.am.classes()));
  for (std::size_t i = 0; i < m.am.classes(); ++i) {
    put_string(out, m.am.label(i));
    append_serialized(m.am.prototype(i), out);
  }
  return out;
}

Model deserialize_model(std::span<const std::uint8_t> bytes) {
  Reader in(bytes);
  if (in.string(kModelMagic.size()) != kModelMagic) throw ConfigMismatch("not an imhdc model file");
  const std::uint32_t version = in.u32();
  if (version != kModelVersion) {
    throw ConfigMismatch("unsupported model version " + std::to_string(version));
  }
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(in.string(in.u32()));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigMismatch(std::string("model header: ") + e.what());
  }

  std::vector<std::string> symbols;
  std::vector<Hypervector> vectors;
  const std::uint32_t h = in.u32();
  for (std::uint32_t i = 0; i < h; ++i) {
    symbols.push_back(in.string(in.u32()));
    vectors.push_back(in.vector());
  }
  std::optional<ContinuousItemMemory> cim;
  if (in.u8() != 0) {
    std::vector<Hypervector> levels;
    const std::uint32_t m = in.u32();
    for (std::uint32_t i = 0; i < m; ++i) levels.push_back(in.vector());
    cim.emplace(std::move(levels), header.value("cim_seed", std::uint64_t{0}));
  }
  std::optional<Hypervector> tie;
  if (in.u8() != 0) tie = in.vector();
  std::vector<std::string> labels;
  std::vector<Hypervector> prototypes;
  const std::uint32_t c = in.u32();
  for (std::uint32_t i = 0; i < c; ++i) {
    labels.push_back(in.string(in.u32()));
    prototypes.push_back(in.vector());
  }
  if (!in.done()) throw ConfigMismatch("model file has trailing bytes");

  try {
    EncoderConfig enc;
    enc.n = header.at("n").get<std::size_t>();
    enc.kind = parse_encoder_kind(header.at("encoder").get<std::string>());
    enc.permutation = parse_permutation_mode(header.at("permutation").get<std::string>());
    const auto seed = header.at("seed").get<std::uint64_t>();
    Model m{parse_task(header.at("task").get<std::string>()),
            header.at("dim").get<std::size_t>(),
            enc,
            parse_metric(header.at("metric").get<std::string>()),
            seed,
            ItemMemory(std::move(symbols), std::move(vectors), seed),
            std::move(cim),
            std::move(tie),
            AssociativeMemory(std::move(labels), std::move(prototypes))};
    if (m.im.dim() != m.dim || m.am.dim() != m.dim) {
      throw ConfigMismatch("model sections disagree on the dimension");
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigMismatch(std::string("model header: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigMismatch(std::string("model file: ") + e.what());
  }
}

void write_model(const Model& model, const std::filesystem::path& path) {
  const auto bytes = serialize_model(model);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IngestError("cannot write model file '" + path.string() + "'");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Model read_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot read model file '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                        std::istreambuf_iterator<char>());
  return deserialize_model(bytes);
}

std::string content_hash(std::span<const std::uint8_t> bytes) {
  const std::string prefix = "blob " + std::to_string(bytes.size()) + '\0';
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  const bool ok = ctx != nullptr && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, prefix.data(), prefix.size()) == 1 &&
                  EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &length) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw InvariantBreach("SHA-1 digest failed");
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    const unsigned char b = digest[i];
    std::array<char, 3> buf{};
    std::snprintf(buf.data(), buf.size(), "%02x", b);
    hex += buf.data();
  }
  return hex;
}

}  // namespace imhdc
