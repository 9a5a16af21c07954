#include "imhdc/encoder.hpp"

#include <string>

#include "imhdc/errors.hpp"

namespace imhdc {

namespace {

using word_type = Hypervector::word_type;

void require_basis(std::span<const Hypervector> basis) {
  if (basis.empty()) throw InvalidArgument("n-gram needs at least one basis vector");
  for (const auto& b : basis) {
    if (b.dim() != basis.front().dim()) throw InvalidArgument("n-gram: dimension mismatch");
  }
}

}  // namespace

std::string_view to_string(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::exact: return "exact";
    case EncoderKind::all_minterm: return "all_minterm";
    case EncoderKind::two_minterm: return "two_minterm";
  }
  return "?";
}

std::string_view to_string(PermutationMode mode) {
  return mode == PermutationMode::circular ? "circular" : "plain_shift";
}

EncoderKind parse_encoder_kind(std::string_view text) {
  if (text == "exact") return EncoderKind::exact;
  if (text == "all_minterm" || text == "all-minterm") return EncoderKind::all_minterm;
  if (text == "two_minterm" || text == "two-minterm" || text == "2-minterm") {
    return EncoderKind::two_minterm;
  }
  throw InvalidArgument("unknown encoder kind '" + std::string(text) + "'");
}

PermutationMode parse_permutation_mode(std::string_view text) {
  if (text == "circular") return PermutationMode::circular;
  if (text == "plain_shift" || text == "plain-shift" || text == "plain") {
    return PermutationMode::plain_shift;
  }
  throw InvalidArgument("unknown permutation mode '" + std::string(text) + "'");
}

std::uint64_t EncoderConfig::minterm_count() const {
  if (kind == EncoderKind::two_minterm) return 2;
  return std::uint64_t{1} << (n - 1);
}

double EncoderConfig::threshold(std::uint64_t ngram_count) const {
  const double scale = static_cast<double>(minterm_count()) /
                       static_cast<double>(std::uint64_t{1} << n);
  return static_cast<double>(ngram_count) * scale;
}

void EncoderConfig::validate() const {
  if (n == 0) throw InvalidArgument("n-gram size must be >= 1");
  if (n > 62) throw InvalidArgument("n-gram size is too large");
  if (kind == EncoderKind::all_minterm && n > kMaxMintermN) {
    throw InvalidArgument("all-minterm expansion refused for n > " +
                          std::to_string(kMaxMintermN));
  }
}

Hypervector permute_power(const Hypervector& b, std::size_t k, PermutationMode mode) {
  if (mode == PermutationMode::circular) return permute(b, k % b.dim(), Shift::circular);
  if (k >= b.dim()) return Hypervector::zeros(b.dim());
  return permute(b, k, Shift::plain_right);
}

Hypervector ngram_exact(std::span<const Hypervector> basis, PermutationMode mode) {
  require_basis(basis);
  Hypervector g = basis.front();
  for (std::size_t k = 1; k < basis.size(); ++k) {
    g.xnor_assign(permute_power(basis[k], k, mode));
  }
  return g;
}

std::uint64_t z_index(std::size_t k, std::uint64_t j, std::size_t n) {
  if (n == 0 || n > 62) throw InvalidArgument("z_index: n out of range");
  if (k < 1 || k > n) throw InvalidArgument("z_index: k must be in [1, n]");
  if (j >= (std::uint64_t{1} << (n - 1))) throw InvalidArgument("z_index: j must be < 2^{n-1}");
  return (2 * j + (std::uint64_t{1} << (k - 1))) >> k;
}

Hypervector l_operator(const Hypervector& b, std::size_t k, std::uint64_t j, std::size_t n) {
  return z_index(k, j, n) % 2 == 0 ? b : bit_not(b);
}

Hypervector ngram_all_minterm(std::span<const Hypervector> basis, PermutationMode mode) {
  require_basis(basis);
  const std::size_t n = basis.size();
  if (n > kMaxMintermN) {
    throw InvalidArgument("all-minterm expansion refused for n > " +
                          std::to_string(kMaxMintermN));
  }
  const std::size_t dim = basis.front().dim();
  std::vector<Hypervector> direct;
  std::vector<Hypervector> complement;
  for (std::size_t k = 0; k < n; ++k) {
    direct.push_back(permute_power(basis[k], k, mode));
    complement.push_back(permute_power(bit_not(basis[k]), k, mode));
  }
  Hypervector g(dim);
  const std::uint64_t terms = std::uint64_t{1} << (n - 1);
  for (std::uint64_t j = 0; j < terms; ++j) {
    Hypervector term = Hypervector::ones(dim);
    for (std::size_t k = 0; k < n; ++k) {
      term &= z_index(k + 1, j, n) % 2 == 0 ? direct[k] : complement[k];
    }
    g |= term;
  }
  return g;
}

Hypervector ngram_two_minterm(std::span<const Hypervector> basis, PermutationMode mode) {
  require_basis(basis);
  Hypervector all_direct = basis.front();
  Hypervector all_complement = bit_not(basis.front());
  for (std::size_t k = 1; k < basis.size(); ++k) {
    all_direct &= permute_power(basis[k], k, mode);
    all_complement &= permute_power(bit_not(basis[k]), k, mode);
  }
  all_direct |= all_complement;
  return all_direct;
}

Hypervector ngram(std::span<const Hypervector> basis, const EncoderConfig& cfg) {
  switch (cfg.kind) {
    case EncoderKind::exact: return ngram_exact(basis, cfg.permutation);
    case EncoderKind::all_minterm: return ngram_all_minterm(basis, cfg.permutation);
    case EncoderKind::two_minterm: return ngram_two_minterm(basis, cfg.permutation);
  }
  throw InvalidArgument("unknown encoder kind");
}

NgramEncoder::NgramEncoder(const ItemMemory& im, EncoderConfig cfg)
    : cfg_(cfg), dim_(im.dim()), symbols_(im.size()) {
  cfg_.validate();
  if (symbols_ > 256) throw InvalidArgument("NgramEncoder supports at most 256 symbols");
  direct_.reserve(cfg_.n * symbols_);
  complement_.reserve(cfg_.n * symbols_);
  for (std::size_t k = 0; k < cfg_.n; ++k) {
    for (std::size_t s = 0; s < symbols_; ++s) {
      direct_.push_back(permute_power(im.at(s), k, cfg_.permutation));
      complement_.push_back(permute_power(bit_not(im.at(s)), k, cfg_.permutation));
    }
  }
}

const Hypervector& NgramEncoder::direct(std::size_t k, std::uint8_t s) const {
  if (s >= symbols_) throw LookupError("symbol index " + std::to_string(s) + " is not in the item memory");
  return direct_[k * symbols_ + s];
}

const Hypervector& NgramEncoder::complement(std::size_t k, std::uint8_t s) const {
  if (s >= symbols_) throw LookupError("symbol index " + std::to_string(s) + " is not in the item memory");
  return complement_[k * symbols_ + s];
}

void NgramEncoder::encode_window_into(std::span<const std::uint8_t> window,
                                      Hypervector& out) const {
  const std::size_t n = cfg_.n;
  if (window.size() != n) throw InvalidArgument("window length must equal n");
  if (out.dim() != dim_) throw InvalidArgument("output dimension mismatch");
  auto dst = out.mutable_words();
  const std::size_t words = dst.size();

  std::array<const word_type*, 64> d{};
  std::array<const word_type*, 64> c{};
  for (std::size_t k = 0; k < n; ++k) {
    d[k] = direct(k, window[k]).words().data();
    c[k] = complement(k, window[k]).words().data();
  }

  switch (cfg_.kind) {
    case EncoderKind::exact:
      for (std::size_t w = 0; w < words; ++w) {
        word_type x = d[0][w];
        for (std::size_t k = 1; k < n; ++k) x = ~(x ^ d[k][w]);
        dst[w] = x;
      }
      break;
    case EncoderKind::two_minterm:
      for (std::size_t w = 0; w < words; ++w) {
        word_type a = d[0][w];
        word_type b = c[0][w];
        for (std::size_t k = 1; k < n; ++k) {
          a &= d[k][w];
          b &= c[k][w];
        }
        dst[w] = a | b;
      }
      break;
    case EncoderKind::all_minterm: {
      const std::uint64_t terms = std::uint64_t{1} << (n - 1);
      std::vector<std::uint8_t> use_complement(terms * n);
      for (std::uint64_t j = 0; j < terms; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          use_complement[j * n + k] = static_cast<std::uint8_t>(z_index(k + 1, j, n) % 2);
        }
      }
      for (std::size_t w = 0; w < words; ++w) {
        word_type g = 0;
        for (std::uint64_t j = 0; j < terms; ++j) {
          word_type term = ~word_type{0};
          for (std::size_t k = 0; k < n; ++k) {
            term &= use_complement[j * n + k] ? c[k][w] : d[k][w];
          }
          g |= term;
        }
        dst[w] = g;
      }
      break;
    }
  }
  out.canonicalize();
}

Hypervector NgramEncoder::encode_window(std::span<const std::uint8_t> window) const {
  Hypervector out(dim_);
  encode_window_into(window, out);
  return out;
}

std::size_t NgramEncoder::accumulate(std::span<const std::uint8_t> symbols,
                                     Accumulator& acc) const {
  const std::size_t n = cfg_.n;
  if (symbols.size() < n) return 0;
  Hypervector g(dim_);
  const std::size_t windows = symbols.size() - n + 1;
  for (std::size_t i = 0; i < windows; ++i) {
    encode_window_into(symbols.subspan(i, n), g);
    acc.add(g);
  }
  return windows;
}

Hypervector NgramEncoder::encode_sequence(std::span<const std::uint8_t> symbols) const {
  if (symbols.size() < cfg_.n) {
    throw EncodeError("sequence of length " + std::to_string(symbols.size()) +
                      " is shorter than n = " + std::to_string(cfg_.n));
  }
  Accumulator acc(dim_);
  const std::size_t l = accumulate(symbols, acc);
  return acc.binarize(cfg_.threshold(l));
}

Hypervector encode_sequence(std::span<const std::uint8_t> symbols, const ItemMemory& im,
                            const EncoderConfig& cfg) {
  return NgramEncoder(im, cfg).encode_sequence(symbols);
}

std::size_t accumulate_items(std::span<const Hypervector> items, const EncoderConfig& cfg,
                             Accumulator& acc) {
  cfg.validate();
  if (items.size() < cfg.n) return 0;
  const std::size_t windows = items.size() - cfg.n + 1;
  for (std::size_t i = 0; i < windows; ++i) acc.add(ngram(items.subspan(i, cfg.n), cfg));
  return windows;
}

Hypervector encode_items(std::span<const Hypervector> items, const EncoderConfig& cfg) {
  if (items.size() < cfg.n) {
    throw EncodeError("sequence of length " + std::to_string(items.size()) +
                      " is shorter than n = " + std::to_string(cfg.n));
  }
  Accumulator acc(items.front().dim());
  const std::size_t l = accumulate_items(items, cfg, acc);
  return acc.binarize(cfg.threshold(l));
}

Hypervector spatial_encode_emg(const EmgSample& sample, const ItemMemory& channels,
                               const ContinuousItemMemory& levels, const Hypervector& tie) {
  if (channels.size() != kEmgChannels) {
    throw InvalidArgument("EMG spatial encoding needs exactly 4 channel vectors");
  }
  std::array<Hypervector, kEmgChannels + 1> votes{
      xnor(channels.at(0), levels.level(sample[0])), xnor(channels.at(1), levels.level(sample[1])),
      xnor(channels.at(2), levels.level(sample[2])), xnor(channels.at(3), levels.level(sample[3])),
      tie};
  return majority(votes);
}

}  // namespace imhdc
