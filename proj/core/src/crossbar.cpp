#include "imhdc/crossbar.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <ostream>
#include <string>

#include "imhdc/errors.hpp"
#include "imhdc/rng.hpp"

namespace imhdc {

namespace {

// Cells further than this many read-noise sigmas from the sense threshold are
// resolved deterministically.
constexpr double kSenseCertainSigmas = 10.0;

// Comparator resolution for unquantized sums, in SET-cell current units.
constexpr double kBypassResolution = 1e-6;

double position(std::size_t index, std::size_t count) noexcept {
  return count > 1 ? static_cast<double>(index) / static_cast<double>(count - 1) : 0.0;
}

}  // namespace

NoiseModel NoiseModel::ideal() {
  NoiseModel m;
  m.g_set_sigma = 0.0;
  m.g_reset_mean = 0.0;
  m.g_reset_sigma = 0.0;
  m.gradient_cols = 0.0;
  m.gradient_rows = 0.0;
  m.read_noise_sigma = 0.0;
  return m;
}

void NoiseModel::validate() const {
  if (g_set_sigma < 0 || g_reset_sigma < 0 || read_noise_sigma < 0) {
    throw InvalidArgument("noise model: sigmas must be >= 0");
  }
  if (!(g_set_mean > g_reset_mean)) {
    throw InvalidArgument("noise model: g_set_mean must exceed g_reset_mean");
  }
  if (g_reset_mean < 0) throw InvalidArgument("noise model: g_reset_mean must be >= 0");
  if (!(drift_time_ratio > 0)) throw InvalidArgument("noise model: drift_time_ratio must be > 0");
}

double NoiseModel::gradient(std::size_t row, std::size_t col, std::size_t rows,
                            std::size_t cols) const noexcept {
  return gradient_rows * position(row, rows) + gradient_cols * position(col, cols);
}

void Peripherals::validate() const {
  if (!(read_voltage > 0)) throw InvalidArgument("read voltage must be > 0");
  if (adc_bits == 0 || adc_bits > 24) throw InvalidArgument("adc_bits must be in [1, 24]");
  if (adc_full_scale && !(*adc_full_scale > 0)) {
    throw InvalidArgument("adc full scale must be > 0");
  }
  if (sense_threshold && !(*sense_threshold > 0)) {
    throw InvalidArgument("sense threshold must be > 0");
  }
}

CrossbarArray CrossbarArray::program(std::span<const Hypervector> pattern, std::size_t rows,
                                     std::size_t cols, const NoiseModel& noise,
                                     const Peripherals& periph, std::uint64_t array_id) {
  noise.validate();
  periph.validate();
  if (rows == 0 || cols == 0) throw InvalidArgument("crossbar must have rows and columns");
  if (pattern.size() > rows) throw InvalidArgument("pattern has more rows than the array");
  for (const auto& r : pattern) {
    if (r.dim() > cols) throw InvalidArgument("pattern row is wider than the array");
  }

  CrossbarArray a;
  a.rows_ = rows;
  a.cols_ = cols;
  a.g_.assign(rows * cols, 0.0);
  a.read_voltage_ = periph.read_voltage;
  a.adc_bits_ = periph.adc_bits;
  a.adc_bypass_ = periph.adc_bypass;
  a.noise_ = noise;
  a.sense_threshold_ = periph.sense_threshold.value_or(0.5 * periph.read_voltage * noise.g_set_mean);
  a.adc_full_scale_ = periph.adc_full_scale.value_or(static_cast<double>(rows) *
                                                      periph.read_voltage * noise.g_set_mean);
  a.read_key_ = rng::derive(noise.seed, "sense-read", array_id);

  const double drift = std::pow(noise.drift_time_ratio, -noise.drift_exponent);
  const std::uint64_t program_key = rng::derive(noise.seed, "program", array_id);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const bool set = r < pattern.size() && c < pattern[r].dim() && pattern[r].get(c);
      double mean = noise.g_reset_mean;
      double sigma = noise.g_reset_sigma;
      if (set) {
        mean = noise.g_set_mean * (1.0 + noise.gradient(r, c, rows, cols));
        sigma = noise.g_set_sigma;
      }
      double g = mean;
      if (sigma > 0) {
        const std::uint64_t key = rng::combine(program_key, r * cols + c);
        g += sigma * rng::normal_from(key);
      }
      a.g_[r * cols + c] = std::max(0.0, g) * drift;
    }
  }

  a.sense_one_.reserve(rows);
  a.sense_uncertain_.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    Hypervector one(cols);
    Hypervector uncertain(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      const double current = a.read_voltage_ * a.g_[r * cols + c];
      const double spread = noise.read_noise_sigma * current;
      if (spread > 0 && std::abs(current - a.sense_threshold_) <= kSenseCertainSigmas * spread) {
        uncertain.set(c, true);
      } else if (current > a.sense_threshold_) {
        one.set(c, true);
      }
    }
    a.sense_one_.push_back(std::move(one));
    a.sense_uncertain_.push_back(std::move(uncertain));
  }
  return a;
}

CrossbarArray CrossbarArray::program(std::span<const Hypervector> pattern,
                                     const NoiseModel& noise, const Peripherals& periph,
                                     std::uint64_t array_id) {
  if (pattern.empty()) throw InvalidArgument("empty crossbar pattern");
  return program(pattern, pattern.size(), pattern.front().dim(), noise, periph, array_id);
}

double CrossbarArray::conductance(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw InvalidArgument("crossbar cell out of range");
  return g_[r * cols_ + c];
}

std::span<const double> CrossbarArray::row(std::size_t r) const {
  if (r >= rows_) throw InvalidArgument("crossbar row out of range");
  return std::span<const double>(g_).subspan(r * cols_, cols_);
}

Hypervector CrossbarArray::read_and(std::size_t r, const Hypervector& gates,
                                    std::uint64_t nonce) const {
  if (r >= rows_) {
    throw InvalidArgument("wordline " + std::to_string(r) + " is out of range");
  }
  if (gates.dim() != cols_) throw InvalidArgument("gate vector width must equal the column count");
  Hypervector out = bit_and(gates, sense_one_[r]);
  const Hypervector pending = bit_and(gates, sense_uncertain_[r]);
  if (pending.popcount() == 0) return out;

  const std::uint64_t key = rng::combine(rng::combine(read_key_, nonce), r);
  const auto words = pending.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (auto bits = words[w]; bits != 0; bits &= bits - 1) {
      const std::size_t c = w * Hypervector::kWordBits +
                            static_cast<std::size_t>(std::countr_zero(bits));
      const double current = read_voltage_ * g_[r * cols_ + c];
      const double eta = noise_.read_noise_sigma * rng::normal_from(rng::combine(key, c));
      if (current * (1.0 + eta) > sense_threshold_) out.set(c, true);
    }
  }
  return out;
}

void CrossbarArray::bitline_currents(const Hypervector& active_rows, std::size_t col_begin,
                                     std::span<double> out) const {
  if (active_rows.dim() != rows_) throw InvalidArgument("activation width must equal the row count");
  if (col_begin + out.size() > cols_) throw InvalidArgument("bitline range out of bounds");
  std::fill(out.begin(), out.end(), 0.0);
  const auto words = active_rows.words();
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (auto bits = words[w]; bits != 0; bits &= bits - 1) {
      const std::size_t r = w * Hypervector::kWordBits +
                            static_cast<std::size_t>(std::countr_zero(bits));
      const double* cells = g_.data() + r * cols_ + col_begin;
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += cells[i];
    }
  }
  for (auto& current : out) current *= read_voltage_;
}

double CrossbarArray::noisy_read(double current, std::uint64_t nonce, std::size_t col) const {
  if (noise_.read_noise_sigma == 0.0) return current;
  const std::uint64_t key = rng::combine(rng::combine(rng::combine(read_key_, 0xB17L), nonce), col);
  return std::max(0.0, current * (1.0 + noise_.read_noise_sigma * rng::normal_from(key)));
}

std::uint32_t CrossbarArray::adc_code(double current) const {
  const double top = static_cast<double>((std::uint32_t{1} << adc_bits_) - 1);
  if (current >= adc_full_scale_) return static_cast<std::uint32_t>(top);
  if (current <= 0.0) return 0;
  return static_cast<std::uint32_t>(std::min(top, std::round(current / adc_full_scale_ * top)));
}

double CrossbarArray::adc_lsb() const noexcept {
  return adc_full_scale_ / static_cast<double>((std::uint32_t{1} << adc_bits_) - 1);
}

void CrossbarArray::write_csv(std::ostream& os) const {
  const auto old_precision = os.precision(9);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < cols_; ++c) {
      if (c != 0) os << ',';
      os << g_[r * cols_ + c];
    }
    os << '\n';
  }
  os.precision(old_precision);
}

std::string_view to_string(ComplementShift s) {
  return s == ComplementShift::same ? "same" : "opposite";
}

ComplementShift parse_complement_shift(std::string_view text) {
  if (text == "same" || text == "right") return ComplementShift::same;
  if (text == "opposite" || text == "left") return ComplementShift::opposite;
  throw InvalidArgument("unknown complement shift '" + std::string(text) + "'");
}

ImCrossbar::ImCrossbar(const ItemMemory& im, const NoiseModel& noise, const Peripherals& periph,
                       ComplementShift complement_shift)
    : direct_(CrossbarArray::program(im.vectors(), noise, periph, rng::tag("im-direct"))),
      complement_([&] {
        std::vector<Hypervector> flipped;
        flipped.reserve(im.size());
        for (const auto& v : im.vectors()) flipped.push_back(bit_not(v));
        return CrossbarArray::program(flipped, noise, periph, rng::tag("im-complement"));
      }()),
      complement_shift_(complement_shift) {}

Hypervector ImCrossbar::encode_ngram(std::span<const std::uint8_t> symbols,
                                     std::uint64_t nonce) const {
  const std::size_t n = symbols.size();
  if (n < 2) throw InvalidArgument("crossbar n-gram encoding needs n >= 2");
  for (auto s : symbols) {
    if (s >= direct_.rows()) {
      throw LookupError("symbol index " + std::to_string(s) + " is not stored in the crossbar");
    }
  }
  const std::size_t dim = direct_.cols();
  const Shift complement_dir =
      complement_shift_ == ComplementShift::same ? Shift::plain_right : Shift::plain_left;

  const Hypervector all_gates = Hypervector::ones(dim);
  Hypervector buf_direct = direct_.read_and(symbols[n - 1], all_gates, rng::combine(nonce, 0));
  Hypervector buf_complement =
      complement_.read_and(symbols[n - 1], all_gates, rng::combine(nonce, 0));
  Hypervector gates(dim);
  for (std::size_t cycle = 2; cycle <= n; ++cycle) {
    const std::uint8_t s = symbols[n - cycle];
    const std::uint64_t cycle_nonce = rng::combine(nonce, cycle - 1);
    permute_into(buf_direct, 1 % dim, Shift::plain_right, gates);
    buf_direct = direct_.read_and(s, gates, cycle_nonce);
    permute_into(buf_complement, 1 % dim, complement_dir, gates);
    buf_complement = complement_.read_and(s, gates, cycle_nonce);
  }
  buf_direct |= buf_complement;
  return buf_direct;
}

Hypervector ImCrossbar::encode_sequence(std::span<const std::uint8_t> symbols,
                                        const EncoderConfig& cfg, std::uint64_t nonce) const {
  if (cfg.kind != EncoderKind::two_minterm) {
    throw InvalidArgument("the crossbar encoder implements the two-minterm n-gram only");
  }
  if (symbols.size() < cfg.n) {
    throw EncodeError("sequence of length " + std::to_string(symbols.size()) +
                      " is shorter than n = " + std::to_string(cfg.n));
  }
  Accumulator acc(direct_.cols());
  const std::size_t windows = symbols.size() - cfg.n + 1;
  for (std::size_t i = 0; i < windows; ++i) {
    acc.add(encode_ngram(symbols.subspan(i, cfg.n), rng::combine(nonce, i)));
  }
  return acc.binarize(cfg.threshold(windows));
}

PartitionLayout PartitionLayout::build(std::size_t dim, std::size_t classes, std::size_t factor,
                                       std::uint64_t seed) {
  if (factor == 0 || dim % factor != 0) {
    throw InvalidArgument("partition factor " + std::to_string(factor) +
                          " must divide the dimension " + std::to_string(dim));
  }
  if (classes == 0) throw InvalidArgument("partition layout needs at least one class");
  PartitionLayout layout;
  layout.dim = dim;
  layout.classes = classes;
  layout.factor = factor;
  layout.segment_len = dim / factor;
  layout.columns.resize(classes * factor);
  std::vector<std::size_t> perm(classes);
  for (std::size_t p = 0; p < factor; ++p) {
    for (std::size_t i = 0; i < classes; ++i) perm[i] = i;
    rng::Stream stream(rng::derive(seed, "partition-permutation", p));
    for (std::size_t i = classes; i > 1; --i) std::swap(perm[i - 1], perm[stream.below(i)]);
    for (std::size_t i = 0; i < classes; ++i) layout.columns[p * classes + i] = p * classes + perm[i];
  }
  return layout;
}

std::size_t PartitionLayout::column(std::size_t partition, std::size_t cls) const {
  if (partition >= factor || cls >= classes) throw InvalidArgument("layout index out of range");
  return columns[partition * classes + cls];
}

std::vector<Hypervector> PartitionLayout::pattern(std::span<const Hypervector> vectors) const {
  if (vectors.size() != classes) throw InvalidArgument("layout/class count mismatch");
  std::vector<Hypervector> rows(segment_len, Hypervector(total_columns()));
  for (std::size_t cls = 0; cls < classes; ++cls) {
    if (vectors[cls].dim() != dim) throw InvalidArgument("layout/prototype dimension mismatch");
    for (std::size_t p = 0; p < factor; ++p) {
      const std::size_t col = column(p, cls);
      for (std::size_t r = 0; r < segment_len; ++r) {
        if (vectors[cls].get(p * segment_len + r)) rows[r].set(col, true);
      }
    }
  }
  return rows;
}

std::pair<CrossbarArray, PartitionLayout> build_partition_layout(
    const AssociativeMemory& model, std::size_t factor, std::uint64_t seed,
    const NoiseModel& noise, const Peripherals& periph) {
  PartitionLayout layout = PartitionLayout::build(model.dim(), model.classes(), factor, seed);
  CrossbarArray array =
      CrossbarArray::program(layout.pattern(model.prototypes()), noise, periph, rng::tag("am-direct"));
  return {std::move(array), std::move(layout)};
}

AmCrossbar::AmCrossbar(const AssociativeMemory& model, std::size_t factor,
                       std::uint64_t layout_seed, const NoiseModel& noise,
                       const Peripherals& periph, bool with_complement)
    : layout_(PartitionLayout::build(model.dim(), model.classes(), factor, layout_seed)),
      direct_(CrossbarArray::program(layout_.pattern(model.prototypes()), noise, periph,
                                     rng::tag("am-direct"))),
      unit_current_(periph.read_voltage * noise.g_set_mean) {
  if (with_complement) {
    std::vector<Hypervector> flipped;
    flipped.reserve(model.classes());
    for (const auto& p : model.prototypes()) flipped.push_back(bit_not(p));
    complement_ = CrossbarArray::program(layout_.pattern(flipped), noise, periph,
                                         rng::tag("am-complement"));
  }
}

void AmCrossbar::accumulate(const CrossbarArray& array, const Hypervector& query,
                            std::uint64_t nonce, std::vector<double>& sums) const {
  const std::size_t c = layout_.classes;
  std::vector<double> currents(c);
  Hypervector segment(layout_.segment_len);
  for (std::size_t p = 0; p < layout_.factor; ++p) {
    auto words = segment.mutable_words();
    std::fill(words.begin(), words.end(), 0);
    const std::size_t base = p * layout_.segment_len;
    for (std::size_t r = 0; r < layout_.segment_len; ++r) {
      if (query.get(base + r)) segment.set(r, true);
    }
    array.bitline_currents(segment, p * c, currents);
    const std::uint64_t partition_nonce = rng::combine(nonce, p);
    for (std::size_t cls = 0; cls < c; ++cls) {
      const std::size_t col = layout_.column(p, cls);
      const double current = array.noisy_read(currents[col - p * c], partition_nonce, col);
      if (array.adc_bypass()) {
        sums[cls] += current / unit_current_;
      } else {
        // Integer codes add exactly; class_sums scales by the LSB once.
        sums[cls] += static_cast<double>(array.adc_code(current));
      }
    }
  }
}

std::vector<double> AmCrossbar::class_sums(const Hypervector& query, Metric metric,
                                           std::uint64_t nonce) const {
  if (query.dim() != layout_.dim) throw InvalidArgument("query/layout dimension mismatch");
  std::vector<double> sums(layout_.classes, 0.0);
  accumulate(direct_, query, rng::combine(nonce, 1), sums);
  if (metric == Metric::invhamm) {
    if (!complement_) throw InvalidState("invhamm needs the complementary crossbar");
    accumulate(*complement_, bit_not(query), rng::combine(nonce, 2), sums);
  }
  if (!direct_.adc_bypass()) {
    const double lsb_units = direct_.adc_lsb() / unit_current_;
    for (auto& s : sums) s *= lsb_units;
  }
  return sums;
}

std::size_t AmCrossbar::search(const Hypervector& query, Metric metric,
                               std::uint64_t nonce) const {
  const auto sums = class_sums(query, metric, nonce);
  // Quantized sums are one integer code total times a common LSB, so plain
  // comparison is exact.
  return winner_take_all(sums, direct_.adc_bypass() ? kBypassResolution : 0.0);
}

std::size_t winner_take_all(std::span<const double> values, double resolution) {
  if (values.empty()) throw InvalidArgument("winner-take-all over an empty set");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best] + resolution) best = i;
  }
  return best;
}

std::vector<double> sweep_partitions(const AssociativeMemory& model,
                                     std::span<const Hypervector> queries,
                                     std::span<const std::size_t> labels,
                                     std::span<const std::size_t> factors, Metric metric,
                                     const NoiseModel& noise, const Peripherals& periph,
                                     std::uint64_t layout_seed) {
  if (queries.size() != labels.size()) throw InvalidArgument("query/label count mismatch");
  std::vector<double> accuracy;
  accuracy.reserve(factors.size());
  for (std::size_t f : factors) {
    const AmCrossbar am(model, f, layout_seed, noise, periph, metric == Metric::invhamm);
    std::size_t correct = 0;
    for (std::size_t q = 0; q < queries.size(); ++q) {
      if (am.search(queries[q], metric, q) == labels[q]) ++correct;
    }
    accuracy.push_back(queries.empty() ? 0.0
                                       : static_cast<double>(correct) /
                                             static_cast<double>(queries.size()));
  }
  return accuracy;
}

}  // namespace imhdc
