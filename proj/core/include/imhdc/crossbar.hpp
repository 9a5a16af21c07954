#pragma once

// Behavioral model of memristive crossbars used for the two in-memory
// primitives:
//   * non-stateful read AND: gate lines select columns, a wordline selects the
//     stored row, sense amplifiers threshold each bitline current;
//   * analog dot product: query bits drive wordlines at the read voltage and
//     each bitline integrates sum(V * g) over the active rows, digitized by an
//     ADC.
//
// Device programming is single-shot: a SET cell draws
// Normal(g_set_mean * (1 + gradient(r, c)), g_set_sigma) and a RESET cell
// Normal(g_reset_mean, g_reset_sigma), clamped at zero. The spatial gradient
// is linear end-to-end along rows and along columns.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "imhdc/assoc_memory.hpp"
#include "imhdc/encoder.hpp"
#include "imhdc/hypervector.hpp"
#include "imhdc/item_memory.hpp"

namespace imhdc {

struct NoiseModel {
  double g_set_mean = 20e-6;     // S
  double g_set_sigma = 2e-6;     // S
  double g_reset_mean = 0.1e-6;  // S
  double g_reset_sigma = 0.05e-6;
  // Fractional change of g_set from the first to the last column / row.
  double gradient_cols = 0.10;
  double gradient_rows = 0.0;
  // Relative sigma of each bitline current read.
  double read_noise_sigma = 0.02;
  // Conductance drift g * ratio^-exponent; exponent 0 disables it.
  double drift_exponent = 0.0;
  double drift_time_ratio = 1.0;
  std::uint64_t seed = 1;

  // No variability, no leakage, no gradient, no read noise.
  static NoiseModel ideal();
  void validate() const;
  [[nodiscard]] double gradient(std::size_t row, std::size_t col, std::size_t rows,
                                std::size_t cols) const noexcept;

  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

struct Peripherals {
  double read_voltage = 0.3;  // V
  unsigned adc_bits = 8;
  // Pass bitline currents through unquantized.
  bool adc_bypass = false;
  // Defaults: rows * read_voltage * g_set_mean, and half of one SET cell current.
  std::optional<double> adc_full_scale;
  std::optional<double> sense_threshold;

  void validate() const;

  friend bool operator==(const Peripherals&, const Peripherals&) = default;
};

class CrossbarArray {
 public:
  // pattern[r] holds row r (dim == cols). Cells beyond the pattern stay RESET.
  static CrossbarArray program(std::span<const Hypervector> pattern, std::size_t rows,
                               std::size_t cols, const NoiseModel& noise,
                               const Peripherals& periph, std::uint64_t array_id);
  static CrossbarArray program(std::span<const Hypervector> pattern, const NoiseModel& noise,
                               const Peripherals& periph, std::uint64_t array_id);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] double conductance(std::size_t row, std::size_t col) const;
  [[nodiscard]] std::span<const double> row(std::size_t r) const;
  [[nodiscard]] double read_voltage() const noexcept { return read_voltage_; }
  [[nodiscard]] double sense_threshold() const noexcept { return sense_threshold_; }
  [[nodiscard]] double adc_full_scale() const noexcept { return adc_full_scale_; }
  [[nodiscard]] unsigned adc_bits() const noexcept { return adc_bits_; }
  [[nodiscard]] bool adc_bypass() const noexcept { return adc_bypass_; }
  [[nodiscard]] const NoiseModel& noise() const noexcept { return noise_; }

  // Bit j is 1 iff gates[j] = 1 and the noisy current V * g(row, j) * (1 + eta)
  // exceeds the sense threshold. Noise draws are keyed by (seed, array, nonce,
  // row, column); cells more than 10 sigma from the threshold are resolved
  // without drawing.
  [[nodiscard]] Hypervector read_and(std::size_t row, const Hypervector& gates,
                                     std::uint64_t nonce) const;

  // Noise-free bitline currents of columns [col_begin, col_begin + out.size())
  // with the rows set in active_rows (dim == rows) driven at the read voltage.
  void bitline_currents(const Hypervector& active_rows, std::size_t col_begin,
                        std::span<double> out) const;
  // current * (1 + eta), eta ~ N(0, read_noise_sigma), keyed by (nonce, col).
  [[nodiscard]] double noisy_read(double current, std::uint64_t nonce, std::size_t col) const;

  // round(current / full_scale * (2^bits - 1)), clamped to [0, 2^bits - 1].
  [[nodiscard]] std::uint32_t adc_code(double current) const;
  [[nodiscard]] double adc_lsb() const noexcept;

  void write_csv(std::ostream& os) const;

 private:
  CrossbarArray() = default;

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> g_;  // row-major
  double read_voltage_ = 0.3;
  double sense_threshold_ = 0.0;
  double adc_full_scale_ = 0.0;
  unsigned adc_bits_ = 8;
  bool adc_bypass_ = false;
  NoiseModel noise_;
  std::uint64_t read_key_ = 0;
  // Per row, over columns: cells that always sense as 1, and cells that need
  // a noise draw.
  std::vector<Hypervector> sense_one_;
  std::vector<Hypervector> sense_uncertain_;
};

// Which way the complementary IM crossbar shifts its minterm buffer.
// `same` matches the algebraic two-minterm form; `opposite` shifts left.
enum class ComplementShift { same, opposite };

std::string_view to_string(ComplementShift s);
ComplementShift parse_complement_shift(std::string_view text);

// Item memory and its complement on two crossbars, driven through the n-cycle
// two-minterm procedure: cycle 1 reads row s[n] with every gate enabled;
// cycle j feeds the 1-bit plain-shifted minterm buffer back as gates while
// selecting row s[n - j + 1]. The n-gram is the OR of both buffers.
class ImCrossbar {
 public:
  ImCrossbar(const ItemMemory& im, const NoiseModel& noise, const Peripherals& periph,
             ComplementShift complement_shift = ComplementShift::same);

  [[nodiscard]] const CrossbarArray& direct() const noexcept { return direct_; }
  [[nodiscard]] const CrossbarArray& complement() const noexcept { return complement_; }
  [[nodiscard]] ComplementShift complement_shift() const noexcept { return complement_shift_; }

  // symbols.size() >= 2; indices are IM rows (LookupError otherwise).
  [[nodiscard]] Hypervector encode_ngram(std::span<const std::uint8_t> symbols,
                                         std::uint64_t nonce) const;
  // Bundles every stride-1 window; cfg.kind must be two_minterm.
  [[nodiscard]] Hypervector encode_sequence(std::span<const std::uint8_t> symbols,
                                            const EncoderConfig& cfg, std::uint64_t nonce) const;

 private:
  CrossbarArray direct_;
  CrossbarArray complement_;
  ComplementShift complement_shift_;
};

// Column placement of prototype segments: the array has d/f rows and c*f
// columns in f partitions of c columns; within partition p, class i sits in
// column p*c + E_p(i) for a fresh random permutation E_p.
struct PartitionLayout {
  std::size_t dim = 0;
  std::size_t classes = 0;
  std::size_t factor = 1;
  std::size_t segment_len = 0;
  std::vector<std::size_t> columns;  // [p * classes + cls]

  static PartitionLayout build(std::size_t dim, std::size_t classes, std::size_t factor,
                               std::uint64_t seed);
  [[nodiscard]] std::size_t column(std::size_t partition, std::size_t cls) const;
  [[nodiscard]] std::size_t total_columns() const noexcept { return classes * factor; }
  // Row pattern of the array storing the given vectors (one per class).
  [[nodiscard]] std::vector<Hypervector> pattern(std::span<const Hypervector> vectors) const;
};

std::pair<CrossbarArray, PartitionLayout> build_partition_layout(
    const AssociativeMemory& model, std::size_t factor, std::uint64_t seed,
    const NoiseModel& noise, const Peripherals& periph);

// Prototype crossbar (plus the complementary crossbar for invhamm) read one
// partition at a time; partial dot products are de-permuted into a per-class
// sum buffer and a winner-take-all picks the class.
class AmCrossbar {
 public:
  AmCrossbar(const AssociativeMemory& model, std::size_t factor, std::uint64_t layout_seed,
             const NoiseModel& noise, const Peripherals& periph, bool with_complement = true);

  [[nodiscard]] const PartitionLayout& layout() const noexcept { return layout_; }
  [[nodiscard]] const CrossbarArray& array() const noexcept { return direct_; }
  [[nodiscard]] const std::optional<CrossbarArray>& complement_array() const noexcept {
    return complement_;
  }
  [[nodiscard]] std::size_t classes() const noexcept { return layout_.classes; }

  // Class-wise similarity in units of one SET-cell current.
  [[nodiscard]] std::vector<double> class_sums(const Hypervector& query, Metric metric,
                                               std::uint64_t nonce) const;
  [[nodiscard]] std::size_t search(const Hypervector& query, Metric metric,
                                   std::uint64_t nonce) const;

 private:
  void accumulate(const CrossbarArray& array, const Hypervector& query, std::uint64_t nonce,
                  std::vector<double>& sums) const;

  PartitionLayout layout_;
  CrossbarArray direct_;
  std::optional<CrossbarArray> complement_;
  double unit_current_;
};

// Winner-take-all: the first index whose value exceeds every earlier best by
// more than resolution.
std::size_t winner_take_all(std::span<const double> values, double resolution = 0.0);

// Accuracy per partition factor, with identical noise seeds for every f.
std::vector<double> sweep_partitions(const AssociativeMemory& model,
                                     std::span<const Hypervector> queries,
                                     std::span<const std::size_t> labels,
                                     std::span<const std::size_t> factors, Metric metric,
                                     const NoiseModel& noise, const Peripherals& periph,
                                     std::uint64_t layout_seed);

}  // namespace imhdc
