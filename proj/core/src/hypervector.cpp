#include "imhdc/hypervector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "imhdc/errors.hpp"
#include "imhdc/rng.hpp"

namespace imhdc {

namespace {

using word_type = Hypervector::word_type;
constexpr std::size_t kBits = Hypervector::kWordBits;

void require_same_dim(const Hypervector& a, const Hypervector& b, const char* op) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                          " vs " + std::to_string(b.dim()) + ")");
  }
}

// out = in moved toward higher component indices by k, zero fill.
void shift_up(std::span<const word_type> in, std::size_t k, std::span<word_type> out) {
  const std::size_t n = in.size();
  const std::size_t q = k / kBits;
  const std::size_t r = k % kBits;
  for (std::size_t w = n; w-- > 0;) {
    word_type v = 0;
    if (w >= q) {
      v = in[w - q] << r;
      if (r != 0 && w >= q + 1) v |= in[w - q - 1] >> (kBits - r);
    }
    out[w] = v;
  }
}

// out = in moved toward lower component indices by k, zero fill. Relies on
// the input padding being zero.
void shift_down(std::span<const word_type> in, std::size_t k, std::span<word_type> out) {
  const std::size_t n = in.size();
  const std::size_t q = k / kBits;
  const std::size_t r = k % kBits;
  for (std::size_t w = 0; w < n; ++w) {
    word_type v = 0;
    if (w + q < n) {
      v = in[w + q] >> r;
      if (r != 0 && w + q + 1 < n) v |= in[w + q + 1] << (kBits - r);
    }
    out[w] = v;
  }
}

}  // namespace

Hypervector::Hypervector(std::size_t dim) : dim_(dim), words_(words_for(dim), 0) {
  if (dim == 0) throw InvalidArgument("hypervector dimension must be >= 1");
}

Hypervector Hypervector::ones(std::size_t dim) {
  Hypervector v(dim);
  std::fill(v.words_.begin(), v.words_.end(), ~word_type{0});
  v.canonicalize();
  return v;
}

Hypervector Hypervector::random(std::size_t dim, std::uint64_t seed) {
  Hypervector v(dim);
  rng::Stream stream(rng::derive(seed, "hypervector"));
  for (auto& w : v.words_) w = stream.next();
  v.canonicalize();
  return v;
}

Hypervector Hypervector::from_string(std::string_view bits) {
  Hypervector v(bits.size());
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j] == '1') {
      v.set(j, true);
    } else if (bits[j] != '0') {
      throw InvalidArgument("hypervector literal may only contain '0' and '1'");
    }
  }
  return v;
}

Hypervector Hypervector::from_words(std::size_t dim, std::span<const word_type> words) {
  Hypervector v(dim);
  if (words.size() != v.words_.size()) {
    throw InvalidArgument("from_words: expected " + std::to_string(v.words_.size()) + " words");
  }
  std::copy(words.begin(), words.end(), v.words_.begin());
  v.canonicalize();
  return v;
}

bool Hypervector::get(std::size_t j) const {
  if (j >= dim_) throw InvalidArgument("component index out of range");
  return (words_[j / kBits] >> (j % kBits)) & 1U;
}

void Hypervector::set(std::size_t j, bool value) {
  if (j >= dim_) throw InvalidArgument("component index out of range");
  const word_type mask = word_type{1} << (j % kBits);
  if (value) {
    words_[j / kBits] |= mask;
  } else {
    words_[j / kBits] &= ~mask;
  }
}

std::size_t Hypervector::popcount() const noexcept {
  std::size_t total = 0;
  for (word_type w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::string Hypervector::to_string() const {
  std::string s(dim_, '0');
  for (std::size_t j = 0; j < dim_; ++j) {
    if ((words_[j / kBits] >> (j % kBits)) & 1U) s[j] = '1';
  }
  return s;
}

Hypervector::word_type Hypervector::tail_mask() const noexcept {
  const std::size_t live = dim_ % kBits;
  return live == 0 ? ~word_type{0} : (word_type{1} << live) - 1;
}

bool Hypervector::padding_is_zero() const noexcept {
  return (words_.back() & ~tail_mask()) == 0;
}

void Hypervector::canonicalize() noexcept { words_.back() &= tail_mask(); }

Hypervector& Hypervector::operator&=(const Hypervector& rhs) {
  require_same_dim(*this, rhs, "and");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= rhs.words_[w];
  return *this;
}

Hypervector& Hypervector::operator|=(const Hypervector& rhs) {
  require_same_dim(*this, rhs, "or");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= rhs.words_[w];
  return *this;
}

Hypervector& Hypervector::operator^=(const Hypervector& rhs) {
  require_same_dim(*this, rhs, "xor");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= rhs.words_[w];
  return *this;
}

Hypervector& Hypervector::xnor_assign(const Hypervector& rhs) {
  require_same_dim(*this, rhs, "xnor");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] = ~(words_[w] ^ rhs.words_[w]);
  canonicalize();
  return *this;
}

Hypervector& Hypervector::flip() noexcept {
  for (auto& w : words_) w = ~w;
  canonicalize();
  return *this;
}

Hypervector xnor(const Hypervector& a, const Hypervector& b) {
  Hypervector out = a;
  out.xnor_assign(b);
  return out;
}

Hypervector bit_xor(const Hypervector& a, const Hypervector& b) {
  Hypervector out = a;
  out ^= b;
  return out;
}

Hypervector bit_and(const Hypervector& a, const Hypervector& b) {
  Hypervector out = a;
  out &= b;
  return out;
}

Hypervector bit_or(const Hypervector& a, const Hypervector& b) {
  Hypervector out = a;
  out |= b;
  return out;
}

Hypervector bit_not(const Hypervector& a) {
  Hypervector out = a;
  out.flip();
  return out;
}

void permute_into(const Hypervector& a, std::size_t k, Shift mode, Hypervector& out) {
  if (k >= a.dim()) {
    throw InvalidArgument("permute: shift " + std::to_string(k) + " must be < dim " +
                          std::to_string(a.dim()));
  }
  require_same_dim(a, out, "permute");
  if (&a == &out) {
    const Hypervector copy = a;
    permute_into(copy, k, mode, out);
    return;
  }
  const auto in = a.words();
  auto dst = out.mutable_words();
  if (k == 0) {
    std::copy(in.begin(), in.end(), dst.begin());
    return;
  }
  switch (mode) {
    case Shift::plain_right:
      shift_up(in, k, dst);
      break;
    case Shift::plain_left:
      shift_down(in, k, dst);
      break;
    case Shift::circular: {
      std::vector<word_type> wrapped(in.size());
      shift_up(in, k, dst);
      // Bits shifted past dim - 1 must not leak into the wrapped part.
      dst.back() &= out.tail_mask();
      shift_down(in, a.dim() - k, wrapped);
      for (std::size_t w = 0; w < dst.size(); ++w) dst[w] |= wrapped[w];
      break;
    }
  }
  out.canonicalize();
}

Hypervector permute(const Hypervector& a, std::size_t k, Shift mode) {
  Hypervector out(a.dim());
  permute_into(a, k, mode, out);
  return out;
}

std::size_t popcount(const Hypervector& a) noexcept { return a.popcount(); }

std::size_t hamming(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "hamming");
  std::size_t total = 0;
  const auto x = a.words();
  const auto y = b.words();
  for (std::size_t w = 0; w < x.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(x[w] ^ y[w]));
  }
  return total;
}

std::size_t dot(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "dot");
  std::size_t total = 0;
  const auto x = a.words();
  const auto y = b.words();
  for (std::size_t w = 0; w < x.size(); ++w) {
    total += static_cast<std::size_t>(std::popcount(x[w] & y[w]));
  }
  return total;
}

std::size_t dot_complement(const Hypervector& a, const Hypervector& b) {
  require_same_dim(a, b, "dot");
  std::size_t total = 0;
  const auto x = a.words();
  const auto y = b.words();
  const std::size_t last = x.size() - 1;
  for (std::size_t w = 0; w < x.size(); ++w) {
    word_type both_zero = ~(x[w] | y[w]);
    if (w == last) both_zero &= a.tail_mask();
    total += static_cast<std::size_t>(std::popcount(both_zero));
  }
  return total;
}

Accumulator::Accumulator(std::size_t dim) : dim_(dim), words_(words_for(dim)) {
  if (dim == 0) throw InvalidArgument("accumulator dimension must be >= 1");
}

void Accumulator::add(const Hypervector& v) {
  if (v.dim() != dim_) throw InvalidArgument("accumulate: dimension mismatch");
  const auto needed = static_cast<std::size_t>(std::bit_width(total_ + 1));
  if (needed > plane_count_) {
    plane_count_ = needed;
    planes_.resize(plane_count_ * words_, 0);
  }
  const auto in = v.words();
  for (std::size_t w = 0; w < words_; ++w) {
    word_type carry = in[w];
    for (std::size_t b = 0; carry != 0 && b < plane_count_; ++b) {
      word_type& plane = planes_[b * words_ + w];
      const word_type next = plane & carry;
      plane ^= carry;
      carry = next;
    }
  }
  ++total_;
}

Hypervector Accumulator::binarize(double threshold) const {
  if (total_ == 0) throw InvalidState("binarize: accumulator is empty");
  if (!(threshold >= 0.0)) throw InvalidArgument("binarize: threshold must be >= 0");
  Hypervector out(dim_);
  // count > threshold  <=>  count >= floor(threshold) + 1
  const double floored = std::floor(threshold);
  if (floored >= static_cast<double>(total_)) return out;
  const auto min_count = static_cast<std::uint64_t>(floored) + 1;
  if (std::bit_width(min_count) > plane_count_) return out;

  auto dst = out.mutable_words();
  for (std::size_t w = 0; w < words_; ++w) {
    word_type greater = 0;
    word_type equal = ~word_type{0};
    for (std::size_t b = plane_count_; b-- > 0;) {
      const word_type plane = planes_[b * words_ + w];
      if ((min_count >> b) & 1U) {
        equal &= plane;
      } else {
        greater |= equal & plane;
        equal &= ~plane;
      }
    }
    dst[w] = greater | equal;
  }
  out.canonicalize();
  return out;
}

std::uint64_t Accumulator::count(std::size_t j) const {
  if (j >= dim_) throw InvalidArgument("accumulator index out of range");
  std::uint64_t c = 0;
  for (std::size_t b = 0; b < plane_count_; ++b) {
    c |= ((planes_[b * words_ + j / kBits] >> (j % kBits)) & 1U) << b;
  }
  return c;
}

std::vector<std::uint64_t> Accumulator::counts() const {
  std::vector<std::uint64_t> out(dim_);
  for (std::size_t j = 0; j < dim_; ++j) out[j] = count(j);
  return out;
}

void Accumulator::clear() noexcept {
  total_ = 0;
  plane_count_ = 0;
  planes_.clear();
}

Hypervector majority(std::span<const Hypervector> inputs) {
  if (inputs.empty() || inputs.size() % 2 == 0) {
    throw InvalidArgument("majority needs an odd number of inputs");
  }
  Accumulator acc(inputs.front().dim());
  for (const auto& v : inputs) acc.add(v);
  return acc.binarize(static_cast<double>(inputs.size() / 2));
}

void append_serialized(const Hypervector& v, std::vector<std::uint8_t>& out) {
  const auto dim = static_cast<std::uint32_t>(v.dim());
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(dim >> (8 * i)));
  const std::size_t bytes = (v.dim() + 7) / 8;
  const auto words = v.words();
  for (std::size_t i = 0; i < bytes; ++i) {
    out.push_back(static_cast<std::uint8_t>(words[i / 8] >> (8 * (i % 8))));
  }
}

Hypervector parse_serialized(std::span<const std::uint8_t> in, std::size_t& offset) {
  if (offset + 4 > in.size()) throw InvalidArgument("hypervector record truncated");
  std::uint32_t dim = 0;
  for (int i = 0; i < 4; ++i) dim |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
  offset += 4;
  const std::size_t bytes = (static_cast<std::size_t>(dim) + 7) / 8;
  if (dim == 0 || offset + bytes > in.size()) {
    throw InvalidArgument("hypervector record truncated");
  }
  Hypervector v(dim);
  auto words = v.mutable_words();
  for (std::size_t i = 0; i < bytes; ++i) {
    words[i / 8] |= static_cast<word_type>(in[offset + i]) << (8 * (i % 8));
  }
  offset += bytes;
  if (!v.padding_is_zero()) throw InvalidArgument("hypervector record has padding bits set");
  return v;
}

}  // namespace imhdc
