#pragma once

// One-byte-per-component reference implementation used as an oracle for the
// packed kernels. Deliberately written from the definitions, without any
// word-level tricks.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "imhdc/hypervector.hpp"

namespace naive {

using Bits = std::vector<std::uint8_t>;

inline Bits from(const imhdc::Hypervector& v) {
  Bits out(v.dim());
  for (std::size_t j = 0; j < v.dim(); ++j) out[j] = v.get(j) ? 1 : 0;
  return out;
}

inline imhdc::Hypervector to_hv(const Bits& b) {
  imhdc::Hypervector v(b.size());
  for (std::size_t j = 0; j < b.size(); ++j) v.set(j, b[j] != 0);
  return v;
}

inline Bits parse(const std::string& s) {
  Bits out;
  for (char ch : s) out.push_back(ch == '1' ? 1 : 0);
  return out;
}

inline Bits xnor(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] == b[j] ? 1 : 0;
  return out;
}

inline Bits land(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = (a[j] != 0 && b[j] != 0) ? 1 : 0;
  return out;
}

inline Bits lor(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = (a[j] != 0 || b[j] != 0) ? 1 : 0;
  return out;
}

inline Bits lxor(const Bits& a, const Bits& b) {
  Bits out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] != b[j] ? 1 : 0;
  return out;
}

inline Bits lnot(const Bits& a) {
  Bits out(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out[j] = a[j] != 0 ? 0 : 1;
  return out;
}

// Component j moves to j + k: circularly, or dropping what falls off the end
// (plain right) / the start (plain left) and filling with zeros.
inline Bits rotate(const Bits& a, std::size_t k) {
  const std::size_t d = a.size();
  Bits out(d);
  for (std::size_t j = 0; j < d; ++j) out[(j + k) % d] = a[j];
  return out;
}

inline Bits shift_right(const Bits& a, std::size_t k) {
  Bits out(a.size(), 0);
  for (std::size_t j = 0; j + k < a.size(); ++j) out[j + k] = a[j];
  return out;
}

inline Bits shift_left(const Bits& a, std::size_t k) {
  Bits out(a.size(), 0);
  for (std::size_t j = k; j < a.size(); ++j) out[j - k] = a[j];
  return out;
}

inline std::size_t popcount(const Bits& a) {
  std::size_t n = 0;
  for (auto b : a) n += b;
  return n;
}

inline std::size_t hamming(const Bits& a, const Bits& b) { return popcount(lxor(a, b)); }
inline std::size_t dot(const Bits& a, const Bits& b) { return popcount(land(a, b)); }

}  // namespace naive
