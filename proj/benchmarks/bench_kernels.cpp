#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "imhdc/assoc_memory.hpp"
#include "imhdc/crossbar.hpp"
#include "imhdc/encoder.hpp"
#include "imhdc/hypervector.hpp"
#include "imhdc/item_memory.hpp"
#include "imhdc/rng.hpp"

namespace {

constexpr std::size_t kDim = 10000;

std::vector<std::uint8_t> random_text(std::size_t length, std::uint64_t seed) {
  imhdc::rng::Stream s(seed);
  std::vector<std::uint8_t> text(length);
  for (auto& c : text) c = static_cast<std::uint8_t>(s.below(27));
  return text;
}

imhdc::AssociativeMemory random_am(std::size_t classes) {
  std::vector<std::string> labels;
  std::vector<imhdc::Hypervector> protos;
  for (std::size_t i = 0; i < classes; ++i) {
    labels.push_back(std::to_string(i));
    protos.push_back(imhdc::Hypervector::random(kDim, imhdc::rng::derive(9, "bench-am", i)));
  }
  return {labels, protos};
}

}  // namespace

static void BM_Hamming(benchmark::State& state) {
  const auto a = imhdc::Hypervector::random(kDim, 1);
  const auto b = imhdc::Hypervector::random(kDim, 2);
  for (auto _ : state) benchmark::DoNotOptimize(imhdc::hamming(a, b));
}
BENCHMARK(BM_Hamming);

static void BM_CircularPermute(benchmark::State& state) {
  const auto a = imhdc::Hypervector::random(kDim, 1);
  imhdc::Hypervector out(kDim);
  for (auto _ : state) {
    imhdc::permute_into(a, 3, imhdc::Shift::circular, out);
    benchmark::DoNotOptimize(out.words().data());
  }
}
BENCHMARK(BM_CircularPermute);

// Symbols per second through the training path, per encoder kind.
static void BM_EncodeSequence(benchmark::State& state) {
  const auto kind = static_cast<imhdc::EncoderKind>(state.range(0));
  const auto im = imhdc::generate_im(27, kDim, 1);
  const imhdc::NgramEncoder enc(im, {4, kind, imhdc::PermutationMode::circular});
  const auto text = random_text(1000, 3);
  for (auto _ : state) benchmark::DoNotOptimize(enc.encode_sequence(text));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
  state.SetLabel(std::string(imhdc::to_string(kind)));
}
BENCHMARK(BM_EncodeSequence)
    ->Arg(static_cast<int>(imhdc::EncoderKind::exact))
    ->Arg(static_cast<int>(imhdc::EncoderKind::all_minterm))
    ->Arg(static_cast<int>(imhdc::EncoderKind::two_minterm));

static void BM_AmClassify(benchmark::State& state) {
  const auto am = random_am(22);
  const auto q = imhdc::Hypervector::random(kDim, 5);
  for (auto _ : state) benchmark::DoNotOptimize(am.classify(q, imhdc::Metric::dotp));
}
BENCHMARK(BM_AmClassify);

static void BM_CrossbarSearch(benchmark::State& state) {
  const auto am = random_am(22);
  const auto f = static_cast<std::size_t>(state.range(0));
  const imhdc::AmCrossbar xbar(am, f, 1, imhdc::NoiseModel{}, imhdc::Peripherals{});
  const auto q = imhdc::Hypervector::random(kDim, 5);
  std::uint64_t nonce = 0;
  for (auto _ : state) benchmark::DoNotOptimize(xbar.search(q, imhdc::Metric::dotp, nonce++));
}
BENCHMARK(BM_CrossbarSearch)->Arg(1)->Arg(10);

static void BM_CrossbarEncodeNgram(benchmark::State& state) {
  const auto im = imhdc::generate_im(27, kDim, 1);
  const imhdc::ImCrossbar xbar(im, imhdc::NoiseModel{}, imhdc::Peripherals{});
  const auto gram = random_text(4, 7);
  std::uint64_t nonce = 0;
  for (auto _ : state) benchmark::DoNotOptimize(xbar.encode_ngram(gram, nonce++));
}
BENCHMARK(BM_CrossbarEncodeNgram);

BENCHMARK_MAIN();
