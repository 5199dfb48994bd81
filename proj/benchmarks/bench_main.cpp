#include <benchmark/benchmark.h>

#include <filesystem>
#include <random>

#include "ualg/algebra_io.hpp"
#include "ualg/free_algebra.hpp"
#include "ualg/witness.hpp"

using namespace ualg;

namespace {

std::filesystem::path corpus(const std::string& rel) { return std::filesystem::path(UALG_CORPUS_DIR) / rel; }

void BM_CongruenceClosure(benchmark::State& state) {
  auto z12 = load_algebra(corpus("rings/z12.alg"));
  auto prod = product(z12, z12);
  std::mt19937 rng(7);
  std::uniform_int_distribution<Element> pick(0, static_cast<Element>(prod.algebra->size() - 1));
  std::vector<std::pair<Element, Element>> seeds;
  for (int64_t i = 0; i < state.range(0); ++i) seeds.emplace_back(pick(rng), pick(rng));
  for (auto _ : state) benchmark::DoNotOptimize(congruence_closure(prod.algebra, seeds));
}
BENCHMARK(BM_CongruenceClosure)->Arg(1)->Arg(4);

void BM_FreeAlgebra(benchmark::State& state) {
  Variety v({load_algebra(corpus("rings/z3.alg"))});
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(free_algebra(v, n).algebra()->size());
}
BENCHMARK(BM_FreeAlgebra)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_VerifyCertificate(benchmark::State& state) {
  auto z6 = load_algebra(corpus("rings/z6.alg"));
  Variety v({z6});
  auto cert = parse_certificate(read_file(corpus("rings/crings.cert")), z6->signature());
  for (auto _ : state) benchmark::DoNotOptimize(verify_certificate(cert, v).ok());
}
BENCHMARK(BM_VerifyCertificate)->Unit(benchmark::kMillisecond);

void BM_SearchDiag(benchmark::State& state) {
  Variety v({load_algebra(corpus("rings/z6.alg"))});
  for (auto _ : state) benchmark::DoNotOptimize(search_diag(v, {}).status);
}
BENCHMARK(BM_SearchDiag)->Unit(benchmark::kMillisecond);

void BM_SearchCertificateZ2(benchmark::State& state) {
  auto z2 = load_algebra(corpus("rings/z2.alg"));
  Variety v({z2});
  auto pack = parse_pack(read_file(corpus("rings/pack.diag")), z2->signature());
  for (auto _ : state) benchmark::DoNotOptimize(search_certificate(v, pack).certificate.has_value());
}
BENCHMARK(BM_SearchCertificateZ2)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
