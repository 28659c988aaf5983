#include <random>

#include <benchmark/benchmark.h>

#include "nlos/key_agreement.hpp"

using namespace nlos::keyagree;

static void BM_ModPow2048(benchmark::State& state) {
  const auto params = PublicParams::modp2048();
  std::mt19937_64 rng(1);
  const BigInt e = sample_exponent(params, rng);
  for (auto _ : state) benchmark::DoNotOptimize(mod_pow(params.g(), e, params.n()));
}
BENCHMARK(BM_ModPow2048)->Unit(benchmark::kMillisecond);

static void BM_DeriveDigest2048(benchmark::State& state) {
  const auto params = PublicParams::modp2048();
  for (auto _ : state) benchmark::DoNotOptimize(derive_digest("open-sesame", params));
}
BENCHMARK(BM_DeriveDigest2048)->Unit(benchmark::kMicrosecond);

static void BM_Handshake2048(benchmark::State& state) {
  const auto params = PublicParams::modp2048();
  const auto d = derive_digest("open-sesame", params);
  std::mt19937_64 rng(2);
  for (auto _ : state) {
    const BigInt a = sample_exponent(params, rng), b = sample_exponent(params, rng);
    benchmark::DoNotOptimize(run_handshake(d, d, params, a, b));
  }
}
BENCHMARK(BM_Handshake2048)->Unit(benchmark::kMillisecond);

static void BM_Handshake64(benchmark::State& state) {
  const PublicParams params(BigInt("18446744073709551557"), 2);
  const auto d = derive_digest("open-sesame", params);
  std::mt19937_64 rng(3);
  for (auto _ : state) {
    const BigInt a = sample_exponent(params, rng), b = sample_exponent(params, rng);
    benchmark::DoNotOptimize(run_handshake(d, d, params, a, b));
  }
}
BENCHMARK(BM_Handshake64);
