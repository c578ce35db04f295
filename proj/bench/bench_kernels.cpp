#include <benchmark/benchmark.h>

#include <random>

#include "cremona3/flows.hpp"

using namespace cr3;

namespace {

Poly dense(int seed, int deg) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> c(-9, 9);
  Poly p;
  for (int a = 0; a <= deg; ++a)
    for (int b = 0; a + b <= deg; ++b)
      for (int d = 0; a + b + d <= deg; ++d) p += Poly::monomial(Mono::x(a, b, d, deg - a - b - d), Rat(c(rng)));
  return p;
}

void BM_mul_serial(benchmark::State& st) {
  Poly a = dense(1, (int)st.range(0)), b = dense(2, (int)st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(mul_serial(a, b));
}
void BM_mul_parallel(benchmark::State& st) {
  Poly a = dense(1, (int)st.range(0)), b = dense(2, (int)st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(mul_parallel(a, b));
}
BENCHMARK(BM_mul_serial)->Arg(6)->Arg(10)->Arg(14);
BENCHMARK(BM_mul_parallel)->Arg(6)->Arg(10)->Arg(14);

// the group-law minors of a flow with several generators
struct MinorInput {
  Tuple4 raw, shifted;
  MinorInput() {
    auto f = instantiate("NFtangllosc.II.14");
    Universe U = f.U;
    Tuple4 phi_s;
    for (int i = 0; i < 4; ++i) {
      phi_s[i] = rename_slot(f.comps[i], U, 1);
      shifted[i] = substitute_time_shift(f.comps[i], U);
    }
    raw = compose(phi_s, f.comps);
  }
};

void BM_minors_serial(benchmark::State& st) {
  static MinorInput in;
  for (auto _ : st) benchmark::DoNotOptimize(cross_minors_serial(in.raw, in.shifted));
}
void BM_minors_parallel(benchmark::State& st) {
  static MinorInput in;
  for (auto _ : st) benchmark::DoNotOptimize(cross_minors_parallel(in.raw, in.shifted));
}
BENCHMARK(BM_minors_serial);
BENCHMARK(BM_minors_parallel);

std::vector<QuadMap> conjugates(int n) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<QuadMap> out;
  for (int k = 0; k < n; ++k) {
    Mat A(4, 4), B(4, 4);
    do
      for (auto& x : A.a) x = Rat(d(rng));
    while (det(A).is_zero());
    do
      for (auto& x : B.a) x = Rat(d(rng));
    while (det(B).is_zero());
    out.push_back({apply_left(A, apply_right(normal_form((PRVType)(k % 7)), B)), ""});
  }
  return out;
}

void BM_classify_serial(benchmark::State& st) {
  auto maps = conjugates(28);
  for (auto _ : st) benchmark::DoNotOptimize(classify_batch_serial(maps));
}
void BM_classify_parallel(benchmark::State& st) {
  auto maps = conjugates(28);
  for (auto _ : st) benchmark::DoNotOptimize(classify_batch(maps));
}
BENCHMARK(BM_classify_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_classify_parallel)->Unit(benchmark::kMillisecond);

void BM_group_law(benchmark::State& st) {
  auto f = instantiate("NFgen.b.vi");
  for (auto _ : st) benchmark::DoNotOptimize(verify_group_law(f));
}
BENCHMARK(BM_group_law)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
