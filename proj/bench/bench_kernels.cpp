#include <benchmark/benchmark.h>

#include <numeric>

#include "skewkit/deliverysim.hpp"
#include "skewkit/intervention.hpp"
#include "skewkit/unknownsim.hpp"

using namespace skewkit;

namespace {

const ObservedCounts kCounts{5512, 4488, 10'000};

void unknown_parallel(benchmark::State& state) {
  const auto prior = PriorModel::of(PriorKind::NormalInformative);
  for (auto _ : state)
    benchmark::DoNotOptimize(simulate_unknown_skew(kCounts, prior, static_cast<std::size_t>(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void unknown_serial(benchmark::State& state) {
  const auto prior = PriorModel::of(PriorKind::NormalInformative);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        reference::simulate_unknown_skew(kCounts, prior, static_cast<std::size_t>(state.range(0)), 1));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

struct Setup {
  MarketModel market = MarketModel::calibration();
  SplitPlan plan;
  std::vector<std::uint64_t> seeds;

  explicit Setup(std::int64_t n) : seeds(static_cast<std::size_t>(n)) {
    CampaignConfig c;
    c.campaign_id = "bench";
    c.daily_budget = Cents{6500};
    SplitOptions opt;
    opt.horizon_slots = 42;
    plan = build_split(c, SplitVariant::UnknownAwareSplit, {}, opt);
    std::iota(seeds.begin(), seeds.end(), 1);
  }
};

void replications_parallel(benchmark::State& state) {
  const Setup s(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(run_replications(s.plan.campaigns, s.market, 42, s.seeds, &*s.plan.schedule));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void replications_serial(benchmark::State& state) {
  const Setup s(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(
        reference::run_replications(s.plan.campaigns, s.market, 42, s.seeds, &*s.plan.schedule));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(unknown_serial)->Arg(1000)->Arg(100'000);
BENCHMARK(unknown_parallel)->Arg(1000)->Arg(100'000);
BENCHMARK(replications_serial)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(replications_parallel)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
