// Copyright 2026 The rforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "search/search.h"

#include <algorithm>
#include <optional>
#include <utility>

#include "common/log.h"
#include "workload/sampling.h"

namespace rforge {

namespace {

// Attempts at drawing a random point outside every stored Mfs before the
// space is declared exhausted.
constexpr int kMaxStartAttempts = 10000;

// Seed streams derived from the campaign seed.
constexpr uint64_t kRankingStream = 1;
constexpr uint64_t kRandomStream = 2;
constexpr uint64_t kSaStreamBase = 1000;

double ObjectiveValue(const Measurement& m, const CounterObjective& objective) {
  return m.Counter(objective.counter_id).value_or(0.0);
}

struct Current {
  WorkloadPoint point;
  double value = 0.0;
};

// Draws a random point outside every stored Mfs, or nullopt.
std::optional<WorkloadPoint> DrawUnskipped(Evaluator& ev, Rng& rng,
                                           int64_t* skips) {
  for (int i = 0; i < kMaxStartAttempts; ++i) {
    WorkloadPoint p = SampleRandom(ev.space(), rng);
    if (!ev.Skipped(p)) return p;
    ev.CountSkip();
    if (skips) ++*skips;
  }
  return std::nullopt;
}

// Random (re)start: evaluates random points until one is not anomalous.
// Anomalies met on the way are recorded. nullopt means the budget or the
// space ran out (see `termination`).
absl::StatusOr<std::optional<Current>> RandomStart(
    const CounterObjective& objective, Evaluator& ev, Rng& rng,
    SaRunStats& stats) {
  while (ev.BudgetLeft()) {
    std::optional<WorkloadPoint> p = DrawUnskipped(ev, rng, &stats.skips);
    if (!p) {
      stats.termination = Termination::kSpaceExhausted;
      return std::optional<Current>();
    }
    absl::StatusOr<Evaluator::Result> r = ev.Evaluate(*p, objective.counter_id);
    if (!r.ok()) return r.status();
    ++stats.evaluations;
    if (r->symptom) {
      absl::StatusOr<AnomalyRecord> rec =
          ev.Discover(*p, *r, objective.counter_id, objective.counter_id);
      if (!rec.ok()) return rec.status();
      continue;
    }
    return std::optional<Current>(
        Current{*std::move(p), ObjectiveValue(r->measurement, objective)});
  }
  stats.termination = Termination::kBudgetExhausted;
  return std::optional<Current>();
}

}  // namespace

absl::Status SaConfig::Validate() const {
  if (!(t_min > 0.0)) return absl::InvalidArgumentError("t_min must be > 0");
  if (!(t0 > t_min)) {
    return absl::InvalidArgumentError("t0 must be greater than t_min");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    return absl::InvalidArgumentError("alpha must be in (0, 1)");
  }
  if (n_per_temperature < 1) {
    return absl::InvalidArgumentError("n_per_temperature must be >= 1");
  }
  if (eval_budget < 0) {
    return absl::InvalidArgumentError("eval_budget must be >= 0");
  }
  if (mfs_allowance < 0) {
    return absl::InvalidArgumentError("mfs_allowance must be >= 0");
  }
  return absl::OkStatus();
}

std::string_view TerminationName(Termination t) {
  switch (t) {
    case Termination::kBudgetExhausted: return "budget-exhausted";
    case Termination::kTemperatureFloor: return "temperature-floor";
    case Termination::kSpaceExhausted: return "space-exhausted";
    case Termination::kTesterError: return "tester-error";
  }
  return "?";
}

std::vector<CounterObjective> CampaignOptions::DefaultCounters() {
  return {{std::string(kRecvWqeCacheMiss), CounterKind::kDiagnostic},
          {std::string(kIcmCacheMiss), CounterKind::kDiagnostic},
          {std::string(kPcieBackpressure), CounterKind::kDiagnostic},
          {std::string(kPacketEngineStall), CounterKind::kDiagnostic}};
}

absl::Status SearchSa(const CounterObjective& objective, const SaConfig& config,
                      Evaluator& ev, Rng& rng, SaRunStats* stats_out) {
  SaRunStats stats;
  absl::Status status = [&]() -> absl::Status {
    double t = config.t0;
    if (!(t > config.t_min)) {
      stats.termination = Termination::kTemperatureFloor;
      return absl::OkStatus();
    }
    absl::StatusOr<std::optional<Current>> start =
        RandomStart(objective, ev, rng, stats);
    if (!start.ok()) return start.status();
    if (!start->has_value()) return absl::OkStatus();
    Current cur = **std::move(start);

    while (t > config.t_min) {
      for (int i = 0; i < config.n_per_temperature; ++i) {
        if (!ev.BudgetLeft()) {
          stats.termination = Termination::kBudgetExhausted;
          return absl::OkStatus();
        }
        ++stats.iterations;
        WorkloadPoint next = Mutate(cur.point, ev.space(), rng);
        if (ev.Skipped(next)) {
          ev.CountSkip();
          ++stats.skips;
          continue;
        }
        absl::StatusOr<Evaluator::Result> r =
            ev.Evaluate(next, objective.counter_id);
        if (!r.ok()) return r.status();
        ++stats.evaluations;
        if (r->symptom) {
          absl::StatusOr<AnomalyRecord> rec =
              ev.Discover(next, *r, objective.counter_id, objective.counter_id);
          if (!rec.ok()) return rec.status();
          absl::StatusOr<std::optional<Current>> restart =
              RandomStart(objective, ev, rng, stats);
          if (!restart.ok()) return restart.status();
          if (!restart->has_value()) return absl::OkStatus();
          cur = **std::move(restart);
          continue;
        }
        const double value = ObjectiveValue(r->measurement, objective);
        const DeltaEnergyResult de = DeltaEnergy(cur.value, value, objective.kind);
        if (de.zero_denominator) {
          ev.CountZeroDenominator();
          Log().debug("zero denominator in energy at eval {}",
                      ev.total_evaluations() - 1);
        }
        if (AcceptMove(de.delta, t, rng)) {
          ++stats.accepted;
          cur = Current{std::move(next), value};
        }
      }
      t *= config.alpha;
      ++stats.temperature_steps;
    }
    stats.termination = Termination::kTemperatureFloor;
    return absl::OkStatus();
  }();
  if (!status.ok()) stats.termination = Termination::kTesterError;
  if (stats_out) *stats_out = stats;
  return status;
}

absl::Status SearchRandom(Evaluator& ev, Rng& rng, Termination* termination) {
  Termination why = Termination::kBudgetExhausted;
  absl::Status status = [&]() -> absl::Status {
    while (ev.BudgetLeft()) {
      std::optional<WorkloadPoint> p = DrawUnskipped(ev, rng, nullptr);
      if (!p) {
        why = Termination::kSpaceExhausted;
        return absl::OkStatus();
      }
      absl::StatusOr<Evaluator::Result> r = ev.Evaluate(*p, kPauseCounterId);
      if (!r.ok()) return r.status();
      if (r->symptom) {
        absl::StatusOr<AnomalyRecord> rec =
            ev.Discover(*p, *r, kPauseCounterId, "random");
        if (!rec.ok()) return rec.status();
      }
    }
    return absl::OkStatus();
  }();
  if (!status.ok()) why = Termination::kTesterError;
  if (termination) *termination = why;
  return status;
}

namespace {

EvaluatorOptions MakeEvaluatorOptions(const CampaignOptions& options) {
  EvaluatorOptions eo;
  eo.policy = options.detection;
  eo.root_seed = options.sa.seed;
  eo.eval_budget = options.sa.eval_budget;
  eo.mfs_allowance = options.sa.mfs_allowance;
  return eo;
}

void FillReport(const Evaluator& ev, CampaignReport& report) {
  report.anomalies = ev.discovered();
  report.trajectory = ev.trajectory();
  report.budget_evaluations = ev.budget_used();
  report.mfs_evaluations = ev.mfs_evaluations();
  report.total_evaluations = ev.total_evaluations();
  report.skipped_points = ev.skipped_points();
  report.zero_denominator_steps = ev.zero_denominator_steps();
}

}  // namespace

CampaignReport RunRandomCampaign(const CampaignOptions& options,
                                 const SearchSpace& space,
                                 const SubsystemSpec& spec, Tester& tester) {
  CampaignReport report;
  report.seed = options.sa.seed;
  report.eval_budget = options.sa.eval_budget;
  Evaluator ev(tester, spec, space, MakeEvaluatorOptions(options),
               options.known);
  Rng rng(MixSeed(options.sa.seed, kRandomStream));
  report.status = SearchRandom(ev, rng, &report.termination);
  FillReport(ev, report);
  return report;
}

CampaignReport RunCampaign(const CampaignOptions& options,
                           const SearchSpace& space, const SubsystemSpec& spec,
                           Tester& tester) {
  if (options.counters.empty()) {
    Log().info("no counters configured; running random search");
    return RunRandomCampaign(options, space, spec, tester);
  }
  CampaignReport report;
  report.seed = options.sa.seed;
  report.eval_budget = options.sa.eval_budget;
  Evaluator ev(tester, spec, space, MakeEvaluatorOptions(options),
               options.known);

  report.status = [&]() -> absl::Status {
    // Ranking preamble.
    Rng rng(MixSeed(options.sa.seed, kRankingStream));
    std::vector<Measurement> samples;
    for (int i = 0; i < kRankingSamples && ev.BudgetLeft(); ++i) {
      std::optional<WorkloadPoint> p = DrawUnskipped(ev, rng, nullptr);
      if (!p) {
        report.termination = Termination::kSpaceExhausted;
        return absl::OkStatus();
      }
      absl::StatusOr<Evaluator::Result> r = ev.Evaluate(*p, kPauseCounterId);
      if (!r.ok()) return r.status();
      samples.push_back(r->measurement);
      if (r->symptom) {
        absl::StatusOr<AnomalyRecord> rec =
            ev.Discover(*p, *r, kPauseCounterId, "ranking");
        if (!rec.ok()) return rec.status();
      }
    }

    std::vector<RankedCounter> ranked;
    if (samples.size() >= 2) ranked = RankCounters(samples);
    for (const RankedCounter& r : ranked) {
      for (const CounterObjective& c : options.counters) {
        if (c == r.objective) report.ranking.push_back(r);
      }
    }
    // Configured counters the samples did not report keep config order.
    for (const CounterObjective& c : options.counters) {
      bool present = false;
      for (const RankedCounter& r : report.ranking) {
        present = present || r.objective == c;
      }
      if (!present) report.ranking.push_back({c, std::nullopt});
    }
    for (const RankedCounter& r : report.ranking) {
      Log().info("counter {} ({}) cv {}", r.objective.counter_id,
                 CounterKindName(r.objective.kind),
                 r.cv ? std::to_string(*r.cv) : "n/a");
    }

    // Annealing passes over the ranked counters.
    uint64_t run = 0;
    report.termination = Termination::kBudgetExhausted;
    const int64_t counters = static_cast<int64_t>(report.ranking.size());
    while (ev.BudgetLeft()) {
      const int64_t before = ev.budget_used();
      for (int64_t j = 0; j < counters; ++j) {
        const RankedCounter& r = report.ranking[j];
        if (!ev.BudgetLeft()) break;
        // Each counter gets an equal share of what is left; budget a run
        // does not use rolls over to the next counter.
        const int64_t remaining = options.sa.eval_budget - ev.budget_used();
        ev.SetRunLimit(ev.budget_used() +
                       std::max<int64_t>(1, remaining / (counters - j)));
        Rng sa_rng(MixSeed(options.sa.seed, kSaStreamBase + run++));
        SaRunStats stats;
        absl::Status s = SearchSa(r.objective, options.sa, ev, sa_rng, &stats);
        ev.ClearRunLimit();
        if (!s.ok()) return s;
        Log().info("SA on {}: {} iterations, {} evaluations, {} skips, {}",
                   r.objective.counter_id, stats.iterations, stats.evaluations,
                   stats.skips, TerminationName(stats.termination));
        if (stats.termination == Termination::kSpaceExhausted) {
          report.termination = Termination::kSpaceExhausted;
          return absl::OkStatus();
        }
      }
      if (ev.budget_used() == before) {
        // t0 <= t_min: annealing makes no progress.
        report.termination = Termination::kTemperatureFloor;
        break;
      }
    }
    return absl::OkStatus();
  }();
  if (!report.status.ok()) report.termination = Termination::kTesterError;
  FillReport(ev, report);
  return report;
}

}  // namespace rforge
