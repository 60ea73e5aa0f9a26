#include "safefault/analysis.hpp"

#include <functional>

#include "safefault/errors.hpp"
#include "safefault/fault_sim.hpp"

namespace safefault {

namespace {

using Classifier = std::function<std::vector<Verdict>(const AugmentedNetlist&, std::span<const Fault>)>;

// Verdicts under `augmented`, given verdicts under a subset of its
// constraints.
std::vector<Verdict> refine(const AugmentedNetlist& augmented, std::span<const Fault> faults,
                            std::span<const Verdict> weaker, const Classifier& classify) {
  std::vector<Verdict> out(faults.size());
  std::vector<Fault> pending;
  std::vector<std::size_t> where;
  for (std::size_t i = 0; i < faults.size(); ++i) {
    const Verdict& prior = weaker[i];
    if (prior.kind == VerdictKind::Untestable) {
      out[i] = prior;
    } else if (prior.kind == VerdictKind::Testable &&
               pattern_detects(augmented, faults[i], prior.witness)) {
      out[i] = prior;
    } else {
      pending.push_back(faults[i]);
      where.push_back(i);
    }
  }
  auto fresh = classify(augmented, pending);
  for (std::size_t j = 0; j < pending.size(); ++j) out[where[j]] = std::move(fresh[j]);
  return out;
}

Attribution run_pipeline(const std::shared_ptr<const ScanNetlist>& scan,
                         std::span<const ConstraintSet> sets, std::span<const Fault> faults,
                         const Classifier& classify) {
  AugmentedNetlist cumulative_net(scan);
  const auto baseline = classify(cumulative_net, faults);

  std::vector<SetRun> cumulative;
  std::vector<SetRun> individual;
  const std::vector<Verdict>* previous = &baseline;
  for (const ConstraintSet& set : sets) {
    for (const auto& c : set.constraints) {
      cumulative_net = apply_constraint(std::move(cumulative_net), c);
    }
    cumulative.push_back({set.category, refine(cumulative_net, faults, *previous, classify)});
    previous = &cumulative.back().verdicts;

    const AugmentedNetlist alone = augment(scan, std::span<const ConstraintSet>(&set, 1));
    individual.push_back({set.category, refine(alone, faults, baseline, classify)});
  }
  return attribute_categories(baseline, cumulative, individual);
}

}  // namespace

Attribution attribute_categories(std::span<const Verdict> baseline,
                                 std::span<const SetRun> cumulative,
                                 std::span<const SetRun> individual) {
  const std::size_t n = baseline.size();
  for (const auto& runs : {cumulative, individual}) {
    for (const SetRun& run : runs) {
      if (run.verdicts.size() != n) throw InputError("misaligned verdict lists");
    }
  }

  Attribution result;
  result.classes.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (baseline[i].kind == VerdictKind::Untestable) {
      result.classes.emplace_back(StructurallyUntestable{});
      continue;
    }
    std::size_t safe_alone = 0;
    for (const SetRun& run : individual) {
      if (run.verdicts[i].kind == VerdictKind::Untestable) ++safe_alone;
    }
    if (safe_alone >= 2) ++result.overlap;

    const SetRun* proving = nullptr;
    for (const SetRun& run : cumulative) {
      if (run.verdicts[i].kind == VerdictKind::Untestable) {
        proving = &run;
        break;
      }
    }
    if (proving) {
      result.classes.emplace_back(ConstraintUntestable{proving->category});
      continue;
    }
    const Verdict& last = cumulative.empty() ? baseline[i] : cumulative.back().verdicts[i];
    if (last.kind == VerdictKind::Testable) {
      result.classes.emplace_back(Testable{last.witness});
    } else {
      result.classes.emplace_back(Aborted{});
    }
  }
  return result;
}

Attribution analyze(const std::shared_ptr<const ScanNetlist>& scan,
                    std::span<const ConstraintSet> sets, std::span<const Fault> faults,
                    const AtpgOptions& options) {
  return run_pipeline(scan, sets, faults,
                      [&](const AugmentedNetlist& a, std::span<const Fault> fs) {
                        return classify_all(a, fs, options);
                      });
}

Attribution analyze_exhaustive(const std::shared_ptr<const ScanNetlist>& scan,
                               std::span<const ConstraintSet> sets,
                               std::span<const Fault> faults) {
  return run_pipeline(scan, sets, faults, [](const AugmentedNetlist& a, std::span<const Fault> fs) {
    std::vector<Verdict> out;
    out.reserve(fs.size());
    for (const Fault& f : fs) out.push_back(brute_force_classify(a, f));
    return out;
  });
}

}  // namespace safefault
