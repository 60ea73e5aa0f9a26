#pragma once

#include <memory>
#include <span>
#include <vector>

#include "safefault/atpg.hpp"
#include "safefault/constraints.hpp"
#include "safefault/fault.hpp"

namespace safefault {

// Verdicts of one run, tagged with the category of the set that run added.
struct SetRun {
  Category category;
  std::vector<Verdict> verdicts;
};

struct Attribution {
  std::vector<FaultClass> classes;  // one per fault
  // Faults (not structurally untestable) that each of at least two sets
  // proves safe on its own.
  std::size_t overlap = 0;
};

// `cumulative[k]` holds verdicts under sets 1..k applied together, in file
// order; `individual[k]` under set k alone. A fault untestable in the
// baseline is structurally untestable; otherwise it belongs to the first set
// whose cumulative run proves it untestable. The rest take their class from
// the last run (Testable with its witness, or Aborted).
// Throws InputError when the lists are not index-aligned.
Attribution attribute_categories(std::span<const Verdict> baseline,
                                 std::span<const SetRun> cumulative,
                                 std::span<const SetRun> individual);

// Runs the baseline, cumulative and individual classifications and
// attributes categories. Faults already proven untestable are carried
// forward into later cumulative runs, and an existing witness is reused when
// it still replays under the added constraints.
Attribution analyze(const std::shared_ptr<const ScanNetlist>& scan,
                    std::span<const ConstraintSet> sets, std::span<const Fault> faults,
                    const AtpgOptions& options);

// Same pipeline with brute_force_classify in place of the SAT engine.
Attribution analyze_exhaustive(const std::shared_ptr<const ScanNetlist>& scan,
                               std::span<const ConstraintSet> sets,
                               std::span<const Fault> faults);

}  // namespace safefault
