#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "safefault/constraints.hpp"
#include "safefault/fault.hpp"
#include "safefault/simulate.hpp"

namespace safefault {

enum class VerdictKind : std::uint8_t { Testable, Untestable, Aborted };

struct Verdict {
  VerdictKind kind = VerdictKind::Aborted;
  TestPattern witness;  // set only for Testable

  static Verdict testable(TestPattern witness) { return {VerdictKind::Testable, std::move(witness)}; }
  static Verdict untestable() { return {VerdictKind::Untestable, {}}; }
  static Verdict aborted() { return {VerdictKind::Aborted, {}}; }

  bool is_testable() const { return kind == VerdictKind::Testable; }
  bool is_untestable() const { return kind == VerdictKind::Untestable; }
  bool is_aborted() const { return kind == VerdictKind::Aborted; }

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline constexpr std::uint64_t kDefaultDecisionBudget = 100'000;
inline constexpr std::size_t kBruteForceInputCap = 20;

struct AtpgOptions {
  std::uint64_t budget = kDefaultDecisionBudget;  // SAT branching decisions per fault
  // Pseudo-random patterns (rounded up to 64) simulated before any SAT call;
  // a detecting one becomes the witness. 0 disables the pre-pass.
  std::size_t random_patterns = 256;
  unsigned jobs = 1;
};

// Complete decision for one fault: good and faulty copies share inputs, ties
// and monitor outputs constrain both copies, and the miter asks for a
// difference on some output. Untestable is a proof; Aborted only means the
// budget ran out (budget 0 always aborts). Witnesses are replayed through the
// simulator before being returned; a failed replay throws InconsistencyError.
// Throws InputError when the fault site is not in the netlist.
Verdict classify_fault(const AugmentedNetlist& augmented, const Fault& fault,
                       std::uint64_t budget = kDefaultDecisionBudget);

// One verdict per fault, index-aligned. Independent of `jobs`.
std::vector<Verdict> classify_all(const AugmentedNetlist& augmented, std::span<const Fault> faults,
                                  const AtpgOptions& options = {});

// Exhaustive reference: every input pattern in lexicographic order (input 0
// is the most significant position), admissible ones only. Never aborts.
// Throws InputError above kBruteForceInputCap inputs.
Verdict brute_force_classify(const AugmentedNetlist& augmented, const Fault& fault);

}  // namespace safefault
