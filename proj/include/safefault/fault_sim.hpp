#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "safefault/constraints.hpp"
#include "safefault/fault.hpp"
#include "safefault/simulate.hpp"

namespace safefault {

struct PatternSet {
  std::vector<TestPattern> patterns;
  std::string source;
};

// One pattern per line of '0'/'1', '#' comments, blank lines ignored.
// Throws InputError on bad characters or inconsistent widths.
PatternSet parse_patterns(std::string_view text, std::string source = {});
PatternSet read_pattern_file(const std::string& path);

/// Bit-parallel good/faulty machine evaluation under an AugmentedNetlist.
///
/// A pattern detects a fault when the good machine is admissible, the faulty
/// machine is admissible (ties and monitors read faulty values), and some
/// output differs. Faulty values are computed event-driven over the fault's
/// fan-out cone only.
class FaultEvaluator {
 public:
  struct Block {
    std::vector<Word> values;  // good machine, monitor nets included
    Word admissible = 0;       // good-machine admissibility, limited to valid bits
  };

  class Workspace {
   public:
    explicit Workspace(const Block& block);
    void reset(const Block& block);

   private:
    friend class FaultEvaluator;
    std::vector<Word> values;
    std::vector<std::uint8_t> changed;
    std::vector<std::uint8_t> queued;
    std::vector<NetId> touched;
    std::vector<std::size_t> heap;
  };

  explicit FaultEvaluator(const AugmentedNetlist& augmented);

  Block good(std::span<const Word> input_words, Word valid = ~Word{0}) const;
  // Bits of `block` whose pattern detects `fault`. `ws` must hold the
  // block's good values (constructed or reset from it); it is restored on return.
  Word detect(const Fault& fault, const Block& block, Workspace& ws) const;

  const AugmentedNetlist& augmented() const { return augmented_; }

 private:
  const AugmentedNetlist& augmented_;
  std::vector<std::uint8_t> is_output_;
};

// Full-semantics single-pattern check, used for witness replay.
bool pattern_detects(const AugmentedNetlist& augmented, const Fault& fault,
                     const TestPattern& pattern);

// Flags aligned with `faults`. With `drop`, detected faults are not
// simulated against later pattern blocks; the result is identical either way.
// Throws InputError on width mismatch.
std::vector<bool> detect(const AugmentedNetlist& augmented, std::span<const Fault> faults,
                         const PatternSet& patterns, bool drop);
std::vector<bool> detect(const ScanNetlist& scan, std::span<const Fault> faults,
                         const PatternSet& patterns, bool drop);

// Keeps the patterns that satisfy every tie and match no forbidden cube, in
// order. Indices of dropped patterns go to `rejected` when given.
PatternSet admissible_filter(const PatternSet& patterns, const AugmentedNetlist& augmented,
                             std::vector<std::size_t>* rejected = nullptr);

}  // namespace safefault
