#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "safefault/scan.hpp"

namespace safefault {

// 64 patterns evaluated side by side, one per bit.
using Word = std::uint64_t;

/// Complete binary assignment to the inputs of a scan netlist, in
/// ScanNetlist::inputs() order.
struct TestPattern {
  std::vector<std::uint8_t> bits;

  std::size_t width() const { return bits.size(); }
  bool operator[](std::size_t i) const { return bits[i] != 0; }
  std::string to_string() const;
  // Throws InputError on any character other than '0' or '1'.
  static TestPattern parse(std::string_view text);
  friend bool operator==(const TestPattern&, const TestPattern&) = default;
};

Word eval_gate(GateKind kind, std::span<const Word> inputs);

// Value of every net for up to 64 patterns; input_words[i] drives inputs()[i].
std::vector<Word> simulate_words(const ScanNetlist& scan, std::span<const Word> input_words);

// Broadcasts one pattern into bit 0 of each input word.
std::vector<Word> pattern_words(const TestPattern& pattern);

// Values on outputs() (POs, then pseudo-POs). Throws InputError when the
// pattern width differs from input_count().
std::vector<std::uint8_t> simulate(const ScanNetlist& scan, const TestPattern& pattern);

}  // namespace safefault
