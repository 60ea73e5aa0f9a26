#include "safefault/simulate.hpp"

#include "safefault/errors.hpp"

namespace safefault {

std::string TestPattern::to_string() const {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out += b ? '1' : '0';
  return out;
}

TestPattern TestPattern::parse(std::string_view text) {
  TestPattern p;
  p.bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw InputError("pattern contains non-binary character '" + std::string(1, c) + "'");
    }
    p.bits.push_back(c == '1');
  }
  return p;
}

Word eval_gate(GateKind kind, std::span<const Word> in) {
  Word acc = in[0];
  switch (kind) {
    case GateKind::And:
    case GateKind::Nand:
      for (std::size_t i = 1; i < in.size(); ++i) acc &= in[i];
      return kind == GateKind::And ? acc : ~acc;
    case GateKind::Or:
    case GateKind::Nor:
      for (std::size_t i = 1; i < in.size(); ++i) acc |= in[i];
      return kind == GateKind::Or ? acc : ~acc;
    case GateKind::Xor:
    case GateKind::Xnor:
      for (std::size_t i = 1; i < in.size(); ++i) acc ^= in[i];
      return kind == GateKind::Xor ? acc : ~acc;
    case GateKind::Not:
      return ~acc;
    case GateKind::Buf:
    case GateKind::Dff:
      return acc;
  }
  return acc;
}

std::vector<Word> simulate_words(const ScanNetlist& scan, std::span<const Word> input_words) {
  if (input_words.size() != scan.input_count()) {
    throw InputError("pattern width " + std::to_string(input_words.size()) + " does not match " +
                     std::to_string(scan.input_count()) + " scan inputs");
  }
  std::vector<Word> values(scan.net_count(), 0);
  for (std::size_t i = 0; i < input_words.size(); ++i) values[scan.inputs()[i]] = input_words[i];
  std::vector<Word> operands;
  for (GateId gi : scan.topological_order()) {
    const Gate& g = scan.core().gates()[gi];
    operands.clear();
    for (NetId in : g.inputs) operands.push_back(values[in]);
    values[g.output] = eval_gate(g.kind, operands);
  }
  return values;
}

std::vector<Word> pattern_words(const TestPattern& pattern) {
  std::vector<Word> words(pattern.width());
  for (std::size_t i = 0; i < pattern.width(); ++i) words[i] = pattern[i] ? 1 : 0;
  return words;
}

std::vector<std::uint8_t> simulate(const ScanNetlist& scan, const TestPattern& pattern) {
  const auto values = simulate_words(scan, pattern_words(pattern));
  std::vector<std::uint8_t> out;
  out.reserve(scan.outputs().size());
  for (NetId o : scan.outputs()) out.push_back(static_cast<std::uint8_t>(values[o] & 1));
  return out;
}

}  // namespace safefault
