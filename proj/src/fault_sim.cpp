#include "safefault/fault_sim.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "safefault/errors.hpp"

namespace safefault {

namespace {

constexpr std::size_t kWordBits = 64;

std::shared_ptr<const ScanNetlist> borrow(const ScanNetlist& scan) {
  return std::shared_ptr<const ScanNetlist>(std::shared_ptr<void>{}, &scan);
}

void check_width(const PatternSet& patterns, std::size_t width) {
  for (std::size_t i = 0; i < patterns.patterns.size(); ++i) {
    if (patterns.patterns[i].width() != width) {
      throw InputError("pattern " + std::to_string(i + 1) + " has width " +
                       std::to_string(patterns.patterns[i].width()) + ", netlist has " +
                       std::to_string(width) + " scan inputs");
    }
  }
}

// Transposes patterns [first, first+64) into per-input words.
std::vector<Word> pack(const PatternSet& patterns, std::size_t first, std::size_t width,
                       Word& valid) {
  std::vector<Word> words(width, 0);
  const std::size_t count = std::min(kWordBits, patterns.patterns.size() - first);
  valid = count == kWordBits ? ~Word{0} : ((Word{1} << count) - 1);
  for (std::size_t b = 0; b < count; ++b) {
    const auto& bits = patterns.patterns[first + b].bits;
    for (std::size_t i = 0; i < width; ++i) {
      if (bits[i]) words[i] |= Word{1} << b;
    }
  }
  return words;
}

}  // namespace

PatternSet parse_patterns(std::string_view text, std::string source) {
  PatternSet set{{}, std::move(source)};
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.remove_suffix(1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) line.remove_prefix(1);
    if (line.empty()) continue;
    try {
      set.patterns.push_back(TestPattern::parse(line));
    } catch (const InputError& e) {
      throw ParseError(e.what(), line_no, 1);
    }
    if (set.patterns.back().width() != set.patterns.front().width()) {
      throw ParseError("pattern width differs from the first pattern", line_no, 1);
    }
  }
  return set;
}

PatternSet read_pattern_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open pattern file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_patterns(buffer.str(), path);
}

FaultEvaluator::Workspace::Workspace(const Block& block) { reset(block); }

void FaultEvaluator::Workspace::reset(const Block& block) {
  values = block.values;
  changed.assign(values.size(), 0);
  touched.clear();
  heap.clear();
}

FaultEvaluator::FaultEvaluator(const AugmentedNetlist& augmented)
    : augmented_(augmented), is_output_(augmented.net_count(), 0) {
  for (NetId o : augmented.base().outputs()) is_output_[o] = 1;
}

FaultEvaluator::Block FaultEvaluator::good(std::span<const Word> input_words, Word valid) const {
  Block block;
  block.values = simulate_augmented(augmented_, input_words);
  block.admissible = admissible_mask(augmented_, block.values) & valid;
  return block;
}

Word FaultEvaluator::detect(const Fault& fault, const Block& block, Workspace& ws) const {
  if (block.admissible == 0) return 0;
  const ScanNetlist& scan = augmented_.base();
  const auto& gates = scan.core().gates();
  const auto& good = block.values;
  if (ws.queued.size() != scan.gate_count()) ws.queued.assign(scan.gate_count(), 0);

  auto schedule_fanout = [&](NetId net) {
    if (augmented_.is_monitor_net(net)) return;
    for (const PinRef& sink : scan.fanout(net)) {
      if (ws.queued[sink.gate]) continue;
      ws.queued[sink.gate] = 1;
      ws.heap.push_back(scan.topological_position(sink.gate));
      std::push_heap(ws.heap.begin(), ws.heap.end(), std::greater<>{});
    }
  };
  auto assign = [&](NetId net, Word value) {
    if (value == good[net]) return;
    ws.values[net] = value;
    if (!ws.changed[net]) {
      ws.changed[net] = 1;
      ws.touched.push_back(net);
    }
    schedule_fanout(net);
  };

  std::vector<Word> operands;
  const Word stuck = fault.stuck_at ? ~Word{0} : Word{0};
  if (fault.site.kind == SiteKind::GateInput) {
    const Gate& g = gates[fault.site.id];
    for (NetId in : g.inputs) operands.push_back(ws.values[in]);
    operands[fault.site.pin] = stuck;
    assign(g.output, eval_gate(g.kind, operands));
  } else {
    assign(site_net(scan, fault.site), stuck);
  }

  while (!ws.heap.empty()) {
    std::pop_heap(ws.heap.begin(), ws.heap.end(), std::greater<>{});
    const GateId gi = scan.topological_order()[ws.heap.back()];
    ws.heap.pop_back();
    ws.queued[gi] = 0;
    const Gate& g = gates[gi];
    operands.clear();
    for (NetId in : g.inputs) operands.push_back(ws.values[in]);
    assign(g.output, eval_gate(g.kind, operands));
  }

  Word faulty_admissible = ~Word{0};
  if (!augmented_.unconstrained()) {
    for (const Gate& g : augmented_.added_gates()) {
      const bool dirty = std::any_of(g.inputs.begin(), g.inputs.end(),
                                     [&](NetId in) { return ws.changed[in] != 0; });
      if (!dirty) continue;
      operands.clear();
      for (NetId in : g.inputs) operands.push_back(ws.values[in]);
      assign(g.output, eval_gate(g.kind, operands));
    }
    faulty_admissible = admissible_mask(augmented_, ws.values);
  }

  Word difference = 0;
  for (NetId net : ws.touched) {
    if (!augmented_.is_monitor_net(net) && is_output_[net]) difference |= ws.values[net] ^ good[net];
  }

  for (NetId net : ws.touched) {
    ws.values[net] = good[net];
    ws.changed[net] = 0;
  }
  ws.touched.clear();
  return block.admissible & faulty_admissible & difference;
}

bool pattern_detects(const AugmentedNetlist& augmented, const Fault& fault,
                     const TestPattern& pattern) {
  if (pattern.width() != augmented.base().input_count()) return false;
  FaultEvaluator evaluator(augmented);
  const auto block = evaluator.good(pattern_words(pattern), Word{1});
  FaultEvaluator::Workspace ws(block);
  return evaluator.detect(fault, block, ws) != 0;
}

std::vector<bool> detect(const AugmentedNetlist& augmented, std::span<const Fault> faults,
                         const PatternSet& patterns, bool drop) {
  const std::size_t width = augmented.base().input_count();
  check_width(patterns, width);
  for (const Fault& f : faults) check_fault_site(augmented.base(), f);

  FaultEvaluator evaluator(augmented);
  std::vector<bool> detected(faults.size(), false);
  std::size_t remaining = faults.size();
  for (std::size_t first = 0; first < patterns.patterns.size(); first += kWordBits) {
    if (drop && remaining == 0) break;
    Word valid = 0;
    const auto words = pack(patterns, first, width, valid);
    const auto block = evaluator.good(words, valid);
    FaultEvaluator::Workspace ws(block);
    for (std::size_t i = 0; i < faults.size(); ++i) {
      if (drop && detected[i]) continue;
      if (evaluator.detect(faults[i], block, ws) != 0 && !detected[i]) {
        detected[i] = true;
        --remaining;
      }
    }
  }
  return detected;
}

std::vector<bool> detect(const ScanNetlist& scan, std::span<const Fault> faults,
                         const PatternSet& patterns, bool drop) {
  return detect(AugmentedNetlist(borrow(scan)), faults, patterns, drop);
}

PatternSet admissible_filter(const PatternSet& patterns, const AugmentedNetlist& augmented,
                             std::vector<std::size_t>* rejected) {
  const std::size_t width = augmented.base().input_count();
  check_width(patterns, width);
  PatternSet kept{{}, patterns.source};
  for (std::size_t first = 0; first < patterns.patterns.size(); first += kWordBits) {
    Word valid = 0;
    const auto words = pack(patterns, first, width, valid);
    const auto values = simulate_augmented(augmented, words);
    const Word ok = admissible_mask(augmented, values) & valid;
    for (std::size_t b = 0; first + b < patterns.patterns.size() && b < kWordBits; ++b) {
      if ((ok >> b) & 1) {
        kept.patterns.push_back(patterns.patterns[first + b]);
      } else if (rejected) {
        rejected->push_back(first + b);
      }
    }
  }
  return kept;
}

}  // namespace safefault
