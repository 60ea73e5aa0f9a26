#include "safefault/atpg.hpp"

#include <atomic>
#include <bit>
#include <random>
#include <thread>

#include "safefault/errors.hpp"
#include "safefault/fault_sim.hpp"
#include "safefault/sat.hpp"

namespace safefault {

namespace {

using sat::Lit;

constexpr std::uint64_t kPrepassSeed = 0x5afe'fa17'0000'0001ULL;

/// CNF for "some admissible pattern makes the good and faulty machines
/// differ on an output". Only the transitive fan-in of what is observed or
/// constrained is encoded; the faulty copy covers the fault's fan-out cone
/// and reuses good-copy literals everywhere else.
class MiterEncoder {
 public:
  MiterEncoder(const AugmentedNetlist& augmented, const Fault& fault)
      : augmented_(augmented), scan_(augmented.base()), fault_(fault) {
    true_ = Lit::positive(solver_.new_var());
    solver_.add_clause({true_});
  }

  Verdict run(std::uint64_t budget) {
    mark_cone();
    mark_needed();
    encode_good();
    encode_faulty();
    encode_monitors();
    encode_constraints();
    if (!encode_miter()) return Verdict::untestable();

    switch (solver_.solve(budget)) {
      case sat::Result::Unsatisfiable:
        return Verdict::untestable();
      case sat::Result::Unknown:
        return Verdict::aborted();
      case sat::Result::Satisfiable:
        break;
    }
    TestPattern witness;
    witness.bits.assign(scan_.input_count(), 0);
    for (std::size_t i = 0; i < scan_.input_count(); ++i) {
      const NetId in = scan_.inputs()[i];
      if (has_good_[in]) witness.bits[i] = solver_.model_value(good_[in].var()) != good_[in].is_negated();
    }
    return Verdict::testable(std::move(witness));
  }

 private:
  Lit constant(bool v) const { return v ? true_ : ~true_; }
  bool is_constant(Lit l) const { return l.var() == true_.var(); }
  Lit fresh() { return Lit::positive(solver_.new_var()); }

  Lit encode_and(std::vector<Lit> ins) {
    std::vector<Lit> kept;
    for (Lit l : ins) {
      if (l == constant(false)) return constant(false);
      if (l != constant(true)) kept.push_back(l);
    }
    if (kept.empty()) return constant(true);
    if (kept.size() == 1) return kept.front();
    const Lit out = fresh();
    std::vector<Lit> big{out};
    for (Lit l : kept) {
      solver_.add_clause({~out, l});
      big.push_back(~l);
    }
    solver_.add_clause(big);
    return out;
  }

  Lit encode_xor(Lit a, Lit b) {
    if (is_constant(a)) std::swap(a, b);
    if (is_constant(b)) return b == constant(true) ? ~a : a;
    if (a == b) return constant(false);
    if (a == ~b) return constant(true);
    const Lit out = fresh();
    solver_.add_clause({~out, a, b});
    solver_.add_clause({~out, ~a, ~b});
    solver_.add_clause({out, ~a, b});
    solver_.add_clause({out, a, ~b});
    return out;
  }

  Lit encode_gate(GateKind kind, std::vector<Lit> ins) {
    auto negate_all = [&] {
      for (Lit& l : ins) l = ~l;
    };
    switch (kind) {
      case GateKind::And:
        return encode_and(std::move(ins));
      case GateKind::Nand:
        return ~encode_and(std::move(ins));
      case GateKind::Or:
        negate_all();
        return ~encode_and(std::move(ins));
      case GateKind::Nor:
        negate_all();
        return encode_and(std::move(ins));
      case GateKind::Xor:
      case GateKind::Xnor: {
        Lit acc = ins.front();
        for (std::size_t i = 1; i < ins.size(); ++i) acc = encode_xor(acc, ins[i]);
        return kind == GateKind::Xor ? acc : ~acc;
      }
      case GateKind::Not:
        return ~ins.front();
      case GateKind::Buf:
      case GateKind::Dff:
        return ins.front();
    }
    return ins.front();
  }

  Lit faulty_of(NetId net) const { return cone_[net] ? faulty_[net] : good_[net]; }

  void mark_cone() {
    cone_.assign(augmented_.net_count(), 0);
    const auto& gates = scan_.core().gates();
    if (fault_.site.kind == SiteKind::GateInput) {
      cone_[gates[fault_.site.id].output] = 1;
    } else {
      stem_ = site_net(scan_, fault_.site);
      cone_[*stem_] = 1;
    }
    for (GateId gi : scan_.topological_order()) {
      const Gate& g = gates[gi];
      for (NetId in : g.inputs) {
        if (cone_[in]) cone_[g.output] = 1;
      }
    }
    for (const Gate& g : augmented_.added_gates()) {
      for (NetId in : g.inputs) {
        if (cone_[in]) cone_[g.output] = 1;
      }
    }
  }

  void mark_needed() {
    need_.assign(scan_.net_count(), 0);
    std::vector<NetId> stack;
    auto root = [&](NetId net) {
      if (net < need_.size() && !need_[net]) {
        need_[net] = 1;
        stack.push_back(net);
      }
    };
    for (NetId o : scan_.outputs()) {
      if (cone_[o]) root(o);
    }
    for (const auto& [net, value] : augmented_.tied_nets()) root(net);
    for (const Gate& g : augmented_.added_gates()) {
      for (NetId in : g.inputs) root(in);
    }
    while (!stack.empty()) {
      const NetId net = stack.back();
      stack.pop_back();
      if (auto drv = scan_.driver(net)) {
        for (NetId in : scan_.core().gates()[*drv].inputs) root(in);
      }
    }
  }

  void encode_good() {
    good_.assign(augmented_.net_count(), constant(false));
    has_good_.assign(augmented_.net_count(), 0);
    for (NetId in : scan_.inputs()) {
      if (!need_[in]) continue;
      good_[in] = fresh();
      has_good_[in] = 1;
    }
    for (GateId gi : scan_.topological_order()) {
      const Gate& g = scan_.core().gates()[gi];
      if (!need_[g.output]) continue;
      std::vector<Lit> ins;
      for (NetId in : g.inputs) ins.push_back(good_[in]);
      good_[g.output] = encode_gate(g.kind, std::move(ins));
      has_good_[g.output] = 1;
    }
  }

  void encode_faulty() {
    faulty_.assign(augmented_.net_count(), constant(false));
    const bool stuck = fault_.stuck_at;
    if (stem_) faulty_[*stem_] = constant(stuck);
    for (GateId gi : scan_.topological_order()) {
      const Gate& g = scan_.core().gates()[gi];
      if (!cone_[g.output] || !need_[g.output] || (stem_ && g.output == *stem_)) continue;
      std::vector<Lit> ins;
      for (std::uint32_t pin = 0; pin < g.inputs.size(); ++pin) {
        const bool faulted = fault_.site.kind == SiteKind::GateInput && fault_.site.id == gi &&
                             fault_.site.pin == pin;
        ins.push_back(faulted ? constant(stuck) : faulty_of(g.inputs[pin]));
      }
      faulty_[g.output] = encode_gate(g.kind, std::move(ins));
    }
  }

  void encode_monitors() {
    for (const Gate& g : augmented_.added_gates()) {
      std::vector<Lit> ins;
      for (NetId in : g.inputs) ins.push_back(good_[in]);
      good_[g.output] = encode_gate(g.kind, std::move(ins));
      if (!cone_[g.output]) continue;
      ins.clear();
      for (NetId in : g.inputs) ins.push_back(faulty_of(in));
      faulty_[g.output] = encode_gate(g.kind, std::move(ins));
    }
  }

  void encode_constraints() {
    for (const auto& [net, value] : augmented_.tied_nets()) {
      solver_.add_clause({value ? good_[net] : ~good_[net]});
      if (cone_[net]) solver_.add_clause({value ? faulty_[net] : ~faulty_[net]});
    }
    for (NetId m : augmented_.monitor_outputs()) {
      solver_.add_clause({~good_[m]});
      if (cone_[m]) solver_.add_clause({~faulty_[m]});
    }
  }

  // False when no output can ever differ.
  bool encode_miter() {
    std::vector<Lit> differences;
    std::vector<std::uint8_t> done(scan_.net_count(), 0);
    for (NetId o : scan_.outputs()) {
      if (!cone_[o] || done[o]) continue;
      done[o] = 1;
      const Lit d = encode_xor(good_[o], faulty_[o]);
      if (d == constant(false)) continue;
      differences.push_back(d);
    }
    if (differences.empty()) return false;
    solver_.add_clause(differences);
    return true;
  }

  const AugmentedNetlist& augmented_;
  const ScanNetlist& scan_;
  Fault fault_;
  sat::Solver solver_;
  Lit true_{0};
  std::optional<NetId> stem_;
  std::vector<std::uint8_t> cone_;
  std::vector<std::uint8_t> need_;
  std::vector<Lit> good_;
  std::vector<std::uint8_t> has_good_;
  std::vector<Lit> faulty_;
};

void replay_or_throw(const AugmentedNetlist& augmented, const Fault& fault, const Verdict& v) {
  if (v.kind != VerdictKind::Testable) return;
  if (!pattern_detects(augmented, fault, v.witness)) {
    throw InconsistencyError("witness " + v.witness.to_string() + " does not replay for " +
                             fault_label(augmented.base(), fault));
  }
}

TestPattern unpack(std::span<const Word> words, unsigned bit) {
  TestPattern p;
  p.bits.reserve(words.size());
  for (Word w : words) p.bits.push_back(static_cast<std::uint8_t>((w >> bit) & 1));
  return p;
}

}  // namespace

Verdict classify_fault(const AugmentedNetlist& augmented, const Fault& fault, std::uint64_t budget) {
  check_fault_site(augmented.base(), fault);
  if (budget == 0) return Verdict::aborted();
  Verdict verdict = MiterEncoder(augmented, fault).run(budget);
  replay_or_throw(augmented, fault, verdict);
  return verdict;
}

std::vector<Verdict> classify_all(const AugmentedNetlist& augmented, std::span<const Fault> faults,
                                  const AtpgOptions& options) {
  for (const Fault& f : faults) check_fault_site(augmented.base(), f);
  std::vector<Verdict> verdicts(faults.size(), Verdict::aborted());
  if (options.budget == 0 || faults.empty()) return verdicts;

  FaultEvaluator evaluator(augmented);
  std::vector<std::vector<Word>> block_inputs;
  std::vector<FaultEvaluator::Block> blocks;
  std::mt19937_64 rng(kPrepassSeed);
  const std::size_t width = augmented.base().input_count();
  for (std::size_t n = 0; n < options.random_patterns; n += 64) {
    std::vector<Word> words(width);
    for (Word& w : words) w = rng();
    blocks.push_back(evaluator.good(words));
    block_inputs.push_back(std::move(words));
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    std::vector<FaultEvaluator::Workspace> spaces;
    for (const auto& b : blocks) spaces.emplace_back(b);
    for (std::size_t i = next++; i < faults.size(); i = next++) {
      Verdict v = Verdict::aborted();
      bool found = false;
      for (std::size_t b = 0; b < blocks.size() && !found; ++b) {
        if (const Word mask = evaluator.detect(faults[i], blocks[b], spaces[b])) {
          v = Verdict::testable(unpack(block_inputs[b], static_cast<unsigned>(std::countr_zero(mask))));
          replay_or_throw(augmented, faults[i], v);
          found = true;
        }
      }
      verdicts[i] = found ? std::move(v) : classify_fault(augmented, faults[i], options.budget);
    }
  };

  const unsigned jobs = std::max(1u, options.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) {
      threads.emplace_back([&, t] {
        try {
          worker();
        } catch (...) {
          errors[t] = std::current_exception();
          next = faults.size();
        }
      });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  return verdicts;
}

Verdict brute_force_classify(const AugmentedNetlist& augmented, const Fault& fault) {
  check_fault_site(augmented.base(), fault);
  const std::size_t n = augmented.base().input_count();
  if (n > kBruteForceInputCap) {
    throw InputError("exhaustive classification is capped at " +
                     std::to_string(kBruteForceInputCap) + " inputs, netlist has " +
                     std::to_string(n));
  }
  FaultEvaluator evaluator(augmented);
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t first = 0; first < total; first += 64) {
    const std::uint64_t count = std::min<std::uint64_t>(64, total - first);
    std::vector<Word> words(n, 0);
    for (std::uint64_t b = 0; b < count; ++b) {
      const std::uint64_t index = first + b;
      for (std::size_t i = 0; i < n; ++i) {
        if ((index >> (n - 1 - i)) & 1) words[i] |= Word{1} << b;
      }
    }
    const Word valid = count == 64 ? ~Word{0} : ((Word{1} << count) - 1);
    const auto block = evaluator.good(words, valid);
    FaultEvaluator::Workspace ws(block);
    if (const Word mask = evaluator.detect(fault, block, ws)) {
      return Verdict::testable(unpack(words, static_cast<unsigned>(std::countr_zero(mask))));
    }
  }
  return Verdict::untestable();
}

}  // namespace safefault
