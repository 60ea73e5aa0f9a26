#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "safefault/fault.hpp"
#include "safefault/scan.hpp"
#include "safefault/simulate.hpp"

namespace safefault {

// The net always carries `value` during operation.
struct Fix {
  std::string net;
  bool value;
};

// None of the cubes ever appears on `nets`. Cube character i constrains
// nets[i]: '0', '1' or 'X' (don't care).
struct Forbid {
  std::vector<std::string> nets;
  std::vector<std::string> cubes;
};

using Constraint = std::variant<Fix, Forbid>;

struct ConstraintSet {
  std::string name;
  Category category;
  std::vector<Constraint> constraints;
};

// Constraint file:
//
//   set <category> { fix <net> = 0|1   forbid (<net>, ...) in {<cube>, ...} }
//
// Sets come back in file order. Net names are not resolved here.
// Throws ParseError on malformed syntax or cubes, unknown category keywords,
// empty sets and a second fix of the same net anywhere in the file.
std::vector<ConstraintSet> parse_constraints(std::string_view text);
std::vector<ConstraintSet> read_constraints_file(const std::string& path);

/// A scan netlist plus operational constraints: tied nets and monitor
/// circuitry whose outputs must stay 0.
///
/// Monitor nets are numbered after the base nets; monitor gates only read
/// base nets or earlier monitor nets, so they can be evaluated in order after
/// the base netlist. Both machines of a fault analysis (good and faulty) are
/// required to honor every tie and monitor.
class AugmentedNetlist {
 public:
  explicit AugmentedNetlist(std::shared_ptr<const ScanNetlist> base);

  const ScanNetlist& base() const { return *base_; }
  const std::shared_ptr<const ScanNetlist>& base_ptr() const { return base_; }

  std::span<const Gate> added_gates() const { return added_gates_; }
  std::span<const NetId> monitor_outputs() const { return monitor_outputs_; }
  const std::map<NetId, bool>& tied_nets() const { return tied_; }

  std::size_t net_count() const { return base_->net_count() + added_names_.size(); }
  bool is_monitor_net(NetId id) const { return id >= base_->net_count(); }
  const std::string& net_name(NetId id) const;
  bool unconstrained() const { return tied_.empty() && monitor_outputs_.empty(); }

  // Appends a gate reading existing nets; returns its fresh output net.
  NetId add_monitor_gate(GateKind kind, std::vector<NetId> inputs);
  void add_monitor_output(NetId net) { monitor_outputs_.push_back(net); }
  void tie(NetId net, bool value);

 private:
  std::shared_ptr<const ScanNetlist> base_;
  std::vector<Gate> added_gates_;
  std::vector<std::string> added_names_;
  std::vector<NetId> monitor_outputs_;
  std::map<NetId, bool> tied_;
};

// Records the tie. Idempotent for the same value; InputError
// "conflicting constraint on <net>" for the opposite one, or for an unknown
// net.
AugmentedNetlist apply_fix(AugmentedNetlist augmented, const Fix& fix);

// One AND detector per cube (NOT for '0' literals, 'X' skipped), OR-ed when
// there are several cubes; the result becomes a monitor output.
// InputError on unknown nets, malformed or all-X cubes.
AugmentedNetlist build_monitor(AugmentedNetlist augmented, const Forbid& forbid);

AugmentedNetlist apply_constraint(AugmentedNetlist augmented, const Constraint& constraint);
AugmentedNetlist augment(std::shared_ptr<const ScanNetlist> base,
                         std::span<const ConstraintSet> sets);

// Evaluates the monitor gates on top of base-net values; `values` must be
// sized to net_count() with base nets already filled.
void evaluate_monitors(const AugmentedNetlist& augmented, std::vector<Word>& values);

// Bits set where every tie holds and every monitor output is 0.
Word admissible_mask(const AugmentedNetlist& augmented, std::span<const Word> values);

// Good-machine values for all nets, monitor nets included.
std::vector<Word> simulate_augmented(const AugmentedNetlist& augmented,
                                     std::span<const Word> input_words);

bool is_admissible(const AugmentedNetlist& augmented, const TestPattern& pattern);

}  // namespace safefault
