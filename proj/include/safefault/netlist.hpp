#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace safefault {

using NetId = std::uint32_t;
using GateId = std::uint32_t;

enum class GateKind : std::uint8_t { And, Nand, Or, Nor, Xor, Xnor, Not, Buf, Dff };

std::string_view to_string(GateKind kind);
// Case-insensitive; nullopt for anything outside the bench gate vocabulary.
std::optional<GateKind> parse_gate_kind(std::string_view text);
bool is_single_input(GateKind kind);

struct Net {
  NetId id;
  std::string name;
};

struct Gate {
  GateKind kind;
  std::vector<NetId> inputs;
  NetId output;
};

/// Gate-level netlist: named nets, gates, and ordered primary ports.
///
/// Net names are unique by construction; every other structural rule
/// (single driver, arity, acyclicity) is checked by validate(), so that
/// malformed netlists can be represented and diagnosed.
class Netlist {
 public:
  // Throws InputError if the name is already taken.
  NetId add_net(std::string name);
  NetId net_or_add(std::string_view name);
  GateId add_gate(GateKind kind, std::vector<NetId> inputs, NetId output);
  void add_primary_input(NetId net) { primary_inputs_.push_back(net); }
  void add_primary_output(NetId net) { primary_outputs_.push_back(net); }

  std::span<const Net> nets() const { return nets_; }
  std::span<const Gate> gates() const { return gates_; }
  std::span<const NetId> primary_inputs() const { return primary_inputs_; }
  std::span<const NetId> primary_outputs() const { return primary_outputs_; }

  std::size_t net_count() const { return nets_.size(); }
  std::size_t gate_count() const { return gates_.size(); }
  const std::string& net_name(NetId id) const { return nets_.at(id).name; }
  std::optional<NetId> find_net(std::string_view name) const;

  std::size_t dff_count() const;

 private:
  std::vector<Net> nets_;
  std::vector<Gate> gates_;
  std::vector<NetId> primary_inputs_;
  std::vector<NetId> primary_outputs_;
  std::unordered_map<std::string, NetId> index_;
};

// Empty iff every Netlist invariant holds. Each entry names the offending
// net or gate, e.g. "multiple drivers: x", "combinational cycle through: a,b".
std::vector<std::string> validate(const Netlist& netlist);

// Structural equality: same net names, same gates (by net name), same
// ordered port lists.
bool structurally_equal(const Netlist& lhs, const Netlist& rhs);

}  // namespace safefault
