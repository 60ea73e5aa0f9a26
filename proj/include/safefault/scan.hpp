#pragma once

#include <optional>
#include <span>
#include <vector>

#include "safefault/netlist.hpp"

namespace safefault {

// A gate input pin: which gate, which position.
struct PinRef {
  GateId gate;
  std::uint32_t pin;
};

/// Full-scan view of a netlist: every flip-flop removed, its output net
/// turned into a pseudo-primary input and its input net into a
/// pseudo-primary output. Purely combinational and immutable.
///
/// Gate ids refer to core().gates(), which keeps the non-DFF gates of the
/// source netlist in their original relative order. Net ids are unchanged.
class ScanNetlist {
 public:
  const Netlist& core() const { return core_; }
  std::span<const NetId> pseudo_inputs() const { return pseudo_inputs_; }
  std::span<const NetId> pseudo_outputs() const { return pseudo_outputs_; }

  // Primary inputs followed by pseudo-primary inputs; pattern bit i
  // drives inputs()[i].
  std::span<const NetId> inputs() const { return inputs_; }
  // Primary outputs followed by pseudo-primary outputs.
  std::span<const NetId> outputs() const { return outputs_; }

  std::span<const GateId> topological_order() const { return topo_; }
  std::size_t topological_position(GateId gate) const { return topo_pos_[gate]; }
  std::span<const PinRef> fanout(NetId net) const { return fanout_[net]; }
  std::optional<GateId> driver(NetId net) const;
  // Number of observation points on the net: sink pins plus output-list
  // occurrences.
  std::size_t fanout_count(NetId net) const { return fanout_[net].size() + observed_[net]; }

  std::size_t input_count() const { return inputs_.size(); }
  std::size_t net_count() const { return core_.net_count(); }
  std::size_t gate_count() const { return core_.gate_count(); }

 private:
  friend ScanNetlist scan_transform(const Netlist& netlist);

  Netlist core_;
  std::vector<NetId> pseudo_inputs_;
  std::vector<NetId> pseudo_outputs_;
  std::vector<NetId> inputs_;
  std::vector<NetId> outputs_;
  std::vector<GateId> topo_;
  std::vector<std::size_t> topo_pos_;
  std::vector<std::vector<PinRef>> fanout_;
  std::vector<std::optional<GateId>> driver_;
  std::vector<std::uint32_t> observed_;
};

// Precondition: validate(netlist) is empty. Throws InputError otherwise.
ScanNetlist scan_transform(const Netlist& netlist);

}  // namespace safefault
