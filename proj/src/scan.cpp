#include "safefault/scan.hpp"

#include <queue>

#include "safefault/errors.hpp"

namespace safefault {

std::optional<GateId> ScanNetlist::driver(NetId net) const { return driver_[net]; }

ScanNetlist scan_transform(const Netlist& netlist) {
  if (auto violations = validate(netlist); !violations.empty()) {
    throw InputError("cannot scan-transform an invalid netlist: " + violations.front());
  }

  ScanNetlist scan;
  for (const Net& net : netlist.nets()) scan.core_.add_net(net.name);
  for (NetId pi : netlist.primary_inputs()) scan.core_.add_primary_input(pi);
  for (NetId po : netlist.primary_outputs()) scan.core_.add_primary_output(po);
  for (const Gate& g : netlist.gates()) {
    if (g.kind == GateKind::Dff) {
      scan.pseudo_inputs_.push_back(g.output);
      scan.pseudo_outputs_.push_back(g.inputs.front());
    } else {
      scan.core_.add_gate(g.kind, g.inputs, g.output);
    }
  }

  const Netlist& core = scan.core_;
  scan.inputs_.assign(core.primary_inputs().begin(), core.primary_inputs().end());
  scan.inputs_.insert(scan.inputs_.end(), scan.pseudo_inputs_.begin(), scan.pseudo_inputs_.end());
  scan.outputs_.assign(core.primary_outputs().begin(), core.primary_outputs().end());
  scan.outputs_.insert(scan.outputs_.end(), scan.pseudo_outputs_.begin(),
                       scan.pseudo_outputs_.end());

  const std::size_t nets = core.net_count();
  const std::size_t gates = core.gate_count();
  scan.fanout_.assign(nets, {});
  scan.driver_.assign(nets, std::nullopt);
  scan.observed_.assign(nets, 0);
  for (GateId gi = 0; gi < gates; ++gi) {
    const Gate& g = core.gates()[gi];
    scan.driver_[g.output] = gi;
    for (std::uint32_t pin = 0; pin < g.inputs.size(); ++pin) {
      scan.fanout_[g.inputs[pin]].push_back({gi, pin});
    }
  }
  for (NetId out : scan.outputs_) ++scan.observed_[out];

  // Kahn's algorithm; ties broken by gate id for a deterministic order.
  std::vector<std::uint32_t> pending(gates, 0);
  for (GateId gi = 0; gi < gates; ++gi) {
    for (NetId in : core.gates()[gi].inputs) {
      if (scan.driver_[in]) ++pending[gi];
    }
  }
  std::priority_queue<GateId, std::vector<GateId>, std::greater<>> ready;
  for (GateId gi = 0; gi < gates; ++gi) {
    if (pending[gi] == 0) ready.push(gi);
  }
  scan.topo_pos_.assign(gates, 0);
  while (!ready.empty()) {
    const GateId gi = ready.top();
    ready.pop();
    scan.topo_pos_[gi] = scan.topo_.size();
    scan.topo_.push_back(gi);
    for (const PinRef& sink : scan.fanout_[core.gates()[gi].output]) {
      if (--pending[sink.gate] == 0) ready.push(sink.gate);
    }
  }
  if (scan.topo_.size() != gates) {
    throw InputError("scan netlist has a combinational cycle");
  }
  return scan;
}

}  // namespace safefault
