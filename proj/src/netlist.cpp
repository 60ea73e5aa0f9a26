#include "safefault/netlist.hpp"

#include <algorithm>
#include <array>
#include <cctype>

#include "safefault/errors.hpp"

namespace safefault {

namespace {

constexpr std::array<std::string_view, 9> kGateNames = {"AND", "NAND", "OR",  "NOR", "XOR",
                                                         "XNOR", "NOT", "BUF", "DFF"};

// Strongly connected components of the combinational net graph (edges run
// from each non-DFF gate input to its output). Iterative Tarjan.
std::vector<std::vector<NetId>> combinational_cycles(const Netlist& netlist) {
  const std::size_t n = netlist.net_count();
  std::vector<std::vector<NetId>> succ(n);
  std::vector<bool> self_loop(n, false);
  for (const Gate& g : netlist.gates()) {
    if (g.kind == GateKind::Dff || g.output >= n) continue;
    for (NetId in : g.inputs) {
      if (in >= n) continue;
      succ[in].push_back(g.output);
      if (in == g.output) self_loop[in] = true;
    }
  }

  constexpr std::uint32_t kUnvisited = UINT32_MAX;
  std::vector<std::uint32_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<NetId> stack;
  std::vector<std::vector<NetId>> cycles;
  std::uint32_t counter = 0;

  struct Frame {
    NetId node;
    std::size_t next;
  };
  std::vector<Frame> frames;

  for (NetId root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < succ[f.node].size()) {
        NetId w = succ[f.node][f.next++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.node] = std::min(low[f.node], index[w]);
        }
        continue;
      }
      NetId v = f.node;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().node] = std::min(low[frames.back().node], low[v]);
      if (low[v] != index[v]) continue;
      std::vector<NetId> component;
      NetId w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        component.push_back(w);
      } while (w != v);
      if (component.size() > 1 || self_loop[v]) {
        std::sort(component.begin(), component.end());
        cycles.push_back(std::move(component));
      }
    }
  }
  std::sort(cycles.begin(), cycles.end());
  return cycles;
}

}  // namespace

std::string_view to_string(GateKind kind) { return kGateNames[static_cast<std::size_t>(kind)]; }

std::optional<GateKind> parse_gate_kind(std::string_view text) {
  std::string upper(text);
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  for (std::size_t i = 0; i < kGateNames.size(); ++i) {
    if (kGateNames[i] == upper) return static_cast<GateKind>(i);
  }
  return std::nullopt;
}

bool is_single_input(GateKind kind) {
  return kind == GateKind::Not || kind == GateKind::Buf || kind == GateKind::Dff;
}

NetId Netlist::add_net(std::string name) {
  if (index_.contains(name)) throw InputError("duplicate net name: " + name);
  const auto id = static_cast<NetId>(nets_.size());
  index_.emplace(name, id);
  nets_.push_back({id, std::move(name)});
  return id;
}

NetId Netlist::net_or_add(std::string_view name) {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  return add_net(std::string(name));
}

GateId Netlist::add_gate(GateKind kind, std::vector<NetId> inputs, NetId output) {
  const auto id = static_cast<GateId>(gates_.size());
  gates_.push_back({kind, std::move(inputs), output});
  return id;
}

std::optional<NetId> Netlist::find_net(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t Netlist::dff_count() const {
  return static_cast<std::size_t>(std::count_if(
      gates_.begin(), gates_.end(), [](const Gate& g) { return g.kind == GateKind::Dff; }));
}

std::vector<std::string> validate(const Netlist& netlist) {
  std::vector<std::string> violations;
  const std::size_t n = netlist.net_count();
  auto name_of = [&](NetId id) {
    return id < n ? netlist.net_name(id) : "<net #" + std::to_string(id) + ">";
  };

  std::vector<std::uint32_t> gate_drivers(n, 0);
  std::vector<bool> is_pi(n, false);
  for (NetId pi : netlist.primary_inputs()) {
    if (pi >= n) {
      violations.push_back("unknown primary input net id " + std::to_string(pi));
      continue;
    }
    if (is_pi[pi]) violations.push_back("duplicate primary input: " + name_of(pi));
    is_pi[pi] = true;
  }

  bool references_ok = true;
  for (std::size_t gi = 0; gi < netlist.gate_count(); ++gi) {
    const Gate& g = netlist.gates()[gi];
    const std::string gate_name = name_of(g.output);
    if (g.output >= n) {
      violations.push_back("gate #" + std::to_string(gi) + " drives unknown net");
      references_ok = false;
      continue;
    }
    ++gate_drivers[g.output];
    if (is_single_input(g.kind) ? g.inputs.size() != 1 : g.inputs.size() < 2) {
      violations.push_back("bad fan-in for " + std::string(to_string(g.kind)) +
                           " gate: " + gate_name);
    }
    for (NetId in : g.inputs) {
      if (in >= n) {
        violations.push_back("gate " + gate_name + " reads unknown net id " +
                             std::to_string(in));
        references_ok = false;
      }
    }
  }

  for (NetId id = 0; id < n; ++id) {
    if (is_pi[id] && gate_drivers[id] > 0) {
      violations.push_back("primary input driven by gate: " + name_of(id));
    } else if (gate_drivers[id] > 1) {
      violations.push_back("multiple drivers: " + name_of(id));
    } else if (!is_pi[id] && gate_drivers[id] == 0) {
      violations.push_back("undriven net: " + name_of(id));
    }
  }
  for (NetId po : netlist.primary_outputs()) {
    if (po >= n) violations.push_back("unknown primary output net id " + std::to_string(po));
  }

  if (references_ok) {
    for (const auto& cycle : combinational_cycles(netlist)) {
      std::vector<std::string> members;
      for (NetId id : cycle) members.push_back(name_of(id));
      std::sort(members.begin(), members.end());
      std::string msg = "combinational cycle through: ";
      for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) msg += ',';
        msg += members[i];
      }
      violations.push_back(std::move(msg));
    }
  }
  return violations;
}

bool structurally_equal(const Netlist& lhs, const Netlist& rhs) {
  if (lhs.net_count() != rhs.net_count() || lhs.gate_count() != rhs.gate_count()) return false;
  auto names = [](const Netlist& nl, std::span<const NetId> ids) {
    std::vector<std::string> out;
    for (NetId id : ids) out.push_back(nl.net_name(id));
    return out;
  };
  if (names(lhs, lhs.primary_inputs()) != names(rhs, rhs.primary_inputs())) return false;
  if (names(lhs, lhs.primary_outputs()) != names(rhs, rhs.primary_outputs())) return false;
  for (std::size_t i = 0; i < lhs.gate_count(); ++i) {
    const Gate& a = lhs.gates()[i];
    const Gate& b = rhs.gates()[i];
    if (a.kind != b.kind || lhs.net_name(a.output) != rhs.net_name(b.output)) return false;
    if (names(lhs, a.inputs) != names(rhs, b.inputs)) return false;
  }
  return true;
}

}  // namespace safefault
