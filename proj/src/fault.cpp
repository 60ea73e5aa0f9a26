#include "safefault/fault.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <numeric>
#include <unordered_map>

#include "safefault/errors.hpp"

namespace safefault {

namespace {

constexpr std::array<std::string_view, 6> kStandardKeywords = {
    "reset_logic",    "spr_addressing", "memory_access",
    "pc_update_logic", "decoding_logic", "unused_instructions"};

constexpr std::string_view kUserPrefix = "user:";

bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.') return false;
  }
  return true;
}

std::uint64_t fault_key(const Fault& f) {
  return (static_cast<std::uint64_t>(f.site.kind) << 62) |
         (static_cast<std::uint64_t>(f.site.id) << 30) |
         (static_cast<std::uint64_t>(f.site.pin) << 1) | (f.stuck_at ? 1u : 0u);
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller root wins, so each root is its class minimum.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

Category::Category(CategoryKind kind, std::string user_name)
    : kind_(kind), user_name_(kind == CategoryKind::UserDefined ? std::move(user_name) : "") {}

std::optional<Category> Category::parse(std::string_view keyword) {
  for (std::size_t i = 0; i < kStandardKeywords.size(); ++i) {
    if (keyword == kStandardKeywords[i]) return Category(static_cast<CategoryKind>(i));
  }
  if (keyword.starts_with(kUserPrefix)) {
    auto name = keyword.substr(kUserPrefix.size());
    if (is_identifier(name)) return Category(CategoryKind::UserDefined, std::string(name));
  }
  return std::nullopt;
}

std::vector<Category> Category::standard() {
  std::vector<Category> out;
  for (std::size_t i = 0; i < kStandardKeywords.size(); ++i) {
    out.emplace_back(static_cast<CategoryKind>(i));
  }
  return out;
}

std::string Category::keyword() const {
  if (kind_ == CategoryKind::UserDefined) return std::string(kUserPrefix) + user_name_;
  return std::string(kStandardKeywords[static_cast<std::size_t>(kind_)]);
}

char class_code(const FaultClass& cls) {
  static constexpr std::array<char, 4> codes = {'T', 'U', 'S', 'A'};
  return codes[cls.index()];
}

bool is_safe(const FaultClass& cls) {
  return std::holds_alternative<StructurallyUntestable>(cls) ||
         std::holds_alternative<ConstraintUntestable>(cls);
}

std::vector<Fault> enumerate_faults(const ScanNetlist& scan) {
  std::vector<Fault> faults;
  auto both = [&](FaultSite site) {
    faults.push_back({site, false});
    faults.push_back({site, true});
  };
  for (NetId in : scan.inputs()) both({SiteKind::Port, in});
  for (GateId gi = 0; gi < scan.gate_count(); ++gi) {
    const Gate& g = scan.core().gates()[gi];
    for (std::uint32_t pin = 0; pin < g.inputs.size(); ++pin) {
      both({SiteKind::GateInput, gi, pin});
    }
    both({SiteKind::GateOutput, gi});
  }
  return faults;
}

NetId site_net(const ScanNetlist& scan, const FaultSite& site) {
  switch (site.kind) {
    case SiteKind::Port:
      return site.id;
    case SiteKind::GateInput:
      return scan.core().gates()[site.id].inputs[site.pin];
    case SiteKind::GateOutput:
      return scan.core().gates()[site.id].output;
  }
  return site.id;
}

const std::string& site_owner_name(const ScanNetlist& scan, const FaultSite& site) {
  if (site.kind == SiteKind::Port) return scan.core().net_name(site.id);
  return scan.core().net_name(scan.core().gates()[site.id].output);
}

std::string fault_label(const ScanNetlist& scan, const Fault& fault) {
  std::string out;
  const std::string& name = site_owner_name(scan, fault.site);
  switch (fault.site.kind) {
    case SiteKind::Port:
      out = "port:" + name;
      break;
    case SiteKind::GateInput:
      out = "gate:" + name + ":in" + std::to_string(fault.site.pin);
      break;
    case SiteKind::GateOutput:
      out = "gate:" + name + ":out";
      break;
  }
  out += fault.stuck_at ? "/1" : "/0";
  return out;
}

void check_fault_site(const ScanNetlist& scan, const Fault& fault) {
  const FaultSite& s = fault.site;
  bool ok = false;
  switch (s.kind) {
    case SiteKind::Port:
      for (NetId in : scan.inputs()) ok = ok || in == s.id;
      break;
    case SiteKind::GateInput:
      ok = s.id < scan.gate_count() && s.pin < scan.core().gates()[s.id].inputs.size();
      break;
    case SiteKind::GateOutput:
      ok = s.id < scan.gate_count();
      break;
  }
  if (!ok) throw InputError("fault site not in netlist");
}

Fault parse_fault_label(const ScanNetlist& scan, std::string_view label) {
  auto fail = [&](const std::string& why) -> Fault {
    throw InputError("bad fault label '" + std::string(label) + "': " + why);
  };
  const auto slash = label.rfind('/');
  if (slash == std::string_view::npos || slash + 2 != label.size()) return fail("missing /0 or /1");
  const char polarity = label[slash + 1];
  if (polarity != '0' && polarity != '1') return fail("stuck value must be 0 or 1");
  const bool stuck = polarity == '1';
  std::string_view site = label.substr(0, slash);

  if (site.starts_with("port:")) {
    auto net = scan.core().find_net(site.substr(5));
    if (!net) return fail("unknown net");
    Fault f{{SiteKind::Port, *net}, stuck};
    try {
      check_fault_site(scan, f);
    } catch (const InputError&) {
      return fail("net is not a scan input");
    }
    return f;
  }
  if (!site.starts_with("gate:")) return fail("site must start with gate: or port:");
  site.remove_prefix(5);
  const auto colon = site.rfind(':');
  if (colon == std::string_view::npos) return fail("missing pin");
  auto net = scan.core().find_net(site.substr(0, colon));
  if (!net) return fail("unknown gate");
  auto gate = scan.driver(*net);
  if (!gate) return fail("net is not driven by a gate");
  std::string_view pin = site.substr(colon + 1);
  if (pin == "out") return Fault{{SiteKind::GateOutput, *gate}, stuck};
  if (!pin.starts_with("in")) return fail("pin must be out or in<k>");
  std::uint32_t k = 0;
  auto digits = pin.substr(2);
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
  if (ec != std::errc{} || ptr != digits.data() + digits.size() || digits.empty()) {
    return fail("bad pin index");
  }
  Fault f{{SiteKind::GateInput, *gate, k}, stuck};
  try {
    check_fault_site(scan, f);
  } catch (const InputError&) {
    return fail("pin index out of range");
  }
  return f;
}

FaultPartition collapse_equivalent(std::span<const Fault> faults, const ScanNetlist& scan) {
  std::unordered_map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < faults.size(); ++i) index.emplace(fault_key(faults[i]), i);

  DisjointSets sets(faults.size());
  auto merge = [&](const Fault& a, const Fault& b) {
    auto ia = index.find(fault_key(a));
    auto ib = index.find(fault_key(b));
    if (ia != index.end() && ib != index.end()) sets.unite(ia->second, ib->second);
  };

  for (GateId gi = 0; gi < scan.gate_count(); ++gi) {
    const Gate& g = scan.core().gates()[gi];
    const FaultSite out{SiteKind::GateOutput, gi};
    for (std::uint32_t pin = 0; pin < g.inputs.size(); ++pin) {
      const FaultSite in{SiteKind::GateInput, gi, pin};
      switch (g.kind) {
        case GateKind::And:
          merge({in, false}, {out, false});
          break;
        case GateKind::Nand:
          merge({in, false}, {out, true});
          break;
        case GateKind::Or:
          merge({in, true}, {out, true});
          break;
        case GateKind::Nor:
          merge({in, true}, {out, false});
          break;
        case GateKind::Not:
          merge({in, false}, {out, true});
          merge({in, true}, {out, false});
          break;
        case GateKind::Buf:
          merge({in, false}, {out, false});
          merge({in, true}, {out, true});
          break;
        default:
          break;
      }
    }
  }

  // Stem and branch are the same physical wire when the stem has one sink.
  for (NetId net = 0; net < scan.net_count(); ++net) {
    if (scan.fanout_count(net) != 1 || scan.fanout(net).size() != 1) continue;
    const PinRef sink = scan.fanout(net).front();
    const FaultSite branch{SiteKind::GateInput, sink.gate, sink.pin};
    FaultSite stem{SiteKind::Port, net};
    if (auto drv = scan.driver(net)) stem = {SiteKind::GateOutput, *drv};
    merge({stem, false}, {branch, false});
    merge({stem, true}, {branch, true});
  }

  FaultPartition partition;
  partition.representative.resize(faults.size());
  std::unordered_map<std::size_t, std::size_t> class_of_root;
  for (std::size_t i = 0; i < faults.size(); ++i) {
    const std::size_t root = sets.find(i);
    partition.representative[i] = root;
    auto [it, fresh] = class_of_root.emplace(root, partition.classes.size());
    if (fresh) partition.classes.emplace_back();
    partition.classes[it->second].push_back(i);
  }
  return partition;
}

}  // namespace safefault
