#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "safefault/scan.hpp"
#include "safefault/simulate.hpp"

namespace safefault {

enum class SiteKind : std::uint8_t { Port, GateInput, GateOutput };

/// One physical pin. For Port, `id` is a scan input net; otherwise it is a
/// gate id and `pin` selects the input (GateInput only).
struct FaultSite {
  SiteKind kind;
  std::uint32_t id;
  std::uint32_t pin = 0;

  friend auto operator<=>(const FaultSite&, const FaultSite&) = default;
};

struct Fault {
  FaultSite site;
  bool stuck_at;

  friend auto operator<=>(const Fault&, const Fault&) = default;
};

enum class CategoryKind : std::uint8_t {
  ResetLogic,
  SprAddressing,
  MemoryAccess,
  PcUpdateLogic,
  DecodingLogic,
  UnusedInstructions,
  UserDefined,
};

/// Safe-fault category, as tagged on a constraint set.
class Category {
 public:
  explicit Category(CategoryKind kind, std::string user_name = {});

  // reset_logic | spr_addressing | memory_access | pc_update_logic |
  // decoding_logic | unused_instructions | user:<ident>
  static std::optional<Category> parse(std::string_view keyword);
  static std::vector<Category> standard();

  CategoryKind kind() const { return kind_; }
  const std::string& user_name() const { return user_name_; }
  std::string keyword() const;

  friend auto operator<=>(const Category&, const Category&) = default;

 private:
  CategoryKind kind_;
  std::string user_name_;
};

struct Testable {
  TestPattern witness;
};
struct StructurallyUntestable {};
struct ConstraintUntestable {
  Category category;
};
struct Aborted {};

// Outcome of one analysis run for one fault. The alternatives carry their
// evidence: a witness for Testable, a category for constraint-induced safety.
using FaultClass = std::variant<Testable, StructurallyUntestable, ConstraintUntestable, Aborted>;

// T, U, S or A (the verdict-file codes).
char class_code(const FaultClass& cls);
bool is_safe(const FaultClass& cls);

// Two faults per port (primary then pseudo-primary inputs, in scan order),
// then per gate in id order: each input pin in pin order, then the output.
// Stuck-at-0 precedes stuck-at-1 at every site.
std::vector<Fault> enumerate_faults(const ScanNetlist& scan);

// Net the site sits on (for gate input pins, the net feeding the pin).
NetId site_net(const ScanNetlist& scan, const FaultSite& site);
// Name used for unit attribution: the port net or the gate's output net.
const std::string& site_owner_name(const ScanNetlist& scan, const FaultSite& site);

// "gate:<name>:in<k>/v", "gate:<name>:out/v" or "port:<name>/v", where a
// gate is named after its output net.
std::string fault_label(const ScanNetlist& scan, const Fault& fault);
// Inverse of fault_label. Throws InputError for unknown sites.
Fault parse_fault_label(const ScanNetlist& scan, std::string_view label);
// Throws InputError if the site does not exist in the scan netlist.
void check_fault_site(const ScanNetlist& scan, const Fault& fault);

struct FaultPartition {
  // representative[i] = index (into the input list) of fault i's class
  // representative: the lowest index in the class.
  std::vector<std::size_t> representative;
  // Classes ordered by representative, members in ascending index order.
  std::vector<std::vector<std::size_t>> classes;
};

// Structural equivalence collapsing with local rules only: controlling-value
// input faults of AND/NAND/OR/NOR merge with the matching output fault,
// NOT/BUF pass faults through, and a stem with exactly one sink pin (and no
// output observation) merges with that branch.
FaultPartition collapse_equivalent(std::span<const Fault> faults, const ScanNetlist& scan);

}  // namespace safefault
