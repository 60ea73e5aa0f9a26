#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "safefault/fault.hpp"

namespace safefault {

/// Maps fault-site names to units by the longest registered prefix.
/// Names without a registered prefix go to "top".
class UnitMap {
 public:
  UnitMap() = default;
  explicit UnitMap(std::vector<std::string> prefixes);

  // One prefix per line; '#' comments and blank lines ignored.
  static UnitMap parse(std::string_view text);

  std::string unit_of(std::string_view name) const;
  std::span<const std::string> prefixes() const { return prefixes_; }
  bool empty() const { return prefixes_.empty(); }

 private:
  std::vector<std::string> prefixes_;
};

struct UnitStats {
  std::string unit;
  std::uint64_t total = 0;
  std::uint64_t detected = 0;
  std::uint64_t structural = 0;
  std::uint64_t aborted = 0;
  std::map<Category, std::uint64_t> safe_by_category;
  // Safe faults known only as a count (external tables without categories).
  std::uint64_t unattributed_safe = 0;

  std::uint64_t total_safe() const;
  // Throws InconsistencyError when detected faults overlap the untestable ones.
  void check() const;
};

struct Provenance {
  std::string netlist_hash;
  std::string constraints_hash;
  std::string tool_version;
};

struct ClassificationReport {
  UnitStats global;
  std::vector<UnitStats> units;     // empty when no unit prefixes are registered
  std::vector<Category> categories;  // column order
  Provenance provenance;
};

// Hex FNV-1a (64-bit) of the bytes; used for provenance.
std::string content_hash(std::string_view bytes);

// Aggregates per-fault results. `owners[i]` is the site name of fault i,
// `detected` may be empty (nothing graded). Columns are the standard
// categories followed by user categories in order of first appearance.
// Throws InputError on misaligned inputs and InconsistencyError when a
// detected fault is untestable.
ClassificationReport build_report(std::span<const std::string> owners,
                                  std::span<const FaultClass> classes,
                                  const std::vector<bool>& detected, const UnitMap& units,
                                  Provenance provenance = {});

// Externally supplied counts, one row per unit:
//
//   unit,faults,detected[,<category keyword>...][,safe][,structural][,aborted]
//
// where "safe" counts safe faults without a category.
// A row named "total" becomes the global row; otherwise the global row is
// the sum of the others. Throws InputError on malformed tables.
ClassificationReport parse_counts(std::string_view csv);

enum class ReportFormat : std::uint8_t { Csv, Text };

// "csv" or "text"; InputError otherwise.
ReportFormat parse_report_format(std::string_view name);

// Columns: unit, faults, structural, aborted, one per category (plus
// "unattributed" when any row has uncategorized safe faults), total_safe,
// safe_pct, detected, fc_pct, fc_safe_pct. The global row comes first under
// the name "total". An empty fault universe yields the header alone and a
// diagnostic. Percentages that do not exist (no non-safe faults) print n/a.
std::string emit_report(const ClassificationReport& report, ReportFormat format,
                        std::ostream& diagnostics);

struct VerdictRecord {
  std::string label;
  FaultClass cls;
};

// `<label> <T|U|S|A> [witness-bits] [category]`, preceded by a provenance
// comment when one is given.
std::string write_verdicts(std::span<const VerdictRecord> records, const Provenance& provenance = {});
// Throws ParseError on malformed lines.
std::vector<VerdictRecord> parse_verdicts(std::string_view text);

// Site name that a fault label refers to, for unit attribution.
std::string label_owner(std::string_view label);

// One fault label per line; '#' comments and blank lines ignored.
std::string write_fault_list(std::span<const std::string> labels, std::string_view comment = {});
std::vector<std::string> parse_fault_list(std::string_view text);

}  // namespace safefault
