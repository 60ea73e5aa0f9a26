#include "safefault/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>

#include "safefault/coverage.hpp"
#include "safefault/errors.hpp"

namespace safefault {

namespace {

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    text.remove_prefix(nl + 1);
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

bool skippable(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

std::vector<std::string_view> split_fields(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  while (true) {
    auto pos = line.find(sep);
    out.push_back(trim(line.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    line.remove_prefix(pos + 1);
  }
  return out;
}

std::vector<std::string_view> split_words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::uint64_t parse_count(std::string_view field, std::size_t line) {
  std::uint64_t value = 0;
  auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || end != field.data() + field.size() || field.empty()) {
    throw ParseError("expected a non-negative count, got '" + std::string(field) + "'", line, 1);
  }
  return value;
}

void add_into(UnitStats& into, const UnitStats& from) {
  into.total += from.total;
  into.detected += from.detected;
  into.structural += from.structural;
  into.aborted += from.aborted;
  into.unattributed_safe += from.unattributed_safe;
  for (const auto& [cat, n] : from.safe_by_category) into.safe_by_category.try_emplace(cat, 0).first->second += n;
}

bool has_unattributed(const ClassificationReport& report) {
  if (report.global.unattributed_safe > 0) return true;
  for (const UnitStats& u : report.units) {
    if (u.unattributed_safe > 0) return true;
  }
  return false;
}

std::vector<std::string> header(const ClassificationReport& report) {
  std::vector<std::string> cols = {"unit", "faults", "structural", "aborted"};
  for (const Category& c : report.categories) cols.push_back(c.keyword());
  if (has_unattributed(report)) cols.push_back("unattributed");
  for (const char* c : {"total_safe", "safe_pct", "detected", "fc_pct", "fc_safe_pct"}) cols.push_back(c);
  return cols;
}

std::vector<std::string> row(const UnitStats& s, const std::vector<Category>& categories,
                             bool unattributed, const std::string& name) {
  std::vector<std::string> cells = {name, std::to_string(s.total), std::to_string(s.structural),
                                    std::to_string(s.aborted)};
  for (const Category& c : categories) {
    auto it = s.safe_by_category.find(c);
    cells.push_back(std::to_string(it == s.safe_by_category.end() ? 0 : it->second));
  }
  if (unattributed) cells.push_back(std::to_string(s.unattributed_safe));
  const std::uint64_t safe = s.total_safe();
  cells.push_back(std::to_string(safe));
  cells.push_back(format_percent(safe, s.total));
  cells.push_back(std::to_string(s.detected));
  cells.push_back(fc(s.detected, s.total).percent());
  cells.push_back(safe >= s.total ? "n/a" : fc_safe(s.detected, s.total, safe).percent());
  return cells;
}

}  // namespace

UnitMap::UnitMap(std::vector<std::string> prefixes) : prefixes_(std::move(prefixes)) {
  for (const auto& p : prefixes_) {
    if (p.empty()) throw InputError("empty unit prefix");
  }
}

UnitMap UnitMap::parse(std::string_view text) {
  std::vector<std::string> prefixes;
  for (auto line : split_lines(text)) {
    if (skippable(line)) continue;
    auto p = std::string(trim(line));
    if (std::find(prefixes.begin(), prefixes.end(), p) == prefixes.end()) prefixes.push_back(p);
  }
  return UnitMap(std::move(prefixes));
}

std::string UnitMap::unit_of(std::string_view name) const {
  const std::string* best = nullptr;
  for (const auto& p : prefixes_) {
    if (name.starts_with(p) && (!best || p.size() > best->size())) best = &p;
  }
  return best ? *best : std::string("top");
}

std::uint64_t UnitStats::total_safe() const {
  std::uint64_t sum = unattributed_safe;
  for (const auto& [cat, n] : safe_by_category) sum += n;
  return sum;
}

void UnitStats::check() const {
  const std::uint64_t untestable = structural + total_safe();
  if (untestable > total || detected > total - untestable) {
    throw InconsistencyError("unit " + unit + ": " + std::to_string(detected) +
                             " detected faults but only " +
                             std::to_string(untestable > total ? 0 : total - untestable) +
                             " are not proven untestable");
  }
}

std::string content_hash(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ClassificationReport build_report(std::span<const std::string> owners,
                                  std::span<const FaultClass> classes,
                                  const std::vector<bool>& detected, const UnitMap& units,
                                  Provenance provenance) {
  if (owners.size() != classes.size() || (!detected.empty() && detected.size() != classes.size())) {
    throw InputError("misaligned fault data for report");
  }
  ClassificationReport report;
  report.provenance = std::move(provenance);
  report.categories = Category::standard();
  for (const FaultClass& cls : classes) {
    if (const auto* s = std::get_if<ConstraintUntestable>(&cls)) {
      if (std::find(report.categories.begin(), report.categories.end(), s->category) ==
          report.categories.end()) {
        report.categories.push_back(s->category);
      }
    }
  }

  std::map<std::string, UnitStats> by_unit;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const bool hit = !detected.empty() && detected[i];
    if (hit && (is_safe(classes[i]) || std::holds_alternative<StructurallyUntestable>(classes[i]))) {
      throw InconsistencyError("a fault on " + owners[i] + " is detected but was proven untestable");
    }
    UnitStats& s = by_unit[units.empty() ? std::string() : units.unit_of(owners[i])];
    ++s.total;
    if (hit) ++s.detected;
    std::visit(
        [&](const auto& c) {
          using C = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<C, StructurallyUntestable>) ++s.structural;
          if constexpr (std::is_same_v<C, Aborted>) ++s.aborted;
          if constexpr (std::is_same_v<C, ConstraintUntestable>) ++s.safe_by_category.try_emplace(c.category, 0).first->second;
        },
        classes[i]);
  }

  report.global.unit = "total";
  for (const auto& [name, stats] : by_unit) add_into(report.global, stats);
  if (!units.empty()) {
    std::vector<std::string> order(units.prefixes().begin(), units.prefixes().end());
    order.push_back("top");
    for (const auto& name : order) {
      auto it = by_unit.find(name);
      if (it == by_unit.end()) continue;
      it->second.unit = name;
      report.units.push_back(it->second);
    }
  }
  return report;
}

ClassificationReport parse_counts(std::string_view csv) {
  enum class Col { Unit, Faults, Detected, Structural, Aborted, Safe, Unattributed };
  struct Column {
    Col kind;
    std::optional<Category> category;
  };

  ClassificationReport report;
  report.categories = Category::standard();
  std::vector<Column> columns;
  std::optional<UnitStats> explicit_total;
  std::size_t line_no = 0;
  for (auto line : split_lines(csv)) {
    ++line_no;
    if (skippable(line)) continue;
    auto fields = split_fields(line, ',');
    if (columns.empty()) {
      bool has_faults = false, has_detected = false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        auto f = fields[i];
        if (i == 0) {
          if (f != "unit") throw ParseError("counts table must start with a unit column", line_no, 1);
          columns.push_back({Col::Unit, {}});
        } else if (f == "faults") {
          has_faults = true;
          columns.push_back({Col::Faults, {}});
        } else if (f == "detected") {
          has_detected = true;
          columns.push_back({Col::Detected, {}});
        } else if (f == "structural") {
          columns.push_back({Col::Structural, {}});
        } else if (f == "aborted") {
          columns.push_back({Col::Aborted, {}});
        } else if (f == "safe") {
          columns.push_back({Col::Unattributed, {}});
        } else if (auto cat = Category::parse(f)) {
          if (std::find(report.categories.begin(), report.categories.end(), *cat) ==
              report.categories.end()) {
            report.categories.push_back(*cat);
          }
          columns.push_back({Col::Safe, cat});
        } else {
          throw ParseError("unknown column '" + std::string(f) + "'", line_no, 1, std::string(f));
        }
      }
      if (!has_faults || !has_detected) {
        throw ParseError("counts table needs faults and detected columns", line_no, 1);
      }
      continue;
    }
    if (fields.size() != columns.size()) {
      throw ParseError("expected " + std::to_string(columns.size()) + " fields, got " +
                           std::to_string(fields.size()),
                       line_no, 1);
    }
    UnitStats s;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      switch (columns[i].kind) {
        case Col::Unit:
          s.unit = std::string(fields[i]);
          if (s.unit.empty()) throw ParseError("empty unit name", line_no, 1);
          break;
        case Col::Faults: s.total = parse_count(fields[i], line_no); break;
        case Col::Detected: s.detected = parse_count(fields[i], line_no); break;
        case Col::Structural: s.structural = parse_count(fields[i], line_no); break;
        case Col::Aborted: s.aborted = parse_count(fields[i], line_no); break;
        case Col::Unattributed: s.unattributed_safe = parse_count(fields[i], line_no); break;
        case Col::Safe: s.safe_by_category.try_emplace(*columns[i].category, 0).first->second += parse_count(fields[i], line_no); break;
      }
    }
    try {
      s.check();
    } catch (const InconsistencyError& e) {
      throw ParseError(e.what(), line_no, 1, s.unit);
    }
    if (s.unit == "total") {
      if (explicit_total) throw ParseError("second total row", line_no, 1);
      explicit_total = s;
    } else {
      report.units.push_back(std::move(s));
    }
  }
  if (columns.empty()) throw ParseError("empty counts table", 0, 0);
  if (explicit_total) {
    report.global = *explicit_total;
  } else {
    report.global.unit = "total";
    for (const auto& u : report.units) add_into(report.global, u);
  }
  return report;
}

ReportFormat parse_report_format(std::string_view name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "text") return ReportFormat::Text;
  throw InputError("unknown report format '" + std::string(name) + "' (expected csv or text)");
}

std::string emit_report(const ClassificationReport& report, ReportFormat format,
                        std::ostream& diagnostics) {
  std::vector<std::vector<std::string>> table;
  table.push_back(header(report));
  if (report.global.total == 0) {
    diagnostics << "error: empty fault universe\n";
  } else {
    report.global.check();
    const bool unattributed = has_unattributed(report);
    table.push_back(row(report.global, report.categories, unattributed, "total"));
    for (const UnitStats& u : report.units) {
      if (u.total == 0) continue;
      u.check();
      table.push_back(row(u, report.categories, unattributed, u.unit));
    }
  }

  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    for (const auto& cells : table) {
      for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
      out << '\n';
    }
    return out.str();
  }

  std::vector<std::size_t> width(table.front().size(), 0);
  for (const auto& cells : table) {
    for (std::size_t i = 0; i < cells.size(); ++i) width[i] = std::max(width[i], cells[i].size());
  }
  for (const auto& cells : table) {
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) line += "  ";
      const std::string pad(width[i] - cells[i].size(), ' ');
      line += i == 0 ? cells[i] + pad : pad + cells[i];
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
  }
  const Provenance& p = report.provenance;
  if (!p.netlist_hash.empty()) out << "\nnetlist " << p.netlist_hash << '\n';
  if (!p.constraints_hash.empty()) out << "constraints " << p.constraints_hash << '\n';
  if (!p.tool_version.empty()) out << "version " << p.tool_version << '\n';
  return out.str();
}

std::string write_verdicts(std::span<const VerdictRecord> records, const Provenance& provenance) {
  std::ostringstream out;
  if (!provenance.netlist_hash.empty() || !provenance.tool_version.empty()) {
    out << "# netlist " << provenance.netlist_hash << " constraints " << provenance.constraints_hash
        << " version " << provenance.tool_version << '\n';
  }
  for (const VerdictRecord& r : records) {
    out << r.label << ' ' << class_code(r.cls);
    if (const auto* t = std::get_if<Testable>(&r.cls); t && t->witness.width() > 0) {
      out << ' ' << t->witness.to_string();
    }
    if (const auto* s = std::get_if<ConstraintUntestable>(&r.cls)) out << ' ' << s->category.keyword();
    out << '\n';
  }
  return out.str();
}

std::vector<VerdictRecord> parse_verdicts(std::string_view text) {
  std::vector<VerdictRecord> records;
  std::size_t line_no = 0;
  for (auto line : split_lines(text)) {
    ++line_no;
    if (skippable(line)) continue;
    auto words = split_words(line);
    if (words.size() < 2 || words[1].size() != 1) {
      throw ParseError("expected '<fault> <T|U|S|A> ...'", line_no, 1);
    }
    VerdictRecord r{std::string(words[0]), Aborted{}};
    const char code = words[1][0];
    const std::size_t extra = words.size() - 2;
    auto require = [&](bool ok) {
      if (!ok) throw ParseError("wrong number of fields for verdict " + std::string(1, code), line_no, 1);
    };
    switch (code) {
      case 'T': {
        require(extra <= 1);
        TestPattern w;
        if (extra == 1) {
          try {
            w = TestPattern::parse(words[2]);
          } catch (const InputError& e) {
            throw ParseError(e.what(), line_no, 1, std::string(words[2]));
          }
        }
        r.cls = Testable{std::move(w)};
        break;
      }
      case 'U':
        require(extra == 0);
        r.cls = StructurallyUntestable{};
        break;
      case 'A':
        require(extra == 0);
        r.cls = Aborted{};
        break;
      case 'S': {
        require(extra == 1);
        auto cat = Category::parse(words[2]);
        if (!cat) throw ParseError("unknown category '" + std::string(words[2]) + "'", line_no, 1);
        r.cls = ConstraintUntestable{*cat};
        break;
      }
      default:
        throw ParseError("unknown verdict code '" + std::string(words[1]) + "'", line_no, 1);
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::string label_owner(std::string_view label) {
  auto slash = label.rfind('/');
  if (slash != std::string_view::npos) label = label.substr(0, slash);
  if (label.starts_with("port:")) return std::string(label.substr(5));
  if (label.starts_with("gate:")) {
    label.remove_prefix(5);
    return std::string(label.substr(0, label.rfind(':')));
  }
  return std::string(label);
}

std::string write_fault_list(std::span<const std::string> labels, std::string_view comment) {
  std::string out;
  if (!comment.empty()) out += "# " + std::string(comment) + "\n";
  for (const auto& l : labels) out += l + "\n";
  return out;
}

std::vector<std::string> parse_fault_list(std::string_view text) {
  std::vector<std::string> labels;
  for (auto line : split_lines(text)) {
    if (skippable(line)) continue;
    labels.emplace_back(trim(line));
  }
  return labels;
}

}  // namespace safefault
