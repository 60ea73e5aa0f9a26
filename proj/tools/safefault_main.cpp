// safefault: safe-fault classification and coverage reporting.

#include <fstream>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "CLI11.hpp"
#include "safefault/analysis.hpp"
#include "safefault/atpg.hpp"
#include "safefault/bench.hpp"
#include "safefault/constraints.hpp"
#include "safefault/errors.hpp"
#include "safefault/fault.hpp"
#include "safefault/fault_sim.hpp"
#include "safefault/report.hpp"
#include "safefault/scan.hpp"

using namespace safefault;

namespace {

std::string slurp(const std::string& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(std::string("cannot open ") + what + " file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spill(const std::string& path, const std::string& bytes) {
  if (path == "-") {
    std::cout << bytes << std::flush;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << bytes;
  if (!out.flush()) throw InputError("cannot write " + path);
}

// Pattern numbers are 1-based positions among the patterns of the file.
void warn_rejected(const std::vector<std::size_t>& rejected) {
  if (rejected.empty()) return;
  constexpr std::size_t kShown = 20;
  std::cerr << "warning: " << rejected.size() << " pattern(s) violate the constraints and were ignored:";
  for (std::size_t i = 0; i < rejected.size() && i < kShown; ++i) std::cerr << ' ' << rejected[i] + 1;
  if (rejected.size() > kShown) std::cerr << " ...";
  std::cerr << "\n";
}

struct Loaded {
  std::shared_ptr<const ScanNetlist> scan;
  std::vector<ConstraintSet> sets;
  Provenance provenance;
};

Loaded load(const std::string& netlist_path, const std::string& constraints_path) {
  Loaded l;
  const std::string bench = slurp(netlist_path, "netlist");
  l.scan = std::make_shared<const ScanNetlist>(scan_transform(parse_bench(bench)));
  l.provenance.netlist_hash = content_hash(bench);
  if (!constraints_path.empty()) {
    const std::string cons = slurp(constraints_path, "constraint");
    l.sets = parse_constraints(cons);
    l.provenance.constraints_hash = content_hash(cons);
  } else {
    l.provenance.constraints_hash = "none";
  }
  l.provenance.tool_version = SAFEFAULT_VERSION;
  return l;
}

std::vector<bool> detected_from_labels(std::span<const std::string> labels,
                                       const std::vector<std::string>& detected) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < labels.size(); ++i) index.emplace(labels[i], i);
  std::vector<bool> flags(labels.size(), false);
  for (const auto& d : detected) {
    auto it = index.find(d);
    if (it == index.end()) throw InputError("detected fault not in the fault list: " + d);
    flags[it->second] = true;
  }
  return flags;
}

struct ClassifyArgs {
  std::string netlist, constraints, units, out, format = "csv", verdicts, patterns, detected;
  std::uint64_t budget = kDefaultDecisionBudget;
  unsigned jobs = 1;
};

int run_classify(const ClassifyArgs& a) {
  const ReportFormat format = parse_report_format(a.format);
  Loaded l = load(a.netlist, a.constraints);
  const UnitMap units = a.units.empty() ? UnitMap() : UnitMap::parse(slurp(a.units, "units"));
  const auto faults = enumerate_faults(*l.scan);

  AtpgOptions options;
  options.budget = a.budget;
  options.jobs = a.jobs;
  const Attribution attribution = analyze(l.scan, l.sets, faults, options);

  std::vector<std::string> labels, owners;
  for (const Fault& f : faults) {
    labels.push_back(fault_label(*l.scan, f));
    owners.push_back(site_owner_name(*l.scan, f.site));
  }

  std::vector<bool> detected;
  if (!a.patterns.empty()) {
    const AugmentedNetlist augmented = augment(l.scan, l.sets);
    std::vector<std::size_t> rejected;
    const PatternSet kept = admissible_filter(read_pattern_file(a.patterns), augmented, &rejected);
    warn_rejected(rejected);
    detected = detect(augmented, faults, kept, true);
  } else if (!a.detected.empty()) {
    detected = detected_from_labels(labels, parse_fault_list(slurp(a.detected, "detected")));
  }

  const auto report = build_report(owners, attribution.classes, detected, units, l.provenance);
  spill(a.out, emit_report(report, format, std::cerr));
  if (!a.verdicts.empty()) {
    std::vector<VerdictRecord> records;
    for (std::size_t i = 0; i < faults.size(); ++i) records.push_back({labels[i], attribution.classes[i]});
    spill(a.verdicts, write_verdicts(records, l.provenance));
  }
  if (attribution.overlap > 0) {
    std::cerr << "note: " << attribution.overlap
              << " fault(s) are safe under two or more constraint sets on their own\n";
  }
  if (report.global.aborted > 0) {
    std::cerr << "warning: " << report.global.aborted << " fault(s) aborted at budget " << a.budget << "\n";
  }
  return 0;
}

int run_grade(const std::string& netlist, const std::string& patterns, const std::string& constraints,
              const std::string& out) {
  Loaded l = load(netlist, constraints);
  const auto faults = enumerate_faults(*l.scan);
  const AugmentedNetlist augmented = augment(l.scan, l.sets);
  std::vector<std::size_t> rejected;
  const PatternSet kept = admissible_filter(read_pattern_file(patterns), augmented, &rejected);
  warn_rejected(rejected);
  const auto hits = detect(augmented, faults, kept, true);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < faults.size(); ++i) {
    if (hits[i]) labels.push_back(fault_label(*l.scan, faults[i]));
  }
  spill(out, write_fault_list(labels, "detected " + std::to_string(labels.size()) + " of " +
                                          std::to_string(faults.size())));
  return 0;
}

int run_report(const std::string& counts, const std::string& verdicts, const std::string& detected,
               const std::string& units_path, const std::string& out, const std::string& format_name) {
  const ReportFormat format = parse_report_format(format_name);
  ClassificationReport report;
  if (!counts.empty()) {
    if (!verdicts.empty() || !detected.empty()) {
      throw InputError("--faults takes counts directly; it cannot be combined with --verdicts or --detected");
    }
    report = parse_counts(slurp(counts, "counts"));
  } else {
    if (verdicts.empty()) throw InputError("report needs --faults or --verdicts");
    const auto records = parse_verdicts(slurp(verdicts, "verdict"));
    std::vector<std::string> labels, owners;
    std::vector<FaultClass> classes;
    for (const auto& r : records) {
      labels.push_back(r.label);
      owners.push_back(label_owner(r.label));
      classes.push_back(r.cls);
    }
    std::vector<bool> flags;
    if (!detected.empty()) flags = detected_from_labels(labels, parse_fault_list(slurp(detected, "detected")));
    const UnitMap units = units_path.empty() ? UnitMap() : UnitMap::parse(slurp(units_path, "units"));
    report = build_report(owners, classes, flags, units);
  }
  spill(out, emit_report(report, format, std::cerr));
  return 0;
}

int run_oracle(const std::string& netlist, const std::string& constraints, const std::string& out) {
  Loaded l = load(netlist, constraints);
  const auto faults = enumerate_faults(*l.scan);
  const Attribution attribution = analyze_exhaustive(l.scan, l.sets, faults);
  std::vector<VerdictRecord> records;
  for (std::size_t i = 0; i < faults.size(); ++i) {
    records.push_back({fault_label(*l.scan, faults[i]), attribution.classes[i]});
  }
  spill(out, write_verdicts(records, l.provenance));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safe-fault classification and fault coverage reports"};
  app.set_version_flag("--version", std::string(SAFEFAULT_VERSION));
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "Classify every stuck-at fault and write a coverage report");
  classify->add_option("--netlist", ca.netlist, "bench netlist")->required();
  classify->add_option("--constraints", ca.constraints, "constraint file");
  classify->add_option("--budget", ca.budget, "SAT decisions per fault before aborting");
  classify->add_option("--units", ca.units, "unit prefix list");
  classify->add_option("--out", ca.out, "report file, - for stdout")->required();
  classify->add_option("--format", ca.format, "csv or text");
  classify->add_option("--verdicts", ca.verdicts, "per-fault verdict file");
  classify->add_option("--jobs", ca.jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  auto* pat = classify->add_option("--patterns", ca.patterns, "grade these patterns for the detected column");
  classify->add_option("--detected", ca.detected, "detected fault list for the detected column")->excludes(pat);

  std::string netlist, constraints, patterns, out, counts, verdicts, detected, units, format = "csv";
  auto* grade = app.add_subcommand("grade", "Fault-simulate a pattern set and list detected faults");
  grade->add_option("--netlist", netlist, "bench netlist")->required();
  grade->add_option("--patterns", patterns, "pattern file")->required();
  grade->add_option("--constraints", constraints, "constraint file");
  grade->add_option("--out", out, "detected fault list, - for stdout")->required();

  auto* report = app.add_subcommand("report", "Build a coverage table from verdicts or external counts");
  report->add_option("--faults", counts, "per-unit counts table");
  report->add_option("--verdicts", verdicts, "verdict file");
  report->add_option("--detected", detected, "detected fault list");
  report->add_option("--units", units, "unit prefix list");
  report->add_option("--out", out, "report file, - for stdout")->required();
  report->add_option("--format", format, "csv or text");

  auto* oracle = app.add_subcommand("oracle", "Exhaustive classification for small netlists");
  oracle->add_option("--netlist", netlist, "bench netlist")->required();
  oracle->add_option("--constraints", constraints, "constraint file");
  oracle->add_option("--out", out, "verdict file, - for stdout")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*classify) return run_classify(ca);
    if (*grade) return run_grade(netlist, patterns, constraints, out);
    if (*report) return run_report(counts, verdicts, detected, units, out, format);
    if (*oracle) return run_oracle(netlist, constraints, out);
  } catch (const InconsistencyError& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
