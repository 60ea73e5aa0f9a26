#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "safefault/bench.hpp"
#include "safefault/errors.hpp"
#include "safefault/fault.hpp"
#include "safefault/scan.hpp"
#include "support/oracle.hpp"
#include "support/random_circuits.hpp"

using namespace safefault;

namespace {

ScanNetlist scan_of(std::string_view bench) { return scan_transform(parse_bench(bench)); }

std::vector<std::string> labels(const ScanNetlist& s, std::span<const Fault> faults) {
  std::vector<std::string> out;
  for (const Fault& f : faults) out.push_back(fault_label(s, f));
  return out;
}

// Set of detecting assignments for each fault, by exhaustive reference simulation.
std::vector<std::vector<std::uint64_t>> signatures(const Netlist& n, const ScanNetlist& s,
                                                   std::span<const Fault> faults) {
  const testkit::Oracle oracle(n);
  std::vector<std::vector<std::uint64_t>> out;
  const std::uint64_t count = std::uint64_t{1} << s.input_count();
  for (const Fault& f : faults) {
    const auto of = testkit::oracle_fault(fault_label(s, f));
    std::vector<std::uint64_t> sig;
    for (std::uint64_t a = 0; a < count; ++a) {
      if (oracle.detects(a, of)) sig.push_back(a);
    }
    out.push_back(std::move(sig));
  }
  return out;
}

std::size_t signature_classes(const Netlist& n, const ScanNetlist& s, std::span<const Fault> faults) {
  const auto sigs = signatures(n, s, faults);
  return std::set<std::vector<std::uint64_t>>(sigs.begin(), sigs.end()).size();
}

}  // namespace

TEST(Enumerate, And2HasTenFaultsInOrder) {
  const auto s = scan_of("INPUT(a) INPUT(b) OUTPUT(c) c = AND(a,b)");
  const auto f = enumerate_faults(s);
  EXPECT_EQ(labels(s, f), (std::vector<std::string>{
                              "port:a/0", "port:a/1", "port:b/0", "port:b/1", "gate:c:in0/0",
                              "gate:c:in0/1", "gate:c:in1/0", "gate:c:in1/1", "gate:c:out/0",
                              "gate:c:out/1"}));
}

TEST(Enumerate, BufferHasSixFaults) {
  EXPECT_EQ(enumerate_faults(scan_of("INPUT(x) OUTPUT(y) y = BUF(x)")).size(), 6u);
}

TEST(Enumerate, WireOnlyNetlistHasPortFaults) {
  EXPECT_EQ(enumerate_faults(scan_of("INPUT(x) OUTPUT(x)")).size(), 2u);
}

TEST(Enumerate, PseudoInputsArePorts) {
  const auto s = scan_of("INPUT(d) OUTPUT(y) q = DFF(d) y = NOT(q)");
  const auto l = labels(s, enumerate_faults(s));
  EXPECT_EQ(l.size(), 8u);
  EXPECT_EQ(l[2], "port:q/0");
}

TEST(Labels, RoundTripAndRejectUnknownSites) {
  const auto s = scan_of("INPUT(a) INPUT(b) OUTPUT(c) c = AND(a,b)");
  for (const Fault& f : enumerate_faults(s)) {
    EXPECT_EQ(parse_fault_label(s, fault_label(s, f)), f);
  }
  EXPECT_THROW(parse_fault_label(s, "gate:c:in2/0"), InputError);
  EXPECT_THROW(parse_fault_label(s, "port:c/0"), InputError);
  EXPECT_THROW(parse_fault_label(s, "gate:zz:out/1"), InputError);
  EXPECT_THROW(parse_fault_label(s, "port:a/2"), InputError);
  EXPECT_THROW(check_fault_site(s, Fault{{SiteKind::GateOutput, 7}, false}), InputError);
}

TEST(Category, KeywordsRoundTrip) {
  for (const Category& c : Category::standard()) EXPECT_EQ(Category::parse(c.keyword()), c);
  const auto user = Category::parse("user:bist_mode");
  ASSERT_TRUE(user);
  EXPECT_EQ(user->kind(), CategoryKind::UserDefined);
  EXPECT_EQ(user->keyword(), "user:bist_mode");
  EXPECT_FALSE(Category::parse("reset"));
  EXPECT_FALSE(Category::parse("user:"));
  EXPECT_EQ(Category::standard().size(), 6u);
}

TEST(FaultClassCodes, CodesAndSafety) {
  EXPECT_EQ(class_code(Testable{}), 'T');
  EXPECT_EQ(class_code(StructurallyUntestable{}), 'U');
  EXPECT_EQ(class_code(ConstraintUntestable{Category(CategoryKind::ResetLogic)}), 'S');
  EXPECT_EQ(class_code(Aborted{}), 'A');
  EXPECT_TRUE(is_safe(ConstraintUntestable{Category(CategoryKind::ResetLogic)}));
  EXPECT_FALSE(is_safe(Aborted{}));
  EXPECT_FALSE(is_safe(Testable{}));
}

TEST(Collapse, And2HasFourClasses) {
  const std::string bench = "INPUT(a) INPUT(b) OUTPUT(c) c = AND(a,b)";
  const Netlist n = parse_bench(bench);
  const auto s = scan_transform(n);
  const auto f = enumerate_faults(s);
  const auto p = collapse_equivalent(f, s);
  EXPECT_EQ(p.classes.size(), 4u);
  EXPECT_EQ(p.classes.size(), signature_classes(n, s, f));
  // port:a/0, in0/0, in1/0, port:b/0 and out/0 are one class led by fault 0.
  EXPECT_EQ(p.classes[0], (std::vector<std::size_t>{0, 2, 4, 6, 8}));
}

TEST(Collapse, InverterChainHasTwoClasses) {
  const Netlist n = parse_bench("INPUT(x) OUTPUT(z) y = NOT(x) z = NOT(y)");
  const auto s = scan_transform(n);
  const auto f = enumerate_faults(s);
  const auto p = collapse_equivalent(f, s);
  EXPECT_EQ(p.classes.size(), 2u);
  EXPECT_EQ(p.classes.size(), signature_classes(n, s, f));
}

TEST(Collapse, FanoutStemKeptApart) {
  const auto s = scan_of("INPUT(a) INPUT(b) OUTPUT(x) OUTPUT(y) x = AND(a,b) y = OR(a,b)");
  const auto f = enumerate_faults(s);
  const auto p = collapse_equivalent(f, s);
  const auto l = labels(s, f);
  auto index = [&](const std::string& label) {
    return static_cast<std::size_t>(std::find(l.begin(), l.end(), label) - l.begin());
  };
  EXPECT_NE(p.representative[index("port:a/1")], p.representative[index("gate:x:in0/1")]);
  EXPECT_NE(p.representative[index("port:a/0")], p.representative[index("gate:y:in0/0")]);
}

TEST(Collapse, ObservedStemKeptApart) {
  const auto s = scan_of("INPUT(a) INPUT(b) OUTPUT(a) OUTPUT(x) x = AND(a,b)");
  const auto f = enumerate_faults(s);
  const auto p = collapse_equivalent(f, s);
  EXPECT_NE(p.representative[0], p.representative[4]);  // port:a/0 vs gate:x:in0/0
}

TEST(FaultProperty, CountMatchesPinFormula) {
  std::mt19937_64 rng(0x5eed0201);
  for (int i = 0; i < 300; ++i) {
    const auto s = scan_transform(parse_bench(testkit::random_circuit(rng).bench));
    std::size_t pins = s.input_count() + s.gate_count();
    for (const Gate& g : s.core().gates()) pins += g.inputs.size();
    const auto f = enumerate_faults(s);
    EXPECT_EQ(f.size(), 2 * pins);
    EXPECT_EQ(labels(s, f), labels(s, enumerate_faults(s)));
    EXPECT_EQ(std::set<Fault>(f.begin(), f.end()).size(), f.size());
  }
}

TEST(FaultProperty, CollapsedClassesShareDetectionSignatures) {
  std::mt19937_64 rng(0x5eed0202);
  for (int i = 0; i < 200; ++i) {
    const auto c = testkit::random_circuit(rng);
    const Netlist n = parse_bench(c.bench);
    const auto s = scan_transform(n);
    const auto f = enumerate_faults(s);
    const auto p = collapse_equivalent(f, s);
    const auto sigs = signatures(n, s, f);
    for (const auto& cls : p.classes) {
      EXPECT_EQ(cls.front(), p.representative[cls.front()]);
      for (std::size_t m : cls) {
        EXPECT_EQ(p.representative[m], cls.front());
        EXPECT_EQ(sigs[m], sigs[cls.front()]) << c.bench << fault_label(s, f[m]);
      }
    }
  }
}
