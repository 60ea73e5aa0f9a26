#include <gtest/gtest.h>

#include <memory>
#include <random>

#include "safefault/analysis.hpp"
#include "safefault/bench.hpp"
#include "safefault/errors.hpp"
#include "safefault/fault_sim.hpp"
#include "support/oracle.hpp"
#include "support/random_circuits.hpp"

using namespace safefault;

namespace {

std::shared_ptr<const ScanNetlist> scan_ptr(std::string_view bench) {
  return std::make_shared<const ScanNetlist>(scan_transform(parse_bench(bench)));
}

const char* kAnd2 = "INPUT(a) INPUT(b) OUTPUT(c) c = AND(a,b)";

std::string codes(const Attribution& a) {
  std::string out;
  for (const auto& c : a.classes) out += class_code(c);
  return out;
}

Category category_of(const FaultClass& c) { return std::get<ConstraintUntestable>(c).category; }

}  // namespace

TEST(Attribute, StructuralBeatsEveryCategory) {
  const std::vector<Verdict> baseline = {Verdict::untestable(), Verdict::testable({})};
  const std::vector<SetRun> cumulative = {
      {Category(CategoryKind::ResetLogic), {Verdict::untestable(), Verdict::untestable()}}};
  const auto a = attribute_categories(baseline, cumulative, cumulative);
  EXPECT_EQ(codes(a), "US");
  EXPECT_EQ(category_of(a.classes[1]), Category(CategoryKind::ResetLogic));
  EXPECT_EQ(a.overlap, 0u);
}

TEST(Attribute, FirstProvingSetWins) {
  const std::vector<Verdict> baseline = {Verdict::testable({}), Verdict::testable({}), Verdict::aborted()};
  const std::vector<SetRun> cumulative = {
      {Category(CategoryKind::ResetLogic), {Verdict::testable({}), Verdict::untestable(), Verdict::aborted()}},
      {Category(CategoryKind::DecodingLogic), {Verdict::untestable(), Verdict::untestable(), Verdict::aborted()}}};
  const std::vector<SetRun> individual = {
      {Category(CategoryKind::ResetLogic), {Verdict::testable({}), Verdict::untestable(), Verdict::aborted()}},
      {Category(CategoryKind::DecodingLogic), {Verdict::testable({}), Verdict::untestable(), Verdict::aborted()}}};
  const auto a = attribute_categories(baseline, cumulative, individual);
  EXPECT_EQ(codes(a), "SSA");
  EXPECT_EQ(category_of(a.classes[0]), Category(CategoryKind::DecodingLogic));
  EXPECT_EQ(category_of(a.classes[1]), Category(CategoryKind::ResetLogic));
  EXPECT_EQ(a.overlap, 1u);
}

TEST(Attribute, MisalignedListsRejected) {
  const std::vector<Verdict> baseline = {Verdict::testable({})};
  const std::vector<SetRun> runs = {{Category(CategoryKind::ResetLogic), {}}};
  EXPECT_THROW(attribute_categories(baseline, runs, {}), InputError);
  EXPECT_THROW(attribute_categories(baseline, {}, runs), InputError);
}

TEST(Analyze, OverlappingSetsAttributeToFirst) {
  const auto s = scan_ptr(kAnd2);
  const auto sets = parse_constraints(
      "set reset_logic { fix a = 0 }\n"
      "set user:forbid11 { forbid (a, b) in {11} }\n");
  const auto faults = enumerate_faults(*s);
  const auto a = analyze(s, sets, faults, {});
  const std::size_t out0 = 8;
  ASSERT_EQ(fault_label(*s, faults[out0]), "gate:c:out/0");
  EXPECT_EQ(category_of(a.classes[out0]), Category(CategoryKind::ResetLogic));
  // Safe under either set alone: c-out/0, in0/0, in1/0 and all four port
  // faults (each drives the faulty machine out of the admissible space).
  EXPECT_EQ(a.overlap, 7u);
  EXPECT_EQ(codes(a), "SSSSSTSSST");
  const auto exhaustive = analyze_exhaustive(s, sets, faults);
  EXPECT_EQ(codes(exhaustive), codes(a));
  EXPECT_EQ(exhaustive.overlap, a.overlap);
}

TEST(Analyze, NoSetsGivesBaselineClasses) {
  const auto s = scan_ptr("INPUT(a) INPUT(b) OUTPUT(y) x = AND(a, b) y = OR(a, x)");
  const auto faults = enumerate_faults(*s);
  const auto a = analyze(s, {}, faults, {});
  std::size_t structural = 0;
  for (const auto& c : a.classes) structural += std::holds_alternative<StructurallyUntestable>(c);
  EXPECT_GT(structural, 0u);
  for (const auto& c : a.classes) EXPECT_FALSE(std::holds_alternative<ConstraintUntestable>(c));
}

TEST(AnalyzeProperty, MatchesExhaustivePipeline) {
  std::mt19937_64 rng(0x5eed0801);
  for (int iter = 0; iter < 100; ++iter) {
    const auto c = testkit::random_circuit(rng);
    const auto s = std::make_shared<const ScanNetlist>(scan_transform(parse_bench(c.bench)));
    const auto sets = parse_constraints(testkit::random_constraints(rng, c.nets));
    const auto faults = enumerate_faults(*s);
    AtpgOptions options;
    options.budget = 1'000'000;
    const auto a = analyze(s, sets, faults, options);
    const auto b = analyze_exhaustive(s, sets, faults);
    ASSERT_EQ(codes(a), codes(b)) << c.bench;
    EXPECT_EQ(a.overlap, b.overlap);
    for (std::size_t i = 0; i < faults.size(); ++i) {
      if (std::holds_alternative<ConstraintUntestable>(a.classes[i])) {
        EXPECT_EQ(category_of(a.classes[i]), category_of(b.classes[i]));
      }
    }
  }
}

TEST(AnalyzeProperty, TestableWitnessesHonorAllConstraints) {
  std::mt19937_64 rng(0x5eed0802);
  for (int iter = 0; iter < 100; ++iter) {
    const auto c = testkit::random_circuit(rng);
    const auto s = std::make_shared<const ScanNetlist>(scan_transform(parse_bench(c.bench)));
    const auto sets = parse_constraints(testkit::random_constraints(rng, c.nets));
    const auto full = augment(s, sets);
    const auto faults = enumerate_faults(*s);
    const auto a = analyze(s, sets, faults, {});
    for (std::size_t i = 0; i < faults.size(); ++i) {
      if (const auto* t = std::get_if<Testable>(&a.classes[i])) {
        EXPECT_TRUE(pattern_detects(full, faults[i], t->witness));
      }
    }
  }
}
