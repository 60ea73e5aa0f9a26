#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace safefault::sat {

using Var = std::uint32_t;

struct Lit {
  std::uint32_t code;

  static constexpr Lit positive(Var v) { return Lit{v << 1}; }
  static constexpr Lit negative(Var v) { return Lit{(v << 1) | 1u}; }
  static constexpr Lit of(Var v, bool value) { return value ? positive(v) : negative(v); }

  constexpr Var var() const { return code >> 1; }
  constexpr bool is_negated() const { return (code & 1u) != 0; }
  constexpr Lit operator~() const { return Lit{code ^ 1u}; }
  friend constexpr bool operator==(Lit, Lit) = default;
};

enum class Result { Satisfiable, Unsatisfiable, Unknown };

/// Conflict-driven clause-learning solver: two watched literals, first-UIP
/// learning with clause minimization, VSIDS branching, phase saving, Luby
/// restarts and activity-based learnt-clause reduction.
///
/// Single use: add all clauses, then call solve() once. Fully deterministic.
class Solver {
 public:
  Var new_var();
  std::size_t var_count() const { return assigns_.size(); }

  // Returns false once the formula is known to be unsatisfiable at level 0.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(std::initializer_list<Lit> lits) {
    return add_clause(std::span<const Lit>(lits.begin(), lits.size()));
  }

  // Unknown when more than `decision_budget` branching decisions would be
  // needed.
  Result solve(std::uint64_t decision_budget);

  // Model value after a Satisfiable result.
  bool model_value(Var v) const { return model_[v]; }
  std::uint64_t decisions() const { return decisions_; }
  std::uint64_t conflicts() const { return conflicts_; }

 private:
  using ClauseRef = std::uint32_t;
  static constexpr ClauseRef kNoReason = UINT32_MAX;

  struct Clause {
    std::vector<Lit> lits;
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
  };

  // +1 true, -1 false, 0 unassigned
  std::int8_t value(Lit l) const {
    const std::int8_t v = assigns_[l.var()];
    return l.is_negated() ? static_cast<std::int8_t>(-v) : v;
  }
  std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim_.size()); }

  ClauseRef store(std::vector<Lit> lits, bool learnt);
  void attach(ClauseRef ref);
  void enqueue(Lit l, ClauseRef reason);
  ClauseRef propagate();
  void analyze(ClauseRef conflict, std::vector<Lit>& learnt, std::uint32_t& backtrack_level);
  bool redundant(Lit l) const;
  void backtrack(std::uint32_t level);
  bool pick_branch(Lit& out);
  void reduce_learnts();
  bool locked(ClauseRef ref) const;

  void bump_var(Var v);
  void bump_clause(Clause& c);
  void heap_insert(Var v);
  void heap_up(std::size_t pos);
  void heap_down(std::size_t pos);
  Var heap_pop();
  bool heap_less(Var a, Var b) const { return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b); }

  std::vector<Clause> clauses_;
  std::vector<ClauseRef> learnts_;
  std::vector<std::vector<ClauseRef>> watches_;  // by literal code: clauses watching it
  std::vector<std::int8_t> assigns_;
  std::vector<std::uint8_t> saved_phase_;
  std::vector<std::uint32_t> level_;
  std::vector<ClauseRef> reason_;
  std::vector<double> activity_;
  std::vector<std::uint8_t> seen_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;

  std::vector<Var> heap_;
  std::vector<std::int64_t> heap_pos_;

  std::vector<bool> model_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  bool unsat_ = false;
  bool solved_ = false;
  std::uint64_t decisions_ = 0;
  std::uint64_t conflicts_ = 0;
};

}  // namespace safefault::sat
