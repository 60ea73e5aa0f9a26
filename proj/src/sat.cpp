#include "safefault/sat.hpp"

#include <algorithm>
#include <cassert>

namespace safefault::sat {

namespace {

constexpr double kVarDecay = 0.95;
constexpr double kClauseDecay = 0.999;
constexpr std::uint64_t kRestartUnit = 100;

// Luby sequence, 1-based: 1 1 2 1 1 2 4 1 1 2 ...
std::uint64_t luby(std::uint64_t i) {
  std::uint64_t size = 1, seq = 0;
  while (size < i + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  std::uint64_t x = i;
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::uint64_t{1} << seq;
}

}  // namespace

Var Solver::new_var() {
  const auto v = static_cast<Var>(assigns_.size());
  assigns_.push_back(0);
  saved_phase_.push_back(0);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  activity_.push_back(0.0);
  seen_.push_back(0);
  heap_pos_.push_back(-1);
  watches_.emplace_back();
  watches_.emplace_back();
  return v;
}

bool Solver::add_clause(std::span<const Lit> input) {
  assert(!solved_ && decision_level() == 0);
  if (unsat_) return false;
  std::vector<Lit> lits(input.begin(), input.end());
  std::sort(lits.begin(), lits.end(), [](Lit a, Lit b) { return a.code < b.code; });
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == ~lits[i]) return true;  // tautology
    const std::int8_t v = value(lits[i]);
    if (v > 0) return true;
    if (v == 0) kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    unsat_ = true;
    return false;
  }
  if (kept.size() == 1) {
    enqueue(kept.front(), kNoReason);
    if (propagate() != kNoReason) unsat_ = true;
    return !unsat_;
  }
  attach(store(std::move(kept), false));
  return true;
}

Solver::ClauseRef Solver::store(std::vector<Lit> lits, bool learnt) {
  const auto ref = static_cast<ClauseRef>(clauses_.size());
  clauses_.push_back({std::move(lits), 0.0, learnt, false});
  if (learnt) learnts_.push_back(ref);
  return ref;
}

void Solver::attach(ClauseRef ref) {
  const Clause& c = clauses_[ref];
  watches_[c.lits[0].code].push_back(ref);
  watches_[c.lits[1].code].push_back(ref);
}

void Solver::enqueue(Lit l, ClauseRef reason) {
  const Var v = l.var();
  assigns_[v] = l.is_negated() ? -1 : 1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

Solver::ClauseRef Solver::propagate() {
  while (qhead_ < trail_.size()) {
    const Lit false_lit = ~trail_[qhead_++];
    auto& ws = watches_[false_lit.code];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      const ClauseRef ref = ws[i++];
      Clause& c = clauses_[ref];
      if (c.deleted) continue;
      if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
      if (value(c.lits[0]) > 0) {
        ws[j++] = ref;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.lits.size(); ++k) {
        if (value(c.lits[k]) >= 0) {
          std::swap(c.lits[1], c.lits[k]);
          watches_[c.lits[1].code].push_back(ref);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ref;
      if (value(c.lits[0]) < 0) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return ref;
      }
      enqueue(c.lits[0], ref);
    }
    ws.resize(j);
  }
  return kNoReason;
}

bool Solver::redundant(Lit l) const {
  const ClauseRef r = reason_[l.var()];
  if (r == kNoReason) return false;
  const Clause& c = clauses_[r];
  for (std::size_t k = 1; k < c.lits.size(); ++k) {
    const Var v = c.lits[k].var();
    if (!seen_[v] && level_[v] > 0) return false;
  }
  return true;
}

void Solver::analyze(ClauseRef conflict, std::vector<Lit>& learnt,
                     std::uint32_t& backtrack_level) {
  learnt.assign(1, Lit{0});
  int path = 0;
  bool have_pivot = false;
  Lit pivot{0};
  std::size_t index = trail_.size();
  ClauseRef confl = conflict;
  do {
    Clause& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (std::size_t k = have_pivot ? 1 : 0; k < c.lits.size(); ++k) {
      const Lit q = c.lits[k];
      const Var v = q.var();
      if (seen_[v] || level_[v] == 0) continue;
      bump_var(v);
      seen_[v] = 1;
      if (level_[v] >= decision_level()) {
        ++path;
      } else {
        learnt.push_back(q);
      }
    }
    while (!seen_[trail_[--index].var()]) {
    }
    pivot = trail_[index];
    have_pivot = true;
    confl = reason_[pivot.var()];
    seen_[pivot.var()] = 0;
    --path;
  } while (path > 0);
  learnt[0] = ~pivot;

  const std::vector<Lit> original(learnt.begin() + 1, learnt.end());
  std::size_t keep = 1;
  for (std::size_t i = 1; i < learnt.size(); ++i) {
    if (!redundant(learnt[i])) learnt[keep++] = learnt[i];
  }
  learnt.resize(keep);
  for (Lit l : original) seen_[l.var()] = 0;

  backtrack_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i) {
      if (level_[learnt[i].var()] > level_[learnt[max_i].var()]) max_i = i;
    }
    std::swap(learnt[1], learnt[max_i]);
    backtrack_level = level_[learnt[1].var()];
  }
}

void Solver::backtrack(std::uint32_t level) {
  if (decision_level() <= level) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[level];) {
    const Var v = trail_[i].var();
    saved_phase_[v] = assigns_[v] > 0 ? 1 : 0;
    assigns_[v] = 0;
    reason_[v] = kNoReason;
    if (heap_pos_[v] < 0) heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

bool Solver::pick_branch(Lit& out) {
  while (!heap_.empty()) {
    const Var v = heap_pop();
    if (assigns_[v] == 0) {
      out = Lit::of(v, saved_phase_[v] != 0);
      return true;
    }
  }
  return false;
}

bool Solver::locked(ClauseRef ref) const {
  const Clause& c = clauses_[ref];
  return value(c.lits[0]) > 0 && reason_[c.lits[0].var()] == ref;
}

void Solver::reduce_learnts() {
  std::vector<ClauseRef> order = learnts_;
  std::sort(order.begin(), order.end(), [&](ClauseRef a, ClauseRef b) {
    const double x = clauses_[a].activity, y = clauses_[b].activity;
    return x < y || (x == y && a < b);
  });
  const std::size_t victims = order.size() / 2;
  for (std::size_t i = 0; i < victims; ++i) {
    Clause& c = clauses_[order[i]];
    if (c.lits.size() <= 2 || locked(order[i])) continue;
    c.deleted = true;
    std::vector<Lit>().swap(c.lits);
  }
  std::erase_if(learnts_, [&](ClauseRef r) { return clauses_[r].deleted; });
}

void Solver::bump_var(Var v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v]));
}

void Solver::bump_clause(Clause& c) {
  if ((c.activity += clause_inc_) > 1e20) {
    for (ClauseRef r : learnts_) clauses_[r].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void Solver::heap_insert(Var v) {
  heap_pos_[v] = static_cast<std::int64_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t pos) {
  const Var v = heap_[pos];
  while (pos > 0) {
    const std::size_t parent = (pos - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = parent;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int64_t>(pos);
}

void Solver::heap_down(std::size_t pos) {
  const Var v = heap_[pos];
  for (;;) {
    std::size_t child = 2 * pos + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = static_cast<std::int64_t>(pos);
    pos = child;
  }
  heap_[pos] = v;
  heap_pos_[v] = static_cast<std::int64_t>(pos);
}

Var Solver::heap_pop() {
  const Var top = heap_.front();
  heap_pos_[top] = -1;
  const Var last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

Result Solver::solve(std::uint64_t decision_budget) {
  assert(!solved_);
  solved_ = true;
  if (unsat_ || propagate() != kNoReason) return Result::Unsatisfiable;

  for (Var v = 0; v < var_count(); ++v) {
    if (assigns_[v] == 0) heap_insert(v);
  }

  std::size_t max_learnts = std::max<std::size_t>(clauses_.size() / 3, 2000);
  std::uint64_t restart_index = 0;
  std::uint64_t restart_limit = luby(restart_index) * kRestartUnit;
  std::uint64_t conflicts_since_restart = 0;
  std::vector<Lit> learnt;

  for (;;) {
    const ClauseRef conflict = propagate();
    if (conflict != kNoReason) {
      ++conflicts_;
      ++conflicts_since_restart;
      if (decision_level() == 0) return Result::Unsatisfiable;
      std::uint32_t level = 0;
      analyze(conflict, learnt, level);
      backtrack(level);
      if (learnt.size() == 1) {
        enqueue(learnt.front(), kNoReason);
      } else {
        const ClauseRef ref = store(learnt, true);
        attach(ref);
        bump_clause(clauses_[ref]);
        enqueue(learnt.front(), ref);
      }
      var_inc_ /= kVarDecay;
      clause_inc_ /= kClauseDecay;
      continue;
    }

    if (conflicts_since_restart >= restart_limit) {
      backtrack(0);
      conflicts_since_restart = 0;
      restart_limit = luby(++restart_index) * kRestartUnit;
    }
    if (learnts_.size() >= max_learnts + trail_.size()) {
      reduce_learnts();
      max_learnts += max_learnts / 10;
    }

    Lit next{0};
    if (!pick_branch(next)) {
      model_.resize(var_count());
      for (Var v = 0; v < var_count(); ++v) model_[v] = assigns_[v] > 0;
      return Result::Satisfiable;
    }
    if (decisions_ >= decision_budget) return Result::Unknown;
    ++decisions_;
    trail_lim_.push_back(trail_.size());
    enqueue(next, kNoReason);
  }
}

}  // namespace safefault::sat
