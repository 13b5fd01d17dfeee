#include "cdcl.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace safesynth {

namespace {

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    seq++;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    seq--;
    x = x % size;
  }
  return std::pow(y, seq);
}

constexpr double kVarDecay = 0.95;
constexpr double kClaDecay = 0.999;
constexpr int kRestartBase = 100;

} // namespace

Cdcl::Cdcl(uint64_t seed) : rng_(seed * 0x9E3779B97F4A7C15ull + 0x2545F4914F6CDD1Dull) {}

Cdcl::~Cdcl() {
  for (int *c : clauses_)
    delete[] c;
  for (int *c : learnts_)
    delete[] c;
}

int Cdcl::new_var() {
  int v = num_vars();
  assigns_.push_back(0);
  polarity_.push_back(1);
  level_.push_back(0);
  reason_.push_back(nullptr);
  // Tiny seeded perturbation breaks ties deterministically per seed.
  rng_ ^= rng_ << 13;
  rng_ ^= rng_ >> 7;
  rng_ ^= rng_ << 17;
  activity_.push_back(static_cast<double>(rng_ % 1000) * 1e-7);
  heap_index_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v;
}

int *Cdcl::alloc_clause(const std::vector<int> &lits, bool is_learnt) {
  int *c = new int[lits.size() + 3];
  c[0] = static_cast<int>(lits.size());
  c[1] = is_learnt ? 1 : 0;
  cact(c) = 0.0f;
  std::memcpy(c + 3, lits.data(), lits.size() * sizeof(int));
  return c;
}

void Cdcl::attach(int *c) {
  int *l = clits(c);
  watches_[l[0]].push_back({c, l[1]});
  watches_[l[1]].push_back({c, l[0]});
}

bool Cdcl::add_clause(std::vector<int> lits) {
  if (!ok_)
    return false;
  cancel_until(0);
  std::sort(lits.begin(), lits.end());
  std::vector<int> out;
  int prev = -1;
  for (int l : lits) {
    if (l == prev)
      continue;
    if (prev >= 0 && l == (prev ^ 1))
      return true;
    int v = value(l);
    if (v > 0)
      return true;
    if (v == 0)
      out.push_back(l);
    prev = l;
  }
  if (out.empty()) {
    ok_ = false;
    return false;
  }
  if (out.size() == 1) {
    enqueue(out[0], nullptr);
    if (propagate() != nullptr)
      ok_ = false;
    return ok_;
  }
  int *c = alloc_clause(out, false);
  clauses_.push_back(c);
  attach(c);
  return true;
}

void Cdcl::enqueue(int lit, int *reason) {
  int v = lit >> 1;
  assigns_[v] = (lit & 1) ? -1 : 1;
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(lit);
}

int *Cdcl::propagate() {
  int *confl = nullptr;
  while (qhead_ < trail_.size()) {
    int p = trail_[qhead_++];
    int false_lit = p ^ 1;
    std::vector<Watcher> &ws = watches_[false_lit];
    propagations++;
    size_t i = 0, j = 0, n = ws.size();
    while (i < n) {
      Watcher w = ws[i];
      if (value(w.blocker) > 0) {
        ws[j++] = ws[i++];
        continue;
      }
      int *c = w.clause;
      if (removed(c)) {
        i++;
        continue;
      }
      int *l = clits(c);
      if (l[0] == false_lit)
        std::swap(l[0], l[1]);
      i++;
      int first = l[0];
      if (first != w.blocker && value(first) > 0) {
        ws[j++] = {c, first};
        continue;
      }
      int sz = csize(c);
      bool found = false;
      for (int k = 2; k < sz; ++k) {
        if (value(l[k]) >= 0) {
          std::swap(l[1], l[k]);
          watches_[l[1]].push_back({c, first});
          found = true;
          break;
        }
      }
      if (found)
        continue;
      ws[j++] = {c, first};
      if (value(first) < 0) {
        confl = c;
        qhead_ = trail_.size();
        while (i < n)
          ws[j++] = ws[i++];
      } else {
        enqueue(first, c);
      }
    }
    ws.resize(j);
    if (confl)
      return confl;
  }
  return nullptr;
}

void Cdcl::bump_var(int v) {
  if ((activity_[v] += var_inc_) > 1e100) {
    for (double &a : activity_)
      a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (in_heap(v))
    heap_up(heap_index_[v]);
}

void Cdcl::bump_clause(int *c) {
  if ((cact(c) += static_cast<float>(cla_inc_)) > 1e20f) {
    for (int *l : learnts_)
      cact(l) *= 1e-20f;
    cla_inc_ *= 1e-20;
  }
}

void Cdcl::decay() {
  var_inc_ /= kVarDecay;
  cla_inc_ /= kClaDecay;
}

void Cdcl::analyze(int *confl, std::vector<int> &out, int &bt_level) {
  int path = 0;
  int p = -1;
  out.clear();
  out.push_back(-1);
  int index = static_cast<int>(trail_.size()) - 1;
  do {
    if (learnt(confl))
      bump_clause(confl);
    int *l = clits(confl);
    for (int k = (p == -1 ? 0 : 1); k < csize(confl); ++k) {
      int q = l[k];
      int v = q >> 1;
      if (!seen_[v] && level_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level())
          path++;
        else
          out.push_back(q);
      }
    }
    while (!seen_[trail_[index--] >> 1]) {
    }
    p = trail_[index + 1];
    confl = reason_[p >> 1];
    seen_[p >> 1] = 0;
    path--;
  } while (path > 0);
  out[0] = p ^ 1;

  analyze_toclear_.assign(out.begin(), out.end());
  size_t j = 1;
  for (size_t k = 1; k < out.size(); ++k)
    if (reason_[out[k] >> 1] == nullptr || !lit_redundant(out[k]))
      out[j++] = out[k];
  out.resize(j);

  if (out.size() == 1) {
    bt_level = 0;
  } else {
    size_t max_k = 1;
    for (size_t k = 2; k < out.size(); ++k)
      if (level_[out[k] >> 1] > level_[out[max_k] >> 1])
        max_k = k;
    std::swap(out[1], out[max_k]);
    bt_level = level_[out[1] >> 1];
  }
  for (int l : analyze_toclear_)
    seen_[l >> 1] = 0;
}

// A literal is redundant if it is implied by other literals of the clause.
bool Cdcl::lit_redundant(int lit) {
  analyze_stack_.clear();
  analyze_stack_.push_back(lit);
  size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    int q = analyze_stack_.back();
    analyze_stack_.pop_back();
    int *c = reason_[q >> 1];
    int *l = clits(c);
    for (int k = 1; k < csize(c); ++k) {
      int r = l[k];
      int v = r >> 1;
      if (seen_[v] || level_[v] == 0)
        continue;
      if (reason_[v] != nullptr) {
        seen_[v] = 1;
        analyze_stack_.push_back(r);
        analyze_toclear_.push_back(r);
      } else {
        for (size_t t = top; t < analyze_toclear_.size(); ++t)
          seen_[analyze_toclear_[t] >> 1] = 0;
        analyze_toclear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Cdcl::analyze_final(int p) {
  conflict_.clear();
  conflict_.push_back(p);
  if (decision_level() == 0)
    return;
  seen_[p >> 1] = 1;
  for (int k = static_cast<int>(trail_.size()) - 1; k >= trail_lim_[0]; --k) {
    int v = trail_[k] >> 1;
    if (!seen_[v])
      continue;
    if (reason_[v] == nullptr) {
      if (level_[v] > 0)
        conflict_.push_back(trail_[k] ^ 1);
    } else {
      int *c = reason_[v];
      int *l = clits(c);
      for (int j = 1; j < csize(c); ++j)
        if (level_[l[j] >> 1] > 0)
          seen_[l[j] >> 1] = 1;
    }
    seen_[v] = 0;
  }
  seen_[p >> 1] = 0;
}

void Cdcl::cancel_until(int level) {
  if (decision_level() <= level)
    return;
  for (int k = static_cast<int>(trail_.size()) - 1; k >= trail_lim_[level]; --k) {
    int v = trail_[k] >> 1;
    assigns_[v] = 0;
    polarity_[v] = (trail_[k] & 1) ? 1 : 0;
    reason_[v] = nullptr;
    if (!in_heap(v))
      heap_insert(v);
  }
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
  qhead_ = trail_.size();
}

int Cdcl::pick_branch() {
  while (!heap_.empty()) {
    int v = heap_pop();
    if (assigns_[v] == 0)
      return 2 * v + polarity_[v];
  }
  return -1;
}

void Cdcl::reduce_db() {
  std::sort(learnts_.begin(), learnts_.end(), [](int *a, int *b) {
    if (csize(a) == 2 || csize(b) == 2)
      return csize(a) > 2 && csize(b) == 2;
    return cact(a) < cact(b);
  });
  double extra = cla_inc_ / static_cast<double>(learnts_.size() + 1);
  size_t j = 0;
  std::vector<int *> dead;
  for (size_t k = 0; k < learnts_.size(); ++k) {
    int *c = learnts_[k];
    int *l = clits(c);
    bool locked = reason_[l[0] >> 1] == c && value(l[0]) > 0;
    if (csize(c) > 2 && !locked && (k < learnts_.size() / 2 || cact(c) < extra)) {
      c[1] |= 2;
      dead.push_back(c);
    } else {
      learnts_[j++] = c;
    }
  }
  learnts_.resize(j);
  if (dead.empty())
    return;
  for (auto &ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(), [](const Watcher &w) { return removed(w.clause); }),
             ws.end());
  for (int *c : dead)
    delete[] c;
}

Cdcl::Result Cdcl::search(int64_t nof_conflicts, const std::vector<int> &assumptions) {
  int64_t conflicts_here = 0;
  std::vector<int> learnt_clause;
  for (;;) {
    int *confl = propagate();
    if (confl != nullptr) {
      conflicts++;
      conflicts_here++;
      if (decision_level() == 0) {
        ok_ = false;
        return Result::Unsat;
      }
      int bt = 0;
      analyze(confl, learnt_clause, bt);
      cancel_until(bt);
      if (learnt_clause.size() == 1) {
        enqueue(learnt_clause[0], nullptr);
      } else {
        int *c = alloc_clause(learnt_clause, true);
        learnts_.push_back(c);
        attach(c);
        bump_clause(c);
        enqueue(learnt_clause[0], c);
      }
      decay();
      continue;
    }
    if (nof_conflicts >= 0 && conflicts_here >= nof_conflicts) {
      cancel_until(0);
      return Result::Unknown;
    }
    if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_)
      reduce_db();

    int next = -1;
    while (decision_level() < static_cast<int>(assumptions.size())) {
      int p = assumptions[decision_level()];
      if (value(p) > 0) {
        trail_lim_.push_back(static_cast<int>(trail_.size()));
      } else if (value(p) < 0) {
        analyze_final(p ^ 1);
        return Result::Unsat;
      } else {
        next = p;
        break;
      }
    }
    if (next == -1) {
      decisions++;
      next = pick_branch();
      if (next == -1)
        return Result::Sat;
    }
    trail_lim_.push_back(static_cast<int>(trail_.size()));
    enqueue(next, nullptr);
  }
}

Cdcl::Result Cdcl::solve(const std::vector<int> &assumptions, int64_t conflict_limit) {
  conflict_.clear();
  model_.clear();
  if (!ok_)
    return Result::Unsat;
  cancel_until(0);
  max_learnts_ = std::max(static_cast<double>(clauses_.size()) / 3.0, 2000.0);
  uint64_t start = conflicts;
  Result status = Result::Unknown;
  for (int round = 0; status == Result::Unknown; ++round) {
    int64_t budget = static_cast<int64_t>(luby(2.0, round) * kRestartBase);
    if (conflict_limit >= 0) {
      int64_t left = conflict_limit - static_cast<int64_t>(conflicts - start);
      if (left <= 0)
        break;
      budget = std::min(budget, left);
    }
    status = search(budget, assumptions);
    max_learnts_ *= 1.05;
  }
  if (status == Result::Sat) {
    model_.assign(assigns_.begin(), assigns_.end());
  } else if (status == Result::Unsat && !ok_) {
    conflict_.clear();
  }
  cancel_until(0);
  return status;
}

void Cdcl::heap_insert(int v) {
  heap_index_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_index_[v]);
}

void Cdcl::heap_up(int pos) {
  int v = heap_[pos];
  while (pos > 0) {
    int parent = (pos - 1) >> 1;
    if (!heap_less(v, heap_[parent]))
      break;
    heap_[pos] = heap_[parent];
    heap_index_[heap_[pos]] = pos;
    pos = parent;
  }
  heap_[pos] = v;
  heap_index_[v] = pos;
}

void Cdcl::heap_down(int pos) {
  int v = heap_[pos];
  int n = static_cast<int>(heap_.size());
  for (;;) {
    int child = 2 * pos + 1;
    if (child >= n)
      break;
    if (child + 1 < n && heap_less(heap_[child + 1], heap_[child]))
      child++;
    if (!heap_less(heap_[child], v))
      break;
    heap_[pos] = heap_[child];
    heap_index_[heap_[pos]] = pos;
    pos = child;
  }
  heap_[pos] = v;
  heap_index_[v] = pos;
}

int Cdcl::heap_pop() {
  int v = heap_[0];
  heap_index_[v] = -1;
  int last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_index_[last] = 0;
    heap_down(0);
  }
  return v;
}

} // namespace safesynth
