#pragma once

#include <cstdint>
#include <vector>

namespace safesynth {

/// Conflict-driven clause-learning solver on dense variable indices.
/// Literals are 2 * var + sign, sign 1 meaning negated.
class Cdcl {
public:
  enum class Result { Sat, Unsat, Unknown };

  explicit Cdcl(uint64_t seed = 0);
  ~Cdcl();
  Cdcl(const Cdcl &) = delete;
  Cdcl &operator=(const Cdcl &) = delete;

  int new_var();
  int num_vars() const { return static_cast<int>(assigns_.size()); }
  /// Returns false once the database became unsat at level 0.
  bool add_clause(std::vector<int> lits);
  Result solve(const std::vector<int> &assumptions, int64_t conflict_limit = -1);

  /// Model value of a variable after Sat (1 true, 0 false).
  bool model_value(int var) const { return var < static_cast<int>(model_.size()) && model_[var] > 0; }
  /// Negations of the assumptions responsible for the last Unsat.
  const std::vector<int> &conflict() const { return conflict_; }
  bool okay() const { return ok_; }

  uint64_t conflicts = 0;
  uint64_t decisions = 0;
  uint64_t propagations = 0;

private:
  struct Watcher {
    int *clause;
    int blocker;
  };
  // Clause layout: [size, flags, activity-bits, lits...].
  static int &csize(int *c) { return c[0]; }
  static int *clits(int *c) { return c + 3; }
  static bool learnt(int *c) { return c[1] & 1; }
  static bool removed(int *c) { return c[1] & 2; }
  static float &cact(int *c) { return *reinterpret_cast<float *>(&c[2]); }

  int value(int lit) const {
    int8_t a = assigns_[lit >> 1];
    return (lit & 1) ? -a : a;
  }
  int level_of(int var) const { return level_[var]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  int *alloc_clause(const std::vector<int> &lits, bool is_learnt);
  void attach(int *c);
  void enqueue(int lit, int *reason);
  int *propagate();
  void analyze(int *confl, std::vector<int> &out, int &bt_level);
  bool lit_redundant(int lit);
  void analyze_final(int p);
  void cancel_until(int level);
  int pick_branch();
  Result search(int64_t nof_conflicts, const std::vector<int> &assumptions);
  void reduce_db();
  void bump_var(int v);
  void bump_clause(int *c);
  void decay();

  // Heap of variables ordered by activity.
  bool heap_less(int a, int b) const { return activity_[a] > activity_[b]; }
  void heap_insert(int v);
  void heap_up(int pos);
  void heap_down(int pos);
  int heap_pop();
  bool in_heap(int v) const { return heap_index_[v] >= 0; }

  bool ok_ = true;
  std::vector<int *> clauses_;
  std::vector<int *> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<int8_t> assigns_;
  std::vector<int8_t> polarity_;
  std::vector<int8_t> model_;
  std::vector<int> level_;
  std::vector<int *> reason_;
  std::vector<double> activity_;
  std::vector<int> heap_;
  std::vector<int> heap_index_;
  std::vector<char> seen_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  std::vector<int> conflict_;
  std::vector<int> analyze_stack_;
  std::vector<int> analyze_toclear_;
  size_t qhead_ = 0;
  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  uint64_t rng_;
};

} // namespace safesynth
