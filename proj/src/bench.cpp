#include "safesynth/bench.hpp"

#include <functional>
#include <stdexcept>

namespace safesynth {

uint32_t AigerBuilder::input(const std::string &name) {
  uint32_t lit = 2 * next_var_++;
  c_.inputs.push_back(lit);
  c_.input_names.push_back(name);
  return lit;
}

uint32_t AigerBuilder::latch(const std::string &name) {
  uint32_t lit = 2 * next_var_++;
  c_.latches.push_back({lit, 0});
  c_.latch_names.push_back(name);
  return lit;
}

void AigerBuilder::set_next(uint32_t latch_lit, uint32_t next) {
  for (auto &l : c_.latches)
    if (l.lit == latch_lit) {
      l.next = next;
      return;
    }
  throw std::invalid_argument("not a latch");
}

uint32_t AigerBuilder::and_(uint32_t a, uint32_t b) {
  if (a > b)
    std::swap(a, b);
  if (a == 0 || a == (b ^ 1u))
    return 0;
  if (a == 1)
    return b;
  if (a == b)
    return a;
  uint64_t key = (uint64_t(b) << 32) | a;
  if (auto it = strash_.find(key); it != strash_.end())
    return it->second;
  uint32_t lit = 2 * next_var_++;
  c_.ands.push_back({lit, b, a});
  strash_[key] = lit;
  return lit;
}

uint32_t AigerBuilder::xor_(uint32_t a, uint32_t b) {
  return or_(and_(a, b ^ 1u), and_(a ^ 1u, b));
}

void AigerBuilder::output(uint32_t lit, const std::string &name) {
  c_.outputs.push_back(lit);
  c_.output_names.push_back(name);
}

AigCircuit AigerBuilder::build() const {
  // Renumber so that inputs, latches and gates occupy consecutive ranges.
  std::unordered_map<uint32_t, uint32_t> nv{{0, 0}};
  uint32_t next = 1;
  for (uint32_t l : c_.inputs)
    nv[l >> 1] = next++;
  for (const auto &l : c_.latches)
    nv[l.lit >> 1] = next++;
  for (const auto &g : c_.ands)
    nv[g.lhs >> 1] = next++;
  auto tr = [&](uint32_t lit) { return 2 * nv.at(lit >> 1) + (lit & 1u); };
  AigCircuit out = c_;
  out.max_var = next - 1;
  for (auto &l : out.inputs)
    l = tr(l);
  for (auto &l : out.latches) {
    l.lit = tr(l.lit);
    l.next = tr(l.next);
  }
  for (auto &o : out.outputs)
    o = tr(o);
  for (auto &g : out.ands) {
    g.lhs = tr(g.lhs);
    g.rhs0 = tr(g.rhs0);
    g.rhs1 = tr(g.rhs1);
    if (g.rhs0 < g.rhs1)
      std::swap(g.rhs0, g.rhs1);
  }
  return out;
}

BenchFamily parse_family(const std::string &name) {
  if (name == "cnt")
    return BenchFamily::Cnt;
  if (name == "add")
    return BenchFamily::Add;
  if (name == "mult")
    return BenchFamily::Mult;
  if (name == "mv")
    return BenchFamily::Mv;
  if (name == "bs")
    return BenchFamily::Bs;
  throw std::invalid_argument("unknown benchmark family '" + name + "'");
}

const char *family_name(BenchFamily f) {
  switch (f) {
  case BenchFamily::Cnt:
    return "cnt";
  case BenchFamily::Add:
    return "add";
  case BenchFamily::Mult:
    return "mult";
  case BenchFamily::Mv:
    return "mv";
  case BenchFamily::Bs:
    return "bs";
  }
  return "?";
}

std::string bench_name(const BenchParams &p) {
  return std::string(family_name(p.family)) + "_" + std::to_string(p.k) +
         (p.unrealizable ? "_unreal" : "");
}

namespace {

std::string idx(const std::string &base, int k) { return base + std::to_string(k); }

// Ripple-carry increment of `bits` when `en` holds.
std::vector<uint32_t> increment(AigerBuilder &b, const std::vector<uint32_t> &bits, uint32_t en) {
  std::vector<uint32_t> out;
  uint32_t carry = en;
  for (uint32_t q : bits) {
    out.push_back(b.xor_(q, carry));
    carry = b.and_(q, carry);
  }
  return out;
}

uint32_t equals_const(AigerBuilder &b, const std::vector<uint32_t> &bits, uint64_t value) {
  uint32_t r = 1;
  for (size_t j = 0; j < bits.size(); ++j)
    r = b.and_(r, bits[j] ^ (((value >> j) & 1u) ? 0u : 1u));
  return r;
}

// k-bit counter, unsafe at its maximum. Enabled by `en`; `reset` forces 0.
void counter(AigerBuilder &b, int k, uint32_t en, const std::function<uint32_t(const std::vector<uint32_t> &)> &reset) {
  std::vector<uint32_t> q;
  for (int j = 0; j < k; ++j)
    q.push_back(b.latch(idx("q", j)));
  uint32_t rst = reset(q);
  auto inc = increment(b, q, en);
  for (int j = 0; j < k; ++j)
    b.set_next(q[j], b.and_(inc[j], rst ^ 1u));
  b.output(equals_const(b, q, (1ull << k) - 1), "err");
}

AigCircuit gen_cnt(int k, bool unreal) {
  AigerBuilder b;
  uint32_t inc = b.input("inc");
  uint32_t c = b.input(std::string(kControllablePrefix) + "reset");
  counter(b, k, inc, [&](const std::vector<uint32_t> &q) {
    if (unreal)
      return 0u;
    return b.and_(c, equals_const(b, q, (1ull << (k - 1)) - 1));
  });
  return b.build();
}

AigCircuit gen_mv(int k, bool unreal) {
  AigerBuilder b;
  std::vector<uint32_t> in, c;
  for (int j = 0; j + 1 < k; ++j)
    in.push_back(b.input(idx("inc", j)));
  for (int j = 0; j + 1 < k; ++j)
    c.push_back(b.input(std::string(kControllablePrefix) + idx("r", j)));
  uint32_t en = 0;
  for (uint32_t l : in)
    en = b.or_(en, l);
  counter(b, k, en, [&](const std::vector<uint32_t> &q) {
    uint32_t x = 0;
    for (uint32_t l : c)
      x = b.xor_(x, l);
    if (unreal)
      x = 0;
    return b.and_(q.back(), x);
  });
  return b.build();
}

// Controls must equal the k low bits of a + b; the mismatch is registered.
AigCircuit gen_add(int k, bool unreal) {
  AigerBuilder b;
  std::vector<uint32_t> a, bb, c;
  for (int j = 0; j < k; ++j)
    a.push_back(b.input(idx("a", j)));
  for (int j = 0; j < k; ++j)
    bb.push_back(b.input(idx("b", j)));
  for (int j = 0; j < k; ++j)
    c.push_back(b.input(std::string(kControllablePrefix) + idx("s", j)));
  uint32_t e = b.latch("bad");
  uint32_t carry = 0, mismatch = 0;
  for (int j = 0; j < k; ++j) {
    uint32_t s = b.xor_(b.xor_(a[j], bb[j]), carry);
    carry = b.or_(b.and_(a[j], bb[j]), b.and_(carry, b.xor_(a[j], bb[j])));
    uint32_t got = (unreal && j == 0) ? 0u : c[j];
    mismatch = b.or_(mismatch, b.xor_(s, got));
  }
  b.set_next(e, b.or_(e, mismatch));
  b.output(e, "err");
  return b.build();
}

// Controls must equal the 2k bits of a * b.
AigCircuit gen_mult(int k, bool unreal) {
  AigerBuilder b;
  std::vector<uint32_t> a, bb, c;
  for (int j = 0; j < k; ++j)
    a.push_back(b.input(idx("a", j)));
  for (int j = 0; j < k; ++j)
    bb.push_back(b.input(idx("b", j)));
  for (int j = 0; j < 2 * k; ++j)
    c.push_back(b.input(std::string(kControllablePrefix) + idx("p", j)));
  std::vector<uint32_t> acc(2 * k, 0);
  for (int r = 0; r < k; ++r) {
    uint32_t carry = 0;
    for (int j = 0; j < 2 * k; ++j) {
      uint32_t pp = (j >= r && j - r < k) ? b.and_(a[j - r], bb[r]) : 0u;
      uint32_t s = b.xor_(b.xor_(acc[j], pp), carry);
      carry = b.or_(b.and_(acc[j], pp), b.and_(carry, b.xor_(acc[j], pp)));
      acc[j] = s;
    }
  }
  uint32_t mismatch = 0;
  for (int j = 0; j < 2 * k; ++j) {
    uint32_t got = (unreal && j == 0) ? 0u : c[j];
    mismatch = b.or_(mismatch, b.xor_(acc[j], got));
  }
  b.output(mismatch, "err");
  return b.build();
}

// A k-bit register rotated left by the environment's amount unless the
// control disables shifting. Starts at 1 and must never hold 1 << (k-1).
AigCircuit gen_bs(int k, bool unreal) {
  int w = 0;
  while ((1 << w) < k)
    ++w;
  AigerBuilder b;
  std::vector<uint32_t> amt;
  for (int j = 0; j < w; ++j)
    amt.push_back(b.input(idx("sh", j)));
  uint32_t hold = b.input(std::string(kControllablePrefix) + "hold");
  std::vector<uint32_t> lat, r;
  for (int j = 0; j < k; ++j) {
    lat.push_back(b.latch(idx("r", j)));
    // Bit 0 is stored inverted so the all-zero reset state encodes value 1.
    r.push_back(j == 0 ? lat[j] ^ 1u : lat[j]);
  }
  std::vector<uint32_t> cur = r;
  for (int s = 0; s < w; ++s) {
    int d = 1 << s;
    std::vector<uint32_t> nxt(k);
    for (int j = 0; j < k; ++j)
      nxt[j] = b.mux(amt[s], cur[((j - d) % k + k) % k], cur[j]);
    cur = nxt;
  }
  uint32_t h = unreal ? 0u : hold;
  for (int j = 0; j < k; ++j) {
    uint32_t v = b.mux(h, r[j], cur[j]);
    b.set_next(lat[j], j == 0 ? v ^ 1u : v);
  }
  b.output(equals_const(b, r, 1ull << (k - 1)), "err");
  return b.build();
}

} // namespace

AigCircuit gen_benchmark_circuit(const BenchParams &p) {
  auto need = [&](int lo, int hi) {
    if (p.k < lo || p.k > hi)
      throw std::invalid_argument(std::string(family_name(p.family)) + " requires " +
                                  std::to_string(lo) + " <= k <= " + std::to_string(hi));
  };
  switch (p.family) {
  case BenchFamily::Cnt:
    need(2, 30);
    return gen_cnt(p.k, p.unrealizable);
  case BenchFamily::Mv:
    need(2, 28);
    return gen_mv(p.k, p.unrealizable);
  case BenchFamily::Add:
    need(1, 20);
    return gen_add(p.k, p.unrealizable);
  case BenchFamily::Mult:
    need(1, 16);
    return gen_mult(p.k, p.unrealizable);
  case BenchFamily::Bs:
    need(2, 128);
    return gen_bs(p.k, p.unrealizable);
  }
  throw std::invalid_argument("unknown family");
}

std::string gen_benchmark(const BenchParams &p) { return write_aag(gen_benchmark_circuit(p)); }

} // namespace safesynth
