#pragma once

#include "safesynth/aiger.hpp"

#include <string>

namespace safesynth {

enum class BenchFamily { Cnt, Add, Mult, Mv, Bs };

struct BenchParams {
  BenchFamily family = BenchFamily::Cnt;
  int k = 2;
  bool unrealizable = false;
};

/// Parses names like "cnt", "add" (case-sensitive).
BenchFamily parse_family(const std::string &name);
const char *family_name(BenchFamily f);
/// Canonical instance name, e.g. "cnt_4" or "cnt_3_unreal".
std::string bench_name(const BenchParams &p);

AigCircuit gen_benchmark_circuit(const BenchParams &p);
/// ASCII AIGER text. Throws std::invalid_argument for out-of-range k.
std::string gen_benchmark(const BenchParams &p);

/// Incremental builder for AIGER circuits with structural hashing.
class AigerBuilder {
public:
  uint32_t input(const std::string &name);
  uint32_t latch(const std::string &name);
  void set_next(uint32_t latch_lit, uint32_t next);
  uint32_t and_(uint32_t a, uint32_t b);
  uint32_t or_(uint32_t a, uint32_t b) { return and_(a ^ 1u, b ^ 1u) ^ 1u; }
  uint32_t xor_(uint32_t a, uint32_t b);
  uint32_t mux(uint32_t s, uint32_t t, uint32_t e) { return or_(and_(s, t), and_(s ^ 1u, e)); }
  void output(uint32_t lit, const std::string &name);
  AigCircuit build() const;

private:
  uint32_t next_var_ = 1;
  AigCircuit c_;
  std::unordered_map<uint64_t, uint32_t> strash_;
};

} // namespace safesynth
