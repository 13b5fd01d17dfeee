#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace safesynth {

enum class VarKind : uint8_t {
  State,
  Input,
  Control,
  NextState,
  Auxiliary,
  TemplateParam,
  Activation,
};

const char *kind_name(VarKind k);

/// Index into the global variable table. Id 0 is reserved for the constant.
struct Var {
  uint32_t id = 0;
  auto operator<=>(const Var &) const = default;
  bool valid() const { return id != 0; }
};

/// code = 2 * var + negated. Code 0 is constant false, code 1 constant true.
struct Lit {
  uint32_t code = 0;

  static constexpr Lit make(Var v, bool neg = false) {
    return Lit{(v.id << 1) | (neg ? 1u : 0u)};
  }
  static constexpr Lit False() { return Lit{0}; }
  static constexpr Lit True() { return Lit{1}; }

  Var var() const { return Var{code >> 1}; }
  bool negated() const { return code & 1u; }
  bool is_const() const { return code < 2; }
  Lit operator~() const { return Lit{code ^ 1u}; }
  Lit operator^(bool flip) const { return Lit{code ^ (flip ? 1u : 0u)}; }
  auto operator<=>(const Lit &) const = default;
};

inline Lit pos(Var v) { return Lit::make(v, false); }
inline Lit neg(Var v) { return Lit::make(v, true); }

/// Process-wide variable table. Allocation is thread safe.
class VarPool {
public:
  static VarPool &global();

  Var make(VarKind kind, std::string name = {});
  std::vector<Var> make_n(VarKind kind, size_t n, const std::string &prefix = {});
  VarKind kind(Var v) const;
  std::string name(Var v) const;
  size_t size() const;

private:
  VarPool();
  mutable std::mutex mu_;
  std::vector<VarKind> kinds_;
  std::unordered_map<uint32_t, std::string> names_;
};

inline Var new_var(VarKind kind, std::string name = {}) {
  return VarPool::global().make(kind, std::move(name));
}

std::string to_string(Lit l);

} // namespace safesynth

template <> struct std::hash<safesynth::Var> {
  size_t operator()(safesynth::Var v) const noexcept { return std::hash<uint32_t>{}(v.id); }
};
template <> struct std::hash<safesynth::Lit> {
  size_t operator()(safesynth::Lit l) const noexcept { return std::hash<uint32_t>{}(l.code); }
};
