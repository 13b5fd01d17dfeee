#include "safesynth/var.hpp"

#include <stdexcept>

namespace safesynth {

const char *kind_name(VarKind k) {
  switch (k) {
  case VarKind::State: return "state";
  case VarKind::Input: return "input";
  case VarKind::Control: return "control";
  case VarKind::NextState: return "next";
  case VarKind::Auxiliary: return "aux";
  case VarKind::TemplateParam: return "param";
  case VarKind::Activation: return "act";
  }
  return "?";
}

VarPool::VarPool() { kinds_.push_back(VarKind::Auxiliary); }

VarPool &VarPool::global() {
  static VarPool pool;
  return pool;
}

Var VarPool::make(VarKind kind, std::string name) {
  std::lock_guard lock(mu_);
  Var v{static_cast<uint32_t>(kinds_.size())};
  if (v.id >= (1u << 30))
    throw std::length_error("variable table exhausted");
  kinds_.push_back(kind);
  if (!name.empty())
    names_.emplace(v.id, std::move(name));
  return v;
}

std::vector<Var> VarPool::make_n(VarKind kind, size_t n, const std::string &prefix) {
  std::vector<Var> out;
  out.reserve(n);
  for (size_t k = 0; k < n; ++k)
    out.push_back(make(kind, prefix.empty() ? std::string() : prefix + std::to_string(k)));
  return out;
}

VarKind VarPool::kind(Var v) const {
  std::lock_guard lock(mu_);
  if (v.id == 0 || v.id >= kinds_.size())
    throw std::out_of_range("unknown variable");
  return kinds_[v.id];
}

std::string VarPool::name(Var v) const {
  std::lock_guard lock(mu_);
  auto it = names_.find(v.id);
  if (it != names_.end())
    return it->second;
  return "v" + std::to_string(v.id);
}

size_t VarPool::size() const {
  std::lock_guard lock(mu_);
  return kinds_.size();
}

std::string to_string(Lit l) {
  if (l == Lit::False())
    return "0";
  if (l == Lit::True())
    return "1";
  return (l.negated() ? "-" : "") + std::to_string(l.var().id);
}

} // namespace safesynth
