#include "safesynth/aiger.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_set>

namespace safesynth {

namespace {

std::vector<std::string> split_lines(const std::string &text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

bool parse_uints(const std::string &line, std::vector<uint64_t> &out) {
  out.clear();
  std::istringstream is(line);
  std::string tok;
  while (is >> tok) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), ::isdigit) || tok.size() > 10)
      return false;
    out.push_back(std::stoull(tok));
  }
  return true;
}

[[noreturn]] void fail(ParseErrorKind k, const std::string &msg) { throw ParseError(k, msg); }

} // namespace

AigCircuit parse_aag_circuit(const std::string &text) {
  auto lines = split_lines(text);
  if (lines.empty())
    fail(ParseErrorKind::MalformedHeader, "empty input");
  std::istringstream hs(lines[0]);
  std::string magic;
  hs >> magic;
  if (magic == "aig")
    fail(ParseErrorKind::BinaryFormat, "binary AIGER is not supported, use the ASCII aag format");
  if (magic != "aag")
    fail(ParseErrorKind::MalformedHeader, "header must start with 'aag'");
  std::string rest;
  std::getline(hs, rest);
  std::vector<uint64_t> h;
  if (!parse_uints(rest, h) || h.size() < 5 || h.size() > 9)
    fail(ParseErrorKind::MalformedHeader, "header must be 'aag M I L O A'");
  for (size_t k = 5; k < h.size(); ++k)
    if (h[k] != 0)
      fail(ParseErrorKind::MalformedHeader, "bad-state, constraint, justice and fairness sections are not supported");
  uint64_t M = h[0], I = h[1], L = h[2], O = h[3], A = h[4];
  if (M > (1u << 28) || I + L + A > M)
    fail(ParseErrorKind::MalformedHeader, "inconsistent header counts");
  if (O != 1)
    fail(ParseErrorKind::MultipleOutputs, "exactly one output (the error signal) is required, found " +
                                              std::to_string(O));
  if (lines.size() < 1 + I + L + O + A)
    fail(ParseErrorKind::Syntax, "unexpected end of file");

  AigCircuit c;
  c.max_var = static_cast<uint32_t>(M);
  std::vector<char> defined(M + 1, 0);
  defined[0] = 1;
  auto define = [&](uint64_t lit, const char *what) {
    if (lit & 1u || lit < 2)
      fail(ParseErrorKind::Syntax, std::string(what) + " literal must be even and nonconstant");
    if ((lit >> 1) > M)
      fail(ParseErrorKind::DanglingLiteral, "literal " + std::to_string(lit) + " exceeds M");
    if (defined[lit >> 1])
      fail(ParseErrorKind::Syntax, "literal " + std::to_string(lit) + " defined twice");
    defined[lit >> 1] = 1;
  };

  size_t ln = 1;
  std::vector<uint64_t> f;
  for (uint64_t k = 0; k < I; ++k, ++ln) {
    if (!parse_uints(lines[ln], f) || f.size() != 1)
      fail(ParseErrorKind::Syntax, "bad input line " + std::to_string(ln + 1));
    define(f[0], "input");
    c.inputs.push_back(static_cast<uint32_t>(f[0]));
  }
  for (uint64_t k = 0; k < L; ++k, ++ln) {
    if (!parse_uints(lines[ln], f) || f.size() < 2 || f.size() > 3)
      fail(ParseErrorKind::Syntax, "bad latch line " + std::to_string(ln + 1));
    define(f[0], "latch");
    if (f.size() == 3 && f[2] != 0)
      fail(ParseErrorKind::NonzeroLatchInit, "latch " + std::to_string(f[0]) + " has a nonzero initial value");
    c.latches.push_back({static_cast<uint32_t>(f[0]), static_cast<uint32_t>(f[1])});
  }
  for (uint64_t k = 0; k < O; ++k, ++ln) {
    if (!parse_uints(lines[ln], f) || f.size() != 1)
      fail(ParseErrorKind::Syntax, "bad output line " + std::to_string(ln + 1));
    c.outputs.push_back(static_cast<uint32_t>(f[0]));
  }
  std::vector<AigCircuit::And> ands;
  for (uint64_t k = 0; k < A; ++k, ++ln) {
    if (!parse_uints(lines[ln], f) || f.size() != 3)
      fail(ParseErrorKind::Syntax, "bad and-gate line " + std::to_string(ln + 1));
    define(f[0], "gate");
    ands.push_back({static_cast<uint32_t>(f[0]), static_cast<uint32_t>(f[1]), static_cast<uint32_t>(f[2])});
  }

  auto check_ref = [&](uint32_t lit) {
    if ((lit >> 1) > M || !defined[lit >> 1])
      fail(ParseErrorKind::DanglingLiteral, "literal " + std::to_string(lit) + " is never defined");
  };
  for (auto &l : c.latches)
    check_ref(l.next);
  for (uint32_t o : c.outputs)
    check_ref(o);
  for (auto &g : ands) {
    check_ref(g.rhs0);
    check_ref(g.rhs1);
  }

  // Topological order of the gates; cycles are rejected.
  std::unordered_map<uint32_t, size_t> gate_of;
  for (size_t k = 0; k < ands.size(); ++k)
    gate_of[ands[k].lhs >> 1] = k;
  std::vector<int> state(ands.size(), 0);
  for (size_t root = 0; root < ands.size(); ++root) {
    if (state[root])
      continue;
    std::vector<std::pair<size_t, int>> stack{{root, 0}};
    while (!stack.empty()) {
      auto &[g, phase] = stack.back();
      if (phase == 0) {
        state[g] = 1;
        phase = 1;
        for (uint32_t in : {ands[g].rhs0, ands[g].rhs1}) {
          auto it = gate_of.find(in >> 1);
          if (it == gate_of.end())
            continue;
          if (state[it->second] == 1)
            fail(ParseErrorKind::Syntax, "combinational cycle through gate " + std::to_string(ands[g].lhs));
          if (state[it->second] == 0)
            stack.push_back({it->second, 0});
        }
      } else {
        state[g] = 2;
        c.ands.push_back(ands[g]);
        stack.pop_back();
      }
    }
  }

  c.input_names.assign(I, "");
  c.latch_names.assign(L, "");
  c.output_names.assign(O, "");
  for (; ln < lines.size(); ++ln) {
    const std::string &s = lines[ln];
    if (s.empty())
      continue;
    if (s[0] == 'c')
      break;
    char kind = s[0];
    size_t sp = s.find(' ');
    if ((kind != 'i' && kind != 'l' && kind != 'o' && kind != 'b') || sp == std::string::npos)
      fail(ParseErrorKind::Syntax, "bad symbol line " + std::to_string(ln + 1));
    std::vector<uint64_t> idx;
    if (!parse_uints(s.substr(1, sp - 1), idx) || idx.size() != 1)
      fail(ParseErrorKind::Syntax, "bad symbol index on line " + std::to_string(ln + 1));
    std::string name = s.substr(sp + 1);
    auto &table = kind == 'i' ? c.input_names : kind == 'l' ? c.latch_names : c.output_names;
    if (idx[0] >= table.size())
      fail(ParseErrorKind::Syntax, "symbol index out of range on line " + std::to_string(ln + 1));
    table[idx[0]] = name;
  }
  return c;
}

VarMap SafetySpec::next_map() const {
  VarMap m;
  for (size_t k = 0; k < x.size(); ++k)
    m[x[k]] = xn[k];
  return m;
}

SafetySpec spec_from_circuit(AigCircuit circuit) {
  SafetySpec s;
  auto aig = std::make_shared<Aig>();
  std::unordered_map<uint32_t, Lit> lit_of; // AIGER var -> literal
  lit_of[0] = Lit::False();
  for (size_t k = 0; k < circuit.inputs.size(); ++k) {
    const std::string &name = circuit.input_names[k];
    bool ctrl = name.rfind(kControllablePrefix, 0) == 0;
    std::string nm = name.empty() ? "i" + std::to_string(k) : name;
    Var v = new_var(ctrl ? VarKind::Control : VarKind::Input, nm);
    (ctrl ? s.c : s.i).push_back(v);
    lit_of[circuit.inputs[k] >> 1] = pos(v);
  }
  for (size_t k = 0; k < circuit.latches.size(); ++k) {
    const std::string &name = circuit.latch_names[k];
    Var v = new_var(VarKind::State, name.empty() ? "l" + std::to_string(k) : name);
    s.x.push_back(v);
    lit_of[circuit.latches[k].lit >> 1] = pos(v);
  }
  auto get = [&](uint32_t alit) { return lit_of.at(alit >> 1) ^ static_cast<bool>(alit & 1u); };
  for (const auto &g : circuit.ands)
    lit_of[g.lhs >> 1] = aig->make_and(get(g.rhs0), get(g.rhs1));

  Var err = new_var(VarKind::State, "__error_latch");
  s.x.push_back(err);
  for (const auto &l : circuit.latches)
    s.next_fn.push_back(get(l.next));
  s.error_out = get(circuit.outputs[0]);
  s.next_fn.push_back(aig->make_or(pos(err), s.error_out));
  for (Var v : s.x)
    s.xn.push_back(new_var(VarKind::NextState, VarPool::global().name(v) + "'"));

  std::vector<Lit> init;
  for (Var v : s.x)
    init.push_back(neg(v));
  s.init = Cube(init);
  s.safe = CnfFormula{Clause{neg(err)}};
  s.circuit = aig;
  s.source = std::move(circuit);
  s.trans = encode_transition(s);
  s.trans_aux = aig->cone(s.next_fn);
  return s;
}

SafetySpec parse_aag(const std::string &text) { return spec_from_circuit(parse_aag_circuit(text)); }

CnfFormula encode_transition(const SafetySpec &spec) {
  CnfFormula out;
  AigEncoder enc(*spec.circuit);
  for (size_t k = 0; k < spec.x.size(); ++k) {
    Lit f = spec.next_fn[k];
    Lit xn = pos(spec.xn[k]);
    enc.define(f, out);
    if (auto c = Clause::try_make({~xn, f}))
      out.add_clause(*c);
    if (auto c = Clause::try_make({xn, ~f}))
      out.add_clause(*c);
  }
  return out;
}

std::vector<Lit> instantiate_transition(const SafetySpec &spec, Aig &dst,
                                        std::unordered_map<uint32_t, Lit> leaves) {
  std::vector<Lit> out;
  out.reserve(spec.next_fn.size());
  for (Lit f : spec.next_fn)
    out.push_back(dst.copy_from(*spec.circuit, f, leaves));
  return out;
}

CnfFormula transition_copy(const SafetySpec &spec, std::span<const Var> x, std::span<const Var> i,
                           std::span<const Var> c, std::span<const Var> xn) {
  std::unordered_map<uint32_t, Lit> leaves;
  for (size_t k = 0; k < x.size(); ++k)
    leaves[spec.x[k].id] = pos(x[k]);
  for (size_t k = 0; k < i.size(); ++k)
    leaves[spec.i[k].id] = pos(i[k]);
  for (size_t k = 0; k < c.size(); ++k)
    leaves[spec.c[k].id] = pos(c[k]);
  Aig aig;
  auto next = instantiate_transition(spec, aig, std::move(leaves));
  CnfFormula out;
  AigEncoder enc(aig);
  for (size_t k = 0; k < next.size(); ++k) {
    enc.define(next[k], out);
    if (auto cl = Clause::try_make({neg(xn[k]), next[k]}))
      out.add_clause(*cl);
    if (auto cl = Clause::try_make({pos(xn[k]), ~next[k]}))
      out.add_clause(*cl);
  }
  return out;
}

Expansion expand_circuit(const SafetySpec &spec, std::span<const Var> over,
                         std::span<const Var> freshen, size_t max_gates) {
  std::unordered_set<Var> allowed(spec.i.begin(), spec.i.end());
  allowed.insert(spec.c.begin(), spec.c.end());
  for (Var v : over)
    if (!allowed.count(v))
      throw std::invalid_argument("expansion is only defined over inputs and controls");
  if (over.size() > 20)
    throw BudgetExceeded("expansion over too many variables");

  Expansion ex;
  ex.aig = std::make_shared<Aig>();
  std::map<std::vector<Lit>, size_t> seen;
  for (uint64_t bits = 0; bits < (1ull << over.size()); ++bits) {
    std::unordered_map<uint32_t, Lit> leaves;
    std::vector<Lit> assignment;
    for (size_t k = 0; k < over.size(); ++k) {
      bool b = (bits >> k) & 1u;
      leaves[over[k].id] = b ? Lit::True() : Lit::False();
      assignment.push_back(Lit::make(over[k], !b));
    }
    LitMap fresh;
    for (Var v : freshen) {
      Lit f = pos(new_var(VarPool::global().kind(v), VarPool::global().name(v) + "#"));
      leaves[v.id] = f;
      fresh[v] = f;
    }
    std::vector<Lit> next = instantiate_transition(spec, *ex.aig, std::move(leaves));
    if (ex.aig->size() > max_gates)
      throw BudgetExceeded("expansion gate budget exceeded");
    auto [it, inserted] = seen.try_emplace(next, ex.renamings.size());
    if (inserted) {
      ex.renamings.push_back(next);
      ex.represents.emplace_back();
      ex.fresh.push_back(std::move(fresh));
    }
    ex.represents[it->second].push_back(Cube(assignment));
  }
  return ex;
}

Var choose_expansion_input(const SafetySpec &spec) {
  const Aig &aig = *spec.circuit;
  Var best;
  size_t best_cost = SIZE_MAX;
  auto cone = aig.cone(spec.next_fn);
  for (Var in : spec.i) {
    // Gates depending on `in` are the ones duplicated by expansion.
    std::unordered_set<uint32_t> dep{in.id};
    size_t cost = 0;
    for (Var g : cone) {
      const auto &gt = aig.gate(g);
      if (dep.count(gt.a.var().id) || dep.count(gt.b.var().id)) {
        dep.insert(g.id);
        ++cost;
      }
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = in;
    }
  }
  return best;
}

namespace {

void write_header_and_body(std::ostringstream &os, const AigCircuit &c) {
  os << "aag " << c.max_var << " " << c.inputs.size() << " " << c.latches.size() << " "
     << c.outputs.size() << " " << c.ands.size() << "\n";
  for (uint32_t in : c.inputs)
    os << in << "\n";
  for (const auto &l : c.latches)
    os << l.lit << " " << l.next << "\n";
  for (uint32_t o : c.outputs)
    os << o << "\n";
  for (const auto &g : c.ands)
    os << g.lhs << " " << g.rhs0 << " " << g.rhs1 << "\n";
  for (size_t k = 0; k < c.input_names.size(); ++k)
    if (!c.input_names[k].empty())
      os << "i" << k << " " << c.input_names[k] << "\n";
  for (size_t k = 0; k < c.latch_names.size(); ++k)
    if (!c.latch_names[k].empty())
      os << "l" << k << " " << c.latch_names[k] << "\n";
  for (size_t k = 0; k < c.output_names.size(); ++k)
    if (!c.output_names[k].empty())
      os << "o" << k << " " << c.output_names[k] << "\n";
}

} // namespace

std::string write_aag(const AigCircuit &circuit) {
  std::ostringstream os;
  write_header_and_body(os, circuit);
  return os.str();
}

std::string write_aag(const SafetySpec &spec, const ControllerCircuit &ctrl) {
  const AigCircuit &src = spec.source;
  // Controls by source input position.
  std::unordered_set<uint32_t> control_ids;
  for (Var v : spec.c)
    control_ids.insert(v.id);
  std::unordered_map<uint32_t, Var> input_var; // AIGER var -> spec var
  {
    size_t ki = 0, kc = 0;
    for (size_t k = 0; k < src.inputs.size(); ++k) {
      bool ctrl_in = src.input_names[k].rfind(kControllablePrefix, 0) == 0;
      input_var[src.inputs[k] >> 1] = ctrl_in ? spec.c[kc++] : spec.i[ki++];
    }
  }
  for (Var c : spec.c) {
    bool found = std::any_of(ctrl.outputs.begin(), ctrl.outputs.end(),
                             [&](const auto &o) { return o.first == c; });
    if (!found)
      throw std::invalid_argument("controller does not define " + VarPool::global().name(c));
  }

  AigCircuit out;
  std::unordered_map<uint32_t, uint32_t> new_lit; // spec Var id -> new AIGER literal
  uint32_t next_var = 1;
  std::unordered_map<uint32_t, uint32_t> old_to_new; // old AIGER var -> new literal
  old_to_new[0] = 0;
  for (size_t k = 0; k < src.inputs.size(); ++k) {
    Var v = input_var.at(src.inputs[k] >> 1);
    if (control_ids.count(v.id))
      continue;
    uint32_t lit = 2 * next_var++;
    out.inputs.push_back(lit);
    out.input_names.push_back(src.input_names[k]);
    new_lit[v.id] = lit;
    old_to_new[src.inputs[k] >> 1] = lit;
  }
  for (size_t k = 0; k < src.latches.size(); ++k) {
    uint32_t lit = 2 * next_var++;
    out.latches.push_back({lit, 0});
    out.latch_names.push_back(src.latch_names[k]);
    new_lit[spec.x[k].id] = lit;
    old_to_new[src.latches[k].lit >> 1] = lit;
  }

  // Controller gates; the error latch reads as 0 in every reachable state.
  Aig tmp;
  std::unordered_map<uint32_t, Lit> leaves{{spec.err_latch().id, Lit::False()}};
  std::vector<std::pair<Var, Lit>> outs;
  for (const auto &[c, l] : ctrl.outputs)
    outs.push_back({c, tmp.copy_from(ctrl.aig, l, leaves)});
  std::vector<Lit> roots;
  for (auto &o : outs)
    roots.push_back(o.second);
  for (Var v : tmp.support(roots))
    if (!new_lit.count(v.id))
      throw std::invalid_argument("controller references undefined variable " +
                                  VarPool::global().name(v));
  auto tr = [&](Lit l) -> uint32_t {
    if (l.is_const())
      return l.code;
    return new_lit.at(l.var().id) ^ (l.negated() ? 1u : 0u);
  };
  for (Var g : tmp.cone(roots)) {
    const auto &gt = tmp.gate(g);
    uint32_t lit = 2 * next_var++;
    out.ands.push_back({lit, tr(gt.a), tr(gt.b)});
    new_lit[g.id] = lit;
  }
  for (auto &[c, l] : outs) {
    for (size_t k = 0; k < src.inputs.size(); ++k)
      if (input_var.at(src.inputs[k] >> 1) == c)
        old_to_new[src.inputs[k] >> 1] = tr(l);
  }
  auto tro = [&](uint32_t alit) { return old_to_new.at(alit >> 1) ^ (alit & 1u); };
  for (const auto &g : src.ands) {
    uint32_t lit = 2 * next_var++;
    out.ands.push_back({lit, tro(g.rhs0), tro(g.rhs1)});
    old_to_new[g.lhs >> 1] = lit;
  }
  for (size_t k = 0; k < src.latches.size(); ++k)
    out.latches[k].next = tro(src.latches[k].next);
  for (uint32_t o : src.outputs)
    out.outputs.push_back(tro(o));
  out.output_names = src.output_names;
  out.max_var = next_var - 1;
  return write_aag(out);
}

Lit ControllerCircuit::output(Var control) const {
  for (const auto &[c, l] : outputs)
    if (c == control)
      return l;
  throw std::out_of_range("controller has no output for " + VarPool::global().name(control));
}

size_t ControllerCircuit::gate_count() const {
  std::vector<Lit> roots;
  for (const auto &o : outputs)
    roots.push_back(o.second);
  return aig.cone(roots).size();
}

std::vector<Var> ControllerCircuit::support() const {
  std::vector<Lit> roots;
  for (const auto &o : outputs)
    roots.push_back(o.second);
  return aig.support(roots);
}

} // namespace safesynth
