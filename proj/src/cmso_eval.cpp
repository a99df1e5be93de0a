#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <unordered_map>

#include "decomp/cmso.hpp"

namespace decomp::cmso {

namespace {

enum class Op : std::uint8_t {
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  ExistsE,
  ForallE,
  ExistsS,
  ForallS,
  Rel1,
  Rel2,
  RelN,
  Pred1,
  PredN,
  Call,
  Children,
  In,
  Subseteq,
  ElemEq,
  SetEq,
  Parity,
  // terms
  ElemRef,
  SetSlot,
  SetConst,
  RelConst,
  Singleton,
  Union,
  Inter,
  Minus,
  Complement,
  Leafset1,
  Leafset2,
};

struct CMacro;
struct Ir;

struct Guard {
  enum Kind { Row, Col, Unary, InSet, EqElem, Members, SubsetsOf, Exact, ChildrenOf } kind;
  int rel = -1;  // symbol table indices
  int pred = -1;
  int slot = -1;
  std::shared_ptr<Ir> term;
};

struct Ir {
  Op op = Op::True;
  int slot = -1;
  int rel = -1;
  int pred = -1;
  CMacro* macro = nullptr;
  Subset constant;
  std::vector<int> eslots;
  std::vector<Ir> kids;
  std::vector<Guard> guards;
};

struct Frame {
  std::vector<std::uint32_t> e;
  std::vector<Subset> s;
};

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& k) const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (auto w : k) {
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

struct CMacro {
  Ir body;
  int ne = 0, ns = 0;
  std::vector<int> param_slot;
  std::vector<bool> param_set;
  std::unordered_map<std::vector<std::uint64_t>, bool, KeyHash> memo;
};

using Subst = std::map<std::string, NodePtr>;

struct Scope {
  std::map<std::string, int> slot;
  int* ne;
  int* ns;
};

NodePtr substitute(const NodePtr& n, const Subst& sub) {
  if (sub.empty()) return n;
  if (n->kind == Kind::Var) {
    auto it = sub.find(n->name);
    return it == sub.end() ? n : it->second;
  }
  if (n->kind == Kind::Exists || n->kind == Kind::Forall) {
    if (sub.count(n->name)) {
      Subst inner = sub;
      inner.erase(n->name);
      auto c = std::make_shared<Node>(*n);
      c->kids[0] = substitute(n->kids[0], inner);
      return c;
    }
  }
  if (n->kids.empty()) return n;
  auto c = std::make_shared<Node>(*n);
  for (auto& k : c->kids) k = substitute(k, sub);
  return c;
}

void free_names(const NodePtr& n, std::set<std::string>& bound, std::set<std::string>& out) {
  if (n->kind == Kind::Var) {
    if (!bound.count(n->name)) out.insert(n->name);
    return;
  }
  if (n->kind == Kind::Exists || n->kind == Kind::Forall) {
    bool added = bound.insert(n->name).second;
    free_names(n->kids[0], bound, out);
    if (added) bound.erase(n->name);
    return;
  }
  for (auto& k : n->kids) free_names(k, bound, out);
}

bool mentions_any(const NodePtr& n, const std::set<std::string>& names) {
  std::set<std::string> bound, fr;
  free_names(n, bound, fr);
  for (auto& x : fr)
    if (names.count(x)) return true;
  return false;
}

bool is_var(const NodePtr& n, const std::string& name) {
  return n->kind == Kind::Var && n->name == name;
}

}  // namespace

struct Evaluator::Impl {
  struct Top {
    Ir body;
    int ne = 0, ns = 0;
    Scope scope;
    Frame frame;
  };

  const ExtRelStruct* a;
  Guards guards;
  std::size_t n;
  Subset full, none;
  std::map<const Macro*, std::unique_ptr<CMacro>> macros;
  const Library* lib = nullptr;
  std::set<std::string> declared_free;

  // builtin caches
  bool leaves_ready = false;
  Subset leaves1;
  bool tleaves_ready = false;
  Subset leaves2;
  std::unordered_map<std::uint64_t, Subset> side_cache;
  std::vector<std::optional<Subset>> child_cache;

  // Compiled code refers to symbols through these tables, so it survives a
  // rebind to a structure with the same signature.
  std::vector<std::string> rel_names, pred_names;
  std::vector<const Relation*> rels;
  std::vector<const SetPredicate*> preds;
  std::map<NodePtr, std::unique_ptr<Top>> sentences;

  Impl(const ExtRelStruct& s, const Guards& g)
      : a(&s), guards(g), n(s.universe()), full(Subset::full(s.universe())), none(s.universe()),
        signature(signature_of(s)) {}

  int rel_id(const std::string& name) {
    for (std::size_t i = 0; i < rel_names.size(); ++i)
      if (rel_names[i] == name) return static_cast<int>(i);
    rel_names.push_back(name);
    rels.push_back(a->relation(name));
    return static_cast<int>(rels.size() - 1);
  }
  int pred_id(const std::string& name) {
    for (std::size_t i = 0; i < pred_names.size(); ++i)
      if (pred_names[i] == name) return static_cast<int>(i);
    pred_names.push_back(name);
    preds.push_back(a->predicate(name));
    return static_cast<int>(preds.size() - 1);
  }

  using Signature = std::vector<std::pair<std::string, std::size_t>>;
  Signature signature;

  static Signature signature_of(const ExtRelStruct& x) {
    Signature sig{{"", x.universe()}};
    for (auto& [name, r] : x.relations()) sig.emplace_back(name, r.arity());
    for (auto& [name, p] : x.predicates()) sig.emplace_back("$" + name, p.arity());
    return sig;
  }

  bool rebind(const ExtRelStruct& s) {
    if (signature_of(s) != signature) return false;
    a = &s;
    for (std::size_t i = 0; i < rels.size(); ++i) rels[i] = s.relation(rel_names[i]);
    for (std::size_t i = 0; i < preds.size(); ++i) preds[i] = s.predicate(pred_names[i]);
    for (auto& [m, cm] : macros) cm->memo.clear();
    leaves_ready = tleaves_ready = false;
    side_cache.clear();
    child_cache.clear();
    return true;
  }

  const Relation& need_relation(const std::string& r, std::size_t arity, const char* why) {
    const Relation* rel = a->relation(r);
    if (!rel || rel->arity() != arity)
      throw Error(ErrorKind::MissingSymbol, std::string(why) + " needs relation '" + r + "' of arity " +
                                                std::to_string(arity));
    return *rel;
  }

  // ---- builtins ----

  const Subset& rooted_leaves() {
    if (!leaves_ready) {
      const Relation& anc = need_relation("ancestor", 2, "leafset(t)");
      leaves1 = Subset(n);
      for (std::size_t z = 0; z < n; ++z) {
        Subset r = anc.row(static_cast<std::uint32_t>(z));
        r.reset(z);
        if (r.empty()) leaves1.set(z);
      }
      leaves_ready = true;
    }
    return leaves1;
  }

  Subset leafset1(std::uint32_t t) {
    const Relation& anc = need_relation("ancestor", 2, "leafset(t)");
    return anc.row(t) & rooted_leaves();
  }

  Subset leafset2(std::uint32_t t, std::uint32_t s) {
    const Relation& te = need_relation("t-edge", 2, "leafset(t,s)");
    if (!tleaves_ready) {
      leaves2 = Subset(n);
      for (std::size_t z = 0; z < n; ++z)
        if (te.row(static_cast<std::uint32_t>(z)).count() <= 1) leaves2.set(z);
      tleaves_ready = true;
    }
    std::uint64_t key = (std::uint64_t{t} << 32) | s;
    auto it = side_cache.find(key);
    if (it != side_cache.end()) return it->second;
    Subset seen(n);
    if (t != s) {
      std::vector<std::uint32_t> stack{s};
      seen.set(s);
      while (!stack.empty()) {
        std::uint32_t v = stack.back();
        stack.pop_back();
        te.row(v).for_each([&](std::size_t w) {
          if (w != t && !seen.test(w)) {
            seen.set(w);
            stack.push_back(static_cast<std::uint32_t>(w));
          }
        });
      }
    }
    Subset out = seen & leaves2;
    side_cache.emplace(key, out);
    return out;
  }

  const Subset& children_of(std::uint32_t y) {
    const Relation& anc = need_relation("ancestor", 2, "children(Y,y)");
    if (child_cache.empty()) child_cache.resize(n);
    auto& c = child_cache[y];
    if (!c) {
      Subset below = anc.row(y);
      below.reset(y);
      Subset out(n);
      below.for_each([&](std::size_t x) {
        Subset between = anc.col(static_cast<std::uint32_t>(x)) & below;
        between.reset(x);
        if (between.empty()) out.set(x);
      });
      c = out;
    }
    return *c;
  }

  // ---- compilation ----

  CMacro* compile_macro(const Macro* m) {
    auto it = macros.find(m);
    if (it != macros.end()) return it->second.get();
    auto cm = std::make_unique<CMacro>();
    Scope sc{{}, &cm->ne, &cm->ns};
    for (auto& p : m->params) {
      bool set = is_set_name(p);
      int slot = set ? cm->ns++ : cm->ne++;
      sc.slot[p] = slot;
      cm->param_slot.push_back(slot);
      cm->param_set.push_back(set);
    }
    CMacro* raw = cm.get();
    macros.emplace(m, std::move(cm));
    raw->body = compile(m->body, sc);
    return raw;
  }

  int elem_slot(const NodePtr& v, const Scope& sc) {
    auto it = sc.slot.find(v->name);
    if (it == sc.slot.end())
      throw Error(ErrorKind::UnboundVariable, "element variable '" + v->name + "' is not bound");
    return it->second;
  }

  Ir elem_ref(const NodePtr& v, const Scope& sc) {
    Ir r;
    r.op = Op::ElemRef;
    r.slot = elem_slot(v, sc);
    return r;
  }

  Ir constant(Subset s) {
    Ir r;
    r.op = Op::SetConst;
    r.constant = std::move(s);
    return r;
  }

  Ir rel_const(const std::string& name) {
    Ir r;
    r.op = Op::RelConst;
    r.rel = rel_id(name);
    return r;
  }

  Ir compile_set(const NodePtr& t, const Scope& sc) {
    Ir r;
    switch (t->kind) {
      case Kind::Var: {
        auto it = sc.slot.find(t->name);
        if (it != sc.slot.end()) {
          r.op = Op::SetSlot;
          r.slot = it->second;
          return r;
        }
        const Relation* rel = a->relation(t->name);
        if (rel && rel->arity() == 1) return rel_const(t->name);
        if (declared_free.count(t->name))
          throw Error(ErrorKind::UnboundVariable, "set variable '" + t->name + "' is not bound");
        throw Error(ErrorKind::MissingSymbol, "no set variable or unary relation '" + t->name + "'");
      }
      case Kind::Const: {
        const Relation* rel = a->relation(t->name);
        if (!rel || rel->arity() != 1)
          throw Error(ErrorKind::MissingSymbol, "no unary relation '" + t->name + "'");
        return rel_const(t->name);
      }
      case Kind::Universe: return constant(full);
      case Kind::Empty: return constant(none);
      case Kind::Singleton:
        r.op = Op::Singleton;
        for (auto& k : t->kids) r.eslots.push_back(elem_slot(k, sc));
        return r;
      case Kind::Union:
      case Kind::Inter:
      case Kind::Minus:
        r.op = t->kind == Kind::Union ? Op::Union : t->kind == Kind::Inter ? Op::Inter : Op::Minus;
        r.kids.push_back(compile_set(t->kids[0], sc));
        r.kids.push_back(compile_set(t->kids[1], sc));
        return r;
      case Kind::Complement:
        r.op = Op::Complement;
        r.kids.push_back(compile_set(t->kids[0], sc));
        return r;
      case Kind::Leafset:
        if (t->kids.size() == 1) {
          need_relation("ancestor", 2, "leafset(t)");
          r.op = Op::Leafset1;
        } else {
          need_relation("t-edge", 2, "leafset(t,s)");
          r.op = Op::Leafset2;
        }
        for (auto& k : t->kids) r.eslots.push_back(elem_slot(k, sc));
        return r;
      default:
        throw Error(ErrorKind::SyntaxError, "formula used as a set term");
    }
  }

  Ir compile(const NodePtr& f, const Scope& sc) {
    Ir r;
    switch (f->kind) {
      case Kind::True: r.op = Op::True; return r;
      case Kind::False: r.op = Op::False; return r;
      case Kind::Not:
        r.op = Op::Not;
        r.kids.push_back(compile(f->kids[0], sc));
        return r;
      case Kind::And:
      case Kind::Or:
      case Kind::Implies:
      case Kind::Iff:
        r.op = f->kind == Kind::And ? Op::And
               : f->kind == Kind::Or ? Op::Or
               : f->kind == Kind::Implies ? Op::Implies
                                          : Op::Iff;
        r.kids.push_back(compile(f->kids[0], sc));
        r.kids.push_back(compile(f->kids[1], sc));
        return r;
      case Kind::Exists:
      case Kind::Forall: {
        bool set = is_set_name(f->name);
        bool ex = f->kind == Kind::Exists;
        r.op = set ? (ex ? Op::ExistsS : Op::ForallS) : (ex ? Op::ExistsE : Op::ForallE);
        const NodePtr& body = f->kids[0];
        NodePtr guard_part = body;
        if (!ex) guard_part = body->kind == Kind::Implies ? body->kids[0] : nullptr;
        if (guard_part) r.guards = find_guards(guard_part, f->name, {f->name}, sc);
        Scope inner = sc;
        r.slot = set ? (*sc.ns)++ : (*sc.ne)++;
        inner.slot[f->name] = r.slot;
        r.kids.push_back(compile(body, inner));
        return r;
      }
      case Kind::Apply: return compile_apply(f, sc);
      case Kind::In:
        r.op = Op::In;
        r.slot = elem_slot(f->kids[0], sc);
        r.kids.push_back(compile_set(f->kids[1], sc));
        return r;
      case Kind::Subseteq:
        r.op = Op::Subseteq;
        r.kids.push_back(compile_set(f->kids[0], sc));
        r.kids.push_back(compile_set(f->kids[1], sc));
        return r;
      case Kind::Equal:
        if (f->kids[0]->kind == Kind::Var && !is_set_name(f->kids[0]->name)) {
          r.op = Op::ElemEq;
          r.eslots = {elem_slot(f->kids[0], sc), elem_slot(f->kids[1], sc)};
          return r;
        }
        r.op = Op::SetEq;
        r.kids.push_back(compile_set(f->kids[0], sc));
        r.kids.push_back(compile_set(f->kids[1], sc));
        return r;
      case Kind::Parity:
        r.op = Op::Parity;
        r.kids.push_back(compile_set(f->kids[0], sc));
        return r;
      default:
        throw Error(ErrorKind::SyntaxError, "set term used as a formula");
    }
  }

  Ir compile_apply(const NodePtr& f, const Scope& sc) {
    Ir r;
    auto mit = lib->find(f->name);
    if (mit != lib->end()) {
      r.op = Op::Call;
      r.macro = compile_macro(mit->second.get());
      for (auto& k : f->kids) {
        bool elem = k->kind == Kind::Var && !is_set_name(k->name);
        r.kids.push_back(elem ? elem_ref(k, sc) : compile_set(k, sc));
      }
      return r;
    }
    const Relation* rel = a->relation(f->name);
    if (rel && rel->arity() == f->kids.size()) {
      for (auto& k : f->kids) {
        if (k->kind != Kind::Var || is_set_name(k->name))
          throw Error(ErrorKind::MissingSymbol, "relation '" + f->name + "' applied to a set");
        r.eslots.push_back(elem_slot(k, sc));
      }
      r.rel = rel_id(f->name);
      r.op = rel->arity() == 1 ? Op::Rel1 : rel->arity() == 2 ? Op::Rel2 : Op::RelN;
      return r;
    }
    const SetPredicate* pred = a->predicate(f->name);
    if (pred && pred->arity() == f->kids.size()) {
      for (auto& k : f->kids) {
        if (k->kind == Kind::Var && !is_set_name(k->name))
          throw Error(ErrorKind::MissingSymbol, "set predicate '" + f->name + "' applied to an element");
        r.kids.push_back(compile_set(k, sc));
      }
      r.pred = pred_id(f->name);
      r.op = pred->arity() == 1 ? Op::Pred1 : Op::PredN;
      return r;
    }
    if (f->name == "children" && f->kids.size() == 2) {
      need_relation("ancestor", 2, "children(Y,y)");
      r.op = Op::Children;
      r.kids.push_back(compile_set(f->kids[0], sc));
      r.slot = elem_slot(f->kids[1], sc);
      return r;
    }
    throw Error(ErrorKind::MissingSymbol, "no relation, predicate or macro '" + f->name + "' of arity " +
                                              std::to_string(f->kids.size()));
  }

  // Conjuncts of f, looking through macro calls with their arguments substituted.
  void conjuncts(const NodePtr& f, std::vector<NodePtr>& out, int depth = 0) {
    if (f->kind == Kind::And) {
      conjuncts(f->kids[0], out, depth);
      conjuncts(f->kids[1], out, depth);
      return;
    }
    if (f->kind == Kind::Apply && depth < 16) {
      auto it = lib->find(f->name);
      if (it != lib->end()) {
        const Macro& m = *it->second;
        std::vector<NodePtr> body_conj;
        conjuncts(m.body, body_conj, depth + 1);
        Subst sub;
        for (std::size_t i = 0; i < m.params.size(); ++i) sub[m.params[i]] = f->kids[i];
        for (auto& c : body_conj) out.push_back(substitute(c, sub));
        return;
      }
    }
    out.push_back(f);
  }

  // Candidate generators for variable v found among the conjuncts of f.
  // Terms mentioning a banned name are not usable.
  std::vector<Guard> find_guards(const NodePtr& f, const std::string& v,
                                 const std::set<std::string>& banned, const Scope& sc) {
    std::vector<NodePtr> cs;
    conjuncts(f, cs);
    std::vector<Guard> out;
    bool set = is_set_name(v);
    auto usable = [&](const NodePtr& t) { return !mentions_any(t, banned); };
    auto other_elem = [&](const NodePtr& t) {
      return t->kind == Kind::Var && !is_set_name(t->name) && !banned.count(t->name) &&
             sc.slot.count(t->name);
    };
    for (auto& c : cs) {
      try {
        if (!set) {
          if (c->kind == Kind::Apply && !lib->count(c->name)) {
            const Relation* rel = a->relation(c->name);
            if (!rel || rel->arity() != c->kids.size()) continue;
            int id = rel_id(c->name);
            if (rel->arity() == 1 && is_var(c->kids[0], v)) {
              out.push_back({Guard::Unary, id, -1, -1, nullptr});
            } else if (rel->arity() == 2) {
              if (is_var(c->kids[0], v) && other_elem(c->kids[1]))
                out.push_back({Guard::Col, id, -1, sc.slot.at(c->kids[1]->name), nullptr});
              else if (is_var(c->kids[1], v) && other_elem(c->kids[0]))
                out.push_back({Guard::Row, id, -1, sc.slot.at(c->kids[0]->name), nullptr});
            }
          } else if (c->kind == Kind::In && is_var(c->kids[0], v) && usable(c->kids[1])) {
            out.push_back({Guard::InSet, -1, -1, -1,
                           std::make_shared<Ir>(compile_set(c->kids[1], sc))});
          } else if (c->kind == Kind::Equal) {
            for (int side = 0; side < 2; ++side) {
              if (is_var(c->kids[side], v) && other_elem(c->kids[1 - side])) {
                out.push_back({Guard::EqElem, -1, -1, sc.slot.at(c->kids[1 - side]->name), nullptr});
                break;
              }
            }
          }
        } else {
          if (c->kind == Kind::Apply && !lib->count(c->name)) {
            const SetPredicate* pred = a->predicate(c->name);
            if (pred && pred->arity() == 1 && c->kids.size() == 1 && is_var(c->kids[0], v)) {
              out.push_back({Guard::Members, -1, pred_id(c->name), -1, nullptr});
            } else if (!pred && c->name == "children" && c->kids.size() == 2 &&
                       is_var(c->kids[0], v) && other_elem(c->kids[1]) &&
                       !(a->relation("children"))) {
              need_relation("ancestor", 2, "children(Y,y)");
              out.push_back({Guard::ChildrenOf, -1, -1, sc.slot.at(c->kids[1]->name), nullptr});
            }
          } else if (c->kind == Kind::Subseteq && is_var(c->kids[0], v) && usable(c->kids[1])) {
            out.push_back({Guard::SubsetsOf, -1, -1, -1,
                           std::make_shared<Ir>(compile_set(c->kids[1], sc))});
          } else if (c->kind == Kind::Equal) {
            for (int side = 0; side < 2; ++side) {
              if (is_var(c->kids[side], v) && usable(c->kids[1 - side])) {
                out.push_back({Guard::Exact, -1, -1, -1,
                               std::make_shared<Ir>(compile_set(c->kids[1 - side], sc))});
                break;
              }
            }
          }
        }
      } catch (const Error&) {
        // not a usable guard here; the body compiles or fails on its own
      }
    }
    return out;
  }

  // ---- evaluation ----

  Subset set(const Ir& t, Frame& fr) {
    switch (t.op) {
      case Op::SetSlot: return fr.s[t.slot];
      case Op::SetConst: return t.constant;
      case Op::RelConst: return rels[t.rel]->unary();
      case Op::Singleton: {
        Subset s(n);
        for (int sl : t.eslots) s.set(fr.e[sl]);
        return s;
      }
      case Op::Union: return set(t.kids[0], fr) | set(t.kids[1], fr);
      case Op::Inter: return set(t.kids[0], fr) & set(t.kids[1], fr);
      case Op::Minus: return set(t.kids[0], fr) - set(t.kids[1], fr);
      case Op::Complement: return set(t.kids[0], fr).complement();
      case Op::Leafset1: return leafset1(fr.e[t.eslots[0]]);
      case Op::Leafset2: return leafset2(fr.e[t.eslots[0]], fr.e[t.eslots[1]]);
      default: throw Error(ErrorKind::SyntaxError, "not a set term");
    }
  }

  Subset elem_candidates(const std::vector<Guard>& gs, Frame& fr) {
    Subset c = full;
    for (auto& g : gs) {
      switch (g.kind) {
        case Guard::Row: c &= rels[g.rel]->row(fr.e[g.slot]); break;
        case Guard::Col: c &= rels[g.rel]->col(fr.e[g.slot]); break;
        case Guard::Unary: c &= rels[g.rel]->unary(); break;
        case Guard::InSet: c &= set(*g.term, fr); break;
        case Guard::EqElem: {
          std::uint32_t x = fr.e[g.slot];
          bool in = c.test(x);
          c.clear();
          if (in) c.set(x);
          break;
        }
        default: break;
      }
    }
    return c;
  }

  void check_scan(std::size_t bits, const char* what) {
    if (bits > guards.cmso_universe || bits > 62)
      throw Error(ErrorKind::UniverseTooLarge,
                  std::string(what) + " over " + std::to_string(bits) + " elements exceeds the guard " +
                      std::to_string(guards.cmso_universe));
  }

  // Calls f on each candidate until it returns true; returns whether it did.
  template <class F>
  bool for_set_candidates(const std::vector<Guard>& gs, Frame& fr, F&& f) {
    // cost estimates: exact 1, members |P|, subsets 2^|T|, full 2^n
    const Guard* best = nullptr;
    double best_cost = n <= 62 ? std::ldexp(1.0, static_cast<int>(n)) : 1e300;
    Subset best_base = full;
    Subset tmp;
    for (auto& g : gs) {
      double cost;
      switch (g.kind) {
        case Guard::Exact:
        case Guard::ChildrenOf: cost = 1; break;
        case Guard::Members: cost = static_cast<double>(preds[g.pred]->size()); break;
        case Guard::SubsetsOf:
          tmp = set(*g.term, fr);
          cost = std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(tmp.count(), 1000)));
          break;
        default: continue;
      }
      if (cost < best_cost) {
        best_cost = cost;
        best = &g;
        if (g.kind == Guard::SubsetsOf) best_base = tmp;
      }
    }
    if (best && best->kind == Guard::Exact) return f(set(*best->term, fr));
    if (best && best->kind == Guard::ChildrenOf) return f(children_of(fr.e[best->slot]));
    if (best && best->kind == Guard::Members) {
      for (auto& m : preds[best->pred]->members())
        if (f(m)) return true;
      return false;
    }
    const Subset& base = best ? best_base : full;
    auto elems = base.elements();
    check_scan(elems.size(), best ? "subset enumeration" : "set quantifier");
    const std::uint64_t limit = std::uint64_t{1} << elems.size();
    for (std::uint64_t mask = 0; mask < limit; ++mask) {
      Subset s(n);
      for (std::size_t i = 0; i < elems.size(); ++i)
        if ((mask >> i) & 1u) s.set(elems[i]);
      if (f(s)) return true;
    }
    return false;
  }

  bool truth(const Ir& f, Frame& fr) {
    switch (f.op) {
      case Op::True: return true;
      case Op::False: return false;
      case Op::Not: return !truth(f.kids[0], fr);
      case Op::And: return truth(f.kids[0], fr) && truth(f.kids[1], fr);
      case Op::Or: return truth(f.kids[0], fr) || truth(f.kids[1], fr);
      case Op::Implies: return !truth(f.kids[0], fr) || truth(f.kids[1], fr);
      case Op::Iff: return truth(f.kids[0], fr) == truth(f.kids[1], fr);
      case Op::ExistsE:
      case Op::ForallE: {
        bool ex = f.op == Op::ExistsE;
        Subset c = elem_candidates(f.guards, fr);
        for (std::size_t x = c.first(); x < n; x = c.next(x)) {
          fr.e[f.slot] = static_cast<std::uint32_t>(x);
          if (truth(f.kids[0], fr) == ex) return ex;
        }
        return !ex;
      }
      case Op::ExistsS:
      case Op::ForallS: {
        bool ex = f.op == Op::ExistsS;
        bool hit = for_set_candidates(f.guards, fr, [&](const Subset& s) {
          fr.s[f.slot] = s;
          return truth(f.kids[0], fr) == ex;
        });
        return hit ? ex : !ex;
      }
      case Op::Rel1: return rels[f.rel]->contains(fr.e[f.eslots[0]]);
      case Op::Rel2: return rels[f.rel]->contains(fr.e[f.eslots[0]], fr.e[f.eslots[1]]);
      case Op::RelN: {
        std::vector<std::uint32_t> t;
        for (int sl : f.eslots) t.push_back(fr.e[sl]);
        return rels[f.rel]->contains(std::span<const std::uint32_t>(t));
      }
      case Op::Pred1: return preds[f.pred]->contains(set(f.kids[0], fr));
      case Op::PredN: {
        std::vector<Subset> t;
        for (auto& k : f.kids) t.push_back(set(k, fr));
        return preds[f.pred]->contains(t);
      }
      case Op::Call: return call(f, fr);
      case Op::Children: return children_of(fr.e[f.slot]) == set(f.kids[0], fr);
      case Op::In: {
        const Ir& s = f.kids[0];
        std::uint32_t x = fr.e[f.slot];
        if (s.op == Op::SetSlot) return fr.s[s.slot].test(x);
        if (s.op == Op::SetConst) return s.constant.test(x);
        if (s.op == Op::RelConst) return rels[s.rel]->unary().test(x);
        return set(s, fr).test(x);
      }
      case Op::Subseteq: return set(f.kids[0], fr).is_subset_of(set(f.kids[1], fr));
      case Op::ElemEq: return fr.e[f.eslots[0]] == fr.e[f.eslots[1]];
      case Op::SetEq: return set(f.kids[0], fr) == set(f.kids[1], fr);
      case Op::Parity: return set(f.kids[0], fr).count() % 2 == 0;
      default: throw Error(ErrorKind::SyntaxError, "not a formula");
    }
  }

  bool call(const Ir& f, Frame& fr) {
    CMacro& m = *f.macro;
    Frame callee;
    callee.e.resize(m.ne);
    callee.s.resize(m.ns);
    std::vector<std::uint64_t> key;
    for (std::size_t i = 0; i < f.kids.size(); ++i) {
      const Ir& k = f.kids[i];
      if (k.op == Op::ElemRef) {
        std::uint32_t x = fr.e[k.slot];
        callee.e[m.param_slot[i]] = x;
        key.push_back(x);
      } else {
        Subset s = set(k, fr);
        for (std::size_t w = 0; w < s.words(); ++w) key.push_back(s.data()[w]);
        callee.s[m.param_slot[i]] = std::move(s);
      }
    }
    auto it = m.memo.find(key);
    if (it != m.memo.end()) return it->second;
    bool v = truth(m.body, callee);
    m.memo.emplace(std::move(key), v);
    return v;
  }

  // ---- entry points ----

  void bind(const Formula& f) {
    lib = &f.macros();
    declared_free = std::set<std::string>(f.free_variables().begin(), f.free_variables().end());
  }

  void load_env(Top& t, const Env& env) {
    t.scope.ne = &t.ne;
    t.scope.ns = &t.ns;
    for (auto& [name, val] : env) {
      if (is_set_name(name)) {
        const Subset* s = std::get_if<Subset>(&val);
        if (!s || s->universe() != n)
          throw Error(ErrorKind::InvalidInput, "set variable '" + name + "' needs a subset of the universe");
        t.scope.slot[name] = t.ns++;
      } else {
        const std::uint32_t* x = std::get_if<std::uint32_t>(&val);
        if (!x || *x >= n)
          throw Error(ErrorKind::InvalidInput, "element variable '" + name + "' needs an element");
        t.scope.slot[name] = t.ne++;
      }
    }
  }

  void fill_env(Top& t, const Env& env) {
    t.frame.e.resize(t.ne);
    t.frame.s.resize(t.ns);
    for (auto& [name, val] : env) {
      int sl = t.scope.slot.at(name);
      if (is_set_name(name)) t.frame.s[sl] = std::get<Subset>(val);
      else t.frame.e[sl] = std::get<std::uint32_t>(val);
    }
  }
};

Evaluator::Evaluator(const ExtRelStruct& a, const Guards& guards)
    : impl_(std::make_unique<Impl>(a, guards)) {}
Evaluator::~Evaluator() = default;

bool Evaluator::rebind(const ExtRelStruct& a) { return impl_->rebind(a); }

bool Evaluator::eval(const Formula& f, const Env& env) {
  Impl& I = *impl_;
  I.bind(f);
  if (env.empty()) {
    // sentences are compiled once per evaluator
    auto& slot = I.sentences[f.root()];
    if (!slot) {
      auto t = std::make_unique<Impl::Top>();
      I.load_env(*t, env);
      t->body = I.compile(f.root(), t->scope);
      I.fill_env(*t, env);
      slot = std::move(t);
    }
    return I.truth(slot->body, slot->frame);
  }
  Impl::Top t;
  I.load_env(t, env);
  t.body = I.compile(f.root(), t.scope);
  I.fill_env(t, env);
  return I.truth(t.body, t.frame);
}

std::vector<std::vector<std::uint32_t>> Evaluator::satisfying_tuples(
    const Formula& f, const std::vector<std::string>& vars, const Env& env) {
  Impl& I = *impl_;
  I.bind(f);
  for (auto& v : vars) {
    if (is_set_name(v)) throw Error(ErrorKind::InvalidInput, "'" + v + "' is not an element variable");
    I.declared_free.insert(v);
  }
  Impl::Top t;
  I.load_env(t, env);
  std::vector<int> slots;
  for (auto& v : vars) {
    slots.push_back(t.ne);
    t.scope.slot[v] = t.ne++;
  }
  t.body = I.compile(f.root(), t.scope);
  std::vector<std::vector<Guard>> gs;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    std::set<std::string> banned(vars.begin() + static_cast<long>(i), vars.end());
    gs.push_back(I.find_guards(f.root(), vars[i], banned, t.scope));
  }
  I.fill_env(t, env);
  std::vector<std::vector<std::uint32_t>> out;
  std::vector<std::uint32_t> cur(vars.size());
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == vars.size()) {
      if (I.truth(t.body, t.frame)) out.push_back(cur);
      return;
    }
    Subset c = I.elem_candidates(gs[i], t.frame);
    for (std::size_t x = c.first(); x < I.n; x = c.next(x)) {
      cur[i] = static_cast<std::uint32_t>(x);
      t.frame.e[slots[i]] = cur[i];
      self(self, i + 1);
    }
  };
  rec(rec, 0);
  return out;
}

std::vector<Subset> Evaluator::satisfying_sets(const Formula& f, const std::string& var,
                                               const Env& env) {
  Impl& I = *impl_;
  I.bind(f);
  if (!is_set_name(var)) throw Error(ErrorKind::InvalidInput, "'" + var + "' is not a set variable");
  I.declared_free.insert(var);
  Impl::Top t;
  I.load_env(t, env);
  int slot = t.ns;
  t.scope.slot[var] = t.ns++;
  t.body = I.compile(f.root(), t.scope);
  auto gs = I.find_guards(f.root(), var, {var}, t.scope);
  I.fill_env(t, env);
  std::vector<Subset> out;
  I.for_set_candidates(gs, t.frame, [&](const Subset& s) {
    t.frame.s[slot] = s;
    if (I.truth(t.body, t.frame)) out.push_back(s);
    return false;
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool eval(const ExtRelStruct& a, const Formula& f, const Env& env, const Guards& guards) {
  Evaluator e(a, guards);
  return e.eval(f, env);
}

// ---- reference semantics ----------------------------------------------------

namespace {

struct Ref {
  const ExtRelStruct& a;
  const Library& lib;
  std::size_t n;
  std::vector<std::pair<std::string, Value>> stack;
  std::map<std::pair<const Macro*, std::vector<std::uint64_t>>, bool> memo;

  const Value& lookup(const std::string& name) {
    for (std::size_t i = stack.size(); i-- > 0;)
      if (stack[i].first == name) return stack[i].second;
    throw Error(ErrorKind::UnboundVariable, "'" + name + "' is not bound");
  }
  bool bound(const std::string& name) const {
    for (auto& [k, v] : stack)
      if (k == name) return true;
    return false;
  }
  std::uint32_t elem(const NodePtr& v) { return std::get<std::uint32_t>(lookup(v->name)); }

  const Relation& rel(const std::string& r, std::size_t arity) {
    const Relation* x = a.relation(r);
    if (!x || x->arity() != arity) throw Error(ErrorKind::MissingSymbol, "missing relation '" + r + "'");
    return *x;
  }

  bool is_leaf(std::uint32_t z) {
    const Relation& anc = rel("ancestor", 2);
    for (std::uint32_t y = 0; y < n; ++y)
      if (y != z && anc.contains(z, y)) return false;
    return true;
  }

  Subset set(const NodePtr& t) {
    switch (t->kind) {
      case Kind::Var:
        if (bound(t->name)) return std::get<Subset>(lookup(t->name));
        [[fallthrough]];
      case Kind::Const: {
        const Relation& r = rel(t->name, 1);
        return r.unary();
      }
      case Kind::Universe: return Subset::full(n);
      case Kind::Empty: return Subset(n);
      case Kind::Singleton: {
        Subset s(n);
        for (auto& k : t->kids) s.set(elem(k));
        return s;
      }
      case Kind::Union: return set(t->kids[0]) | set(t->kids[1]);
      case Kind::Inter: return set(t->kids[0]) & set(t->kids[1]);
      case Kind::Minus: return set(t->kids[0]) - set(t->kids[1]);
      case Kind::Complement: return set(t->kids[0]).complement();
      case Kind::Leafset: {
        Subset out(n);
        if (t->kids.size() == 1) {
          const Relation& anc = rel("ancestor", 2);
          std::uint32_t x = elem(t->kids[0]);
          for (std::uint32_t z = 0; z < n; ++z)
            if (anc.contains(x, z) && is_leaf(z)) out.set(z);
          return out;
        }
        const Relation& te = rel("t-edge", 2);
        std::uint32_t x = elem(t->kids[0]), s = elem(t->kids[1]);
        if (x == s) return out;
        // z is in the side iff some t-edge path from s to z avoids x
        std::vector<bool> seen(n, false);
        std::deque<std::uint32_t> q{s};
        seen[s] = true;
        while (!q.empty()) {
          std::uint32_t v = q.front();
          q.pop_front();
          for (std::uint32_t w = 0; w < n; ++w)
            if (w != x && !seen[w] && te.contains(v, w)) {
              seen[w] = true;
              q.push_back(w);
            }
        }
        for (std::uint32_t z = 0; z < n; ++z) {
          if (!seen[z]) continue;
          std::size_t deg = 0;
          for (std::uint32_t w = 0; w < n; ++w) deg += te.contains(z, w);
          if (deg <= 1) out.set(z);
        }
        return out;
      }
      default: throw Error(ErrorKind::SyntaxError, "not a set term");
    }
  }

  bool truth(const NodePtr& f) {
    switch (f->kind) {
      case Kind::True: return true;
      case Kind::False: return false;
      case Kind::Not: return !truth(f->kids[0]);
      case Kind::And: return truth(f->kids[0]) && truth(f->kids[1]);
      case Kind::Or: return truth(f->kids[0]) || truth(f->kids[1]);
      case Kind::Implies: return !truth(f->kids[0]) || truth(f->kids[1]);
      case Kind::Iff: return truth(f->kids[0]) == truth(f->kids[1]);
      case Kind::Exists:
      case Kind::Forall: {
        bool ex = f->kind == Kind::Exists;
        if (is_set_name(f->name)) {
          if (n > 16) throw Error(ErrorKind::UniverseTooLarge, "reference evaluation needs n <= 16");
          for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            stack.emplace_back(f->name, Subset::from_mask(n, mask));
            bool v = truth(f->kids[0]);
            stack.pop_back();
            if (v == ex) return ex;
          }
          return !ex;
        }
        for (std::uint32_t x = 0; x < n; ++x) {
          stack.emplace_back(f->name, x);
          bool v = truth(f->kids[0]);
          stack.pop_back();
          if (v == ex) return ex;
        }
        return !ex;
      }
      case Kind::Apply: {
        auto it = lib.find(f->name);
        if (it != lib.end()) {
          const Macro* m = it->second.get();
          std::vector<std::pair<std::string, Value>> args;
          std::vector<std::uint64_t> key;
          for (std::size_t i = 0; i < m->params.size(); ++i) {
            if (is_set_name(m->params[i])) {
              Subset s = set(f->kids[i]);
              for (std::size_t w = 0; w < s.words(); ++w) key.push_back(s.data()[w]);
              args.emplace_back(m->params[i], s);
            } else {
              std::uint32_t x = elem(f->kids[i]);
              key.push_back(x);
              args.emplace_back(m->params[i], x);
            }
          }
          auto mk = std::make_pair(m, key);
          auto hit = memo.find(mk);
          if (hit != memo.end()) return hit->second;
          auto saved = std::move(stack);
          stack = std::move(args);
          bool v = truth(m->body);
          stack = std::move(saved);
          memo.emplace(std::move(mk), v);
          return v;
        }
        const Relation* r = a.relation(f->name);
        if (r && r->arity() == f->kids.size()) {
          std::vector<std::uint32_t> t;
          for (auto& k : f->kids) t.push_back(elem(k));
          return r->contains(std::span<const std::uint32_t>(t));
        }
        const SetPredicate* p = a.predicate(f->name);
        if (p && p->arity() == f->kids.size()) {
          std::vector<Subset> t;
          for (auto& k : f->kids) t.push_back(set(k));
          return p->contains(t);
        }
        if (f->name == "children") {
          const Relation& anc = rel("ancestor", 2);
          std::uint32_t y = elem(f->kids[1]);
          Subset want(n);
          for (std::uint32_t c = 0; c < n; ++c) {
            if (c == y || !anc.contains(y, c)) continue;
            bool direct = true;
            for (std::uint32_t z = 0; z < n; ++z)
              if (z != y && z != c && anc.contains(y, z) && anc.contains(z, c)) direct = false;
            if (direct) want.set(c);
          }
          return set(f->kids[0]) == want;
        }
        throw Error(ErrorKind::MissingSymbol, "missing symbol '" + f->name + "'");
      }
      case Kind::In: return set(f->kids[1]).test(elem(f->kids[0]));
      case Kind::Subseteq: return set(f->kids[0]).is_subset_of(set(f->kids[1]));
      case Kind::Equal:
        if (f->kids[0]->kind == Kind::Var && !is_set_name(f->kids[0]->name))
          return elem(f->kids[0]) == elem(f->kids[1]);
        return set(f->kids[0]) == set(f->kids[1]);
      case Kind::Parity: return set(f->kids[0]).count() % 2 == 0;
      default: throw Error(ErrorKind::SyntaxError, "not a formula");
    }
  }
};

}  // namespace

bool eval_reference(const ExtRelStruct& a, const Formula& f, const Env& env) {
  Ref r{a, f.macros(), a.universe(), {}, {}};
  for (auto& [k, v] : env) r.stack.emplace_back(k, v);
  return r.truth(f.root());
}

}  // namespace decomp::cmso
