#include <algorithm>
#include <set>
#include <sstream>

#include "decomp/cmso.hpp"
#include "decomp/identification.hpp"
#include "decomp/laminar.hpp"

namespace decomp::cmso {

const char* mode_name(Mode m) { return m == Mode::Guided ? "guided" : "exhaustive"; }

std::size_t Pipeline::colourings() const {
  std::size_t c = 0;
  for (auto& a : atoms) c += std::holds_alternative<Colouring>(a);
  return c;
}

Pipeline& Pipeline::then(const Pipeline& p) {
  atoms.insert(atoms.end(), p.atoms.begin(), p.atoms.end());
  guesses.insert(guesses.end(), p.guesses.begin(), p.guesses.end());
  exhaustive_allowed = exhaustive_allowed && p.exhaustive_allowed;
  return *this;
}

namespace {

Subset widen(const Subset& s, std::size_t n) {
  Subset out(n);
  s.for_each([&](std::size_t e) { out.set(e); });
  return out;
}

ExtRelStruct restrict_to(const ExtRelStruct& a, const Subset& keep) {
  std::vector<long> map(a.universe(), -1);
  std::size_t m = 0;
  keep.for_each([&](std::size_t e) { map[e] = static_cast<long>(m++); });
  ExtRelStruct out(m);
  keep.for_each([&](std::size_t e) { out.set_name(static_cast<std::size_t>(map[e]), a.name(e)); });
  for (auto& [name, rel] : a.relations()) {
    out.declare_relation(name, rel.arity());
    for (auto& t : rel.tuples()) {
      std::vector<std::uint32_t> nt;
      bool ok = true;
      for (auto x : t) {
        if (map[x] < 0) {
          ok = false;
          break;
        }
        nt.push_back(static_cast<std::uint32_t>(map[x]));
      }
      if (ok) out.add_tuple(name, std::move(nt));
    }
  }
  for (auto& [name, pred] : a.predicates()) {
    out.declare_predicate(name, pred.arity());
    for (auto& t : pred.tuples()) {
      std::vector<Subset> nt;
      bool ok = true;
      for (auto& s : t) {
        if (!s.is_subset_of(keep)) {
          ok = false;
          break;
        }
        Subset r(m);
        s.for_each([&](std::size_t e) { r.set(static_cast<std::size_t>(map[e])); });
        nt.push_back(std::move(r));
      }
      if (ok) out.declare_predicate(name, pred.arity()).insert(std::move(nt));
    }
  }
  return out;
}

ExtRelStruct interpret(const ExtRelStruct& a, const Interpretation& in, const Guards& guards) {
  ExtRelStruct out(a.universe());
  for (std::size_t e = 0; e < a.universe(); ++e) out.set_name(e, a.name(e));
  for (auto& k : in.keep) {
    if (const Relation* r = a.relation(k)) {
      out.declare_relation(k, r->arity());
      for (auto& t : r->tuples()) out.add_tuple(k, t);
    } else if (const SetPredicate* p = a.predicate(k)) {
      auto& q = out.declare_predicate(k, p->arity());
      for (auto& t : p->tuples()) q.insert(t);
    } else {
      throw Error(ErrorKind::MissingSymbol, "interpretation keeps unknown symbol '" + k + "'");
    }
  }
  Evaluator ev(a, guards);
  for (auto& d : in.defs) {
    if (d.vars.size() == 1 && is_set_name(d.vars[0])) {
      if (out.has_relation(d.name)) out.remove_relation(d.name);
      out.remove_predicate(d.name);
      out.declare_predicate(d.name, 1);
      for (auto& s : ev.satisfying_sets(d.formula, d.vars[0])) out.add_set(d.name, s);
    } else {
      if (d.vars.empty()) throw Error(ErrorKind::InvalidInput, "definition '" + d.name + "' has no variables");
      out.remove_relation(d.name);
      out.remove_predicate(d.name);
      out.declare_relation(d.name, d.vars.size());
      for (auto& t : ev.satisfying_tuples(d.formula, d.vars)) out.add_tuple(d.name, t);
    }
  }
  return out;
}

ExtRelStruct copy_structure(const ExtRelStruct& a, const Copying& c) {
  const std::size_t n = a.universe();
  if (c.k == 0) return a;
  ExtRelStruct out(n * (c.k + 1));
  for (std::size_t i = 0; i <= c.k; ++i)
    for (std::size_t x = 0; x < n; ++x)
      out.set_name(i * n + x, i ? a.name(x) + "#" + std::to_string(i) : a.name(x));
  for (auto& [name, rel] : a.relations()) {
    out.declare_relation(name, rel.arity());
    for (auto& t : rel.tuples()) out.add_tuple(name, t);
  }
  for (auto& [name, pred] : a.predicates()) {
    auto& q = out.declare_predicate(name, pred.arity());
    for (auto& t : pred.tuples()) {
      std::vector<Subset> nt;
      for (auto& s : t) nt.push_back(widen(s, out.universe()));
      q.insert(std::move(nt));
    }
  }
  for (std::size_t i = 1; i <= c.k; ++i) {
    std::string r = c.prefix + std::to_string(i);
    out.declare_relation(r, 2);
    for (std::size_t x = 0; x < n; ++x)
      out.add_tuple(r, {static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(i * n + x)});
  }
  return out;
}

ExtRelStruct coloured(const ExtRelStruct& a, const std::string& name, const Subset& s) {
  ExtRelStruct out = a;
  out.remove_relation(name);
  out.declare_relation(name, 1);
  s.for_each([&](std::size_t e) { out.add_tuple(name, {static_cast<std::uint32_t>(e)}); });
  return out;
}

Subset checked_guess(const ExtRelStruct& a, const Guess& g) {
  Subset s = g(a);
  if (s.universe() == a.universe()) return s;
  Subset t(a.universe());
  s.for_each([&](std::size_t e) {
    if (e >= a.universe()) throw Error(ErrorKind::InvalidInput, "guess outside the universe");
    t.set(e);
  });
  return t;
}

std::string structure_key(const ExtRelStruct& a) {
  std::ostringstream os;
  os << a.universe() << ';';
  for (auto& nm : a.names()) os << nm << ',';
  for (auto& [name, rel] : a.relations()) {
    os << '|' << name << ':';
    for (auto& t : rel.sorted_tuples()) {
      for (auto x : t) os << x << '.';
      os << ',';
    }
  }
  for (auto& [name, pred] : a.predicates()) {
    os << '|' << name << ':';
    std::vector<std::string> ms;
    for (auto& t : pred.tuples()) {
      std::string m;
      for (auto& s : t) m += s.to_string();
      ms.push_back(m);
    }
    std::sort(ms.begin(), ms.end());
    for (auto& m : ms) os << m << ',';
  }
  return os.str();
}

}  // namespace

std::vector<ExtRelStruct> apply_atom(const ExtRelStruct& a, const Atom& atom, Mode mode,
                                     const Guess* guess, const Guards& guards) {
  return std::visit(
      [&](auto&& x) -> std::vector<ExtRelStruct> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Filtering>) {
          if (eval(a, x.sentence, {}, guards)) return {a};
          return {};
        } else if constexpr (std::is_same_v<T, UniverseRestriction>) {
          Evaluator ev(a, guards);
          Subset keep(a.universe());
          for (auto& t : ev.satisfying_tuples(x.formula, {x.var})) keep.set(t[0]);
          return {restrict_to(a, keep)};
        } else if constexpr (std::is_same_v<T, Interpretation>) {
          return {interpret(a, x, guards)};
        } else if constexpr (std::is_same_v<T, Copying>) {
          return {copy_structure(a, x)};
        } else {
          if (mode == Mode::Guided) {
            if (!guess) throw Error(ErrorKind::InvalidInput, "guided colouring '" + x.name + "' has no guess");
            return {coloured(a, x.name, checked_guess(a, *guess))};
          }
          if (a.universe() > guards.colour_bits)
            throw Error(ErrorKind::TooLarge, "exhaustive colouring over " + std::to_string(a.universe()) +
                                                 " elements exceeds the guard");
          std::vector<ExtRelStruct> out;
          for (std::uint64_t m = 0; m < (std::uint64_t{1} << a.universe()); ++m)
            out.push_back(coloured(a, x.name, Subset::from_mask(a.universe(), m)));
          return out;
        }
      },
      atom);
}

std::vector<ExtRelStruct> run_pipeline(const ExtRelStruct& a, const Pipeline& p, Mode mode,
                                       const Guards& guards) {
  if (mode == Mode::Guided && p.guesses.size() != p.colourings())
    throw Error(ErrorKind::InvalidInput, "guided mode needs one guess per colouring (" +
                                             std::to_string(p.colourings()) + " colourings, " +
                                             std::to_string(p.guesses.size()) + " guesses)");
  if (mode == Mode::Exhaustive && !p.exhaustive_allowed)
    throw Error(ErrorKind::InvalidInput, "this pipeline runs in guided mode only");
  std::vector<ExtRelStruct> out;
  std::set<std::string> seen;
  std::size_t branches = 0;
  std::vector<std::unique_ptr<Evaluator>> filters(p.atoms.size());

  auto rec = [&](auto&& self, const ExtRelStruct& s, std::size_t i, std::size_t ci,
                 std::size_t bits) -> void {
    if (i == p.atoms.size()) {
      if (seen.insert(structure_key(s)).second) out.push_back(s);
      return;
    }
    const Atom& atom = p.atoms[i];
    if (auto* c = std::get_if<Colouring>(&atom)) {
      if (mode == Mode::Guided) {
        auto next = apply_atom(s, atom, mode, &p.guesses[ci], guards);
        self(self, next[0], i + 1, ci + 1, bits);
        return;
      }
      const std::size_t b = bits + s.universe();
      if (b > guards.colour_bits || s.universe() > 62)
        throw Error(ErrorKind::TooLarge, "exhaustive colouring '" + c->name + "' needs " + std::to_string(b) +
                                             " guessed bits before the next filter (guard " +
                                             std::to_string(guards.colour_bits) + ")");
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << s.universe()); ++m) {
        if (++branches > guards.max_branches)
          throw Error(ErrorKind::TooLarge, "exhaustive run exceeds " + std::to_string(guards.max_branches) +
                                               " colouring branches");
        self(self, coloured(s, c->name, Subset::from_mask(s.universe(), m)), i + 1, ci + 1, b);
      }
      return;
    }
    if (std::holds_alternative<Filtering>(atom)) {
      // sibling branches share a signature; keep the compiled sentence
      auto& ev = filters[i];
      if (!ev || !ev->rebind(s)) ev = std::make_unique<Evaluator>(s, guards);
      if (ev->eval(std::get<Filtering>(atom).sentence)) self(self, s, i + 1, ci, 0);
      return;
    }
    auto next = apply_atom(s, atom, mode, nullptr, guards);
    for (auto& t : next) self(self, t, i + 1, ci, bits);
  };
  rec(rec, a, 0, 0, 0);
  return out;
}

// ---- formula texts -----------------------------------------------------------

namespace {

std::string subst(std::string text, const std::map<std::string, std::string>& vars) {
  for (auto& [k, v] : vars) {
    std::string key = "$" + k;
    for (std::size_t pos = text.find(key); pos != std::string::npos; pos = text.find(key, pos + v.size()))
      text.replace(pos, key.size(), v);
  }
  return text;
}

std::string laminar_defs(const std::string& pred) {
  std::string s = R"(
def desc(X,Y) := $P(X) & $P(Y) & X subseteq Y;
def child(X,Y) := desc(X,Y) & X != Y & forall Z. ((desc(X,Z) & desc(Z,Y)) -> (Z = X | Z = Y));
)";
  for (int i = 1; i <= 4; ++i) {
    s += subst(R"(
def phi$i(X) := $P(X) & exists a. exists b. (a in X inter A$i & b in X inter B$i &
    forall Z. (child(Z,X) -> (!({a,b} subseteq Z) & C2((Z minus {a,b}) inter (A$i union B$i)))));
def reprA$i(a,X) := phi$i(X) & a in X inter A$i & forall Z. ((Z subseteq X & Z != X) -> (a in Z -> !phi$i(Z)));
def reprB$i(b,X) := phi$i(X) & b in X inter B$i & forall Z. ((Z subseteq X & Z != X) -> (b in Z -> !phi$i(Z)));
def node$i(x,X) := exists a. (copy$i(a,x) & reprA$i(a,X));
)",
               {{"i", std::to_string(i)}});
  }
  s += R"(
def orig(x) := !exists y. (copy1(y,x) | copy2(y,x) | copy3(y,x) | copy4(y,x));
def node(x,X) := node1(x,X) | node2(x,X) | node3(x,X) | node4(x,X);
)";
  return subst(s, {{"P", pred}});
}

const char* kTreeDefs = R"(
def inner(x) := exists y. (ancestor(x,y) & x != y);
def parent(x,y) := ancestor(x,y) & x != y & forall z. ((ancestor(x,z) & ancestor(z,y)) -> (z = x | z = y));
def root(x) := forall y. ancestor(x,y);
def isleaf(x) := forall y. (ancestor(x,y) -> y = x);
)";

const char* kSetDefs = R"(
def overlap(X,Z) := (X inter Z) != empty & !(X subseteq Z) & !(Z subseteq X);
def bioverlap(X,Z) := (X inter Z) != empty & (X minus Z) != empty & (Z minus X) != empty & ~(X union Z) != empty;
def module(X) := X != empty & forall v. (v in X -> forall w. (w in X -> forall u. (u notin X ->
    ((edge(u,v) <-> edge(u,w)) & (edge(v,u) <-> edge(w,u))))));
def crossout(X,x) := exists z. (z notin X & edge(x,z));
def crossin(X,x) := exists z. (z notin X & edge(z,x));
def sameout(X,x,y) := forall z. (z notin X -> (edge(x,z) <-> edge(y,z)));
def samein(X,x,y) := forall z. (z notin X -> (edge(z,x) <-> edge(z,y)));
def split(X) := X != empty & ~X != empty & forall x. (x in X -> forall y. (y in X ->
    (((crossout(X,x) & crossout(X,y)) -> sameout(X,x,y)) & ((crossin(X,x) & crossin(X,y)) -> samein(X,x,y)))));
def same(X,x,y) := forall z. (z notin X -> (edge(x,z) <-> edge(y,z)));
def bijoin(X) := X != empty & ~X != empty & forall x. (x in X -> forall y. (y in X ->
    (same(X,x,y) | forall z. (z notin X -> (edge(x,z) <-> !edge(y,z))))));
)";

const char* kSplitDefs = R"(
def tinner(x) := exists y. exists z. (t-edge(x,y) & t-edge(x,z) & y != z);
def orig(x) := !exists y. cp1(y,x);
def tleaf(x) := orig(x) & !tinner(x);
def tparent(x,y) := t-edge(x,y) & exists r. exists s. (R(r) & t-edge(r,s) & leafset(x,y) subseteq leafset(r,s));
def marker(x,u,v) := (tparent(u,v) & x = v) | (tparent(v,u) & cp1(u,x));
)";

const char* kSkeletonDefs = R"(
def tnode(x) := !exists y. (cc1(y,x) | cc2(y,x) | cc3(y,x) | cc4(y,x));
def leaf(x) := tnode(x) & forall y. (ancestor(x,y) -> y = x);
def root(x) := tnode(x) & forall y. (tnode(y) -> ancestor(x,y));
def up(u) := tnode(u) & !leaf(u) & !root(u);
def parent(x,y) := ancestor(x,y) & x != y & forall z. ((ancestor(x,z) & ancestor(z,y)) -> (z = x | z = y));
def rep(u,a) := copy1(a,u) | copy2(a,u) | copy3(a,u) | copy4(a,u);
def same(X,x,y) := forall z. (z notin X -> (edge(x,z) <-> edge(y,z)));
def outer1(u,z) := leaf(z) & z notin leafset(u) & exists a. (ANCHOR(a) & same(~leafset(u),z,a));
def outer2(u,z) := leaf(z) & z notin leafset(u) & exists a. (ANCHOR(a) & !same(~leafset(u),z,a));
def inner1(u,z) := z in leafset(u) & exists a. (rep(u,a) & same(leafset(u),z,a));
def inner2(u,z) := z in leafset(u) & exists a. (rep(u,a) & !same(leafset(u),z,a));
def member(c,z) := (leaf(c) & z = c) | (exists u. (cc1(u,c) & up(u) & outer1(u,z)))
    | (exists u. (cc2(u,c) & up(u) & outer2(u,z))) | (exists u. (cc3(u,c) & up(u) & inner1(u,z)))
    | (exists u. (cc4(u,c) & up(u) & inner2(u,z)));
def cv(c) := exists z. member(c,z);
def hi(u,c) := cc1(u,c) | cc2(u,c);
def lo(u,c) := cc3(u,c) | cc4(u,c);
def comp(c,w) := (leaf(c) & parent(w,c)) | (exists u. (cc1(u,c) & w = u)) | (exists u. (cc2(u,c) & w = u))
    | (exists u. (cc3(u,c) & parent(w,u))) | (exists u. (cc4(u,c) & parent(w,u)));
def dir(c,v) := (leaf(c) & v = c) | (exists u. (cc1(u,c) & parent(v,u))) | (exists u. (cc2(u,c) & parent(v,u)))
    | (exists u. (cc3(u,c) & v = u)) | (exists u. (cc4(u,c) & v = u));
def pair(x,y) := x != y & leaf(x) & leaf(y) & forall z. (leaf(z) -> (z = x | z = y));
def adj(x,y) := exists p. (member(x,p) & exists q. (member(y,q) & edge(p,q)));
)";

const char* kParityDefs = R"(
def leaf(y) := forall z. (ancestor(y,z) -> z = y);
def root(r) := forall z. ancestor(r,z);
)";

const char* kCrossDefs = R"(
def cross(t,x1,x2,x3,x4) := !DEGENERATE(t) & x1 != x2 & x1 != x3 & x1 != x4 & x2 != x3 & x2 != x4 & x3 != x4
    & t-edge(t,x1) & t-edge(t,x2) & t-edge(t,x3) & t-edge(t,x4)
    & exists X. (BIPART(X) & exists Y. (BIPART(Y) & Y subseteq X & exists Z. (BIPART(Z) & Z subseteq X
      & leafset(t,x1) subseteq (Y minus Z) & leafset(t,x2) subseteq (Y inter Z)
      & leafset(t,x3) subseteq (Z minus Y) & leafset(t,x4) subseteq ~X)));
)";

const char* kParitySentence = R"(
exists X. ((forall y. (leaf(y) -> y notin X)) & (forall r. (root(r) -> r in X))
  & (forall y. (!leaf(y) -> exists Y. (children(Y,y)
      & (((PRIME(y) & !C2(Y minus X)) | (DEGENERATE(y) & !C2(X inter Y))) <-> y in X)))))
)";

const Library& library(const std::string& key, const std::string& text) {
  static std::map<std::string, Library> cache;
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, parse_library(text)).first;
  return it->second;
}

const Library& laminar_lib(const std::string& pred) {
  return library("laminar:" + pred, laminar_defs(pred) + kTreeDefs);
}
const Library& set_lib() { return library("sets", kSetDefs); }
const Library& tree_lib() { return library("tree", kTreeDefs); }

Formula F(const std::string& text, const Library& lib, const std::vector<std::string>& free = {}) {
  return parse_formula(text, free, lib);
}

Definition def_rel(const std::string& name, const std::vector<std::string>& vars,
                   const std::string& text, const Library& lib) {
  return {name, vars, F(text, lib, vars)};
}

Definition def_set(const std::string& name, const std::string& text, const Library& lib) {
  return {name, {"X"}, F(text, lib, {"X"})};
}

std::vector<std::string> joined(std::vector<std::string> a, const std::vector<std::string>& b) {
  for (auto& x : b)
    if (std::find(a.begin(), a.end(), x) == a.end()) a.push_back(x);
  return a;
}

Guess laminar_guess(const std::string& pred, int i, bool a_side) {
  return [pred, i, a_side](const ExtRelStruct& s) {
    const SetPredicate* p = s.predicate(pred);
    if (!p) throw Error(ErrorKind::MissingSymbol, "no set predicate '" + pred + "'");
    SetSystem ss = normalize_set_system(p->members(), s.universe());
    // non-empty blocks first, matching the block order filter
    std::vector<BiColouring> used;
    for (auto& [c, nodes] : four_bicolourings(laminar_tree(ss)))
      if (c.A.any() || c.B.any()) used.push_back(c);
    if (static_cast<std::size_t>(i) >= used.size()) return Subset(s.universe());
    return a_side ? used[i].A : used[i].B;
  };
}

Pipeline anchor_step(std::size_t anchor) {
  Pipeline p;
  p.atoms.push_back(Colouring{"ANCHOR"});
  p.guesses.push_back([anchor](const ExtRelStruct& s) {
    if (anchor >= s.universe()) throw Error(ErrorKind::InvalidInput, "anchor outside the universe");
    return Subset::singleton(s.universe(), anchor);
  });
  p.atoms.push_back(Filtering{F("exists a. (ANCHOR(a) & forall b. (ANCHOR(b) -> b = a))", {})});
  return p;
}

Interpretation strong_step(const std::string& name, const std::string& from, bool bipartition,
                           const std::vector<std::string>& keep) {
  std::string text = subst("$F(X) & forall Z. ($F(Z) -> !$O(X,Z))",
                           {{"F", from}, {"O", bipartition ? "bioverlap" : "overlap"}});
  return Interpretation{{def_set(name, text, set_lib())}, keep};
}

}  // namespace

Pipeline pipeline_laminar_tree(const std::string& pred, const std::vector<std::string>& keep) {
  const Library& lib = laminar_lib(pred);
  Pipeline p;
  for (int i = 1; i <= 4; ++i) {
    const std::string is = std::to_string(i);
    p.atoms.push_back(Colouring{"A" + is});
    p.guesses.push_back(laminar_guess(pred, i - 1, true));
    p.atoms.push_back(Colouring{"B" + is});
    p.guesses.push_back(laminar_guess(pred, i - 1, false));
    std::string prune = subst(
        "(A$i inter B$i) = empty & (forall a. (A$i(a) -> exists X. reprA$i(a,X)))"
        " & (forall b. (B$i(b) -> exists X. reprB$i(b,X)))"
        " & (forall X. (phi$i(X) -> ((exists a. (reprA$i(a,X) & forall c. (reprA$i(c,X) -> c = a)))"
        " & (exists b. (reprB$i(b,X) & forall c. (reprB$i(c,X) -> c = b))))))",
        {{"i", is}});
    if (i > 1)
      prune += subst(" & ((exists a. (A$i(a) | B$i(a))) -> exists a. (A$h(a) | B$h(a)))",
                     {{"i", is}, {"h", std::to_string(i - 1)}});
    for (int j = 1; j < i; ++j)
      prune += subst(" & (forall X. ($P(X) -> !((exists a. reprA$i(a,X)) & (exists c. reprA$j(c,X)))))",
                     {{"i", is}, {"j", std::to_string(j)}, {"P", pred}});
    p.atoms.push_back(Filtering{F(prune, lib)});
  }
  p.atoms.push_back(Copying{4, "copy"});
  p.atoms.push_back(UniverseRestriction{"x", F(subst("orig(x) | exists X. ($P(X) & node(x,X))", {{"P", pred}}), lib, {"x"})});
  std::vector<std::string> colours;
  for (int i = 1; i <= 4; ++i) {
    colours.push_back("A" + std::to_string(i));
    colours.push_back("B" + std::to_string(i));
  }
  p.atoms.push_back(Interpretation{
      {def_rel("ancestor", {"x", "y"},
               subst("(x = y & orig(x)) | exists X. ($P(X) & node(x,X) & ((orig(y) & y in X)"
                     " | exists Y. ($P(Y) & node(y,Y) & Y subseteq X)))",
                     {{"P", pred}}),
               lib)},
      joined({pred}, keep)});
  p.atoms.push_back(Filtering{F(subst("(forall X. ($P(X) -> exists t. (leafset(t) = X & forall s. (leafset(s) = X -> s = t))))"
                                      " & (forall t. $P(leafset(t)))",
                                      {{"P", pred}}),
                                lib)});
  p.atoms.push_back(Interpretation{{}, joined({"ancestor"}, keep)});
  return p;
}

Pipeline pipeline_weakly_partitive_tree() {
  Pipeline p;
  p.atoms.push_back(strong_step("STRONG", "SET", false, {"SET"}));
  p.then(pipeline_laminar_tree("STRONG", {"SET"}));
  const Library& lib = tree_lib();
  p.atoms.push_back(Interpretation{
      {def_rel("DEGENERATE", {"x"},
               "inner(x) & forall y. (parent(x,y) -> forall z. (parent(x,z) -> SET(leafset(y) union leafset(z))))", lib),
       def_rel("betweenness", {"x", "y", "z"},
               "exists t. (parent(t,x) & parent(t,y) & parent(t,z) & !SET(leafset(x) union leafset(z))"
               " & (exists S. (SET(S) & (leafset(x) union leafset(y)) subseteq S & (leafset(z) inter S) = empty))"
               " & (exists S. (SET(S) & (leafset(z) union leafset(y)) subseteq S & (leafset(x) inter S) = empty)))",
               lib)},
      {"ancestor"}});
  return p;
}

Pipeline pipeline_modular() {
  Pipeline p;
  p.atoms.push_back(Interpretation{{def_set("SET", "module(X)", set_lib())}, {"edge"}});
  p.atoms.push_back(strong_step("STRONG", "SET", false, {"edge"}));
  p.then(pipeline_laminar_tree("STRONG", {"edge"}));
  p.atoms.push_back(Interpretation{
      {def_rel("m-edge", {"s", "r"},
               "s != r & (exists t. (parent(t,s) & parent(t,r)))"
               " & exists u. (u in leafset(s) & exists v. (v in leafset(r) & edge(u,v)))",
               tree_lib())},
      {"ancestor"}});
  return p;
}

Pipeline pipeline_bipartition_laminar(std::size_t anchor, const std::string& pred,
                                      const std::vector<std::string>& keep) {
  Pipeline p = anchor_step(anchor);
  p.atoms.push_back(Interpretation{
      {def_set("SET",
               subst("exists a. (ANCHOR(a) & (X = {a} | X = U | (a notin X & ($B(X) | $B(~X)))))", {{"B", pred}}),
               {})},
      joined({"ANCHOR"}, keep)});
  p.then(pipeline_laminar_tree("SET", joined({"ANCHOR"}, keep)));
  const Library& lib = library("bipartition", std::string(kTreeDefs) + R"(
def top(y) := !ANCHOR(y) & exists r. (root(r) & parent(r,y));
)");
  p.atoms.push_back(Interpretation{
      {def_rel("t-edge", {"x", "y"},
               "!root(x) & !root(y) & (parent(x,y) | parent(y,x) | (ANCHOR(x) & top(y)) | (ANCHOR(y) & top(x)))",
               lib)},
      joined({"ancestor"}, keep)});
  p.atoms.push_back(UniverseRestriction{"x", F("!root(x) | isleaf(x)", lib, {"x"})});
  p.atoms.push_back(Interpretation{{}, joined({"t-edge"}, keep)});
  return p;
}

Pipeline pipeline_split() {
  Pipeline p;
  p.atoms.push_back(Interpretation{{def_set("BIPART", "split(X)", set_lib())}, {"edge"}});
  p.atoms.push_back(strong_step("STRONGB", "BIPART", true, {"edge"}));
  p.then(pipeline_bipartition_laminar(0, "STRONGB", {"edge"}));
  const Library& lib = library("split", kSplitDefs);
  p.atoms.push_back(Colouring{"R"});
  p.guesses.push_back([](const ExtRelStruct& s) {
    const Relation* te = s.relation("t-edge");
    for (std::size_t x = 0; te && x < s.universe(); ++x)
      if (te->row(static_cast<std::uint32_t>(x)).count() >= 3) return Subset::singleton(s.universe(), x);
    return Subset::singleton(s.universe(), 0);
  });
  p.atoms.push_back(Filtering{F("(exists r. (R(r) & forall s. (R(s) -> s = r)))"
                                " & ((forall r. (R(r) -> tinner(r))) | !(exists y. tinner(y)))",
                                lib)});
  p.atoms.push_back(Copying{1, "cp"});
  p.atoms.push_back(Interpretation{
      {def_rel("c-edge", {"x", "y"},
               "exists u. exists v. (t-edge(u,v) & marker(x,u,v) & exists w. (t-edge(u,w) & v != w"
               " & marker(y,u,w) & exists p. (p in leafset(u,v) & exists q. (q in leafset(u,w) & edge(p,q)))))",
               lib),
       def_rel("t-edge", {"x", "y"},
               "(exists u. exists v. (t-edge(u,v) & marker(x,u,v) & marker(y,v,u))) | (tleaf(x) & tleaf(y) & t-edge(x,y))",
               lib),
       def_rel("side", {"x", "z"}, "exists u. exists v. (t-edge(u,v) & marker(x,u,v) & z in leafset(u,v))", lib),
       def_rel("KEEP", {"x"}, "(orig(x) & (!R(x) | !tinner(x))) | exists y. (cp1(y,x) & !R(y) & tinner(y))", lib)},
      {}});
  p.atoms.push_back(UniverseRestriction{"x", F("KEEP(x)", {}, {"x"})});
  p.atoms.push_back(Interpretation{{}, {"c-edge", "t-edge", "side"}});
  return p;
}

Pipeline pipeline_skeleton(std::size_t anchor) {
  Pipeline p;
  p.exhaustive_allowed = false;
  p.atoms.push_back(Interpretation{{def_set("BIPART", "bijoin(X)", set_lib())}, {"edge"}});
  p.atoms.push_back(strong_step("STRONGB", "BIPART", true, {"edge"}));
  p.then(anchor_step(anchor));
  // Without U \ {a} the laminar tree is rooted at the anchor's neighbour.
  p.atoms.push_back(Interpretation{
      {def_set("SET",
               "exists a. (ANCHOR(a) & (X = {a} | X = U | (a notin X & (STRONGB(X) | STRONGB(~X))"
               " & (X != ~{a} | exists b. X = {b}))))",
               {})},
      {"edge", "ANCHOR"}});
  p.then(pipeline_laminar_tree("SET", {"edge", "ANCHOR", "copy1", "copy2", "copy3", "copy4"}));
  p.atoms.push_back(Copying{4, "cc"});
  const Library& lib = library("skeleton", kSkeletonDefs);
  p.atoms.push_back(Interpretation{
      {def_rel("c-edge", {"x", "y"},
               "x != y & cv(x) & cv(y) & (exists w. (comp(x,w) & comp(y,w)))"
               " & (exists v. exists v2. (dir(x,v) & dir(y,v2) & v != v2)) & adj(x,y) & !pair(x,y)",
               lib),
       def_rel("t-edge", {"x", "y"},
               "cv(x) & cv(y) & (((exists u. (up(u) & ((hi(u,x) & lo(u,y)) | (hi(u,y) & lo(u,x))))) & adj(x,y))"
               " | pair(x,y))",
               lib),
       def_rel("r-edge", {"x", "y"},
               "cv(x) & cv(y) & exists u. (up(u) & ((cc1(u,x) & cc2(u,y)) | (cc2(u,x) & cc1(u,y))"
               " | (cc3(u,x) & cc4(u,y)) | (cc4(u,x) & cc3(u,y))))",
               lib),
       def_rel("class", {"c", "z"}, "cv(c) & member(c,z)", lib),
       def_rel("side", {"c", "z"},
               "cv(c) & leaf(z) & ((leaf(c) & z = c) | (exists u. (hi(u,c) & z notin leafset(u)))"
               " | (exists u. (lo(u,c) & z in leafset(u))))",
               lib),
       def_rel("KEEP", {"c"}, "cv(c)", lib)},
      {}});
  p.atoms.push_back(UniverseRestriction{"x", F("KEEP(x)", {}, {"x"})});
  p.atoms.push_back(Interpretation{{}, {"c-edge", "t-edge", "r-edge", "class", "side"}});
  return p;
}

std::map<std::string, std::string> corpus() {
  return {
      {"laminar", laminar_defs("SET") + kTreeDefs},
      {"tree", kTreeDefs},
      {"sets", kSetDefs},
      {"split", kSplitDefs},
      {"skeleton", kSkeletonDefs},
      {"parity", std::string(kParityDefs) + kParitySentence},
      {"cross", kCrossDefs},
      {"degenerate",
       std::string(kTreeDefs) +
           "inner(x) & forall y. (parent(x,y) -> forall z. (parent(x,z) -> SET(leafset(y) union leafset(z))))"},
  };
}

}  // namespace decomp::cmso
