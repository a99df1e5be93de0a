#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "decomp/core_model.hpp"
#include "decomp/graph_decomp.hpp"
#include "decomp/guards.hpp"
#include "decomp/partitive.hpp"

// CMSO2 formulas over extended relational structures, the atomic
// transductions and the decomposition pipelines built from them.
namespace decomp::cmso {

// ---- syntax ----------------------------------------------------------------

enum class Kind {
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Exists,
  Forall,
  Apply,  // name(args): relation, set predicate, macro or children(Y,y)
  In,
  Subseteq,
  Equal,
  Parity,  // C2
  // terms
  Var,
  Const,  // colour constant: unary relation used as a set (macro bodies)
  Universe,
  Empty,
  Singleton,
  Union,
  Inter,
  Minus,
  Complement,
  Leafset,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Kind kind = Kind::True;
  std::string name;
  std::vector<NodePtr> kids;
  int line = 0, col = 0;
};

// Uppercase first letter: set variable; otherwise element variable.
bool is_set_name(const std::string& name);

struct Macro {
  std::string name;
  std::vector<std::string> params;
  NodePtr body;
};
using Library = std::map<std::string, std::shared_ptr<const Macro>>;

class Formula {
 public:
  Formula() = default;
  Formula(NodePtr root, Library macros, std::vector<std::string> free)
      : root_(std::move(root)), macros_(std::move(macros)), free_(std::move(free)) {}

  const NodePtr& root() const { return root_; }
  const Library& macros() const { return macros_; }
  // Declared free variables.
  const std::vector<std::string>& free_variables() const { return free_; }
  std::string to_string() const;

 private:
  NodePtr root_;
  Library macros_;
  std::vector<std::string> free_;
};

// `def name(params) := formula;` definitions followed by one formula.
// Lowercase free variables must be declared in `free`.
Formula parse_formula(const std::string& text, const std::vector<std::string>& free = {},
                      const Library& lib = {});
// Definitions only.
Library parse_library(const std::string& text, const Library& base = {});
std::string to_string(const NodePtr& n);

// ---- evaluation --------------------------------------------------------------

using Value = std::variant<std::uint32_t, Subset>;
using Env = std::map<std::string, Value>;

// Evaluates formulas on one structure. Macro results are memoized for the
// lifetime of the evaluator.
class Evaluator {
 public:
  explicit Evaluator(const ExtRelStruct& a, const Guards& guards = default_guards());
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  // Points the evaluator at another structure with the same universe size and
  // symbols, keeping compiled formulas. Returns false if the signature differs.
  bool rebind(const ExtRelStruct& a);

  bool eval(const Formula& f, const Env& env = {});
  // All tuples (over `vars`, element variables) satisfying f.
  std::vector<std::vector<std::uint32_t>> satisfying_tuples(const Formula& f,
                                                            const std::vector<std::string>& vars,
                                                            const Env& env = {});
  // All sets X satisfying f(X).
  std::vector<Subset> satisfying_sets(const Formula& f, const std::string& var,
                                      const Env& env = {});

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

bool eval(const ExtRelStruct& a, const Formula& f, const Env& env = {},
          const Guards& guards = default_guards());
// Textbook semantics: every quantifier scans the whole universe, no guards.
bool eval_reference(const ExtRelStruct& a, const Formula& f, const Env& env = {});

// ---- atoms and pipelines -----------------------------------------------------

struct Filtering {
  Formula sentence;
};
struct UniverseRestriction {
  std::string var;
  Formula formula;
};
// Lowercase vars define a relation of that arity, one uppercase var a unary
// set predicate.
struct Definition {
  std::string name;
  std::vector<std::string> vars;
  Formula formula;
};
struct Interpretation {
  std::vector<Definition> defs;
  std::vector<std::string> keep;  // input symbols copied unchanged
};
// Element i*N + x is copy i of x; prefix_i(x, y) holds when y is copy i of x.
struct Copying {
  std::size_t k = 1;
  std::string prefix = "copy";
};
struct Colouring {
  std::string name;
};
using Atom = std::variant<Filtering, UniverseRestriction, Interpretation, Copying, Colouring>;

enum class Mode { Exhaustive, Guided };
const char* mode_name(Mode m);

// Guided choice for one Colouring atom, computed from the structure reached.
using Guess = std::function<Subset(const ExtRelStruct&)>;

struct Pipeline {
  std::vector<Atom> atoms;
  std::vector<Guess> guesses;  // one per Colouring atom, for Guided mode
  bool exhaustive_allowed = true;

  std::size_t colourings() const;
  Pipeline& then(const Pipeline& p);
};

std::vector<ExtRelStruct> apply_atom(const ExtRelStruct& a, const Atom& atom,
                                     Mode mode = Mode::Exhaustive, const Guess* guess = nullptr,
                                     const Guards& guards = default_guards());
// Outputs are deduplicated and kept in first-reached order.
std::vector<ExtRelStruct> run_pipeline(const ExtRelStruct& a, const Pipeline& p, Mode mode,
                                       const Guards& guards = default_guards());

// Laminar tree of the set predicate `pred`: 4 bi-colourings, copy 4 times,
// restrict, interpret ancestor, filter. Output {ancestor} plus `keep`.
Pipeline pipeline_laminar_tree(const std::string& pred = "SET",
                               const std::vector<std::string>& keep = {});
// {ancestor, DEGENERATE, betweenness} from a SET structure.
Pipeline pipeline_weakly_partitive_tree();
// {ancestor, m-edge} from an edge structure.
Pipeline pipeline_modular();
// {t-edge} from a set predicate of bipartition sides (one side suffices).
Pipeline pipeline_bipartition_laminar(std::size_t anchor = 0, const std::string& pred = "BIPART",
                                      const std::vector<std::string>& keep = {});
// {c-edge, t-edge, side} from an edge structure.
Pipeline pipeline_split();
// {c-edge, t-edge, r-edge, class, side}; guided only.
Pipeline pipeline_skeleton(std::size_t anchor = 0);

// Formula texts used by the pipelines, by name.
std::map<std::string, std::string> corpus();

// ---- reading outputs back ----------------------------------------------------

// Leaf label of an output element: its name when that is a plain number.
long leaf_label(const ExtRelStruct& a, std::size_t e);
RootedTree tree_from_ancestor(const ExtRelStruct& a);
UnrootedTree tree_from_tedges(const ExtRelStruct& a);

// Empty string on agreement, otherwise the first difference.
std::string compare_laminar(const ExtRelStruct& out, const RootedTree& direct);
std::string compare_weakly_partitive(const ExtRelStruct& out, const WPTree& direct);
std::string compare_modular(const ExtRelStruct& out, const ModularDecomposition& direct);
std::string compare_bipartition_laminar(const ExtRelStruct& out, const UnrootedTree& direct);
std::string compare_split(const ExtRelStruct& out, const SplitDecomposition& direct);
std::string compare_skeleton(const ExtRelStruct& out, const Skeleton& direct);

// {ancestor, PRIME, DEGENERATE} structure of the modular decomposition.
ExtRelStruct parity_structure(const ModularDecomposition& d);
// The even-number-of-modules sentence evaluated on parity_structure(g).
bool sentence_even_modules(const ExtRelStruct& tree, const Guards& guards = default_guards());
// Undirected graphs. With `cached`, results are shared between graphs whose
// labelled trees are isomorphic.
bool sentence_even_modules(const DiGraph& g, const Guards& guards = default_guards(),
                           bool cached = true);

}  // namespace decomp::cmso
