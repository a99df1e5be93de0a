// decomp: command-line front end for the decomposition library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "CLI11.hpp"
#include "decomp/cmso.hpp"
#include "decomp/graph_decomp.hpp"
#include "decomp/io.hpp"
#include "decomp/laminar.hpp"
#include "decomp/oracle.hpp"
#include "decomp/partitive.hpp"

using namespace decomp;
using io::Json;

namespace {

struct Options {
  std::string in = "-", out = "-", format = "json", mode = "guided";
  std::uint64_t seed = 1;
  std::vector<std::string> guard;
  std::size_t anchor = 0, jobs = 1;
  // subcommand specific
  std::string law, side, formula, formula_file, pipeline;
  bool family = false, components = false, check = false;
};

class Usage : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!cur.empty()) out.push_back(cur);
  return out;
}

std::size_t to_size(const std::string& s, const std::string& what) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw Usage("bad " + what + " '" + s + "'");
  }
}

// "N" raises the size limits of subset scans and CMSO universes together;
// "name=value" sets one limit.
void apply_guard(Guards& g, const std::string& spec) {
  for (auto& item : split_on(spec, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) {
      g.subset_scan = g.cmso_universe = to_size(item, "guard");
      continue;
    }
    std::string key = item.substr(0, eq);
    std::size_t v = to_size(item.substr(eq + 1), "guard value");
    std::map<std::string, std::size_t*> fields{
        {"subset_scan", &g.subset_scan},   {"all_digraphs", &g.all_digraphs},
        {"all_graphs", &g.all_graphs},     {"cmso_universe", &g.cmso_universe},
        {"colour_bits", &g.colour_bits},   {"max_branches", &g.max_branches},
        {"max_degree", &g.max_degree}};
    auto it = fields.find(key);
    if (it == fields.end()) throw Usage("unknown guard '" + key + "'");
    *it->second = v;
  }
}

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream f(path);
  if (!f) throw Usage("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), {}};
}

void write_output(const Options& o, const std::string& text) {
  if (o.out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out);
  if (!f) throw Usage("cannot write '" + o.out + "'");
  f << text;
}

template <class T>
void emit(const Options& o, const T& value) {
  if (o.format == "dot") write_output(o, io::to_dot(value));
  else write_output(o, io::to_json(value).dump(2) + "\n");
}

void emit_json(const Options& o, const Json& j) {
  if (o.format == "dot") throw Usage("this result has no DOT form; use --format json");
  write_output(o, j.dump(2) + "\n");
}

// random:N[:P], random-directed:N[:P], random-connected:N[:P] use --seed.
std::optional<std::pair<std::string, std::pair<std::size_t, double>>> random_spec(const Options& o) {
  auto parts = split_on(o.in, ':');
  if (parts.empty() || parts[0].rfind("random", 0) != 0 || parts.size() > 3) return std::nullopt;
  std::size_t n = parts.size() > 1 ? to_size(parts[1], "random size") : 0;
  double p = 0.5;
  if (parts.size() > 2) {
    try {
      p = std::stod(parts[2]);
    } catch (const std::logic_error&) {
      throw Usage("bad edge probability '" + parts[2] + "'");
    }
  }
  if (n == 0) throw Usage("random input needs a size, e.g. random:8");
  return std::pair{parts[0], std::pair{n, p}};
}

DiGraph load_graph(const Options& o) {
  if (auto r = random_spec(o)) {
    auto [kind, np] = *r;
    if (kind == "random") return oracle::random_graph(np.first, np.second, o.seed);
    if (kind == "random-directed") return oracle::random_digraph(np.first, np.second, o.seed);
    if (kind == "random-connected") return oracle::random_connected_graph(np.first, np.second, o.seed);
    throw Usage("unknown random input '" + kind + "'");
  }
  return io::parse_graph(read_input(o.in));
}

SetSystem load_sets(const Options& o) {
  if (auto r = random_spec(o)) return oracle::random_laminar_family(r->second.first, o.seed);
  return io::parse_set_system(read_input(o.in));
}

BipartitionSystem load_bipartitions(const Options& o) {
  if (auto r = random_spec(o)) return oracle::random_laminar_bipartitions(r->second.first, o.seed);
  return io::parse_bipartitions(read_input(o.in));
}

// Set-system or bipartition JSON, told apart by their keys.
std::variant<SetSystem, BipartitionSystem> load_family(const Options& o) {
  if (random_spec(o)) return load_sets(o);
  Json j = io::parse_json(read_input(o.in));
  if (j.is_object() && j.contains("sides")) return io::bipartitions_from_json(j);
  return io::set_system_from_json(j);
}

ExtRelStruct load_structure(const Options& o) {
  if (random_spec(o)) return build_structure(load_graph(o));
  std::string text = read_input(o.in);
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos || text[first] != '{') return build_structure(io::parse_graph(text));
  Json j = io::parse_json(text);
  if (j.contains("universe")) return io::structure_from_json(j);
  if (j.contains("sets")) return build_structure(io::set_system_from_json(j));
  if (j.contains("sides")) return build_structure(io::bipartitions_from_json(j));
  return build_structure(io::graph_from_json(j));
}

// Runs f on every weak component when --components is given.
template <class F>
void per_component(const Options& o, const DiGraph& g, F f) {
  if (!o.components) {
    emit(o, f(g));
    return;
  }
  if (o.format == "dot") {
    std::string all;
    for (auto& c : g.components()) all += io::to_dot(f(g.induced(c.elements())));
    write_output(o, all);
    return;
  }
  Json parts = Json::array();
  for (auto& c : g.components())
    parts.push_back({{"vertices", c.elements()}, {"result", io::to_json(f(g.induced(c.elements())))}});
  write_output(o, Json{{"type", "components"}, {"components", parts}}.dump(2) + "\n");
}

int run_verify(const Options& o) {
  static const std::map<std::string, oracle::Law> laws{
      {"weakly-partitive", oracle::Law::WeaklyPartitive},
      {"partitive", oracle::Law::Partitive},
      {"weakly-bipartitive", oracle::Law::WeaklyBipartitive},
      {"bipartitive", oracle::Law::Bipartitive}};
  auto fam = load_family(o);
  Json j{{"law", o.law}};
  std::optional<oracle::ClosureViolation> v;
  auto sides = [](auto& f) -> const std::vector<Subset>& {
    if constexpr (std::is_same_v<std::decay_t<decltype(f)>, SetSystem>) return f.family();
    else return f.sides();
  };
  if (o.law == "laminar") {
    std::visit(
        [&](auto& f) {
          bool bip = std::is_same_v<std::decay_t<decltype(f)>, BipartitionSystem>;
          auto& xs = sides(f);
          for (std::size_t a = 0; a < xs.size() && !v; ++a)
            for (std::size_t b = a + 1; b < xs.size() && !v; ++b)
              if (bip ? bipartitions_overlap(xs[a], xs[b]) : sets_overlap(xs[a], xs[b]))
                v = oracle::ClosureViolation{xs[a], xs[b], Subset(f.n())};
        },
        fam);
  } else {
    auto it = laws.find(o.law);
    if (it == laws.end()) throw Usage("unknown law '" + o.law + "'");
    bool bip_law = it->second == oracle::Law::WeaklyBipartitive || it->second == oracle::Law::Bipartitive;
    std::visit(
        [&](auto& f) {
          constexpr bool bip = std::is_same_v<std::decay_t<decltype(f)>, BipartitionSystem>;
          if (bip != bip_law)
            throw Usage(std::string("law '") + o.law + "' needs " +
                        (bip_law ? "a bipartition system" : "a set system"));
          v = oracle::check_closure(f, it->second);
        },
        fam);
  }
  j["holds"] = !v;
  if (v) {
    j["x"] = v->x.elements();
    j["y"] = v->y.elements();
    if (o.law != "laminar") j["missing"] = v->missing.elements();
  }
  emit_json(o, j);
  return v ? 1 : 0;
}

std::string read_formula(const Options& o) {
  if (!o.formula.empty() && !o.formula_file.empty()) throw Usage("give --formula or --formula-file, not both");
  if (!o.formula.empty()) return o.formula;
  if (o.formula_file.empty()) throw Usage("cmso eval needs --formula or --formula-file");
  std::ifstream f(o.formula_file);
  if (!f) throw Usage("cannot read '" + o.formula_file + "'");
  return {std::istreambuf_iterator<char>(f), {}};
}

int run_cmso_run(const Options& o, const Guards& guards) {
  cmso::Mode mode;
  if (o.mode == "guided") mode = cmso::Mode::Guided;
  else if (o.mode == "exhaustive") mode = cmso::Mode::Exhaustive;
  else throw Usage("--mode is guided or exhaustive");

  ExtRelStruct input;
  cmso::Pipeline p;
  std::function<std::string(const ExtRelStruct&)> compare;
  if (o.pipeline == "laminar" || o.pipeline == "wptree") {
    SetSystem s = load_sets(o);
    input = build_structure(s);
    if (o.pipeline == "laminar") {
      p = cmso::pipeline_laminar_tree();
      compare = [s](const ExtRelStruct& a) { return cmso::compare_laminar(a, laminar_tree(s)); };
    } else {
      p = cmso::pipeline_weakly_partitive_tree();
      compare = [s](const ExtRelStruct& a) { return cmso::compare_weakly_partitive(a, weakly_partitive_tree(s)); };
    }
  } else if (o.pipeline == "biplam") {
    BipartitionSystem b = load_bipartitions(o);
    input = build_structure(b);
    p = cmso::pipeline_bipartition_laminar(o.anchor);
    compare = [b, a = o.anchor](const ExtRelStruct& out) {
      return cmso::compare_bipartition_laminar(out, laminar_tree_bipartitions(b, a));
    };
  } else if (o.pipeline == "modular" || o.pipeline == "split" || o.pipeline == "skeleton") {
    DiGraph g = load_graph(o);
    input = build_structure(g);
    if (o.pipeline == "modular") {
      p = cmso::pipeline_modular();
      compare = [g, guards](const ExtRelStruct& a) { return cmso::compare_modular(a, modular_decomposition(g, guards)); };
    } else if (o.pipeline == "split") {
      p = cmso::pipeline_split();
      compare = [g, guards](const ExtRelStruct& a) { return cmso::compare_split(a, split_decomposition(g, guards)); };
    } else {
      p = cmso::pipeline_skeleton(o.anchor);
      compare = [g, guards](const ExtRelStruct& a) { return cmso::compare_skeleton(a, skeleton(g, guards)); };
    }
  } else {
    throw Usage("--pipeline is one of laminar, wptree, modular, biplam, split, skeleton");
  }

  auto outputs = cmso::run_pipeline(input, p, mode, guards);
  bool agree = true;
  Json js = Json::array();
  for (auto& out : outputs) {
    Json j = io::to_json(out);
    if (o.check) {
      std::string diff = compare(out);
      j["agrees"] = diff.empty();
      if (!diff.empty()) j["difference"] = diff;
      agree &= diff.empty();
    }
    js.push_back(j);
  }
  if (o.format == "dot") {
    std::string all;
    for (auto& out : outputs) all += io::to_dot(out);
    write_output(o, all);
  } else {
    Json j{{"pipeline", o.pipeline}, {"mode", cmso::mode_name(mode)}, {"outputs", js}};
    if (o.check) j["agrees"] = agree;
    write_output(o, j.dump(2) + "\n");
  }
  return o.check && !agree ? 1 : 0;
}

// Syntax and scope errors in a formula are errors in the command line.
int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::SyntaxError:
    case ErrorKind::ScopeError:
      return 2;
    default:
      return 1;
  }
}

void report(const std::string& kind, const std::string& message) {
  std::cerr << Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Canonical tree decompositions of set systems, bipartition systems and graphs"};
  app.fallthrough();
  app.require_subcommand(1);
  Options o;
  app.add_option("--in", o.in, "input file, - for stdin, or random:N[:P] with --seed");
  app.add_option("--out", o.out, "output file, - for stdout");
  app.add_option("--format", o.format, "json or dot")->check(CLI::IsMember({"json", "dot"}));
  app.add_option("--seed", o.seed, "seed for random inputs");
  app.add_option("--guard", o.guard, "size limit N, or name=value")->envname("DECOMP_GUARD");
  app.add_option("--mode", o.mode, "CMSO pipeline mode: guided or exhaustive")
      ->check(CLI::IsMember({"guided", "exhaustive"}));
  app.add_option("--anchor", o.anchor, "element the bipartition trees are rooted at");
  app.add_option("--jobs", o.jobs, "threads for subset scans")->check(CLI::PositiveNumber);

  auto* laminar = app.add_subcommand("laminar", "laminar tree of a set or bipartition system");
  auto* wptree = app.add_subcommand("wptree", "weakly-partitive tree of a set system");
  auto* wbtree = app.add_subcommand("wbtree", "weakly-bipartitive tree of a bipartition system");
  auto* modular = app.add_subcommand("modular", "modular decomposition of a graph");
  modular->add_flag("--family", o.family, "print the module family instead");
  auto* cot = app.add_subcommand("cotree", "cotree of a P4-free graph");
  auto* split = app.add_subcommand("split", "split decomposition of a connected graph");
  split->add_flag("--family", o.family, "print the split family instead");
  split->add_flag("--components", o.components, "decompose every weak component");
  auto* bijoin = app.add_subcommand("bijoin", "bi-join skeleton of a connected undirected graph");
  bijoin->add_flag("--family", o.family, "print the bi-join family instead");
  bijoin->add_flag("--components", o.components, "decompose every component");
  auto* cutrank = app.add_subcommand("cutrank", "cut-rank of a vertex set, or width of the split tree");
  cutrank->add_option("--side", o.side, "comma-separated vertex set");
  auto* verify = app.add_subcommand("verify", "check a closure law on a set or bipartition system");
  verify->add_option("--law", o.law, "laminar, weakly-partitive, partitive, weakly-bipartitive, bipartitive")
      ->required();
  auto* cmso_cmd = app.add_subcommand("cmso", "CMSO evaluation and transductions");
  cmso_cmd->require_subcommand(1);
  auto* eval = cmso_cmd->add_subcommand("eval", "evaluate a sentence on a structure");
  eval->add_option("--formula", o.formula, "sentence text");
  eval->add_option("--formula-file", o.formula_file, "file holding the sentence");
  auto* run = cmso_cmd->add_subcommand("run", "run a decomposition pipeline");
  run->add_option("--pipeline", o.pipeline, "laminar, wptree, modular, biplam, split, skeleton")->required();
  run->add_flag("--check", o.check, "compare every output with the direct construction");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    Guards& guards = default_guards();
    for (auto& g : o.guard) apply_guard(guards, g);
    guards.jobs = o.jobs;

    if (laminar->parsed()) {
      auto fam = load_family(o);
      if (auto* s = std::get_if<SetSystem>(&fam)) {
        emit(o, laminar_tree(*s));
      } else {
        auto& b = std::get<BipartitionSystem>(fam);
        if (o.anchor >= b.n()) throw Usage("--anchor out of range");
        emit(o, laminar_tree_bipartitions(b, o.anchor));
      }
    } else if (wptree->parsed()) {
      emit(o, weakly_partitive_tree(load_sets(o)));
    } else if (wbtree->parsed()) {
      emit(o, weakly_bipartitive_tree(load_bipartitions(o)));
    } else if (modular->parsed()) {
      DiGraph g = load_graph(o);
      if (o.family) emit_json(o, io::to_json(modules_set_system(g, guards)));
      else emit(o, modular_decomposition(g, guards));
    } else if (cot->parsed()) {
      emit(o, cotree(load_graph(o), guards));
    } else if (split->parsed()) {
      DiGraph g = load_graph(o);
      if (o.family) emit_json(o, io::to_json(split_family(g, guards)));
      else per_component(o, g, [&](const DiGraph& h) { return split_decomposition(h, guards); });
    } else if (bijoin->parsed()) {
      DiGraph g = load_graph(o);
      if (o.family) emit_json(o, io::to_json(bijoin_family(g, guards)));
      else per_component(o, g, [&](const DiGraph& h) { return skeleton(h, guards); });
    } else if (cutrank->parsed()) {
      DiGraph g = load_graph(o);
      if (!o.side.empty()) {
        Subset x(g.n());
        for (auto& e : split_on(o.side, ',')) {
          std::size_t v = to_size(e, "vertex");
          if (v >= g.n()) throw Usage("vertex " + e + " out of range");
          x.set(v);
        }
        emit_json(o, Json{{"side", x.elements()}, {"cut_rank", cut_rank(g, x)}});
      } else {
        UnrootedTree t = cubic_refinement(split_decomposition(g, guards).tree());
        emit_json(o, Json{{"width", rank_width_of(g, t, guards)}, {"tree", io::to_json(t)}});
      }
    } else if (verify->parsed()) {
      return run_verify(o);
    } else if (eval->parsed()) {
      std::string text = read_formula(o);
      ExtRelStruct a = load_structure(o);
      cmso::Formula f = cmso::parse_formula(text);
      emit_json(o, Json{{"holds", cmso::eval(a, f, {}, guards)}});
    } else if (run->parsed()) {
      return run_cmso_run(o, guards);
    }
    return 0;
  } catch (const Usage& e) {
    report("Usage", e.what());
    return 2;
  } catch (const io::ParseError& e) {
    report("ParseError", e.what());
    return 2;
  } catch (const Error& e) {
    report(error_name(e.kind()), e.what());
    return exit_code(e);
  } catch (const std::exception& e) {
    report("Failure", e.what());
    return 1;
  }
}
