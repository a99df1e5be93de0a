#include "decomp/io.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace decomp::io {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw ParseError(msg); }

// Runs f, turning JSON type errors and constructor failures into ParseError.
template <class F>
auto parsing(const char* what, F f) -> decltype(f()) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Json::exception& e) {
    bad(std::string(what) + ": " + e.what());
  } catch (const Error& e) {
    bad(std::string(what) + ": " + e.what());
  }
}

std::size_t read_n(const Json& j) {
  if (!j.is_object() || !j.contains("n")) bad("missing \"n\"");
  long n = j.at("n").get<long>();
  if (n < 1) bad("\"n\" must be positive");
  return static_cast<std::size_t>(n);
}

std::size_t read_index(const Json& j, std::size_t bound, const char* what) {
  long v = j.get<long>();
  if (v < 0 || static_cast<std::size_t>(v) >= bound)
    bad(std::string(what) + " " + std::to_string(v) + " out of range");
  return static_cast<std::size_t>(v);
}

Subset read_subset(const Json& j, std::size_t n) {
  if (!j.is_array()) bad("a set must be an array");
  Subset s(n);
  for (auto& e : j) s.set(read_index(e, n, "element"));
  return s;
}

Json elems(const Subset& s) { return Json(s.elements()); }

Json pairs(const std::vector<std::pair<int, int>>& v) {
  Json a = Json::array();
  for (auto [x, y] : v) a.push_back({x, y});
  return a;
}

std::vector<std::pair<int, int>> read_pairs(const Json& j, std::size_t bound) {
  std::vector<std::pair<int, int>> out;
  for (auto& p : j) {
    if (!p.is_array() || p.size() != 2) bad("expected a pair");
    out.emplace_back(static_cast<int>(read_index(p[0], bound, "node")),
                     static_cast<int>(read_index(p[1], bound, "node")));
  }
  return out;
}

// Node id or -1 (trees without inner nodes).
int read_node(const Json& j, std::size_t bound) {
  if (j.is_number_integer() && j.get<long>() == -1) return -1;
  return static_cast<int>(read_index(j, bound, "node"));
}

int read_key(const std::string& k, std::size_t bound) {
  int v = -1;
  auto [p, ec] = std::from_chars(k.data(), k.data() + k.size(), v);
  if (ec != std::errc() || p != k.data() + k.size() || v < 0 || static_cast<std::size_t>(v) >= bound)
    bad("bad node key '" + k + "'");
  return v;
}

NodeLabel node_label(const std::string& s) {
  for (auto l : {NodeLabel::Degenerate, NodeLabel::Prime, NodeLabel::Linear})
    if (s == label_name(l)) return l;
  bad("unknown label '" + s + "'");
}

CoLabel co_label(const std::string& s) {
  for (auto l : {CoLabel::Series, CoLabel::Parallel, CoLabel::Linear})
    if (s == colabel_name(l)) return l;
  bad("unknown label '" + s + "'");
}

template <class L, class Name>
Json label_map(const std::map<int, L>& m, Name name) {
  Json o = Json::object();
  for (auto& [v, l] : m) o[std::to_string(v)] = name(l);
  return o;
}

Json order_map(const std::map<int, std::vector<int>>& m) {
  Json o = Json::object();
  for (auto& [v, seq] : m) o[std::to_string(v)] = seq;
  return o;
}

template <class L, class Read>
std::map<int, L> read_labels(const Json& j, std::size_t bound, Read read) {
  std::map<int, L> m;
  for (auto& [k, v] : j.items()) m[read_key(k, bound)] = read(v.template get<std::string>());
  return m;
}

std::map<int, std::vector<int>> read_orders(const Json& j, std::size_t bound) {
  std::map<int, std::vector<int>> m;
  for (auto& [k, v] : j.items()) {
    auto& seq = m[read_key(k, bound)];
    for (auto& x : v) seq.push_back(static_cast<int>(read_index(x, bound, "node")));
  }
  return m;
}

void check_type(const Json& j, const char* type) {
  if (j.contains("type") && j.at("type").get<std::string>() != type)
    bad(std::string("expected type \"") + type + "\"");
}

// ---- DOT helpers ----

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string seq(const std::vector<int>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

template <class Extra>
std::string rooted_dot(const RootedTree& t, const char* name, Extra extra) {
  std::ostringstream o;
  o << "digraph " << name << " {\n  node [shape=circle];\n";
  for (std::size_t v = 0; v < t.size(); ++v) {
    int id = static_cast<int>(v);
    if (t.is_leaf(id))
      o << "  n" << v << " [shape=box, label=" << quote(std::to_string(t.label(id))) << "];\n";
    else
      o << "  n" << v << " [label=" << quote(extra(id)) << "];\n";
  }
  for (std::size_t v = 0; v < t.size(); ++v)
    if (t.parent(static_cast<int>(v)) >= 0) o << "  n" << t.parent(static_cast<int>(v)) << " -> n" << v << ";\n";
  return o.str();
}

template <class Extra>
std::string unrooted_dot(const UnrootedTree& t, const char* name, Extra extra) {
  std::ostringstream o;
  o << "graph " << name << " {\n  node [shape=circle];\n";
  for (std::size_t v = 0; v < t.size(); ++v) {
    int id = static_cast<int>(v);
    if (t.is_leaf(id))
      o << "  n" << v << " [shape=box, label=" << quote(std::to_string(t.label(id))) << "];\n";
    else
      o << "  n" << v << " [label=" << quote(extra(id)) << "];\n";
  }
  for (auto [u, v] : t.edges()) o << "  n" << u << " -- n" << v << ";\n";
  return o.str();
}

std::string wp_text(const WPTree& w, int v) {
  std::string s = std::to_string(v) + "\\n" + label_name(w.label.at(v));
  if (auto it = w.order.find(v); it != w.order.end()) s += "\\n" + seq(it->second);
  return s;
}

std::string wb_text(const WBTree& w, int v) {
  std::string s = std::to_string(v) + "\\n" + label_name(w.label.at(v));
  if (auto it = w.cyclic.find(v); it != w.cyclic.end()) s += "\\n(" + seq(it->second) + ")";
  return s;
}

}  // namespace

// ---- reading inputs ----

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

DiGraph parse_graph(const std::string& text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return graph_from_json(parse_json(text));
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::optional<DiGraph> g;
  bool directed = false;
  auto fail = [&](const std::string& msg) { bad("line " + std::to_string(lineno) + ": " + msg); };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    auto number = [&](const std::string& s) {
      long v = -1;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || p != s.data() + s.size() || v < 0) fail("expected a number, found '" + s + "'");
      return static_cast<std::size_t>(v);
    };
    if (!g) {
      if (tok.size() > 2) fail("header is `n [directed|undirected]`");
      std::size_t n = number(tok[0]);
      if (n == 0) fail("n must be positive");
      if (tok.size() == 2) {
        if (tok[1] == "directed") directed = true;
        else if (tok[1] != "undirected") fail("expected directed or undirected, found '" + tok[1] + "'");
      }
      g.emplace(n);
      continue;
    }
    if (tok.size() != 2) fail("expected `u v`");
    std::size_t u = number(tok[0]), v = number(tok[1]);
    if (u >= g->n() || v >= g->n()) fail("vertex out of range");
    if (u == v) fail("self-loops are not allowed");
    if (directed) g->add_edge(u, v);
    else g->add_undirected_edge(u, v);
  }
  if (!g) bad("empty graph input");
  return *g;
}

SetSystem parse_set_system(const std::string& text) { return set_system_from_json(parse_json(text)); }

BipartitionSystem parse_bipartitions(const std::string& text) {
  return bipartitions_from_json(parse_json(text));
}

// ---- JSON out ----

Json to_json(const DiGraph& g) {
  bool und = g.is_undirected();
  Json edges = Json::array();
  for (auto [u, v] : g.edges())
    if (!und || u < v) edges.push_back({u, v});
  return {{"n", g.n()}, {"directed", !und}, {"edges", edges}};
}

Json to_json(const SetSystem& s) {
  Json sets = Json::array();
  for (auto& x : s.family()) sets.push_back(elems(x));
  return {{"n", s.n()}, {"sets", sets}};
}

Json to_json(const BipartitionSystem& b) {
  Json sides = Json::array();
  for (auto& x : b.sides()) sides.push_back(elems(x));
  return {{"n", b.n()}, {"sides", sides}};
}

Json to_json(const RootedTree& t) {
  Json leafset = Json::object();
  for (int v : t.inner_nodes()) leafset[std::to_string(v)] = elems(t.leafset(v));
  return {{"n", t.universe()},  {"nodes", t.size()},   {"root", t.root()},
          {"parent", t.parents()}, {"leaf", t.labels()}, {"leafset", leafset}};
}

Json to_json(const UnrootedTree& t) {
  Json leafset = Json::object();
  for (int u : t.inner_nodes()) {
    Json sides = Json::object();
    for (int v : t.neighbours(u)) sides[std::to_string(v)] = elems(t.side(u, v));
    leafset[std::to_string(u)] = sides;
  }
  return {{"n", t.universe()}, {"nodes", t.size()}, {"edges", pairs(t.edges())},
          {"leaf", t.labels()}, {"leafset", leafset}};
}

Json to_json(const WPTree& w) {
  Json j = to_json(w.tree);
  j["type"] = "wptree";
  j["labels"] = label_map(w.label, label_name);
  j["order"] = order_map(w.order);
  return j;
}

Json to_json(const WBTree& w) {
  Json j = to_json(w.tree);
  j["type"] = "wbtree";
  j["labels"] = label_map(w.label, label_name);
  j["cyclic"] = order_map(w.cyclic);
  return j;
}

Json to_json(const ModularDecomposition& d) {
  Json j = to_json(d.wp);
  j["type"] = "modular";
  j["m_edges"] = pairs(d.m_edges);
  return j;
}

Json to_json(const Cotree& c) {
  Json j = to_json(c.tree);
  j["type"] = "cotree";
  j["labels"] = label_map(c.label, colabel_name);
  j["order"] = order_map(c.order);
  return j;
}

Json to_json(const SplitDecomposition& d) {
  Json j = to_json(d.wb);
  j["type"] = "split";
  Json markers = Json::array();
  for (auto& m : d.markers) markers.push_back({m.node, m.towards});
  j["markers"] = markers;
  j["c_edges"] = pairs(d.c_edges);
  j["t_edges"] = pairs(d.t_edges);
  return j;
}

Json to_json(const Skeleton& s) {
  Json j = to_json(s.wb);
  j["type"] = "skeleton";
  Json vs = Json::array();
  for (auto& v : s.vertices)
    vs.push_back({{"node", v.node},
                  {"towards", v.towards},
                  {"index", v.index},
                  {"members", elems(v.members)},
                  {"original", v.original}});
  j["vertices"] = vs;
  j["c_edges"] = pairs(s.c_edges);
  j["t_edges"] = pairs(s.t_edges);
  j["r_edges"] = pairs(s.r_edges);
  return j;
}

Json to_json(const ExtRelStruct& a) {
  Json rels = Json::object(), preds = Json::object();
  for (auto& [name, r] : a.relations())
    rels[name] = {{"arity", r.arity()}, {"tuples", r.sorted_tuples()}};
  for (auto& [name, p] : a.predicates()) {
    Json tuples = Json::array();
    for (auto& t : p.tuples()) {
      Json tj = Json::array();
      for (auto& s : t) tj.push_back(elems(s));
      tuples.push_back(tj);
    }
    preds[name] = {{"arity", p.arity()}, {"tuples", tuples}};
  }
  return {{"type", "structure"}, {"universe", a.universe()}, {"names", a.names()},
          {"relations", rels},   {"predicates", preds}};
}

// ---- JSON in ----

DiGraph graph_from_json(const Json& j) {
  return parsing("graph", [&] {
    std::size_t n = read_n(j);
    bool directed = j.value("directed", false);
    DiGraph g(n);
    for (auto [u, v] : read_pairs(j.value("edges", Json::array()), n)) {
      if (u == v) bad("self-loops are not allowed");
      if (directed) g.add_edge(u, v);
      else g.add_undirected_edge(u, v);
    }
    return g;
  });
}

SetSystem set_system_from_json(const Json& j) {
  return parsing("set system", [&] {
    std::size_t n = read_n(j);
    std::vector<Subset> raw;
    for (auto& s : j.at("sets")) raw.push_back(read_subset(s, n));
    return normalize_set_system(raw, n);
  });
}

BipartitionSystem bipartitions_from_json(const Json& j) {
  return parsing("bipartition system", [&] {
    std::size_t n = read_n(j);
    std::vector<Subset> raw;
    for (auto& s : j.at("sides")) raw.push_back(read_subset(s, n));
    return normalize_bipartition_system(raw, n);
  });
}

RootedTree rooted_tree_from_json(const Json& j) {
  return parsing("rooted tree", [&] {
    return RootedTree(j.at("parent").get<std::vector<int>>(), j.at("leaf").get<std::vector<int>>(),
                      read_n(j));
  });
}

UnrootedTree unrooted_tree_from_json(const Json& j) {
  return parsing("unrooted tree", [&] {
    std::size_t nodes = j.at("nodes").get<std::size_t>();
    return UnrootedTree(nodes, read_pairs(j.at("edges"), nodes), j.at("leaf").get<std::vector<int>>(),
                        read_n(j));
  });
}

WPTree wptree_from_json(const Json& j) {
  return parsing("wptree", [&] {
    WPTree w;
    w.tree = rooted_tree_from_json(j);
    w.label = read_labels<NodeLabel>(j.at("labels"), w.tree.size(), node_label);
    w.order = read_orders(j.at("order"), w.tree.size());
    return w;
  });
}

WBTree wbtree_from_json(const Json& j) {
  return parsing("wbtree", [&] {
    WBTree w;
    w.tree = unrooted_tree_from_json(j);
    w.label = read_labels<NodeLabel>(j.at("labels"), w.tree.size(), node_label);
    w.cyclic = read_orders(j.at("cyclic"), w.tree.size());
    return w;
  });
}

ModularDecomposition modular_from_json(const Json& j) {
  return parsing("modular decomposition", [&] {
    check_type(j, "modular");
    ModularDecomposition d;
    d.wp = wptree_from_json(j);
    d.m_edges = read_pairs(j.at("m_edges"), d.wp.tree.size());
    std::sort(d.m_edges.begin(), d.m_edges.end());
    return d;
  });
}

Cotree cotree_from_json(const Json& j) {
  return parsing("cotree", [&] {
    check_type(j, "cotree");
    Cotree c;
    c.tree = rooted_tree_from_json(j);
    c.label = read_labels<CoLabel>(j.at("labels"), c.tree.size(), co_label);
    c.order = read_orders(j.at("order"), c.tree.size());
    return c;
  });
}

SplitDecomposition split_from_json(const Json& j) {
  return parsing("split decomposition", [&] {
    check_type(j, "split");
    SplitDecomposition d;
    d.wb = wbtree_from_json(j);
    for (auto& m : j.at("markers")) {
      if (!m.is_array() || m.size() != 2) bad("a marker is [node, towards]");
      d.markers.push_back({read_node(m[0], d.wb.tree.size()), read_node(m[1], d.wb.tree.size())});
    }
    d.c_edges = read_pairs(j.at("c_edges"), d.markers.size());
    d.t_edges = read_pairs(j.at("t_edges"), d.markers.size());
    std::sort(d.c_edges.begin(), d.c_edges.end());
    std::sort(d.t_edges.begin(), d.t_edges.end());
    return d;
  });
}

Skeleton skeleton_from_json(const Json& j) {
  return parsing("skeleton", [&] {
    check_type(j, "skeleton");
    Skeleton s;
    s.wb = wbtree_from_json(j);
    const std::size_t nodes = s.wb.tree.size(), n = s.wb.tree.universe();
    for (auto& v : j.at("vertices")) {
      ClassVertex c;
      c.node = read_node(v.at("node"), nodes);
      c.towards = read_node(v.at("towards"), nodes);
      c.index = v.at("index").get<int>();
      c.members = read_subset(v.at("members"), n);
      c.original = v.at("original").get<bool>();
      s.vertices.push_back(c);
    }
    for (auto [name, dst] : {std::pair{"c_edges", &s.c_edges}, std::pair{"t_edges", &s.t_edges},
                             std::pair{"r_edges", &s.r_edges}}) {
      *dst = read_pairs(j.at(name), s.vertices.size());
      std::sort(dst->begin(), dst->end());
    }
    return s;
  });
}

ExtRelStruct structure_from_json(const Json& j) {
  return parsing("structure", [&] {
    check_type(j, "structure");
    std::size_t n = j.at("universe").get<std::size_t>();
    ExtRelStruct a(n);
    if (j.contains("names")) {
      auto names = j.at("names").get<std::vector<std::string>>();
      if (names.size() != n) bad("names must list every element");
      for (std::size_t e = 0; e < n; ++e) a.set_name(e, names[e]);
    }
    const Json rels = j.value("relations", Json::object()), preds = j.value("predicates", Json::object());
    for (auto& [name, r] : rels.items()) {
      std::size_t arity = r.at("arity").get<std::size_t>();
      a.declare_relation(name, arity);
      for (auto& t : r.at("tuples")) {
        if (t.size() != arity) bad("relation " + name + ": tuple of wrong arity");
        std::vector<std::uint32_t> tu;
        for (auto& x : t) tu.push_back(static_cast<std::uint32_t>(read_index(x, n, "element")));
        a.add_tuple(name, tu);
      }
    }
    for (auto& [name, p] : preds.items()) {
      std::size_t arity = p.at("arity").get<std::size_t>();
      auto& pred = a.declare_predicate(name, arity);
      for (auto& t : p.at("tuples")) {
        if (t.size() != arity) bad("predicate " + name + ": tuple of wrong arity");
        std::vector<Subset> tu;
        for (auto& s : t) tu.push_back(read_subset(s, n));
        pred.insert(tu);
      }
    }
    return a;
  });
}

// ---- DOT ----

std::string to_dot(const RootedTree& t) {
  return rooted_dot(t, "laminar", [](int v) { return std::to_string(v); }) + "}\n";
}

std::string to_dot(const UnrootedTree& t) {
  return unrooted_dot(t, "laminar", [](int v) { return std::to_string(v); }) + "}\n";
}

std::string to_dot(const WPTree& w) {
  return rooted_dot(w.tree, "wptree", [&](int v) { return wp_text(w, v); }) + "}\n";
}

std::string to_dot(const WBTree& w) {
  return unrooted_dot(w.tree, "wbtree", [&](int v) { return wb_text(w, v); }) + "}\n";
}

std::string to_dot(const ModularDecomposition& d) {
  std::string s = rooted_dot(d.tree(), "modular", [&](int v) { return wp_text(d.wp, v); });
  for (auto [a, b] : d.m_edges)
    s += "  n" + std::to_string(a) + " -> n" + std::to_string(b) +
         " [color=red, constraint=false];\n";
  return s + "}\n";
}

std::string to_dot(const Cotree& c) {
  return rooted_dot(c.tree, "cotree",
                    [&](int v) {
                      std::string s = std::to_string(v) + "\\n" + colabel_name(c.label.at(v));
                      if (auto it = c.order.find(v); it != c.order.end()) s += "\\n" + seq(it->second);
                      return s;
                    }) +
         "}\n";
}

std::string to_dot(const SplitDecomposition& d) {
  std::ostringstream o;
  o << "digraph split {\n  node [shape=point];\n";
  const std::size_t n = d.n();
  std::map<int, std::vector<int>> by_node;
  for (std::size_t m = n; m < d.markers.size(); ++m) by_node[d.markers[m].node].push_back(static_cast<int>(m));
  for (std::size_t v = 0; v < n; ++v) o << "  m" << v << " [shape=box, label=" << quote(std::to_string(v)) << "];\n";
  for (auto& [node, ms] : by_node) {
    o << "  subgraph cluster_" << node << " {\n    label=" << quote(wb_text(d.wb, node)) << ";\n";
    for (int m : ms) o << "    m" << m << ";\n";
    o << "  }\n";
  }
  for (auto [a, b] : d.c_edges) o << "  m" << a << " -> m" << b << " [style=solid];\n";
  for (auto [a, b] : d.t_edges)
    o << "  m" << a << " -> m" << b << " [style=dashed, dir=none, color=blue, penwidth=2];\n";
  return o.str() + "}\n";
}

std::string to_dot(const Skeleton& s) {
  std::ostringstream o;
  o << "graph skeleton {\n  node [shape=circle];\n";
  std::map<int, std::vector<int>> by_node;
  for (std::size_t i = 0; i < s.vertices.size(); ++i) {
    auto& v = s.vertices[i];
    if (v.original) o << "  v" << i << " [shape=box, label=" << quote(std::to_string(v.members.first())) << "];\n";
    else {
      o << "  v" << i << " [label=" << quote(v.members.to_string()) << "];\n";
      by_node[v.node].push_back(static_cast<int>(i));
    }
  }
  for (auto& [node, vs] : by_node) {
    o << "  subgraph cluster_" << node << " {\n    label=" << quote(wb_text(s.wb, node)) << ";\n";
    for (int v : vs) o << "    v" << v << ";\n";
    o << "  }\n";
  }
  for (auto [a, b] : s.c_edges) o << "  v" << a << " -- v" << b << " [style=solid];\n";
  for (auto [a, b] : s.t_edges) o << "  v" << a << " -- v" << b << " [style=dashed, color=blue, penwidth=2];\n";
  for (auto [a, b] : s.r_edges)
    o << "  v" << a << " -- v" << b << " [style=bold, color=gray, label=\"~\", decorate=true];\n";
  return o.str() + "}\n";
}

std::string to_dot(const ExtRelStruct& a) {
  std::ostringstream o;
  o << "digraph structure {\n";
  std::vector<std::string> unary(a.universe());
  for (auto& [name, r] : a.relations())
    if (r.arity() == 1)
      for (auto& t : r.sorted_tuples()) unary[t[0]] += "\\n" + name;
  for (std::size_t e = 0; e < a.universe(); ++e)
    o << "  e" << e << " [label=" << quote(a.name(e) + unary[e]) << "];\n";
  for (auto& [name, r] : a.relations())
    if (r.arity() == 2)
      for (auto& t : r.sorted_tuples())
        o << "  e" << t[0] << " -> e" << t[1] << " [label=" << quote(name) << "];\n";
  return o.str() + "}\n";
}

}  // namespace decomp::io
