#include "mllnet/correctness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace mllnet {

// ---------------------------------------------------------------------------
// Switchings
// ---------------------------------------------------------------------------

namespace {

struct RawNet {
  std::vector<Link> links;
  std::vector<PosId> arrangement;
};

// Resolve the par links of `host` (ids in `par_ids`, one keep-left bit each).
// Returns false when a resolution would create a loop.
bool resolve_pars(const Net& host, const std::vector<LinkId>& par_ids,
                  const std::vector<bool>& keep_left, RawNet& out) {
  out.links = host.links();
  out.arrangement = host.arrangement();
  for (std::size_t j = 0; j < par_ids.size(); ++j) {
    std::size_t pi = out.links.size();
    for (std::size_t i = 0; i < out.links.size(); ++i)
      if (out.links[i].id == par_ids[j]) pi = i;
    const Link par = out.links[pi];
    PosId kept = par.sources[keep_left[j] ? 0 : 1];
    PosId freed = par.sources[keep_left[j] ? 1 : 0];
    PosId output = par.targets[0];
    bool replaced = false;
    for (auto& l : out.links) {
      for (auto& t : l.targets) {
        if (t != kept) continue;
        if (std::find(l.sources.begin(), l.sources.end(), output) != l.sources.end())
          return false;  // would loop: the switching contains a cycle
        t = output;
        replaced = true;
        break;
      }
      if (replaced) break;
    }
    if (!replaced) throw NetError("switching: kept premise has no producer");
    out.links.erase(out.links.begin() + pi);
    out.arrangement.push_back(freed);
  }
  return true;
}

std::vector<LinkId> par_ids_of(const Net& n) {
  std::vector<LinkId> ids;
  for (const auto& l : n.links())
    if (l.kind == LinkKind::Par) ids.push_back(l.id);
  return ids;
}

Switching make_switching(const Net& host, const std::vector<LinkId>& par_ids,
                         const std::vector<bool>& keep_left) {
  Switching sw;
  for (std::size_t j = 0; j < par_ids.size(); ++j)
    sw.choices.emplace_back(par_ids[j], keep_left[j]);
  RawNet raw;
  if (!resolve_pars(host, par_ids, keep_left, raw)) {
    sw.degenerate = true;
    sw.net = host;  // placeholder; degenerate switchings carry no net
    return sw;
  }
  Hypergraph h;
  h.links = std::move(raw.links);
  h.names = host.names();
  sw.net = Net::make(std::move(h), std::move(raw.arrangement));
  return sw;
}

}  // namespace

std::vector<Switching> switchings(const Net& n) {
  if (n.has_cuts()) throw NetError("switchings: net must be cut-free");
  auto ids = par_ids_of(n);
  std::vector<Switching> out;
  const std::size_t k = ids.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<bool> keep(k);
    for (std::size_t j = 0; j < k; ++j) keep[j] = (mask >> j) & 1;
    out.push_back(make_switching(n, ids, keep));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

NaturalPartition normalize_partition(NaturalPartition p) {
  for (auto& c : p) std::sort(c.begin(), c.end());
  std::sort(p.begin(), p.end());
  return p;
}

std::string partition_to_string(const NaturalPartition& p) {
  std::ostringstream os;
  os << '{';
  for (std::size_t i = 0; i < p.size(); ++i) {
    os << (i ? ",{" : "{");
    for (std::size_t j = 0; j < p[i].size(); ++j) os << (j ? "," : "") << p[i][j];
    os << '}';
  }
  os << '}';
  return os.str();
}

bool partition_orthogonal(const NaturalPartition& p, const NaturalPartition& q) {
  std::set<std::size_t> gp, gq;
  for (const auto& c : p) gp.insert(c.begin(), c.end());
  for (const auto& c : q) gq.insert(c.begin(), c.end());
  if (gp != gq) throw NetError("partition_orthogonal: ground sets differ");
  // union-find over class vertices; one edge per element
  std::size_t nv = p.size() + q.size();
  std::vector<std::size_t> parent(nv);
  for (std::size_t i = 0; i < nv; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<std::size_t, std::size_t> pclass, qclass;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (auto e : p[i]) pclass[e] = i;
  for (std::size_t i = 0; i < q.size(); ++i)
    for (auto e : q[i]) qclass[e] = p.size() + i;
  for (auto e : gp) {
    std::size_t a = find(pclass.at(e)), b = find(qclass.at(e));
    if (a == b) return false;  // the new edge closes a cycle
    parent[a] = b;
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < nv; ++i) roots.insert(find(i));
  return roots.size() <= 1;
}

std::vector<PosId> natural_initial_order(const Net& n) {
  return extract_daimons(n).arrangement();
}

NaturalPartition nat_daimon_part(const Net& n) {
  auto order = natural_initial_order(n);
  std::unordered_map<PosId, std::size_t> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = i + 1;
  NaturalPartition out;
  for (const auto& cls : daimon_part(n)) {
    std::vector<std::size_t> c;
    for (PosId p : cls) c.push_back(index.at(p));
    out.push_back(std::move(c));
  }
  return normalize_partition(std::move(out));
}

NaturalPartition up_initial(const Switching& sw, const Net& host) {
  if (sw.degenerate) throw NetError("up_initial: degenerate switching");
  const Net& s = sw.net;
  // slot map: (daimon id, slot) in the switching -> host initial position
  std::unordered_map<PosId, PosId> to_host;
  for (const Link& l : s.links()) {
    if (l.kind != LinkKind::Daimon) continue;
    const Link* hl = host.link_by_id(l.id);
    if (!hl) throw NetError("up_initial: switching daimon missing from host");
    for (std::size_t i = 0; i < l.targets.size(); ++i)
      to_host[l.targets[i]] = hl->targets[i];
  }
  auto order = natural_initial_order(host);
  std::unordered_map<PosId, std::size_t> index;
  for (std::size_t i = 0; i < order.size(); ++i) index[order[i]] = i + 1;

  NaturalPartition out;
  for (std::size_t ci = 1; ci <= s.n_conclusions(); ++ci) {
    std::vector<std::size_t> cls;
    std::vector<PosId> stack{s.conclusion(ci)};
    std::set<PosId> seen;
    while (!stack.empty()) {
      PosId p = stack.back();
      stack.pop_back();
      if (!seen.insert(p).second) continue;
      const Link& prod = s.producer(p);
      if (prod.kind == LinkKind::Daimon) {
        cls.push_back(index.at(to_host.at(p)));
      } else {
        for (PosId src : prod.sources) stack.push_back(src);
      }
    }
    out.push_back(std::move(cls));
  }
  return normalize_partition(std::move(out));
}

// ---------------------------------------------------------------------------
// Danos-Regnier
// ---------------------------------------------------------------------------

namespace {

// Underlying undirected graph: one vertex per position and per link, one
// edge per (link, incident position).
struct UnderGraph {
  std::vector<std::string> names;                       // vertex names
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj;  // (to, edge id)
  std::size_t n_edges = 0;

  std::size_t add_vertex(std::string name) {
    names.push_back(std::move(name));
    adj.emplace_back();
    return names.size() - 1;
  }
  void add_edge(std::size_t a, std::size_t b) {
    adj[a].emplace_back(b, n_edges);
    adj[b].emplace_back(a, n_edges);
    ++n_edges;
  }
};

UnderGraph build_undergraph(const Net& n) {
  UnderGraph g;
  std::unordered_map<PosId, std::size_t> pos_v;
  for (PosId p : n.body().positions) pos_v[p] = g.add_vertex(n.name_of(p));
  for (const Link& l : n.links()) {
    std::size_t lv = g.add_vertex(std::string("[") + to_string(l.kind) + "]");
    for (PosId p : l.sources) g.add_edge(lv, pos_v.at(p));
    for (PosId p : l.targets) g.add_edge(lv, pos_v.at(p));
  }
  return g;
}

// DFS cycle detection that never reuses the arriving edge; fills a cycle
// witness (vertex names) or two component representatives.
struct AccResult {
  bool acyclic = true;
  bool connected = true;
  std::vector<std::string> cycle;
  std::array<std::string, 2> reps{};
};

AccResult check_acc(const UnderGraph& g) {
  AccResult r;
  std::size_t nv = g.names.size();
  if (nv == 0) return r;
  std::vector<int> state(nv, 0);
  std::vector<std::size_t> parent(nv, SIZE_MAX), parent_edge(nv, SIZE_MAX);
  std::vector<std::size_t> stack{0};
  state[0] = 1;
  std::size_t visited = 1;
  while (!stack.empty() && r.acyclic) {
    std::size_t u = stack.back();
    stack.pop_back();
    for (auto [v, e] : g.adj[u]) {
      if (e == parent_edge[u]) continue;
      if (state[v]) {
        // undirected cycle: walk both endpoints up to their common ancestor
        std::vector<std::size_t> pu, pv;
        for (std::size_t x = u; x != SIZE_MAX; x = parent[x]) pu.push_back(x);
        for (std::size_t x = v; x != SIZE_MAX; x = parent[x]) pv.push_back(x);
        std::set<std::size_t> inu(pu.begin(), pu.end());
        std::size_t meet = SIZE_MAX;
        for (std::size_t x : pv)
          if (inu.count(x)) {
            meet = x;
            break;
          }
        for (std::size_t x : pu) {
          r.cycle.push_back(g.names[x]);
          if (x == meet) break;
        }
        std::vector<std::string> back;
        for (std::size_t x : pv) {
          if (x == meet) break;
          back.push_back(g.names[x]);
        }
        std::reverse(back.begin(), back.end());
        for (auto& s : back) r.cycle.push_back(std::move(s));
        r.acyclic = false;
        break;
      }
      state[v] = 1;
      parent[v] = u;
      parent_edge[v] = e;
      stack.push_back(v);
      ++visited;
    }
  }
  if (visited < nv) {
    r.connected = false;
    r.reps[0] = g.names[0];
    for (std::size_t i = 0; i < nv; ++i)
      if (!state[i]) {
        r.reps[1] = g.names[i];
        break;
      }
  }
  return r;
}

}  // namespace

DRReport dr_check(const Net& n) {
  DRReport report;
  report.correct = true;
  auto ids = par_ids_of(n);
  const std::size_t k = ids.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
    std::vector<bool> keep(k);
    for (std::size_t j = 0; j < k; ++j) keep[j] = (mask >> j) & 1;
    Switching sw = make_switching(n, ids, keep);
    SwitchingEvidence ev;
    ev.choices = sw.choices;
    if (sw.degenerate) {
      ev.kind = SwitchingEvidence::Kind::Cyclic;
      ev.cycle = {"(a par premise loops back onto its own tree)"};
      report.correct = false;
      report.switchings.push_back(std::move(ev));
      continue;
    }
    auto acc = check_acc(build_undergraph(sw.net));
    if (!acc.acyclic) {
      ev.kind = SwitchingEvidence::Kind::Cyclic;
      ev.cycle = std::move(acc.cycle);
      report.correct = false;
    } else if (!acc.connected) {
      ev.kind = SwitchingEvidence::Kind::Disconnected;
      ev.component_reps = std::move(acc.reps);
      report.correct = false;
    } else {
      ev.kind = SwitchingEvidence::Kind::Ok;
    }
    report.switchings.push_back(std::move(ev));
  }
  return report;
}

bool dr_check_partitions(const Net& n) {
  if (n.has_cuts()) throw NetError("dr_check_partitions: net must be cut-free");
  NaturalPartition dai = nat_daimon_part(n);
  for (const auto& sw : switchings(n)) {
    if (sw.degenerate) return false;
    if (!partition_orthogonal(dai, up_initial(sw, n))) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

namespace {

// Syntax forest of a formula over fresh leaves; returns output position and
// the leaves in address order.
struct Forest {
  Hypergraph h;
  PosId output;
  std::vector<PosId> leaves;
};

Forest formula_forest(const FormulaPtr& a) {
  Forest f;
  switch (a->kind) {
    case Formula::Kind::Var: {
      f.output = fresh_pos();
      f.leaves = {f.output};
      return f;
    }
    case Formula::Kind::Tensor:
    case Formula::Kind::Par: {
      Forest l = formula_forest(a->left);
      Forest r = formula_forest(a->right);
      f.h = sum(l.h, r.h);
      f.output = fresh_pos();
      f.h = sum(f.h, mk_link(a->kind == Formula::Kind::Tensor ? LinkKind::Tensor
                                                              : LinkKind::Par,
                             {l.output, r.output}, {f.output}));
      f.leaves = l.leaves;
      f.leaves.insert(f.leaves.end(), r.leaves.begin(), r.leaves.end());
      return f;
    }
  }
  throw NetError("formula_forest: bad formula");
}

// The canonical atomic witness of a: its syntax forest over one daimon.
Net canonical_witness(const FormulaPtr& a) {
  Forest f = formula_forest(a);
  Hypergraph h = sum(mk_link(LinkKind::Daimon, {}, f.leaves), f.h);
  return Net::make(std::move(h), {f.output});
}

// Realize a partition of {1..N} as daimons over the leaves of the dual
// forest; leaves are numbered by address order so the partition transfers
// index to index.
Net partition_test(const FormulaPtr& dual_formula, const NaturalPartition& p) {
  Forest f = formula_forest(dual_formula);
  Hypergraph h = f.h;
  for (const auto& cls : p) {
    std::vector<PosId> targets;
    for (std::size_t i : cls) targets.push_back(f.leaves.at(i - 1));
    h = sum(h, mk_link(LinkKind::Daimon, {}, targets));
  }
  return Net::make(std::move(h), {f.output});
}

}  // namespace

std::vector<Net> tests_from_witness(const Net& s, const FormulaPtr& a) {
  if (!testable(s, {a}, true))
    throw NetError("tests: witness is not atomically testable by the formula");
  std::set<NaturalPartition> partitions;
  for (const auto& sw : switchings(s)) {
    if (sw.degenerate) continue;  // no partition arises from a cyclic switching
    partitions.insert(up_initial(sw, s));
  }
  FormulaPtr d = dual(a);
  std::map<std::string, Net> by_key;
  for (const auto& p : partitions) {
    Net t = partition_test(d, p);
    by_key.emplace(canonical_key(t), std::move(t));
  }
  std::vector<Net> out;
  for (auto& [k, t] : by_key) out.push_back(std::move(t));
  return out;
}

std::vector<Net> tests(const FormulaPtr& a) {
  return tests_from_witness(canonical_witness(a), a);
}

Verdict test_check(const Net& n, const Sequent& g, const SearchOptions& opts) {
  if (n.has_cuts()) return Verdict::False;
  if (n.n_conclusions() != g.size()) return Verdict::False;
  if (!testable(n, g, true)) return Verdict::False;
  std::vector<std::vector<Net>> per_formula;
  for (const auto& a : g) per_formula.push_back(tests(a));
  // cartesian product of test choices
  std::vector<std::size_t> pick(g.size(), 0);
  bool indeterminate = false;
  for (;;) {
    Net opponent;
    bool first = true;
    for (std::size_t i = 0; i < pick.size(); ++i) {
      const Net& t = per_formula[i][pick[i]];
      opponent = first ? t : parallel(opponent, t);
      first = false;
    }
    Verdict v = g.empty() ? Verdict::True : orthogonal(n, opponent, opts).verdict;
    if (v == Verdict::False) return Verdict::False;
    if (v == Verdict::Indeterminate) indeterminate = true;
    // advance
    std::size_t i = 0;
    for (; i < pick.size(); ++i) {
      if (++pick[i] < per_formula[i].size()) break;
      pick[i] = 0;
    }
    if (i == pick.size()) break;
  }
  return indeterminate ? Verdict::Indeterminate : Verdict::True;
}

// ---------------------------------------------------------------------------
// Sequentialization
// ---------------------------------------------------------------------------

namespace {

struct SeqCtx {
  std::unordered_set<std::string> failed;  // canonical key | sequent
  std::size_t fresh_var = 0;
  std::unordered_set<std::string> used_vars;
};

std::string sequent_text(const Sequent& g);

// Wraps `p` (whose conclusion order is `cur`) in exchange nodes until the
// order equals `want`.
ProofPtr reorder(ProofPtr p, std::vector<PosId> cur, const std::vector<PosId>& want) {
  for (std::size_t i = 0; i < want.size(); ++i) {
    if (cur[i] == want[i]) continue;
    std::size_t j = i + 1;
    while (j < cur.size() && cur[j] != want[i]) ++j;
    if (j == cur.size()) throw NetError("sequentialize: reorder mismatch");
    for (; j > i; --j) {
      std::swap(cur[j - 1], cur[j]);
      p = proof_exchange(j, std::move(p));
    }
  }
  return p;
}

std::optional<ProofPtr> seq_rec(const Net& n, const Sequent& g, SeqCtx& ctx);

// Try to close a single-daimon net with the daimon rule plus exchanges.
std::optional<ProofPtr> seq_daimon(const Net& n, const Sequent& g) {
  if (n.links().size() != 1 || n.links()[0].kind != LinkKind::Daimon) return std::nullopt;
  const Link& d = n.links()[0];
  std::unordered_map<PosId, FormulaPtr> formula_at;
  for (std::size_t i = 0; i < g.size(); ++i) formula_at[n.conclusion(i + 1)] = g[i];
  Sequent base;
  for (PosId t : d.targets) base.push_back(formula_at.at(t));
  ProofPtr p = proof_daimon(std::move(base));
  return reorder(std::move(p), d.targets, n.arrangement());
}

Net subnet(const Net& host, const std::vector<std::size_t>& link_indices,
           const std::vector<PosId>& arrangement) {
  Hypergraph h;
  for (std::size_t i : link_indices) h.links.push_back(host.links()[i]);
  h.names = host.names();
  return Net::make(std::move(h), arrangement);
}

// Components of the net's links with one link removed.
std::vector<int> components_without(const Net& n, LinkId removed) {
  const auto& links = n.links();
  std::unordered_map<PosId, std::vector<std::size_t>> touch;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i].id == removed) continue;
    for (PosId p : links[i].sources) touch[p].push_back(i);
    for (PosId p : links[i].targets) touch[p].push_back(i);
  }
  std::vector<int> comp(links.size(), -1);
  int c = 0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i].id == removed || comp[i] >= 0) continue;
    std::vector<std::size_t> stack{i};
    comp[i] = c;
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      auto spread = [&](PosId p) {
        for (std::size_t j : touch[p])
          if (comp[j] < 0) {
            comp[j] = c;
            stack.push_back(j);
          }
      };
      for (PosId p : links[cur].sources) spread(p);
      for (PosId p : links[cur].targets) spread(p);
    }
    ++c;
  }
  return comp;
}

FormulaPtr fresh_pattern_formula(const Net& n, PosId root, SeqCtx& ctx);

// Split on a final binary link (terminal tensor or cut). Returns the proof
// or nothing when the link does not split the net in two.
std::optional<ProofPtr> seq_split(const Net& n, const Sequent& g, const Link& l,
                                  FormulaPtr left_formula, FormulaPtr right_formula,
                                  std::optional<std::size_t> tensor_conc_index,
                                  SeqCtx& ctx) {
  auto comp = components_without(n, l.id);
  const auto& links = n.links();
  std::unordered_map<PosId, std::size_t> producer_index;
  for (std::size_t i = 0; i < links.size(); ++i)
    for (PosId t : links[i].targets) producer_index[t] = i;
  int c1 = comp[producer_index.at(l.sources[0])];
  int c2 = comp[producer_index.at(l.sources[1])];
  if (c1 == c2) return std::nullopt;

  std::vector<std::size_t> left_links, right_links;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (links[i].id == l.id) continue;
    // floating components go left; they fail later, which is correct,
    // since a disconnected net admits no proof
    if (comp[i] == c2) right_links.push_back(i);
    else left_links.push_back(i);
  }
  std::set<std::size_t> left_set(left_links.begin(), left_links.end());

  std::vector<PosId> left_arr{l.sources[0]}, right_arr{l.sources[1]};
  Sequent left_seq{left_formula}, right_seq{right_formula};
  std::unordered_map<PosId, FormulaPtr> formula_at;
  for (std::size_t i = 0; i < g.size(); ++i) formula_at[n.conclusion(i + 1)] = g[i];
  for (std::size_t i = 1; i <= n.n_conclusions(); ++i) {
    if (tensor_conc_index && i == *tensor_conc_index) continue;
    PosId p = n.conclusion(i);
    bool on_left = left_set.count(producer_index.at(p)) > 0;
    (on_left ? left_arr : right_arr).push_back(p);
    (on_left ? left_seq : right_seq).push_back(formula_at.at(p));
  }

  auto pl = seq_rec(subnet(n, left_links, left_arr), left_seq, ctx);
  if (!pl) return std::nullopt;
  auto pr = seq_rec(subnet(n, right_links, right_arr), right_seq, ctx);
  if (!pr) return std::nullopt;

  ProofPtr p;
  std::vector<PosId> cur;
  if (tensor_conc_index) {
    p = proof_tensor(*pl, *pr);
    cur.assign(left_arr.begin() + 1, left_arr.end());
    cur.insert(cur.end(), right_arr.begin() + 1, right_arr.end());
    cur.push_back(n.conclusion(*tensor_conc_index));
  } else {
    p = proof_cut(left_formula, *pl, *pr);
    cur.assign(left_arr.begin() + 1, left_arr.end());
    cur.insert(cur.end(), right_arr.begin() + 1, right_arr.end());
  }
  return reorder(std::move(p), std::move(cur), n.arrangement());
}

std::optional<ProofPtr> seq_rec(const Net& n, const Sequent& g, SeqCtx& ctx) {
  std::string memo_key = canonical_key(n) + "!" + sequent_text(g);
  if (ctx.failed.count(memo_key)) return std::nullopt;

  // 1. strip a terminal par
  for (std::size_t i = 1; i <= n.n_conclusions(); ++i) {
    PosId c = n.conclusion(i);
    const Link& prod = n.producer(c);
    if (prod.kind != LinkKind::Par) continue;
    if (g[i - 1]->kind != Formula::Kind::Par) {
      ctx.failed.insert(memo_key);
      return std::nullopt;  // connective mismatch: no labelling exists
    }
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < n.links().size(); ++j)
      if (n.links()[j].id != prod.id) rest.push_back(j);
    std::vector<PosId> child_arr{prod.sources[0], prod.sources[1]};
    Sequent child_seq{g[i - 1]->left, g[i - 1]->right};
    for (std::size_t j = 1; j <= n.n_conclusions(); ++j) {
      if (j == i) continue;
      child_arr.push_back(n.conclusion(j));
      child_seq.push_back(g[j - 1]);
    }
    auto child = seq_rec(subnet(n, rest, child_arr), child_seq, ctx);
    if (!child) {
      ctx.failed.insert(memo_key);
      return std::nullopt;
    }
    ProofPtr p = proof_par(*child);
    std::vector<PosId> cur{c};
    for (std::size_t j = 1; j <= n.n_conclusions(); ++j)
      if (j != i) cur.push_back(n.conclusion(j));
    return reorder(std::move(p), std::move(cur), n.arrangement());
  }

  // 2. single daimon
  if (auto p = seq_daimon(n, g)) return p;

  // 3. splitting terminal tensor
  for (std::size_t i = 1; i <= n.n_conclusions(); ++i) {
    PosId c = n.conclusion(i);
    const Link& prod = n.producer(c);
    if (prod.kind != LinkKind::Tensor) continue;
    if (g[i - 1]->kind != Formula::Kind::Tensor) {
      ctx.failed.insert(memo_key);
      return std::nullopt;
    }
    if (auto p = seq_split(n, g, prod, g[i - 1]->left, g[i - 1]->right, i, ctx)) return p;
  }

  // 4. splitting cut; the cut formula is inferred from the pattern forests,
  // which must have dual shapes (their leaves are fresh distinct variables)
  for (const Link& l : n.links()) {
    if (l.kind != LinkKind::Cut) continue;
    FormulaPtr a = fresh_pattern_formula(n, l.sources[0], ctx);
    FormulaPtr b = fresh_pattern_formula(n, l.sources[1], ctx);
    if (!a || !b) continue;
    Substitution s;
    if (!instance_of({b}, {dual(a)}, &s)) continue;
    if (auto p = seq_split(n, g, l, a, dual(a), std::nullopt, ctx)) return p;
  }

  ctx.failed.insert(memo_key);
  return std::nullopt;
}

// A formula over fresh variables matching the pattern forest above `root`;
// null when a cut or cycle sits above.
FormulaPtr fresh_pattern_formula(const Net& n, PosId root, SeqCtx& ctx) {
  const Link& prod = n.producer(root);
  switch (prod.kind) {
    case LinkKind::Daimon: {
      std::string name;
      do {
        name = "K" + std::to_string(++ctx.fresh_var);
      } while (ctx.used_vars.count(name));
      return fvar(name);
    }
    case LinkKind::Tensor: {
      auto l = fresh_pattern_formula(n, prod.sources[0], ctx);
      auto r = fresh_pattern_formula(n, prod.sources[1], ctx);
      return l && r ? ftensor(l, r) : nullptr;
    }
    case LinkKind::Par: {
      auto l = fresh_pattern_formula(n, prod.sources[0], ctx);
      auto r = fresh_pattern_formula(n, prod.sources[1], ctx);
      return l && r ? fpar(l, r) : nullptr;
    }
    case LinkKind::Cut:
      break;
  }
  return nullptr;
}

std::string sequent_text(const Sequent& g) {
  std::ostringstream os;
  for (const auto& f : g) {
    std::vector<std::pair<const Formula*, int>> stack{{f.get(), 0}};
    while (!stack.empty()) {
      auto [cur, phase] = stack.back();
      stack.pop_back();
      if (cur->kind == Formula::Kind::Var) {
        os << cur->var << (cur->positive ? "" : "^");
        continue;
      }
      if (phase == 0) {
        os << '(';
        stack.push_back({cur, 1});
        stack.push_back({cur->left.get(), 0});
      } else if (phase == 1) {
        os << (cur->kind == Formula::Kind::Tensor ? '*' : '%');
        stack.push_back({cur, 2});
        stack.push_back({cur->right.get(), 0});
      } else {
        os << ')';
      }
    }
    os << ',';
  }
  return os.str();
}

void collect_vars(const FormulaPtr& f, std::unordered_set<std::string>& out) {
  if (f->kind == Formula::Kind::Var) {
    out.insert(f->var);
    return;
  }
  collect_vars(f->left, out);
  collect_vars(f->right, out);
}

}  // namespace

std::optional<ProofPtr> sequentialize(const Net& n, const Sequent& g) {
  if (n.n_conclusions() != g.size())
    throw NetError("sequentialize: conclusion count differs from sequent length");
  if (!n.has_cuts() && !testable(n, g, false)) return std::nullopt;
  SeqCtx ctx;
  for (const auto& f : g) collect_vars(f, ctx.used_vars);
  return seq_rec(n, g, ctx);
}

// ---------------------------------------------------------------------------
// Failure classification
// ---------------------------------------------------------------------------

const char* to_string(FailureClass c) {
  switch (c) {
    case FailureClass::SingleDaimonZero: return "single-zero-daimon";
    case FailureClass::MultipleZeroDaimons: return "multiple-zero-daimons";
    case FailureClass::CyclicCutStuck: return "cyclic-cut";
    case FailureClass::ClashStuck: return "clash-cut";
  }
  return "?";
}

Classification classify_failure(const Net& nf) {
  bool cyclic = false;
  for (const Link& l : nf.links()) {
    if (l.kind != LinkKind::Cut) continue;
    CutKind k = cut_kind(nf, l.id);
    if (k.cls == CutClass::Clash) return {FailureClass::ClashStuck, 0};
    if (k.cls == CutClass::Glueing && k.cyclic) cyclic = true;
  }
  if (cyclic) return {FailureClass::CyclicCutStuck, 0};
  std::size_t zeros = 0;
  for (const Link& l : nf.links()) {
    if (l.kind != LinkKind::Daimon || !l.targets.empty())
      throw NetError("classify_failure: not a normal form of a closed interaction");
    ++zeros;
  }
  if (zeros == 1) return {FailureClass::SingleDaimonZero, 1};
  if (zeros >= 2) return {FailureClass::MultipleZeroDaimons, zeros};
  throw NetError("classify_failure: empty net");
}

}  // namespace mllnet
