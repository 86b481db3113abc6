#include "mllnet/rewrite.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>

namespace mllnet {

const char* to_string(CutClass c) {
  switch (c) {
    case CutClass::Multiplicative: return "multiplicative";
    case CutClass::Clash: return "clash";
    case CutClass::Glueing: return "glueing";
    case CutClass::Reversible: return "reversible";
    case CutClass::Irreversible: return "irreversible";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::True: return "true";
    case Verdict::False: return "false";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

CutKind cut_kind(const Net& n, LinkId cut) {
  const Link* c = n.link_by_id(cut);
  if (!c || c->kind != LinkKind::Cut) throw NetError("cut_kind: no such cut link");
  const Link& a = n.producer(c->sources[0]);
  const Link& b = n.producer(c->sources[1]);
  CutKind k{};
  k.cyclic = (a.id == b.id);
  auto is = [&](LinkKind x, LinkKind y) {
    return (a.kind == x && b.kind == y) || (a.kind == y && b.kind == x);
  };
  if (is(LinkKind::Tensor, LinkKind::Par)) k.cls = CutClass::Multiplicative;
  else if (is(LinkKind::Tensor, LinkKind::Tensor) || is(LinkKind::Par, LinkKind::Par))
    k.cls = CutClass::Clash;
  else if (is(LinkKind::Daimon, LinkKind::Daimon)) k.cls = CutClass::Glueing;
  else if (is(LinkKind::Tensor, LinkKind::Daimon)) k.cls = CutClass::Reversible;
  else k.cls = CutClass::Irreversible;
  return k;
}

// ---------------------------------------------------------------------------
// Redex enumeration
// ---------------------------------------------------------------------------

namespace {

// All order-preserving two-class splits of `before`/`after`; in full mode,
// additionally every permutation inside each of the four class parts.
std::vector<SplitChoice> enumerate_splits(const std::vector<PosId>& before,
                                          const std::vector<PosId>& after,
                                          SplitMode mode) {
  std::vector<PosId> others = before;
  others.insert(others.end(), after.begin(), after.end());
  const std::size_t m = others.size();
  const std::size_t nb = before.size();
  std::vector<SplitChoice> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
    SplitChoice base;
    for (std::size_t i = 0; i < m; ++i) {
      bool in_first = (mask >> i) & 1;
      bool in_before = i < nb;
      auto& dst = in_first ? (in_before ? base.first_before : base.first_after)
                           : (in_before ? base.second_before : base.second_after);
      dst.push_back(others[i]);
    }
    if (mode == SplitMode::OrderPreserving) {
      out.push_back(std::move(base));
      continue;
    }
    auto perms = [](std::vector<PosId> v) {
      std::vector<std::vector<PosId>> ps;
      std::sort(v.begin(), v.end());
      do ps.push_back(v);
      while (std::next_permutation(v.begin(), v.end()));
      return ps;
    };
    for (auto& fb : perms(base.first_before))
      for (auto& fa : perms(base.first_after))
        for (auto& sb : perms(base.second_before))
          for (auto& sa : perms(base.second_after))
            out.push_back(SplitChoice{fb, fa, sb, sa});
  }
  return out;
}

}  // namespace

std::vector<ReductionChoice> redexes(const Net& n, SplitMode mode) {
  std::vector<ReductionChoice> out;
  for (const Link& l : n.links()) {
    if (l.kind != LinkKind::Cut) continue;
    CutKind k = cut_kind(n, l.id);
    if (!k.reducible()) continue;
    if (k.cls != CutClass::Irreversible) {
      out.push_back(ReductionChoice{l.id, k.cls, std::nullopt});
      continue;
    }
    const Link& a = n.producer(l.sources[0]);
    const Link& b = n.producer(l.sources[1]);
    const Link& dai = a.kind == LinkKind::Daimon ? a : b;
    PosId premise = a.kind == LinkKind::Daimon ? l.sources[0] : l.sources[1];
    auto it = std::find(dai.targets.begin(), dai.targets.end(), premise);
    std::vector<PosId> before(dai.targets.begin(), it);
    std::vector<PosId> after(it + 1, dai.targets.end());
    for (auto& s : enumerate_splits(before, after, mode))
      out.push_back(ReductionChoice{l.id, k.cls, std::move(s)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Single step
// ---------------------------------------------------------------------------

namespace {

void inherit_name(NameMap& names, const NameMap& src, PosId parent, PosId child,
                  const char* suffix) {
  auto it = src.find(parent);
  if (it != src.end()) names[child] = it->second + suffix;
}

// Fresh ids local to one rewrite, derived from the net's maximal id.
// step(n, c) is a pure function of its arguments, so a witness path replays
// to bitwise-identical successor nets.
struct LocalFresh {
  std::uint64_t next;
  explicit LocalFresh(const Net& n) {
    next = 1;
    for (const Link& l : n.links()) {
      next = std::max(next, l.id + 1);
      for (PosId p : l.sources) next = std::max(next, p + 1);
      for (PosId p : l.targets) next = std::max(next, p + 1);
    }
  }
  std::uint64_t operator()() { return next++; }
};

Net rebuild(const Net& n, const std::set<LinkId>& removed, std::vector<Link> added,
            NameMap extra_names) {
  Hypergraph h;
  for (const Link& l : n.links())
    if (!removed.count(l.id)) h.links.push_back(l);
  for (Link& l : added) h.links.push_back(std::move(l));
  h.names = n.names();
  for (auto& [p, name] : extra_names) h.names[p] = std::move(name);
  // conclusions are untouched by every rule
  return Net::make(std::move(h), n.arrangement());
}

}  // namespace

Net step(const Net& n, const ReductionChoice& c) {
  const Link* cutp = n.link_by_id(c.cut);
  if (!cutp || cutp->kind != LinkKind::Cut) throw NetError("step: no such cut");
  const Link cut = *cutp;
  CutKind k = cut_kind(n, c.cut);
  if (!k.reducible()) throw NetError("step: cut is not reducible");
  if (k.cls != c.cls) throw NetError("step: choice class does not match the cut");

  const Link a = n.producer(cut.sources[0]);
  const Link b = n.producer(cut.sources[1]);
  LocalFresh fresh(n);

  switch (k.cls) {
    case CutClass::Glueing: {
      // dai<p...> + cut(p_i, q_j) + dai<q...>  ->  dai<p...^i . q...^j>
      Link fused;
      fused.id = fresh();
      fused.kind = LinkKind::Daimon;
      for (PosId p : a.targets)
        if (p != cut.sources[0]) fused.targets.push_back(p);
      for (PosId q : b.targets)
        if (q != cut.sources[1]) fused.targets.push_back(q);
      return rebuild(n, {cut.id, a.id, b.id}, {std::move(fused)}, {});
    }
    case CutClass::Multiplicative: {
      const Link& par = a.kind == LinkKind::Par ? a : b;
      const Link& ten = a.kind == LinkKind::Par ? b : a;
      Link c1{fresh(), LinkKind::Cut, {par.sources[0], ten.sources[0]}, {}};
      Link c2{fresh(), LinkKind::Cut, {par.sources[1], ten.sources[1]}, {}};
      return rebuild(n, {cut.id, par.id, ten.id}, {std::move(c1), std::move(c2)}, {});
    }
    case CutClass::Reversible: {
      const Link& ten = a.kind == LinkKind::Tensor ? a : b;
      const Link& dai = a.kind == LinkKind::Tensor ? b : a;
      PosId premise = a.kind == LinkKind::Tensor ? cut.sources[1] : cut.sources[0];
      PosId q1 = fresh(), q2 = fresh();
      NameMap names;
      inherit_name(names, n.names(), premise, q1, ".1");
      inherit_name(names, n.names(), premise, q2, ".2");
      Link nd;
      nd.id = fresh();
      nd.kind = LinkKind::Daimon;
      for (PosId t : dai.targets) {
        if (t == premise) {
          nd.targets.push_back(q1);
          nd.targets.push_back(q2);
        } else {
          nd.targets.push_back(t);
        }
      }
      Link c1{fresh(), LinkKind::Cut, {ten.sources[0], q1}, {}};
      Link c2{fresh(), LinkKind::Cut, {ten.sources[1], q2}, {}};
      return rebuild(n, {cut.id, ten.id, dai.id},
                     {std::move(nd), std::move(c1), std::move(c2)}, std::move(names));
    }
    case CutClass::Irreversible: {
      if (!c.split) throw NetError("step: irreversible cut needs a split");
      const Link& par = a.kind == LinkKind::Par ? a : b;
      const Link& dai = a.kind == LinkKind::Par ? b : a;
      PosId premise = a.kind == LinkKind::Par ? cut.sources[1] : cut.sources[0];
      // the split must cover exactly the daimon's other targets
      {
        std::multiset<PosId> want, got;
        for (PosId t : dai.targets)
          if (t != premise) want.insert(t);
        for (const auto* v : {&c.split->first_before, &c.split->first_after,
                              &c.split->second_before, &c.split->second_after})
          for (PosId p : *v) got.insert(p);
        if (want != got) throw NetError("step: split does not partition the daimon context");
      }
      PosId h1 = fresh(), h2 = fresh();
      NameMap names;
      inherit_name(names, n.names(), premise, h1, ".1");
      inherit_name(names, n.names(), premise, h2, ".2");
      Link d1;
      d1.id = fresh();
      d1.kind = LinkKind::Daimon;
      d1.targets = c.split->first_before;
      d1.targets.push_back(h1);
      d1.targets.insert(d1.targets.end(), c.split->first_after.begin(),
                        c.split->first_after.end());
      Link d2;
      d2.id = fresh();
      d2.kind = LinkKind::Daimon;
      d2.targets = c.split->second_before;
      d2.targets.push_back(h2);
      d2.targets.insert(d2.targets.end(), c.split->second_after.begin(),
                        c.split->second_after.end());
      Link c1{fresh(), LinkKind::Cut, {par.sources[0], h1}, {}};
      Link c2{fresh(), LinkKind::Cut, {par.sources[1], h2}, {}};
      return rebuild(n, {cut.id, par.id, dai.id},
                     {std::move(d1), std::move(d2), std::move(c1), std::move(c2)},
                     std::move(names));
    }
    case CutClass::Clash:
      break;
  }
  throw NetError("step: unreachable");
}

Net replay(const Net& n, const std::vector<ReductionChoice>& path) {
  Net cur = n;
  for (const auto& c : path) cur = step(cur, c);
  return cur;
}

std::pair<std::size_t, std::size_t> sn_measure(const Net& n) {
  return {n.count(LinkKind::Tensor) + n.count(LinkKind::Par), n.count(LinkKind::Cut)};
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

namespace {

std::vector<ReductionChoice> policy_choices(const Net& n, const SearchOptions& opts) {
  auto all = redexes(n, opts.splits);
  if (opts.policy == SearchPolicy::Exhaustive) return all;
  // Eager: non-irreversible cuts may always be anticipated, so a single
  // deterministic representative is enough; branch only on the splits.
  for (auto cls : {CutClass::Multiplicative, CutClass::Reversible, CutClass::Glueing})
    for (const auto& c : all)
      if (c.cls == cls) return {c};
  return all;  // only irreversible choices remain
}

}  // namespace

std::vector<std::size_t> ReductionGraph::normal_forms() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].expanded && nodes[i].out.empty()) out.push_back(i);
  return out;
}

ReductionGraph explore(const Net& n, const SearchOptions& opts) {
  ReductionGraph g;
  g.nodes.push_back({n, canonical_key(n), {}, false});
  g.index.emplace(g.nodes[0].key, 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty()) {
    if (g.nodes.size() > opts.limits.max_states || g.steps_taken > opts.limits.max_steps) {
      g.complete = false;
      break;
    }
    std::size_t cur = queue.front();
    queue.pop_front();
    auto choices = policy_choices(g.nodes[cur].net, opts);
    for (auto& c : choices) {
      ++g.steps_taken;
      if (g.steps_taken > opts.limits.max_steps) {
        g.complete = false;
        break;
      }
      Net succ = step(g.nodes[cur].net, c);
      std::string key = canonical_key(succ);
      auto [it, inserted] = g.index.emplace(key, g.nodes.size());
      if (inserted) {
        g.nodes.push_back({std::move(succ), std::move(key), {}, false});
        queue.push_back(it->second);
      }
      g.nodes[cur].out.push_back({std::move(c), it->second});
    }
    if (!g.complete) break;
    g.nodes[cur].expanded = true;
  }
  return g;
}

Net interaction(const Net& s, const Net& t) {
  Net t2 = rename_apart(t);
  std::size_t k = std::min(s.n_conclusions(), t2.n_conclusions());
  Hypergraph h = sum(s.body(), t2.body());
  for (std::size_t i = 1; i <= k; ++i) {
    h = sum(h, mk_link(LinkKind::Cut, {s.conclusion(i), t2.conclusion(i)}, {}));
  }
  std::vector<PosId> arr;
  if (s.n_conclusions() > k)
    arr.assign(s.arrangement().begin() + k, s.arrangement().end());
  else if (t2.n_conclusions() > k)
    arr.assign(t2.arrangement().begin() + k, t2.arrangement().end());
  return Net::make(std::move(h), std::move(arr));
}

OrthoResult reduces_to_zero_daimon(const Net& n, const SearchOptions& opts) {
  struct NodeRec {
    Net net;
    std::size_t parent;
    ReductionChoice via;
  };
  std::vector<NodeRec> nodes;
  std::unordered_map<std::string, std::size_t> seen;
  OrthoResult res;
  auto finish = [&](std::size_t idx) {
    std::vector<ReductionChoice> path;
    while (idx != 0) {
      path.push_back(nodes[idx].via);
      idx = nodes[idx].parent;
    }
    std::reverse(path.begin(), path.end());
    res.verdict = Verdict::True;
    res.witness = std::move(path);
  };
  nodes.push_back({n, 0, {}});
  seen.emplace(canonical_key(n), 0);
  if (n.is_zero_daimon()) {
    finish(0);
    return res;
  }
  std::deque<std::size_t> queue{0};
  std::size_t steps = 0;
  bool complete = true;
  while (!queue.empty()) {
    if (nodes.size() > opts.limits.max_states || steps > opts.limits.max_steps) {
      complete = false;
      break;
    }
    std::size_t cur = queue.front();
    queue.pop_front();
    for (auto& c : policy_choices(nodes[cur].net, opts)) {
      ++steps;
      if (steps > opts.limits.max_steps) {
        complete = false;
        break;
      }
      Net succ = step(nodes[cur].net, c);
      std::string key = canonical_key(succ);
      auto [it, inserted] = seen.emplace(std::move(key), nodes.size());
      if (!inserted) continue;
      nodes.push_back({std::move(succ), cur, c});
      if (nodes.back().net.is_zero_daimon()) {
        finish(nodes.size() - 1);
        return res;
      }
      queue.push_back(nodes.size() - 1);
    }
    if (!complete) break;
  }
  res.verdict = complete ? Verdict::False : Verdict::Indeterminate;
  return res;
}

OrthoResult orthogonal(const Net& s, const Net& t, const SearchOptions& opts) {
  return reduces_to_zero_daimon(interaction(s, t), opts);
}

// ---------------------------------------------------------------------------
// Commutation oracles
// ---------------------------------------------------------------------------

namespace {

// BFS closure of `roots` under steps whose choice satisfies `keep`;
// returns every reached state keyed by canonical form.
std::unordered_map<std::string, Net> closure(std::vector<Net> roots,
                                             const SearchOptions& opts,
                                             bool (*keep)(const ReductionChoice&)) {
  std::unordered_map<std::string, Net> seen;
  std::deque<std::string> queue;
  for (Net& r : roots) {
    std::string key = canonical_key(r);
    if (seen.emplace(key, std::move(r)).second) queue.push_back(key);
  }
  std::size_t steps = 0;
  while (!queue.empty() && seen.size() <= opts.limits.max_states &&
         steps <= opts.limits.max_steps) {
    std::string cur = queue.front();
    queue.pop_front();
    Net net = seen.at(cur);
    for (auto& c : redexes(net, opts.splits)) {
      if (!keep(c)) continue;
      ++steps;
      Net succ = step(net, c);
      std::string key = canonical_key(succ);
      if (seen.emplace(key, std::move(succ)).second) queue.push_back(key);
    }
  }
  return seen;
}

}  // namespace

bool check_factorization(const Net& n, const std::vector<ReductionChoice>& path,
                         const SearchOptions& opts) {
  std::string target = canonical_key(replay(n, path));
  auto mults = closure({n}, opts,
                       [](const ReductionChoice& c) { return c.cls == CutClass::Multiplicative; });
  std::vector<Net> frontier;
  frontier.reserve(mults.size());
  for (auto& [k, net] : mults) frontier.push_back(net);
  auto rest = closure(std::move(frontier), opts,
                      [](const ReductionChoice& c) { return c.cls != CutClass::Multiplicative; });
  return rest.count(target) > 0;
}

bool check_delay_irreversible(const Net& n, const std::vector<ReductionChoice>& path,
                              const SearchOptions& opts) {
  if (path.empty() || path.front().cls != CutClass::Irreversible)
    throw NetError("check_delay_irreversible: path must start with an irreversible step");
  LinkId c = path.front().cut;
  std::string target = canonical_key(replay(n, path));
  // closure avoiding the cut c, testing c as the final step at every state
  std::unordered_map<std::string, Net> seen;
  std::deque<std::string> queue;
  seen.emplace(canonical_key(n), n);
  queue.push_back(canonical_key(n));
  std::size_t steps = 0;
  while (!queue.empty() && seen.size() <= opts.limits.max_states &&
         steps <= opts.limits.max_steps) {
    std::string curk = queue.front();
    queue.pop_front();
    Net cur = seen.at(curk);
    for (auto& ch : redexes(cur, opts.splits)) {
      ++steps;
      if (ch.cut == c) {
        if (canonical_key(step(cur, ch)) == target) return true;
        continue;
      }
      Net succ = step(cur, ch);
      std::string key = canonical_key(succ);
      if (seen.emplace(key, std::move(succ)).second) queue.push_back(key);
    }
  }
  return false;
}

bool check_anticipate(const Net& n, const std::vector<ReductionChoice>& path,
                      std::size_t step_index, const SearchOptions& opts) {
  if (step_index >= path.size()) throw NetError("check_anticipate: bad index");
  LinkId c = path[step_index].cut;
  if (path[step_index].cls == CutClass::Irreversible)
    throw NetError("check_anticipate: cut must not be irreversible");
  if (!n.link_by_id(c)) throw NetError("check_anticipate: cut must occur in the start net");
  if (!cut_kind(n, c).reducible()) return false;  // hypothesis fails
  std::string target = canonical_key(replay(n, path));
  std::vector<Net> roots;
  for (auto& ch : redexes(n, opts.splits))
    if (ch.cut == c) roots.push_back(step(n, ch));
  auto reach = closure(std::move(roots), opts, [](const ReductionChoice&) { return true; });
  return reach.count(target) > 0;
}

}  // namespace mllnet
