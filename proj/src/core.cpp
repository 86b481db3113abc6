#include "mllnet/core.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <map>
#include <set>
#include <sstream>

namespace mllnet {

namespace {
std::atomic<std::uint64_t> g_next_id{1};
}  // namespace

PosId fresh_pos() { return g_next_id.fetch_add(1); }

std::vector<PosId> fresh_positions(std::size_t n) {
  std::vector<PosId> out(n);
  for (auto& p : out) p = fresh_pos();
  return out;
}

LinkId fresh_link() { return g_next_id.fetch_add(1); }

static LinkId fresh_link_id() { return fresh_link(); }

const char* to_string(LinkKind k) {
  switch (k) {
    case LinkKind::Daimon: return "dai";
    case LinkKind::Tensor: return "tensor";
    case LinkKind::Par: return "par";
    case LinkKind::Cut: return "cut";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Hypergraph
// ---------------------------------------------------------------------------

static void sort_unique(std::vector<PosId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

std::vector<PosId> Hypergraph::conclusions() const {
  std::set<PosId> srcs;
  for (const auto& l : links)
    for (PosId p : l.sources) srcs.insert(p);
  std::vector<PosId> out;
  for (PosId p : positions)
    if (!srcs.count(p)) out.push_back(p);
  return out;
}

std::vector<PosId> Hypergraph::premises() const {
  std::set<PosId> tgts;
  for (const auto& l : links)
    for (PosId p : l.targets) tgts.insert(p);
  std::vector<PosId> out;
  for (PosId p : positions)
    if (!tgts.count(p)) out.push_back(p);
  return out;
}

std::vector<PosId> Hypergraph::isolated() const {
  std::set<PosId> touched;
  for (const auto& l : links) {
    for (PosId p : l.sources) touched.insert(p);
    for (PosId p : l.targets) touched.insert(p);
  }
  std::vector<PosId> out;
  for (PosId p : positions)
    if (!touched.count(p)) out.push_back(p);
  return out;
}

bool Hypergraph::target_surjective() const {
  std::set<PosId> tgts;
  for (const auto& l : links)
    for (PosId p : l.targets) tgts.insert(p);
  for (PosId p : positions)
    if (!tgts.count(p)) return false;
  return true;
}

bool Hypergraph::source_disjoint() const {
  std::set<PosId> seen;
  for (const auto& l : links)
    for (PosId p : l.sources)
      if (!seen.insert(p).second) return false;
  return true;
}

bool Hypergraph::target_disjoint() const {
  std::set<PosId> seen;
  for (const auto& l : links)
    for (PosId p : l.targets)
      if (!seen.insert(p).second) return false;
  return true;
}

static void check_arity(LinkKind kind, std::size_t nsrc, std::size_t ntgt) {
  switch (kind) {
    case LinkKind::Daimon:
      if (nsrc != 0) throw NetError("daimon link cannot have inputs");
      break;
    case LinkKind::Cut:
      if (nsrc != 2 || ntgt != 0) throw NetError("cut link must be 2 -> 0");
      break;
    case LinkKind::Tensor:
    case LinkKind::Par:
      if (nsrc != 2 || ntgt != 1)
        throw NetError(std::string(to_string(kind)) + " link must be 2 -> 1");
      break;
  }
}

static void check_link_positions(const Link& l) {
  std::set<PosId> s(l.sources.begin(), l.sources.end());
  std::set<PosId> t(l.targets.begin(), l.targets.end());
  if (s.size() != l.sources.size())
    throw NetError("repeated position in a source list");
  if (t.size() != l.targets.size())
    throw NetError("repeated position in a target list");
  for (PosId p : l.sources)
    if (t.count(p)) throw NetError("loop: position is both source and target of one link");
}

Hypergraph mk_link(LinkKind kind, std::vector<PosId> sources,
                   std::vector<PosId> targets, NameMap names) {
  check_arity(kind, sources.size(), targets.size());
  Link l{fresh_link_id(), kind, std::move(sources), std::move(targets)};
  check_link_positions(l);
  Hypergraph h;
  h.positions.insert(h.positions.end(), l.sources.begin(), l.sources.end());
  h.positions.insert(h.positions.end(), l.targets.begin(), l.targets.end());
  sort_unique(h.positions);
  h.links.push_back(std::move(l));
  h.names = std::move(names);
  return h;
}

Hypergraph sum(const Hypergraph& a, const Hypergraph& b) {
  Hypergraph out = a;
  std::set<LinkId> used;
  for (const auto& l : a.links) used.insert(l.id);
  for (auto l : b.links) {
    if (used.count(l.id)) l.id = fresh_link_id();  // rename on clash
    used.insert(l.id);
    out.links.push_back(std::move(l));
  }
  out.positions.insert(out.positions.end(), b.positions.begin(), b.positions.end());
  sort_unique(out.positions);
  for (const auto& [p, n] : b.names) out.names.emplace(p, n);
  return out;
}

// ---------------------------------------------------------------------------
// Net
// ---------------------------------------------------------------------------

void Net::index() {
  producer_.clear();
  consumer_.clear();
  by_id_.clear();
  for (std::size_t i = 0; i < body_.links.size(); ++i) {
    const Link& l = body_.links[i];
    by_id_[l.id] = i;
    for (PosId p : l.targets) producer_[p] = i;
    for (PosId p : l.sources) consumer_[p] = i;
  }
}

Net Net::make(Hypergraph body, std::vector<PosId> arrangement) {
  for (const auto& l : body.links) {
    check_arity(l.kind, l.sources.size(), l.targets.size());
    check_link_positions(l);
  }
  for (const auto& l : body.links) {
    body.positions.insert(body.positions.end(), l.sources.begin(), l.sources.end());
    body.positions.insert(body.positions.end(), l.targets.begin(), l.targets.end());
  }
  sort_unique(body.positions);
  if (!body.source_disjoint()) throw NetError("two links share a source position");
  if (!body.target_disjoint()) throw NetError("two links share a target position");
  if (!body.target_surjective())
    throw NetError("position is the target of no link (not target-surjective)");
  {
    std::set<LinkId> ids;
    for (const auto& l : body.links)
      if (!ids.insert(l.id).second) throw NetError("duplicate link id");
  }
  // drop display names of positions no longer present
  {
    std::set<PosId> live(body.positions.begin(), body.positions.end());
    for (auto it = body.names.begin(); it != body.names.end();)
      it = live.count(it->first) ? std::next(it) : body.names.erase(it);
  }
  auto conc = body.conclusions();
  std::set<PosId> cset(conc.begin(), conc.end());
  std::set<PosId> aset(arrangement.begin(), arrangement.end());
  if (aset.size() != arrangement.size())
    throw NetError("arrangement repeats a position");
  if (aset != cset)
    throw NetError("arrangement is not a bijection onto the conclusions");

  Net n;
  n.body_ = std::move(body);
  n.arrangement_ = std::move(arrangement);
  n.index();
  return n;
}

Net Net::make_default_order(Hypergraph body) {
  std::set<PosId> srcs;
  for (const auto& l : body.links)
    for (PosId p : l.sources) srcs.insert(p);
  std::vector<PosId> arr;
  for (const auto& l : body.links)
    for (PosId p : l.targets)
      if (!srcs.count(p)) arr.push_back(p);
  return make(std::move(body), std::move(arr));
}

PosId Net::conclusion(std::size_t i) const {
  if (i == 0 || i > arrangement_.size()) throw NetError("conclusion index out of range");
  return arrangement_[i - 1];
}

std::string Net::name_of(PosId p) const {
  auto it = body_.names.find(p);
  if (it != body_.names.end()) return it->second;
  return "#" + std::to_string(p);
}

const Link& Net::producer(PosId p) const {
  auto it = producer_.find(p);
  if (it == producer_.end()) throw NetError("position has no producing link");
  return body_.links[it->second];
}

const Link* Net::consumer(PosId p) const {
  auto it = consumer_.find(p);
  return it == consumer_.end() ? nullptr : &body_.links[it->second];
}

const Link* Net::link_by_id(LinkId id) const {
  auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &body_.links[it->second];
}

bool Net::has_cuts() const {
  for (const auto& l : body_.links)
    if (l.kind == LinkKind::Cut) return true;
  return false;
}

std::size_t Net::count(LinkKind k) const {
  std::size_t c = 0;
  for (const auto& l : body_.links) c += (l.kind == k);
  return c;
}

std::vector<PosId> Net::initial_positions() const {
  std::vector<PosId> out;
  for (const auto& l : body_.links)
    if (l.kind == LinkKind::Daimon)
      out.insert(out.end(), l.targets.begin(), l.targets.end());
  return out;
}

bool Net::is_zero_daimon() const {
  return body_.links.size() == 1 && body_.links[0].kind == LinkKind::Daimon &&
         body_.links[0].targets.empty();
}

// ---------------------------------------------------------------------------
// Renaming / combination
// ---------------------------------------------------------------------------

static Net rename_with_map(const Net& n, std::unordered_map<PosId, PosId>* pos_map,
                           std::unordered_map<LinkId, LinkId>* link_map) {
  Hypergraph h;
  std::unordered_map<PosId, PosId> pm;
  for (PosId p : n.body().positions) pm[p] = fresh_pos();
  for (const auto& l : n.links()) {
    Link nl;
    nl.id = fresh_link_id();
    nl.kind = l.kind;
    for (PosId p : l.sources) nl.sources.push_back(pm.at(p));
    for (PosId p : l.targets) nl.targets.push_back(pm.at(p));
    if (link_map) (*link_map)[l.id] = nl.id;
    h.links.push_back(std::move(nl));
  }
  for (PosId p : n.body().positions) h.positions.push_back(pm.at(p));
  sort_unique(h.positions);
  for (const auto& [p, name] : n.names()) h.names[pm.at(p)] = name;
  std::vector<PosId> arr;
  for (PosId p : n.arrangement()) arr.push_back(pm.at(p));
  if (pos_map) *pos_map = std::move(pm);
  return Net::make(std::move(h), std::move(arr));
}

Net rename_apart(const Net& n) { return rename_with_map(n, nullptr, nullptr); }

Net parallel(const Net& a, const Net& b) {
  Net b2 = rename_apart(b);
  Hypergraph h = sum(a.body(), b2.body());
  std::vector<PosId> arr = a.arrangement();
  arr.insert(arr.end(), b2.arrangement().begin(), b2.arrangement().end());
  return Net::make(std::move(h), std::move(arr));
}

std::vector<std::vector<PosId>> daimon_part(const Net& n) {
  std::vector<std::vector<PosId>> out;
  for (const auto& l : n.links())
    if (l.kind == LinkKind::Daimon) out.push_back(l.targets);
  return out;
}

// ---------------------------------------------------------------------------
// Addresses
// ---------------------------------------------------------------------------

PosId resolve_address(const Net& n, std::size_t root_index,
                      const std::vector<bool>& path) {
  PosId cur = n.conclusion(root_index);
  for (bool right : path) {
    const Link& prod = n.producer(cur);
    if (prod.kind != LinkKind::Tensor && prod.kind != LinkKind::Par)
      throw NetError("address step undefined: position is not the output of a binary link");
    cur = prod.sources[right ? 1 : 0];
  }
  return cur;
}

ResolvedAddress address_of(const Net& n, PosId p) {
  std::vector<bool> down;  // collected leaf-to-root
  PosId cur = p;
  for (;;) {
    const Link* c = n.consumer(cur);
    if (c == nullptr) break;
    if (c->kind == LinkKind::Cut)
      throw NetError("address undefined: position sits above a cut");
    if (c->kind == LinkKind::Daimon) throw NetError("daimon link cannot consume");
    down.push_back(c->sources[1] == cur);
    cur = c->targets[0];
  }
  const auto& arr = n.arrangement();
  auto it = std::find(arr.begin(), arr.end(), cur);
  if (it == arr.end()) throw NetError("position is not below any conclusion");
  std::reverse(down.begin(), down.end());
  return ResolvedAddress{static_cast<std::size_t>(it - arr.begin()) + 1, std::move(down)};
}

Net extract_daimons(const Net& n) {
  if (n.has_cuts()) throw NetError("extract_daimons requires a cut-free net");
  Hypergraph h;
  for (const auto& l : n.links())
    if (l.kind == LinkKind::Daimon) h.links.push_back(l);
  for (const auto& l : h.links)
    h.positions.insert(h.positions.end(), l.targets.begin(), l.targets.end());
  sort_unique(h.positions);
  for (PosId p : h.positions) {
    auto it = n.names().find(p);
    if (it != n.names().end()) h.names.emplace(p, it->second);
  }
  std::vector<std::pair<ResolvedAddress, PosId>> keyed;
  for (PosId p : h.positions) keyed.emplace_back(address_of(n, p), p);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.root_index != b.first.root_index)
      return a.first.root_index < b.first.root_index;
    return a.first.path < b.first.path;  // vector<bool> lex, l(false) < r(true)
  });
  std::vector<PosId> arr;
  for (auto& [k, p] : keyed) arr.push_back(p);
  return Net::make(std::move(h), std::move(arr));
}

// ---------------------------------------------------------------------------
// Merge
// ---------------------------------------------------------------------------

Net merge(const Net& n1, LinkId d1, const Net& n2, LinkId d2) {
  const Link* l1 = n1.link_by_id(d1);
  if (!l1 || l1->kind != LinkKind::Daimon)
    throw NetError("merge: first argument is not a daimon link of its net");
  std::unordered_map<LinkId, LinkId> lm;
  Net m2 = rename_with_map(n2, nullptr, &lm);
  auto it = lm.find(d2);
  const Link* l2 = it == lm.end() ? nullptr : m2.link_by_id(it->second);
  if (!l2 || l2->kind != LinkKind::Daimon)
    throw NetError("merge: second argument is not a daimon link of its net");

  Hypergraph h;
  Link fused;
  fused.id = fresh_link_id();
  fused.kind = LinkKind::Daimon;
  fused.targets = l1->targets;
  fused.targets.insert(fused.targets.end(), l2->targets.begin(), l2->targets.end());
  h.links.push_back(std::move(fused));
  for (const auto& l : n1.links())
    if (l.id != d1) h.links.push_back(l);
  for (const auto& l : m2.links())
    if (l.id != l2->id) h.links.push_back(l);
  h.names = n1.names();
  for (const auto& [p, name] : m2.names()) h.names.emplace(p, name);
  std::vector<PosId> arr = n1.arrangement();
  arr.insert(arr.end(), m2.arrangement().begin(), m2.arrangement().end());
  return Net::make(std::move(h), std::move(arr));
}

static LinkId first_daimon(const Net& n) {
  for (const auto& l : n.links())
    if (l.kind == LinkKind::Daimon) return l.id;
  throw NetError("net has no daimon link");
}

Net merge_first(const Net& n1, const Net& n2) {
  return merge(n1, first_daimon(n1), n2, first_daimon(n2));
}

// ---------------------------------------------------------------------------
// Generalized connectives
// ---------------------------------------------------------------------------

GeneralizedLink generalized_link(LinkKind kind, const std::vector<PosId>& inputs,
                                 NameMap names) {
  if (kind != LinkKind::Tensor && kind != LinkKind::Par)
    throw NetError("generalized link must be tensor or par");
  if (inputs.size() < 2) throw NetError("generalized link needs at least 2 inputs");
  Hypergraph acc;
  acc.names = std::move(names);
  PosId cur = inputs[0];
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    PosId out = fresh_pos();
    acc = sum(acc, mk_link(kind, {cur, inputs[i]}, {out}));
    cur = out;
  }
  return GeneralizedLink{std::move(acc), cur};
}

// ---------------------------------------------------------------------------
// Canonical form
// ---------------------------------------------------------------------------
//
// Nets are source- and target-disjoint, so every position touches at most
// one producer and one consumer: the incidence structure is rigid once a
// start link and the cut input orders are fixed. The canonical key is the
// lexicographically minimal BFS encoding over all start links of each
// connected component and both input orders of every cut, with component
// encodings sorted. Arrangement indices are embedded, so the key separates
// nets differing only in conclusion order.

namespace {

struct Encoder {
  const Net& net;
  const std::vector<std::size_t>& comp_links;      // link indices of component
  std::vector<std::int64_t> best;
  bool has_best = false;

  explicit Encoder(const Net& n, const std::vector<std::size_t>& cl)
      : net(n), comp_links(cl) {}

  std::unordered_map<PosId, std::size_t> arr_index;  // 1-based

  // State of one candidate traversal.
  struct State {
    std::vector<std::int64_t> enc;
    std::unordered_map<PosId, std::int64_t> pos_num;
    std::set<std::size_t> visited;  // link indices
    std::vector<std::size_t> queue;
    std::size_t qhead = 0;
  };

  bool worse_than_best(const State& s) const {
    if (!has_best) return false;
    std::size_t k = std::min(s.enc.size(), best.size());
    for (std::size_t i = 0; i < k; ++i) {
      if (s.enc[i] < best[i]) return false;
      if (s.enc[i] > best[i]) return true;
    }
    return false;  // equal prefix: keep going
  }

  std::int64_t touch(State& s, PosId p, std::vector<PosId>& newly) {
    auto it = s.pos_num.find(p);
    if (it != s.pos_num.end()) return it->second;
    std::int64_t num = static_cast<std::int64_t>(s.pos_num.size());
    s.pos_num.emplace(p, num);
    newly.push_back(p);
    return num;
  }

  void push_neighbors(State& s, const std::vector<PosId>& newly) {
    for (PosId p : newly) {
      const Link* nb[2] = {nullptr, nullptr};
      nb[0] = &net.producer(p);
      nb[1] = net.consumer(p);
      for (const Link* l : nb) {
        if (!l) continue;
        std::size_t idx = link_index(l->id);
        if (!s.visited.count(idx)) {
          s.visited.insert(idx);
          s.queue.push_back(idx);
        }
      }
    }
  }

  std::unordered_map<LinkId, std::size_t> idx_by_id;
  std::size_t link_index(LinkId id) const { return idx_by_id.at(id); }

  void emit_link(State s, std::size_t li);

  void run_from(std::size_t seed) {
    State s;
    s.visited.insert(seed);
    s.queue.push_back(seed);
    step(std::move(s));
  }

  void step(State s) {
    if (worse_than_best(s)) return;
    if (s.qhead == s.queue.size()) {
      // complete traversal of the component
      if (!has_best || std::lexicographical_compare(s.enc.begin(), s.enc.end(),
                                                    best.begin(), best.end())) {
        best = s.enc;
        has_best = true;
      } else if (!has_best) {
        best = s.enc;
        has_best = true;
      }
      return;
    }
    std::size_t li = s.queue[s.qhead++];
    emit_link(std::move(s), li);
  }
};

void Encoder::emit_link(State s, std::size_t li) {
  const Link& l = net.links()[li];
  const bool is_cut = l.kind == LinkKind::Cut;
  // Cut inputs are unordered for canonical purposes: branch on both orders.
  std::vector<std::vector<PosId>> source_orders;
  if (is_cut)
    source_orders = {{l.sources[0], l.sources[1]}, {l.sources[1], l.sources[0]}};
  else
    source_orders = {l.sources};

  for (const auto& srcs : source_orders) {
    State t = s;
    t.enc.push_back(static_cast<std::int64_t>(l.kind));
    t.enc.push_back(static_cast<std::int64_t>(l.sources.size()));
    t.enc.push_back(static_cast<std::int64_t>(l.targets.size()));
    std::vector<PosId> newly;
    for (PosId p : srcs) t.enc.push_back(touch(t, p, newly));
    for (PosId p : l.targets) {
      t.enc.push_back(touch(t, p, newly));
      auto it = arr_index.find(p);
      t.enc.push_back(it == arr_index.end() ? -1 : static_cast<std::int64_t>(it->second));
    }
    push_neighbors(t, newly);
    step(std::move(t));
  }
}

}  // namespace

std::string canonical_key(const Net& n) {
  // connected components over links (shared positions connect links)
  const auto& links = n.links();
  std::vector<int> comp(links.size(), -1);
  std::unordered_map<LinkId, std::size_t> idx_by_id;
  for (std::size_t i = 0; i < links.size(); ++i) idx_by_id[links[i].id] = i;
  int ncomp = 0;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (comp[i] >= 0) continue;
    std::vector<std::size_t> stack{i};
    comp[i] = ncomp;
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      auto visit = [&](PosId p) {
        const Link* nb[2] = {&n.producer(p), n.consumer(p)};
        for (const Link* l : nb) {
          if (!l) continue;
          std::size_t j = idx_by_id.at(l->id);
          if (comp[j] < 0) {
            comp[j] = ncomp;
            stack.push_back(j);
          }
        }
      };
      for (PosId p : links[cur].sources) visit(p);
      for (PosId p : links[cur].targets) visit(p);
    }
    ++ncomp;
  }

  std::unordered_map<PosId, std::size_t> arr_index;
  for (std::size_t i = 0; i < n.arrangement().size(); ++i)
    arr_index[n.arrangement()[i]] = i + 1;

  std::vector<std::string> encodings;
  for (int c = 0; c < ncomp; ++c) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < links.size(); ++i)
      if (comp[i] == c) members.push_back(i);
    Encoder enc(n, members);
    enc.idx_by_id = idx_by_id;
    enc.arr_index = arr_index;
    for (std::size_t seed : members) enc.run_from(seed);
    std::ostringstream os;
    for (std::size_t i = 0; i < enc.best.size(); ++i) {
      if (i) os << ',';
      os << enc.best[i];
    }
    encodings.push_back(os.str());
  }
  std::sort(encodings.begin(), encodings.end());
  std::ostringstream os;
  os << 'n' << n.n_conclusions();
  for (const auto& e : encodings) os << '|' << e;
  return os.str();
}

bool iso_equal(const Net& a, const Net& b) {
  return canonical_key(a) == canonical_key(b);
}

// ---------------------------------------------------------------------------
// Small builders
// ---------------------------------------------------------------------------

Net daimon_net(std::size_t n_outputs) {
  auto ps = fresh_positions(n_outputs);
  NameMap names;
  for (std::size_t i = 0; i < ps.size(); ++i) names[ps[i]] = "p" + std::to_string(i + 1);
  return Net::make(mk_link(LinkKind::Daimon, {}, ps, std::move(names)), ps);
}

static Net over_one_daimon(LinkKind kind) {
  PosId a = fresh_pos(), b = fresh_pos(), c = fresh_pos();
  NameMap names{{a, "a"}, {b, "b"}, {c, "c"}};
  auto h = sum(mk_link(LinkKind::Daimon, {}, {a, b}), mk_link(kind, {a, b}, {c}));
  h.names = std::move(names);
  return Net::make(std::move(h), {c});
}

static Net over_two_daimons(LinkKind kind) {
  PosId a = fresh_pos(), b = fresh_pos(), c = fresh_pos();
  NameMap names{{a, "a"}, {b, "b"}, {c, "c"}};
  auto h = sum(sum(mk_link(LinkKind::Daimon, {}, {a}), mk_link(LinkKind::Daimon, {}, {b})),
               mk_link(kind, {a, b}, {c}));
  h.names = std::move(names);
  return Net::make(std::move(h), {c});
}

Net par_over_one_daimon() { return over_one_daimon(LinkKind::Par); }
Net tensor_over_one_daimon() { return over_one_daimon(LinkKind::Tensor); }
Net par_over_two_daimons() { return over_two_daimons(LinkKind::Par); }
Net tensor_over_two_daimons() { return over_two_daimons(LinkKind::Tensor); }

}  // namespace mllnet
