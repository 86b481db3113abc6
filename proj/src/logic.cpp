#include "mllnet/logic.hpp"

#include <algorithm>
#include <set>

namespace mllnet {

const char* const kPatternVar = "V";

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

FormulaPtr fvar(std::string name, bool positive) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::Var;
  f->var = std::move(name);
  f->positive = positive;
  return f;
}

static FormulaPtr fbin(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

FormulaPtr ftensor(FormulaPtr a, FormulaPtr b) {
  return fbin(Formula::Kind::Tensor, std::move(a), std::move(b));
}
FormulaPtr fpar(FormulaPtr a, FormulaPtr b) {
  return fbin(Formula::Kind::Par, std::move(a), std::move(b));
}

FormulaPtr dual(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Var: return fvar(f->var, !f->positive);
    case Formula::Kind::Tensor: return fpar(dual(f->left), dual(f->right));
    case Formula::Kind::Par: return ftensor(dual(f->left), dual(f->right));
  }
  throw NetError("dual: bad formula");
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a->kind != b->kind) return false;
  if (a->kind == Formula::Kind::Var) return a->var == b->var && a->positive == b->positive;
  return formula_equal(a->left, b->left) && formula_equal(a->right, b->right);
}

std::size_t formula_leaves(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Var) return 1;
  return formula_leaves(f->left) + formula_leaves(f->right);
}

std::size_t formula_connectives(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Var) return 0;
  return 1 + formula_connectives(f->left) + formula_connectives(f->right);
}

std::size_t formula_depth(const FormulaPtr& f) {
  if (f->kind == Formula::Kind::Var) return 0;
  return 1 + std::max(formula_depth(f->left), formula_depth(f->right));
}

bool sequent_equal(const Sequent& a, const Sequent& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!formula_equal(a[i], b[i])) return false;
  return true;
}

Sequent dual_sequent(const Sequent& g) {
  Sequent out;
  out.reserve(g.size());
  for (const auto& f : g) out.push_back(dual(f));
  return out;
}

// ---------------------------------------------------------------------------
// Hypersequents
// ---------------------------------------------------------------------------

HypersequentPtr hleaf(FormulaPtr f) {
  auto h = std::make_shared<Hypersequent>();
  h->kind = Hypersequent::Kind::Leaf;
  h->formula = std::move(f);
  return h;
}

static HypersequentPtr hbin(Hypersequent::Kind k, HypersequentPtr a, HypersequentPtr b) {
  auto h = std::make_shared<Hypersequent>();
  h->kind = k;
  h->left = std::move(a);
  h->right = std::move(b);
  return h;
}

HypersequentPtr hcomma(HypersequentPtr a, HypersequentPtr b) {
  return hbin(Hypersequent::Kind::Comma, std::move(a), std::move(b));
}
HypersequentPtr hparallel(HypersequentPtr a, HypersequentPtr b) {
  return hbin(Hypersequent::Kind::Parallel, std::move(a), std::move(b));
}

static void ground_into(const HypersequentPtr& h, Sequent& out) {
  if (h->kind == Hypersequent::Kind::Leaf) {
    out.push_back(h->formula);
    return;
  }
  ground_into(h->left, out);
  ground_into(h->right, out);
}

Sequent ground(const HypersequentPtr& h) {
  Sequent out;
  ground_into(h, out);
  return out;
}

bool is_sequent(const HypersequentPtr& h) {
  if (h->kind == Hypersequent::Kind::Leaf) return true;
  if (h->kind == Hypersequent::Kind::Parallel) return false;
  return is_sequent(h->left) && is_sequent(h->right);
}

// ---------------------------------------------------------------------------
// Substitutions
// ---------------------------------------------------------------------------

void Substitution::bind(const std::string& name, FormulaPtr f) {
  map_[name] = std::move(f);
}

std::optional<FormulaPtr> Substitution::lookup(const std::string& name,
                                               bool positive) const {
  auto it = map_.find(name);
  if (it == map_.end()) return std::nullopt;
  return positive ? it->second : dual(it->second);
}

FormulaPtr Substitution::apply(const FormulaPtr& f) const {
  switch (f->kind) {
    case Formula::Kind::Var: {
      auto hit = lookup(f->var, f->positive);
      return hit ? *hit : f;
    }
    case Formula::Kind::Tensor: return ftensor(apply(f->left), apply(f->right));
    case Formula::Kind::Par: return fpar(apply(f->left), apply(f->right));
  }
  throw NetError("substitute: bad formula");
}

Sequent Substitution::apply(const Sequent& g) const {
  Sequent out;
  out.reserve(g.size());
  for (const auto& f : g) out.push_back(apply(f));
  return out;
}

HypersequentPtr Substitution::apply(const HypersequentPtr& h) const {
  if (h->kind == Hypersequent::Kind::Leaf) return hleaf(apply(h->formula));
  auto l = apply(h->left), r = apply(h->right);
  return h->kind == Hypersequent::Kind::Comma ? hcomma(l, r) : hparallel(l, r);
}

static bool match_formula(const FormulaPtr& pat, const FormulaPtr& target,
                          Substitution& s) {
  switch (pat->kind) {
    case Formula::Kind::Var: {
      FormulaPtr binding = pat->positive ? target : dual(target);
      if (auto prev = s.lookup(pat->var, true)) return formula_equal(*prev, binding);
      s.bind(pat->var, binding);
      return true;
    }
    case Formula::Kind::Tensor:
      return target->kind == Formula::Kind::Tensor &&
             match_formula(pat->left, target->left, s) &&
             match_formula(pat->right, target->right, s);
    case Formula::Kind::Par:
      return target->kind == Formula::Kind::Par &&
             match_formula(pat->left, target->left, s) &&
             match_formula(pat->right, target->right, s);
  }
  return false;
}

bool instance_of(const Sequent& delta, const Sequent& gamma, Substitution* witness) {
  if (delta.size() != gamma.size()) return false;
  Substitution s;
  for (std::size_t i = 0; i < delta.size(); ++i)
    if (!match_formula(delta[i], gamma[i], s)) return false;
  if (witness) *witness = std::move(s);
  return true;
}

// ---------------------------------------------------------------------------
// Proof trees
// ---------------------------------------------------------------------------

ProofPtr proof_daimon(Sequent g) {
  auto p = std::make_shared<ProofTree>();
  p->rule = ProofTree::Rule::Daimon;
  p->daimon_sequent = std::move(g);
  return p;
}

ProofPtr proof_ax(FormulaPtr a) {
  auto p = std::make_shared<ProofTree>();
  p->rule = ProofTree::Rule::Ax;
  p->ax_formula = std::move(a);
  return p;
}

ProofPtr proof_par(ProofPtr child) {
  auto p = std::make_shared<ProofTree>();
  p->rule = ProofTree::Rule::Par;
  p->children = {std::move(child)};
  return p;
}

ProofPtr proof_tensor(ProofPtr left, ProofPtr right) {
  auto p = std::make_shared<ProofTree>();
  p->rule = ProofTree::Rule::Tensor;
  p->children = {std::move(left), std::move(right)};
  return p;
}

ProofPtr proof_cut(FormulaPtr a, ProofPtr left, ProofPtr right) {
  auto p = std::make_shared<ProofTree>();
  p->rule = ProofTree::Rule::Cut;
  p->cut_formula = std::move(a);
  p->children = {std::move(left), std::move(right)};
  return p;
}

ProofPtr proof_exchange(std::size_t i, ProofPtr child) {
  auto p = std::make_shared<ProofTree>();
  p->rule = ProofTree::Rule::Exchange;
  p->ex_index = i;
  p->children = {std::move(child)};
  return p;
}

static Sequent conclusion_at(const ProofPtr& p, const std::string& path) {
  auto fail = [&](const std::string& msg) -> Sequent {
    throw NetError("proof node " + (path.empty() ? std::string("root") : path) + ": " + msg);
  };
  switch (p->rule) {
    case ProofTree::Rule::Daimon:
      if (!p->children.empty()) return fail("daimon rule has no premises");
      return p->daimon_sequent;
    case ProofTree::Rule::Ax:
      if (!p->children.empty()) return fail("ax rule has no premises");
      return {p->ax_formula, dual(p->ax_formula)};
    case ProofTree::Rule::Par: {
      if (p->children.size() != 1) return fail("par rule needs one premise");
      Sequent c = conclusion_at(p->children[0], path + ".1");
      if (c.size() < 2) return fail("par rule needs two leading conclusions");
      Sequent out{fpar(c[0], c[1])};
      out.insert(out.end(), c.begin() + 2, c.end());
      return out;
    }
    case ProofTree::Rule::Tensor: {
      if (p->children.size() != 2) return fail("tensor rule needs two premises");
      Sequent l = conclusion_at(p->children[0], path + ".1");
      Sequent r = conclusion_at(p->children[1], path + ".2");
      if (l.empty() || r.empty()) return fail("tensor rule needs a leading conclusion on both sides");
      Sequent out(l.begin() + 1, l.end());
      out.insert(out.end(), r.begin() + 1, r.end());
      out.push_back(ftensor(l[0], r[0]));
      return out;
    }
    case ProofTree::Rule::Cut: {
      if (p->children.size() != 2) return fail("cut rule needs two premises");
      Sequent l = conclusion_at(p->children[0], path + ".1");
      Sequent r = conclusion_at(p->children[1], path + ".2");
      if (l.empty() || r.empty()) return fail("cut rule needs a leading conclusion on both sides");
      if (!formula_equal(l[0], p->cut_formula))
        return fail("left premise does not lead with the cut formula");
      if (!formula_equal(r[0], dual(p->cut_formula)))
        return fail("right premise does not lead with the dual cut formula");
      Sequent out(l.begin() + 1, l.end());
      out.insert(out.end(), r.begin() + 1, r.end());
      return out;
    }
    case ProofTree::Rule::Exchange: {
      if (p->children.size() != 1) return fail("exchange rule needs one premise");
      Sequent c = conclusion_at(p->children[0], path + ".1");
      if (p->ex_index < 1 || p->ex_index >= c.size())
        return fail("exchange index out of range");
      std::swap(c[p->ex_index - 1], c[p->ex_index]);
      return c;
    }
  }
  return fail("unknown rule");
}

Sequent conclusion(const ProofPtr& p) { return conclusion_at(p, ""); }

static bool daimons_are_axioms(const ProofPtr& p) {
  if (p->rule == ProofTree::Rule::Daimon) {
    const Sequent& g = p->daimon_sequent;
    return g.size() == 2 && formula_equal(g[1], dual(g[0]));
  }
  for (const auto& c : p->children)
    if (!daimons_are_axioms(c)) return false;
  return true;
}

bool check_proof(const ProofPtr& p, ProofMode mode, std::string* error) {
  try {
    (void)conclusion(p);
  } catch (const NetError& e) {
    if (error) *error = e.what();
    return false;
  }
  if (mode == ProofMode::MLL && !daimons_are_axioms(p)) {
    if (error) *error = "a daimon rule does not conclude a dual pair A, A^";
    return false;
  }
  return true;
}

std::size_t proof_size(const ProofPtr& p) {
  std::size_t n = 1;
  for (const auto& c : p->children) n += proof_size(c);
  return n;
}

Net desequentialize(const ProofPtr& p) {
  switch (p->rule) {
    case ProofTree::Rule::Daimon:
      return daimon_net(p->daimon_sequent.size());
    case ProofTree::Rule::Ax:
      return daimon_net(2);
    case ProofTree::Rule::Par: {
      Net s0 = desequentialize(p->children[0]);
      if (s0.n_conclusions() < 2) throw NetError("desequentialize: par premise too short");
      PosId out = fresh_pos();
      Hypergraph h =
          sum(s0.body(), mk_link(LinkKind::Par, {s0.conclusion(1), s0.conclusion(2)}, {out}));
      std::vector<PosId> arr{out};
      arr.insert(arr.end(), s0.arrangement().begin() + 2, s0.arrangement().end());
      return Net::make(std::move(h), std::move(arr));
    }
    case ProofTree::Rule::Tensor: {
      Net s1 = desequentialize(p->children[0]);
      Net s2 = desequentialize(p->children[1]);
      PosId out = fresh_pos();
      Hypergraph h = sum(sum(s1.body(), s2.body()),
                         mk_link(LinkKind::Tensor, {s1.conclusion(1), s2.conclusion(1)}, {out}));
      std::vector<PosId> arr(s1.arrangement().begin() + 1, s1.arrangement().end());
      arr.insert(arr.end(), s2.arrangement().begin() + 1, s2.arrangement().end());
      arr.push_back(out);
      return Net::make(std::move(h), std::move(arr));
    }
    case ProofTree::Rule::Cut: {
      Net s1 = desequentialize(p->children[0]);
      Net s2 = desequentialize(p->children[1]);
      Hypergraph h = sum(sum(s1.body(), s2.body()),
                         mk_link(LinkKind::Cut, {s1.conclusion(1), s2.conclusion(1)}, {}));
      std::vector<PosId> arr(s1.arrangement().begin() + 1, s1.arrangement().end());
      arr.insert(arr.end(), s2.arrangement().begin() + 1, s2.arrangement().end());
      return Net::make(std::move(h), std::move(arr));
    }
    case ProofTree::Rule::Exchange: {
      Net s0 = desequentialize(p->children[0]);
      std::vector<PosId> arr = s0.arrangement();
      if (p->ex_index < 1 || p->ex_index >= arr.size())
        throw NetError("desequentialize: exchange index out of range");
      std::swap(arr[p->ex_index - 1], arr[p->ex_index]);
      return Net::make(s0.body(), std::move(arr));
    }
  }
  throw NetError("desequentialize: unknown rule");
}

// ---------------------------------------------------------------------------
// Labellings
// ---------------------------------------------------------------------------

std::optional<Labelling> testable(const Net& n, const Sequent& g, bool atomic) {
  if (n.has_cuts()) throw NetError("testable: net must be cut-free");
  if (n.n_conclusions() != g.size())
    throw NetError("testable: conclusion count differs from sequent length");
  Labelling tau;
  std::vector<std::pair<PosId, FormulaPtr>> stack;
  for (std::size_t i = 0; i < g.size(); ++i)
    stack.emplace_back(n.conclusion(i + 1), g[i]);
  while (!stack.empty()) {
    auto [p, f] = stack.back();
    stack.pop_back();
    tau[p] = f;
    const Link& prod = n.producer(p);
    switch (prod.kind) {
      case LinkKind::Daimon:
        if (atomic && f->kind != Formula::Kind::Var) return std::nullopt;
        break;
      case LinkKind::Tensor:
        if (f->kind != Formula::Kind::Tensor) return std::nullopt;
        stack.emplace_back(prod.sources[0], f->left);
        stack.emplace_back(prod.sources[1], f->right);
        break;
      case LinkKind::Par:
        if (f->kind != Formula::Kind::Par) return std::nullopt;
        stack.emplace_back(prod.sources[0], f->left);
        stack.emplace_back(prod.sources[1], f->right);
        break;
      case LinkKind::Cut:
        throw NetError("testable: cut produced a position");
    }
  }
  // a labelling is total; positions unreachable from the conclusions
  // (directed cycles) admit none
  if (tau.size() != n.body().positions.size()) return std::nullopt;
  return tau;
}

static FormulaPtr pattern_above(const Net& n, PosId p, std::set<PosId>& seen) {
  if (!seen.insert(p).second)
    throw NetError("decompose: net is not a forest above its conclusions");
  const Link& prod = n.producer(p);
  switch (prod.kind) {
    case LinkKind::Daimon:
      return fvar(kPatternVar);
    case LinkKind::Tensor:
      return ftensor(pattern_above(n, prod.sources[0], seen),
                     pattern_above(n, prod.sources[1], seen));
    case LinkKind::Par:
      return fpar(pattern_above(n, prod.sources[0], seen),
                  pattern_above(n, prod.sources[1], seen));
    case LinkKind::Cut:
      break;
  }
  throw NetError("decompose: cut produced a position");
}

Decomposition decompose(const Net& n) {
  if (n.has_cuts()) throw NetError("decompose: net must be cut-free");
  Decomposition d{extract_daimons(n), {}};
  std::set<PosId> seen;
  for (std::size_t i = 1; i <= n.n_conclusions(); ++i)
    d.patterns.push_back(pattern_above(n, n.conclusion(i), seen));
  return d;
}

}  // namespace mllnet
