#ifndef MLLNET_LOGIC_HPP
#define MLLNET_LOGIC_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mllnet/core.hpp"

namespace mllnet {

// ---------------------------------------------------------------------------
// Formulas
// ---------------------------------------------------------------------------

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind : std::uint8_t { Var, Tensor, Par };
  Kind kind;
  std::string var;        // Var only
  bool positive = true;   // Var only; false means the dual atom
  FormulaPtr left, right; // Tensor/Par only
};

FormulaPtr fvar(std::string name, bool positive = true);
FormulaPtr ftensor(FormulaPtr a, FormulaPtr b);
FormulaPtr fpar(FormulaPtr a, FormulaPtr b);

FormulaPtr dual(const FormulaPtr& f);
bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);
std::size_t formula_leaves(const FormulaPtr& f);
std::size_t formula_connectives(const FormulaPtr& f);
std::size_t formula_depth(const FormulaPtr& f);

using Sequent = std::vector<FormulaPtr>;

bool sequent_equal(const Sequent& a, const Sequent& b);
Sequent dual_sequent(const Sequent& g);

// ---------------------------------------------------------------------------
// Hypersequents
// ---------------------------------------------------------------------------

struct Hypersequent;
using HypersequentPtr = std::shared_ptr<const Hypersequent>;

struct Hypersequent {
  enum class Kind : std::uint8_t { Leaf, Comma, Parallel };
  Kind kind;
  FormulaPtr formula;               // Leaf
  HypersequentPtr left, right;      // Comma/Parallel
};

HypersequentPtr hleaf(FormulaPtr f);
HypersequentPtr hcomma(HypersequentPtr a, HypersequentPtr b);
HypersequentPtr hparallel(HypersequentPtr a, HypersequentPtr b);

/// Ground form: every parallel replaced by a comma, flattened left-to-right.
Sequent ground(const HypersequentPtr& h);
bool is_sequent(const HypersequentPtr& h);  // parallel-free

// ---------------------------------------------------------------------------
// Substitutions
// ---------------------------------------------------------------------------

/// A variable-to-formula map with theta(X^) = theta(X)^ built in. Entries
/// are stored for the positive atom.
class Substitution {
 public:
  /// Binds X (the positive atom of `name`) to f; the dual binding follows.
  void bind(const std::string& name, FormulaPtr f);
  std::optional<FormulaPtr> lookup(const std::string& name, bool positive) const;
  FormulaPtr apply(const FormulaPtr& f) const;
  Sequent apply(const Sequent& g) const;
  HypersequentPtr apply(const HypersequentPtr& h) const;
  bool empty() const { return map_.empty(); }

 private:
  std::map<std::string, FormulaPtr> map_;
};

/// Delta <= Gamma: some substitution theta has theta(Delta) = Gamma.
bool instance_of(const Sequent& delta, const Sequent& gamma,
                 Substitution* witness = nullptr);

// ---------------------------------------------------------------------------
// Proof trees
// ---------------------------------------------------------------------------

struct ProofTree;
using ProofPtr = std::shared_ptr<const ProofTree>;

/// Sequent-calculus derivations. Daimon(Gamma) concludes any Gamma; Ax(A)
/// concludes A, A^. Par turns A,B,Gamma into A par B,Gamma. Tensor turns
/// (A,Gamma) and (B,Delta) into Gamma,Delta,A tensor B. Cut(A) turns
/// (A,Gamma) and (A^,Delta) into Gamma,Delta. Exchange(i) swaps the i-th
/// and (i+1)-th conclusions of its child.
struct ProofTree {
  enum class Rule : std::uint8_t { Daimon, Ax, Par, Tensor, Cut, Exchange };
  Rule rule;
  Sequent daimon_sequent;   // Daimon
  FormulaPtr ax_formula;    // Ax
  FormulaPtr cut_formula;   // Cut
  std::size_t ex_index = 0; // Exchange, 1-based
  std::vector<ProofPtr> children;
};

ProofPtr proof_daimon(Sequent g);
ProofPtr proof_ax(FormulaPtr a);
ProofPtr proof_par(ProofPtr child);
ProofPtr proof_tensor(ProofPtr left, ProofPtr right);
ProofPtr proof_cut(FormulaPtr a, ProofPtr left, ProofPtr right);
ProofPtr proof_exchange(std::size_t i, ProofPtr child);

enum class ProofMode : std::uint8_t { MLL, MLLDai };

/// The conclusion sequent, recomputed bottom-up. Throws NetError with the
/// offending node path when a rule is inapplicable.
Sequent conclusion(const ProofPtr& p);

/// Validity per the rule schemas; MLL mode additionally requires every
/// Daimon leaf to conclude exactly A, A^ (Ax leaves always qualify).
bool check_proof(const ProofPtr& p, ProofMode mode, std::string* error = nullptr);

std::size_t proof_size(const ProofPtr& p);  // number of rule applications

/// The net representing a proof, by structural induction.
Net desequentialize(const ProofPtr& p);

// ---------------------------------------------------------------------------
// Labellings and testability
// ---------------------------------------------------------------------------

using Labelling = std::map<PosId, FormulaPtr>;

/// Testability of a cut-free net by a sequent; when `atomic` every daimon
/// target must be labelled by a propositional variable. Returns the
/// labelling witness or nothing.
std::optional<Labelling> testable(const Net& n, const Sequent& g, bool atomic);

struct Decomposition {
  Net daimon_part;                  // S^X with its natural arrangement
  std::vector<FormulaPtr> patterns; // over the reserved variable V
};

/// Splits a cut-free net into its daimon part and the unique formula
/// patterns of its conclusions.
Decomposition decompose(const Net& n);

/// The reserved pattern variable; rejected by the formula parser.
extern const char* const kPatternVar;

}  // namespace mllnet

#endif  // MLLNET_LOGIC_HPP
