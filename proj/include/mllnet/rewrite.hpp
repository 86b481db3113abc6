#ifndef MLLNET_REWRITE_HPP
#define MLLNET_REWRITE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mllnet/core.hpp"

namespace mllnet {

enum class CutClass : std::uint8_t {
  Multiplicative,  // tensor against par
  Clash,           // tensor/tensor or par/par; permanently stuck
  Glueing,         // daimon against daimon; reducible only when acyclic
  Reversible,      // tensor against daimon; one deterministic step
  Irreversible,    // par against daimon; one step per context split
};

const char* to_string(CutClass c);

struct CutKind {
  CutClass cls;
  bool cyclic = false;  // both cut inputs are targets of the same link
  bool reducible() const {
    return cls == CutClass::Multiplicative || cls == CutClass::Reversible ||
           cls == CutClass::Irreversible || (cls == CutClass::Glueing && !cyclic);
  }
};

/// Type of the cut: the pair of labels of the links producing its inputs.
CutKind cut_kind(const Net& n, LinkId cut);

/// The sigma/tau data of an irreversible step: the reduced daimon's other
/// targets split into the two successor daimons, each side keeping the
/// part that sat before the cut premise apart from the part after it.
struct SplitChoice {
  std::vector<PosId> first_before, first_after;
  std::vector<PosId> second_before, second_after;
};

struct ReductionChoice {
  LinkId cut = 0;
  CutClass cls = CutClass::Multiplicative;
  std::optional<SplitChoice> split;  // present iff cls == Irreversible
};

enum class SplitMode : std::uint8_t {
  OrderPreserving,    // classes keep the daimon's relative target order
  FullInterleavings,  // arbitrary permutations inside each class part
};

/// Every legal single step from n. Clash and cyclic glueing cuts
/// contribute nothing.
std::vector<ReductionChoice> redexes(const Net& n,
                                     SplitMode mode = SplitMode::OrderPreserving);

/// Applies one cut-elimination step. Conclusions and arrangement are
/// preserved. Throws NetError on an illegal choice.
Net step(const Net& n, const ReductionChoice& c);

Net replay(const Net& n, const std::vector<ReductionChoice>& path);

/// (connective links, cut links); strictly lexicographically decreasing
/// along every reduction step.
std::pair<std::size_t, std::size_t> sn_measure(const Net& n);

struct ExploreLimits {
  std::size_t max_states = 200000;
  std::size_t max_steps = 2000000;
};

enum class SearchPolicy : std::uint8_t {
  Exhaustive,  // every redex of every state
  Eager,       // reduce non-irreversible cuts deterministically first,
               // branch only on irreversible splits
};

struct SearchOptions {
  SplitMode splits = SplitMode::OrderPreserving;
  SearchPolicy policy = SearchPolicy::Exhaustive;
  ExploreLimits limits;
};

/// Memoized reachability graph of a net under cut elimination, states
/// identified by canonical form.
struct ReductionGraph {
  struct Edge {
    ReductionChoice choice;
    std::size_t to;
  };
  struct Node {
    Net net;
    std::string key;
    std::vector<Edge> out;
    bool expanded = false;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t root = 0;
  bool complete = true;  // false when a budget was hit
  std::size_t steps_taken = 0;

  std::vector<std::size_t> normal_forms() const;
};

ReductionGraph explore(const Net& n, const SearchOptions& opts = {});

enum class Verdict : std::uint8_t { True, False, Indeterminate };

const char* to_string(Verdict v);

/// S + T + one cut per matching conclusion pair; the longer net's leftover
/// conclusions survive in order.
Net interaction(const Net& s, const Net& t);

struct OrthoResult {
  Verdict verdict = Verdict::False;
  std::vector<ReductionChoice> witness;  // root-to-X0 path when verdict is True
};

/// True iff some reduction of interaction(s, t) reaches the zero daimon.
OrthoResult orthogonal(const Net& s, const Net& t, const SearchOptions& opts = {});

/// Reachability of the zero daimon from an already-built net.
OrthoResult reduces_to_zero_daimon(const Net& n, const SearchOptions& opts = {});

/// Search oracles for the factorization and commutation properties.
/// Each verifies, by bounded search, that a rewriting of `path` with the
/// stated shape reaches the same canonical endpoint.
bool check_factorization(const Net& n, const std::vector<ReductionChoice>& path,
                         const SearchOptions& opts = {});
/// path must begin with an irreversible step; looks for an equivalent
/// sequence performing that cut last.
bool check_delay_irreversible(const Net& n, const std::vector<ReductionChoice>& path,
                              const SearchOptions& opts = {});
/// path reduces the non-irreversible cut path[step_index].cut somewhere;
/// looks for an equivalent sequence performing it first.
bool check_anticipate(const Net& n, const std::vector<ReductionChoice>& path,
                      std::size_t step_index, const SearchOptions& opts = {});

}  // namespace mllnet

#endif  // MLLNET_REWRITE_HPP
