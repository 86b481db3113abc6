#ifndef MLLNET_CORRECTNESS_HPP
#define MLLNET_CORRECTNESS_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mllnet/core.hpp"
#include "mllnet/logic.hpp"
#include "mllnet/rewrite.hpp"

namespace mllnet {

/// A par-free net obtained by resolving every par link to one premise,
/// with the record of choices. Daimon link ids and target slots survive
/// the rewriting, so initial positions map back to the host net slotwise.
struct Switching {
  Net net;
  std::vector<std::pair<LinkId, bool>> choices;  // (par link id, kept left?)
  bool degenerate = false;  // resolving created a loop: the switching has a cycle
};

/// All 2^(#par) switchings of a cut-free net.
std::vector<Switching> switchings(const Net& n);

// ---------------------------------------------------------------------------
// Partitions
// ---------------------------------------------------------------------------

/// Partition of {1..n}: classes sorted ascending, ordered by first element.
using NaturalPartition = std::vector<std::vector<std::size_t>>;

NaturalPartition normalize_partition(NaturalPartition p);
std::string partition_to_string(const NaturalPartition& p);

/// Acyclicity and connectedness of the multigraph with one vertex per class
/// and one edge per element. Ground sets must agree.
bool partition_orthogonal(const NaturalPartition& p, const NaturalPartition& q);

/// nat_S: initial positions of a cut-free net numbered 1..N by
/// (root index, address), l before r.
std::vector<PosId> natural_initial_order(const Net& n);

/// nat(daimon_part): daimon target classes as a natural partition.
NaturalPartition nat_daimon_part(const Net& n);

/// The initial positions above each conclusion of a switching, transferred
/// slotwise to the host net and numbered by nat(host).
NaturalPartition up_initial(const Switching& sw, const Net& host);

// ---------------------------------------------------------------------------
// Danos-Regnier
// ---------------------------------------------------------------------------

struct SwitchingEvidence {
  std::vector<std::pair<LinkId, bool>> choices;
  enum class Kind : std::uint8_t { Ok, Cyclic, Disconnected } kind;
  std::vector<std::string> cycle;               // vertex names along a cycle
  std::array<std::string, 2> component_reps{};  // one vertex per component
};

struct DRReport {
  bool correct = false;
  std::vector<SwitchingEvidence> switchings;
};

/// Every switching acyclic and connected as an undirected graph. Cuts are
/// admitted: a cut link contributes the edge joining its two inputs.
DRReport dr_check(const Net& n);

/// The same criterion through partitions: nat(daimon_part) orthogonal to
/// nat(up_initial) for every switching. Cut-free nets only.
bool dr_check_partitions(const Net& n);

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------

/// The tests of a formula, deduplicated by canonical form and sorted by
/// canonical key.
std::vector<Net> tests(const FormulaPtr& a);

/// Tests computed from a caller-supplied witness S atomically testable by
/// a; the result does not depend on the witness's daimon grouping.
std::vector<Net> tests_from_witness(const Net& s, const FormulaPtr& a);

/// Orthogonality against every tuple t1 || ... || tn with ti in tests(Ai).
/// False when the net is not atomically testable by g.
Verdict test_check(const Net& n, const Sequent& g, const SearchOptions& opts = {});

// ---------------------------------------------------------------------------
// Sequentialization
// ---------------------------------------------------------------------------

/// Backward proof search: strip terminal pars, close single daimons,
/// split on terminal tensors (and cuts) by connected components. The
/// returned proof checks in MLLDai mode and desequentializes to a net
/// isomorphic to n (same arrangement order).
std::optional<ProofPtr> sequentialize(const Net& n, const Sequent& g);

// ---------------------------------------------------------------------------
// Failure classification
// ---------------------------------------------------------------------------

enum class FailureClass : std::uint8_t {
  SingleDaimonZero,     // the normal form is exactly X0
  MultipleZeroDaimons,  // a sum of k >= 2 conclusion-free daimons
  CyclicCutStuck,       // a cyclic glueing cut survives
  ClashStuck,           // a clash cut survives
};

const char* to_string(FailureClass c);

struct Classification {
  FailureClass cls;
  std::size_t zero_daimons = 0;  // k for MultipleZeroDaimons
};

/// Classifies a normal form of a homogeneous interaction.
Classification classify_failure(const Net& nf);

}  // namespace mllnet

#endif  // MLLNET_CORRECTNESS_HPP
