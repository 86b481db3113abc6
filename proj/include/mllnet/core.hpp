#ifndef MLLNET_CORE_HPP
#define MLLNET_CORE_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace mllnet {

using PosId = std::uint64_t;
using LinkId = std::uint64_t;

/// Allocates process-wide fresh position ids. Ids never repeat; display
/// names, not ids, appear in any output.
PosId fresh_pos();
std::vector<PosId> fresh_positions(std::size_t n);
LinkId fresh_link();

enum class LinkKind : std::uint8_t { Daimon, Tensor, Par, Cut };

const char* to_string(LinkKind k);

/// A labelled hyperedge with ordered source and target lists.
/// Arity is fixed by the label: daimons are 0 -> n, cuts 2 -> 0,
/// tensor/par 2 -> 1. Source and target sets never intersect (loop-free).
struct Link {
  LinkId id = 0;
  LinkKind kind = LinkKind::Daimon;
  std::vector<PosId> sources;
  std::vector<PosId> targets;
};

class NetError : public std::runtime_error {
 public:
  explicit NetError(const std::string& what) : std::runtime_error(what) {}
};

using NameMap = std::unordered_map<PosId, std::string>;

/// A finite set of positions with a finite set of links over them.
/// May contain isolated positions and need not satisfy the module
/// conditions; Net construction enforces those later.
struct Hypergraph {
  std::vector<Link> links;
  std::vector<PosId> positions;  // sorted, unique; superset of link domains
  NameMap names;

  std::vector<PosId> conclusions() const;  // source of no link
  std::vector<PosId> premises() const;     // target of no link
  std::vector<PosId> isolated() const;
  bool target_surjective() const;
  bool source_disjoint() const;
  bool target_disjoint() const;
};

/// mk_link: the single-link hypergraph. Rejects arity violations and loops.
Hypergraph mk_link(LinkKind kind, std::vector<PosId> sources,
                   std::vector<PosId> targets, NameMap names = {});

/// Sum: union of positions, disjoint union of links (link ids renamed on
/// clash). Vertices may overlap.
Hypergraph sum(const Hypergraph& a, const Hypergraph& b);

/// An ordered multiplicative net: a target-surjective, source- and
/// target-disjoint, loop-free hypergraph together with an arrangement
/// enumerating its conclusions. Immutable after construction.
class Net {
 public:
  Net() = default;  // empty net (no links, no conclusions)

  /// Validates every net invariant; throws NetError naming the violation.
  static Net make(Hypergraph body, std::vector<PosId> arrangement);

  /// As make(), but the arrangement is the conclusions in the order the
  /// link list produces them (daimon targets first-come).
  static Net make_default_order(Hypergraph body);

  const Hypergraph& body() const { return body_; }
  const std::vector<Link>& links() const { return body_.links; }
  const std::vector<PosId>& arrangement() const { return arrangement_; }
  std::size_t n_conclusions() const { return arrangement_.size(); }
  PosId conclusion(std::size_t i) const;  // 1-based, as written on paper

  const NameMap& names() const { return body_.names; }
  std::string name_of(PosId p) const;

  /// Producer: the unique link having p among its targets (nets are
  /// target-surjective so this always exists). Consumer: the unique link
  /// having p among its sources, if any.
  const Link& producer(PosId p) const;
  const Link* consumer(PosId p) const;
  const Link* link_by_id(LinkId id) const;

  bool has_cuts() const;
  std::size_t count(LinkKind k) const;
  /// Initial positions: outputs of daimon links, in daimon-listing order.
  std::vector<PosId> initial_positions() const;

  bool is_zero_daimon() const;  // the single link net "dai <>"

 private:
  Hypergraph body_;
  std::vector<PosId> arrangement_;
  std::unordered_map<PosId, std::size_t> producer_;   // pos -> link index
  std::unordered_map<PosId, std::size_t> consumer_;   // pos -> link index
  std::unordered_map<LinkId, std::size_t> by_id_;
  void index();
};

/// Renames every position (and link id) of n to fresh ones, preserving
/// display names. Used to make operands disjoint.
Net rename_apart(const Net& n);

/// Parallel sum: disjoint union (positions auto-renamed), arrangement of a
/// followed by arrangement of b.
Net parallel(const Net& a, const Net& b);

/// daimon_part: classes are exactly the target lists of the daimon links.
std::vector<std::vector<PosId>> daimon_part(const Net& n);

struct ResolvedAddress {
  std::size_t root_index;           // 1-based conclusion index
  std::vector<bool> path;           // false = l, true = r
};

/// Descends from conclusion `root_index` through the binary links, taking
/// the first source on 'l' and the second on 'r'. Throws NetError when a
/// step is undefined.
PosId resolve_address(const Net& n, std::size_t root_index,
                      const std::vector<bool>& path);

/// For a cut-free net: the (root index, address) of every position,
/// reachable by walking up from its conclusion.
ResolvedAddress address_of(const Net& n, PosId p);

/// S^X: the net of the daimon links of a cut-free net, arranged by the
/// lexicographic order of (root index, address), l before r.
Net extract_daimons(const Net& n);

/// Replaces daimon d1 of n1 and d2 of n2 by a single daimon whose targets
/// are targets(d1) . targets(d2); everything else is kept (n2 renamed
/// apart). Arrangement: n1's conclusions then n2's.
Net merge(const Net& n1, LinkId d1, const Net& n2, LinkId d2);

/// merge with the first daimon link of each net.
Net merge_first(const Net& n1, const Net& n2);

/// Left-nested chain of n binary links over n+1 inputs, one output.
/// Returns the module (not target-surjective) plus its output position.
struct GeneralizedLink {
  Hypergraph module;
  PosId output;
};
GeneralizedLink generalized_link(LinkKind kind, const std::vector<PosId>& inputs,
                                 NameMap names = {});

/// Canonical key: equal iff the two nets are isomorphic as ordered nets
/// (label-, order- and arrangement-preserving), except that the two input
/// orders of a cut are identified.
std::string canonical_key(const Net& n);

bool iso_equal(const Net& a, const Net& b);

/// Convenience builders for the pervasive small nets.
Net daimon_net(std::size_t n_outputs);               // X_n
Net par_over_one_daimon();    // dai <a b> + par <a b> -> c
Net tensor_over_one_daimon(); // dai <a b> + tensor <a b> -> c  ("X(x)")
Net par_over_two_daimons();   // dai <a> + dai <b> + par <a b> -> c  ("X%")
Net tensor_over_two_daimons();// dai <a> + dai <b> + tensor <a b> -> c

}  // namespace mllnet

#endif  // MLLNET_CORE_HPP
