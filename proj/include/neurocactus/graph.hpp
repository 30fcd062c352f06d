#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "neurocactus/errors.hpp"

namespace neurocactus {

enum class EdgeSign { Plus, Minus };

const char* to_string(EdgeSign sign);

// Closed admissible intervals for synaptic weights:
// negative edges live in [a_minus_lo, a_minus_hi], positive in
// [a_plus_lo, a_plus_hi], with a_minus_lo < a_minus_hi < 0 < a_plus_lo < a_plus_hi.
struct WeightBounds {
  double a_minus_lo;
  double a_minus_hi;
  double a_plus_lo;
  double a_plus_hi;

  void validate() const;  // throws BadArgument on ordering violations
  double lo(EdgeSign sign) const { return sign == EdgeSign::Plus ? a_plus_lo : a_minus_lo; }
  double hi(EdgeSign sign) const { return sign == EdgeSign::Plus ? a_plus_hi : a_minus_hi; }
  bool contains(EdgeSign sign, double w) const { return w >= lo(sign) && w <= hi(sign); }
};

// One record per unordered pair; represents the symmetric pair (i,j),(j,i).
struct EdgeRecord {
  int i;  // 1-based, i < j after canonicalization
  int j;
  EdgeSign sign;
  double w0;
};

struct ControlNode {
  int node;     // 1-based id
  double gain;  // nonzero scalar b_k
};

// Immutable signed symmetric digraph. Nodes are 1..n; edges are stored once
// per unordered pair in canonical (i<j, sorted) order; the dense weight matrix
// has a structurally zero diagonal.
class SignedGraph {
 public:
  SignedGraph() = default;

  int node_count() const { return n_; }
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const std::vector<ControlNode>& control_nodes() const { return control_; }
  const WeightBounds& bounds() const { return bounds_; }

  bool has_edge(int i, int j) const;
  const EdgeRecord* find_edge(int i, int j) const;  // nullptr if absent

  // Dense symmetric matrix of initial weights (zero diagonal).
  Eigen::MatrixXd initial_weights() const;
  // Input matrix B, n x K, one column per control node carrying its gain.
  Eigen::MatrixXd input_matrix() const;

  friend SignedGraph build_graph(int n, std::vector<EdgeRecord> edges,
                                 std::vector<ControlNode> control, const WeightBounds& bounds);

 private:
  int n_ = 0;
  std::vector<EdgeRecord> edges_;
  std::vector<ControlNode> control_;
  WeightBounds bounds_{-1.0, -0.05, 0.05, 1.0};
  std::map<std::pair<int, int>, int> index_;  // (i,j) i<j -> position in edges_
};

// Validates and canonicalizes. Throws Error with code DuplicateEdge, SelfLoop,
// WeightOutOfBounds or BadControlNode, naming the offending record.
SignedGraph build_graph(int n, std::vector<EdgeRecord> edges, std::vector<ControlNode> control,
                        const WeightBounds& bounds);

// Count of incident edge pairs per node, maximized over nodes. Self-loops are
// structurally excluded, so this equals the out-degree of the symmetric digraph.
int max_out_degree(const SignedGraph& g);

// ---------------------------------------------------------------------------
// Sym-cactus certificates

struct Component {
  enum class Kind { Singleton, SymCycle };
  Kind kind;
  std::vector<int> nodes;  // cycle order for SymCycle (length >= 3); single id otherwise

  static Component singleton(int node) { return {Kind::Singleton, {node}}; }
  static Component cycle(std::vector<int> nodes) { return {Kind::SymCycle, std::move(nodes)}; }
};

// The unique edge pair binding component k+1 to the union of components 1..k.
struct Attachment {
  int d1;  // node inside the attached component
  int d2;  // node inside the union of earlier components
};

struct CactusDecomposition {
  int root;  // must lie in components.front()
  std::vector<Component> components;
  std::vector<Attachment> attachments;  // attachments[k] binds components[k+1]
};

struct GeneralizedDecomposition {
  std::vector<CactusDecomposition> cacti;          // one per control node
  std::vector<std::pair<int, int>> extra_edges;    // cross-cacti pairs, canonical i<j
};

enum class RejectReason {
  None,
  NodeOutOfRange,
  CycleTooShort,
  DuplicateNodeInComponent,
  CycleEdgeMissing,
  DisjointnessViolated,
  RootNotInFirstComponent,
  MissingAttachment,
  AttachmentEdgeMissing,
  AttachmentEndpointMisplaced,
  EmptyDecomposition,
  NotSpanning,
  OverlappingCacti,
  RootNotControlNode,
  DuplicateRoot,
  UnaccountedEdge,
  ExtraEdgeNotInGraph,
  ExtraEdgeWithinCactus,
};

const char* to_string(RejectReason reason);

struct Verdict {
  bool accepted = false;
  RejectReason reason = RejectReason::None;
  std::string detail;

  explicit operator bool() const { return accepted; }

  static Verdict accept() { return {true, RejectReason::None, ""}; }
  static Verdict reject(RejectReason r, std::string detail) {
    return {false, r, std::move(detail)};
  }
};

// Checks the Definition-2 clauses: cycle edges present (with wraparound),
// components disjoint, root in the first component, and exactly one attachment
// edge per later component landing in the union of earlier ones. Rejections
// carry the first violated clause.
Verdict validate_sym_cactus(const SignedGraph& g, const CactusDecomposition& d);

// Accepts iff every cactus validates, the cacti partition all n nodes, roots
// are distinct control nodes, and every remaining edge of g is listed in
// extra_edges (which must connect different cacti).
Verdict validate_generalized(const SignedGraph& g, const GeneralizedDecomposition& gd);

// Deterministically (per seed) builds a graph with a generalized sym-cactus
// structure rooted at `roots`, assigning signs with probability `sign_ratio`
// of excitatory and weights uniform inside the sign's bound interval. The
// output always passes validate_generalized.
std::pair<SignedGraph, GeneralizedDecomposition> generate_generalized(
    int n, const std::vector<int>& roots, std::uint64_t rng_seed, const WeightBounds& bounds,
    double sign_ratio = 0.8);

}  // namespace neurocactus
