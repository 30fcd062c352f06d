#include "neurocactus/graph.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "neurocactus/rng.hpp"

namespace neurocactus {

const char* to_string(EdgeSign sign) { return sign == EdgeSign::Plus ? "plus" : "minus"; }

const char* to_string(Errc code) {
  switch (code) {
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::WeightOutOfBounds: return "WeightOutOfBounds";
    case Errc::BadControlNode: return "BadControlNode";
    case Errc::BadArgument: return "BadArgument";
    case Errc::BadInterval: return "BadInterval";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::StepMismatch: return "StepMismatch";
    case Errc::ConditionViolated: return "ConditionViolated";
    case Errc::InfeasibleSize: return "InfeasibleSize";
    case Errc::NotStabilizable: return "NotStabilizable";
    case Errc::IllConditioned: return "IllConditioned";
    case Errc::NumericalFailure: return "NumericalFailure";
    case Errc::SchemaError: return "SchemaError";
    case Errc::DanglingReference: return "DanglingReference";
    case Errc::IoError: return "IoError";
  }
  return "UnknownError";
}

const char* to_string(RejectReason reason) {
  switch (reason) {
    case RejectReason::None: return "None";
    case RejectReason::NodeOutOfRange: return "NodeOutOfRange";
    case RejectReason::CycleTooShort: return "CycleTooShort";
    case RejectReason::DuplicateNodeInComponent: return "DuplicateNodeInComponent";
    case RejectReason::CycleEdgeMissing: return "CycleEdgeMissing";
    case RejectReason::DisjointnessViolated: return "DisjointnessViolated";
    case RejectReason::RootNotInFirstComponent: return "RootNotInFirstComponent";
    case RejectReason::MissingAttachment: return "MissingAttachment";
    case RejectReason::AttachmentEdgeMissing: return "AttachmentEdgeMissing";
    case RejectReason::AttachmentEndpointMisplaced: return "AttachmentEndpointMisplaced";
    case RejectReason::EmptyDecomposition: return "EmptyDecomposition";
    case RejectReason::NotSpanning: return "NotSpanning";
    case RejectReason::OverlappingCacti: return "OverlappingCacti";
    case RejectReason::RootNotControlNode: return "RootNotControlNode";
    case RejectReason::DuplicateRoot: return "DuplicateRoot";
    case RejectReason::UnaccountedEdge: return "UnaccountedEdge";
    case RejectReason::ExtraEdgeNotInGraph: return "ExtraEdgeNotInGraph";
    case RejectReason::ExtraEdgeWithinCactus: return "ExtraEdgeWithinCactus";
  }
  return "Unknown";
}

void WeightBounds::validate() const {
  if (!(a_minus_lo < a_minus_hi && a_minus_hi < 0.0 && 0.0 < a_plus_lo && a_plus_lo < a_plus_hi)) {
    std::ostringstream os;
    os << "weight bounds must satisfy lo- < hi- < 0 < lo+ < hi+, got [" << a_minus_lo << ", "
       << a_minus_hi << "] / [" << a_plus_lo << ", " << a_plus_hi << "]";
    throw Error(Errc::BadArgument, os.str());
  }
}

bool SignedGraph::has_edge(int i, int j) const { return find_edge(i, j) != nullptr; }

const EdgeRecord* SignedGraph::find_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = index_.find({i, j});
  return it == index_.end() ? nullptr : &edges_[static_cast<std::size_t>(it->second)];
}

Eigen::MatrixXd SignedGraph::initial_weights() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& e : edges_) {
    A(e.i - 1, e.j - 1) = e.w0;
    A(e.j - 1, e.i - 1) = e.w0;
  }
  return A;
}

Eigen::MatrixXd SignedGraph::input_matrix() const {
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_, static_cast<int>(control_.size()));
  for (int k = 0; k < static_cast<int>(control_.size()); ++k) {
    B(control_[static_cast<std::size_t>(k)].node - 1, k) =
        control_[static_cast<std::size_t>(k)].gain;
  }
  return B;
}

SignedGraph build_graph(int n, std::vector<EdgeRecord> edges, std::vector<ControlNode> control,
                        const WeightBounds& bounds) {
  if (n <= 0) throw Error(Errc::BadArgument, "node count must be positive");
  bounds.validate();

  SignedGraph g;
  g.n_ = n;
  g.bounds_ = bounds;

  int rec = 0;
  for (auto& e : edges) {
    ++rec;
    std::ostringstream at;
    at << "edge record " << rec << " (" << e.i << ", " << e.j << ")";
    if (e.i == e.j) throw Error(Errc::SelfLoop, at.str());
    if (e.i < 1 || e.i > n || e.j < 1 || e.j > n)
      throw Error(Errc::BadArgument, at.str() + ": node id out of [1, n]");
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!bounds.contains(e.sign, e.w0)) {
      std::ostringstream os;
      os << at.str() << ": w0 = " << e.w0 << " outside " << to_string(e.sign) << " interval ["
         << bounds.lo(e.sign) << ", " << bounds.hi(e.sign) << "]";
      throw Error(Errc::WeightOutOfBounds, os.str());
    }
  }
  std::sort(edges.begin(), edges.end(), [](const EdgeRecord& a, const EdgeRecord& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
  for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
    if (edges[k].i == edges[k + 1].i && edges[k].j == edges[k + 1].j) {
      std::ostringstream os;
      os << "pair (" << edges[k].i << ", " << edges[k].j << ") appears more than once";
      throw Error(Errc::DuplicateEdge, os.str());
    }
  }
  g.edges_ = std::move(edges);
  for (int k = 0; k < static_cast<int>(g.edges_.size()); ++k)
    g.index_[{g.edges_[static_cast<std::size_t>(k)].i, g.edges_[static_cast<std::size_t>(k)].j}] =
        k;

  if (control.empty()) throw Error(Errc::BadControlNode, "control node list is empty");
  std::set<int> seen;
  for (const auto& c : control) {
    std::ostringstream at;
    at << "control node " << c.node;
    if (c.node < 1 || c.node > n) throw Error(Errc::BadControlNode, at.str() + " out of [1, n]");
    if (!seen.insert(c.node).second)
      throw Error(Errc::BadControlNode, at.str() + " listed twice");
    if (c.gain == 0.0) throw Error(Errc::BadControlNode, at.str() + " has zero gain");
  }
  g.control_ = std::move(control);
  return g;
}

int max_out_degree(const SignedGraph& g) {
  std::vector<int> deg(static_cast<std::size_t>(g.node_count()) + 1, 0);
  for (const auto& e : g.edges()) {
    ++deg[static_cast<std::size_t>(e.i)];
    ++deg[static_cast<std::size_t>(e.j)];
  }
  return *std::max_element(deg.begin(), deg.end());
}

// ---------------------------------------------------------------------------

namespace {

std::string node_list(const std::vector<int>& nodes) {
  std::ostringstream os;
  os << "{";
  for (std::size_t k = 0; k < nodes.size(); ++k) os << (k ? "," : "") << nodes[k];
  os << "}";
  return os.str();
}

}  // namespace

Verdict validate_sym_cactus(const SignedGraph& g, const CactusDecomposition& d) {
  if (d.components.empty())
    return Verdict::reject(RejectReason::EmptyDecomposition, "no components");

  std::set<int> all_nodes;
  for (std::size_t ci = 0; ci < d.components.size(); ++ci) {
    const Component& c = d.components[ci];
    if (c.kind == Component::Kind::Singleton && c.nodes.size() != 1)
      return Verdict::reject(RejectReason::NodeOutOfRange, "singleton with node count != 1");
    if (c.kind == Component::Kind::SymCycle && c.nodes.size() < 3) {
      std::ostringstream os;
      os << "component " << ci + 1 << " is a cycle of length " << c.nodes.size();
      return Verdict::reject(RejectReason::CycleTooShort, os.str());
    }
    std::set<int> mine;
    for (int v : c.nodes) {
      if (v < 1 || v > g.node_count()) {
        std::ostringstream os;
        os << "node " << v << " outside [1, " << g.node_count() << "]";
        return Verdict::reject(RejectReason::NodeOutOfRange, os.str());
      }
      if (!mine.insert(v).second) {
        std::ostringstream os;
        os << "node " << v << " repeated in component " << ci + 1;
        return Verdict::reject(RejectReason::DuplicateNodeInComponent, os.str());
      }
      if (all_nodes.count(v)) {
        std::ostringstream os;
        os << "node " << v << " appears in more than one component";
        return Verdict::reject(RejectReason::DisjointnessViolated, os.str());
      }
    }
    all_nodes.insert(mine.begin(), mine.end());

    if (c.kind == Component::Kind::SymCycle) {
      for (std::size_t k = 0; k < c.nodes.size(); ++k) {
        int a = c.nodes[k];
        int b = c.nodes[(k + 1) % c.nodes.size()];
        if (!g.has_edge(a, b)) {
          std::ostringstream os;
          os << "cycle " << node_list(c.nodes) << " needs edge (" << a << ", " << b << ")";
          return Verdict::reject(RejectReason::CycleEdgeMissing, os.str());
        }
      }
    }
  }

  const auto& first = d.components.front().nodes;
  if (std::find(first.begin(), first.end(), d.root) == first.end()) {
    std::ostringstream os;
    os << "root " << d.root << " not in first component " << node_list(first);
    return Verdict::reject(RejectReason::RootNotInFirstComponent, os.str());
  }

  if (d.attachments.size() != d.components.size() - 1) {
    std::ostringstream os;
    os << "expected " << d.components.size() - 1 << " attachments (one per component beyond the"
       << " first), got " << d.attachments.size();
    return Verdict::reject(RejectReason::MissingAttachment, os.str());
  }

  std::set<int> placed(d.components.front().nodes.begin(), d.components.front().nodes.end());
  for (std::size_t k = 0; k < d.attachments.size(); ++k) {
    const Attachment& at = d.attachments[k];
    const Component& comp = d.components[k + 1];
    std::ostringstream where;
    where << "attachment " << k + 1 << " = (" << at.d1 << ", " << at.d2 << ")";
    if (std::find(comp.nodes.begin(), comp.nodes.end(), at.d1) == comp.nodes.end())
      return Verdict::reject(RejectReason::AttachmentEndpointMisplaced,
                             where.str() + ": d1 not in component " + std::to_string(k + 2));
    if (!placed.count(at.d2))
      return Verdict::reject(RejectReason::AttachmentEndpointMisplaced,
                             where.str() + ": d2 not in the union of earlier components");
    if (!g.has_edge(at.d1, at.d2))
      return Verdict::reject(RejectReason::AttachmentEdgeMissing,
                             where.str() + ": edge not present in the graph");
    placed.insert(comp.nodes.begin(), comp.nodes.end());
  }
  return Verdict::accept();
}

Verdict validate_generalized(const SignedGraph& g, const GeneralizedDecomposition& gd) {
  if (gd.cacti.empty()) return Verdict::reject(RejectReason::EmptyDecomposition, "no cacti");

  std::set<int> control_ids;
  for (const auto& c : g.control_nodes()) control_ids.insert(c.node);

  std::set<int> roots;
  std::vector<int> cactus_of(static_cast<std::size_t>(g.node_count()) + 1, -1);
  for (std::size_t ci = 0; ci < gd.cacti.size(); ++ci) {
    const CactusDecomposition& cac = gd.cacti[ci];
    Verdict v = validate_sym_cactus(g, cac);
    if (!v) {
      v.detail = "cactus " + std::to_string(ci + 1) + ": " + v.detail;
      return v;
    }
    if (!control_ids.count(cac.root)) {
      std::ostringstream os;
      os << "root " << cac.root << " is not a control node";
      return Verdict::reject(RejectReason::RootNotControlNode, os.str());
    }
    if (!roots.insert(cac.root).second) {
      std::ostringstream os;
      os << "root " << cac.root << " used by more than one cactus";
      return Verdict::reject(RejectReason::DuplicateRoot, os.str());
    }
    for (const Component& comp : cac.components) {
      for (int v_id : comp.nodes) {
        if (cactus_of[static_cast<std::size_t>(v_id)] != -1) {
          std::ostringstream os;
          os << "node " << v_id << " claimed by cacti "
             << cactus_of[static_cast<std::size_t>(v_id)] + 1 << " and " << ci + 1;
          return Verdict::reject(RejectReason::OverlappingCacti, os.str());
        }
        cactus_of[static_cast<std::size_t>(v_id)] = static_cast<int>(ci);
      }
    }
  }
  for (int v = 1; v <= g.node_count(); ++v) {
    if (cactus_of[static_cast<std::size_t>(v)] == -1) {
      std::ostringstream os;
      os << "node " << v << " not covered by any cactus";
      return Verdict::reject(RejectReason::NotSpanning, os.str());
    }
  }

  // account for every edge: cycle edges, attachments, then extra_edges
  std::set<std::pair<int, int>> accounted;
  auto canon = [](int a, int b) { return a < b ? std::pair(a, b) : std::pair(b, a); };
  for (const auto& cac : gd.cacti) {
    for (const Component& comp : cac.components) {
      if (comp.kind != Component::Kind::SymCycle) continue;
      for (std::size_t k = 0; k < comp.nodes.size(); ++k)
        accounted.insert(canon(comp.nodes[k], comp.nodes[(k + 1) % comp.nodes.size()]));
    }
    for (const Attachment& at : cac.attachments) accounted.insert(canon(at.d1, at.d2));
  }
  for (const auto& [a, b] : gd.extra_edges) {
    std::ostringstream where;
    where << "extra edge (" << a << ", " << b << ")";
    if (!g.has_edge(a, b))
      return Verdict::reject(RejectReason::ExtraEdgeNotInGraph, where.str());
    if (cactus_of[static_cast<std::size_t>(a)] == cactus_of[static_cast<std::size_t>(b)])
      return Verdict::reject(RejectReason::ExtraEdgeWithinCactus,
                             where.str() + ": endpoints in the same cactus");
    accounted.insert(canon(a, b));
  }
  for (const auto& e : g.edges()) {
    if (!accounted.count({e.i, e.j})) {
      std::ostringstream os;
      os << "graph edge (" << e.i << ", " << e.j << ") not covered by cacti or extra_edges";
      return Verdict::reject(RejectReason::UnaccountedEdge, os.str());
    }
  }
  return Verdict::accept();
}

// ---------------------------------------------------------------------------

std::pair<SignedGraph, GeneralizedDecomposition> generate_generalized(
    int n, const std::vector<int>& roots, std::uint64_t rng_seed, const WeightBounds& bounds,
    double sign_ratio) {
  if (roots.empty()) throw Error(Errc::InfeasibleSize, "no roots given");
  if (n < static_cast<int>(roots.size())) {
    std::ostringstream os;
    os << "n = " << n << " < " << roots.size() << " roots";
    throw Error(Errc::InfeasibleSize, os.str());
  }
  bounds.validate();
  if (sign_ratio < 0.0 || sign_ratio > 1.0)
    throw Error(Errc::BadArgument, "sign_ratio outside [0, 1]");
  {
    std::set<int> distinct(roots.begin(), roots.end());
    if (distinct.size() != roots.size())
      throw Error(Errc::BadControlNode, "duplicate root node");
    for (int r : roots)
      if (r < 1 || r > n) throw Error(Errc::BadControlNode, "root " + std::to_string(r));
  }

  Rng rng(rng_seed);
  const int num_cacti = static_cast<int>(roots.size());

  std::vector<int> others;
  {
    std::set<int> root_set(roots.begin(), roots.end());
    for (int v = 1; v <= n; ++v)
      if (!root_set.count(v)) others.push_back(v);
  }
  rng.shuffle(others);

  // split the non-root nodes into one contiguous chunk per cactus
  std::vector<std::vector<int>> pools(static_cast<std::size_t>(num_cacti));
  {
    std::vector<std::size_t> cuts;
    for (int k = 0; k + 1 < num_cacti; ++k)
      cuts.push_back(static_cast<std::size_t>(rng.below(others.size() + 1)));
    cuts.push_back(others.size());
    std::sort(cuts.begin(), cuts.end());
    std::size_t from = 0;
    for (int k = 0; k < num_cacti; ++k) {
      for (std::size_t idx = from; idx < cuts[static_cast<std::size_t>(k)]; ++idx)
        pools[static_cast<std::size_t>(k)].push_back(others[idx]);
      from = cuts[static_cast<std::size_t>(k)];
    }
  }

  GeneralizedDecomposition gd;
  std::set<std::pair<int, int>> edge_pairs;
  auto add_edge = [&edge_pairs](int a, int b) {
    edge_pairs.insert(a < b ? std::pair(a, b) : std::pair(b, a));
  };

  for (int k = 0; k < num_cacti; ++k) {
    int root = roots[static_cast<std::size_t>(k)];
    std::vector<int>& pool = pools[static_cast<std::size_t>(k)];

    CactusDecomposition cactus;
    cactus.root = root;

    // first component holds the root: a cycle when enough nodes are left
    std::size_t take = 0;
    if (pool.size() >= 2 && rng.coin(0.7))
      take = 2 + rng.below(std::min<std::uint64_t>(pool.size() - 1, 3));  // cycle size 3..5
    if (take >= 2) {
      std::vector<int> cyc{root};
      cyc.insert(cyc.end(), pool.begin(), pool.begin() + static_cast<long>(take));
      pool.erase(pool.begin(), pool.begin() + static_cast<long>(take));
      cactus.components.push_back(Component::cycle(cyc));
    } else {
      cactus.components.push_back(Component::singleton(root));
    }

    while (!pool.empty()) {
      if (pool.size() >= 3 && rng.coin(0.6)) {
        std::size_t sz = 3 + rng.below(std::min<std::uint64_t>(pool.size() - 2, 3));  // 3..5
        std::vector<int> cyc(pool.begin(), pool.begin() + static_cast<long>(sz));
        pool.erase(pool.begin(), pool.begin() + static_cast<long>(sz));
        cactus.components.push_back(Component::cycle(cyc));
      } else {
        cactus.components.push_back(Component::singleton(pool.front()));
        pool.erase(pool.begin());
      }
    }

    std::vector<int> placed(cactus.components.front().nodes);
    for (std::size_t ci = 1; ci < cactus.components.size(); ++ci) {
      const std::vector<int>& nodes = cactus.components[ci].nodes;
      int d1 = nodes[static_cast<std::size_t>(rng.below(nodes.size()))];
      int d2 = placed[static_cast<std::size_t>(rng.below(placed.size()))];
      cactus.attachments.push_back({d1, d2});
      add_edge(d1, d2);
      placed.insert(placed.end(), nodes.begin(), nodes.end());
    }
    for (const Component& comp : cactus.components) {
      if (comp.kind != Component::Kind::SymCycle) continue;
      for (std::size_t idx = 0; idx < comp.nodes.size(); ++idx)
        add_edge(comp.nodes[idx], comp.nodes[(idx + 1) % comp.nodes.size()]);
    }
    gd.cacti.push_back(std::move(cactus));
  }

  // a few optional cross-cacti connections
  if (num_cacti >= 2) {
    std::uint64_t extras = rng.below(4);
    for (std::uint64_t e = 0; e < extras; ++e) {
      std::size_t ca = static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(num_cacti)));
      std::size_t cb = static_cast<std::size_t>(
          rng.below(static_cast<std::uint64_t>(num_cacti - 1)));
      if (cb >= ca) ++cb;
      auto pick = [&rng, &gd](std::size_t c) {
        std::vector<int> all;
        for (const Component& comp : gd.cacti[c].components)
          all.insert(all.end(), comp.nodes.begin(), comp.nodes.end());
        return all[static_cast<std::size_t>(rng.below(all.size()))];
      };
      int a = pick(ca);
      int b = pick(cb);
      auto pair = a < b ? std::pair(a, b) : std::pair(b, a);
      if (edge_pairs.count(pair)) continue;
      edge_pairs.insert(pair);
      gd.extra_edges.push_back(pair);
    }
    std::sort(gd.extra_edges.begin(), gd.extra_edges.end());
  }

  std::vector<EdgeRecord> records;
  for (const auto& [a, b] : edge_pairs) {
    EdgeSign sign = rng.coin(sign_ratio) ? EdgeSign::Plus : EdgeSign::Minus;
    double w0 = rng.uniform(bounds.lo(sign), bounds.hi(sign));
    records.push_back({a, b, sign, w0});
  }
  std::vector<ControlNode> control;
  for (int r : roots) control.push_back({r, 1.0});

  SignedGraph g = build_graph(n, std::move(records), std::move(control), bounds);
  return {std::move(g), std::move(gd)};
}

}  // namespace neurocactus
