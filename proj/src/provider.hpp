#ifndef DNCDAG_PROVIDER_HPP
#define DNCDAG_PROVIDER_HPP

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "errors.hpp"
#include "nodeset.hpp"

namespace dncdag {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct BestParents {
    double score = kNegInf;
    NodeSet parents = 0;
};

// Local-score tables sigma(i, Pa | D) with max-over-admissible-subsets
// queries restricted to a potential-parent set. Immutable after
// construction; safe to share across threads.
class ScoreProvider {
  public:
    virtual ~ScoreProvider() = default;

    int num_nodes() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::string& name(int i) const { return names_[i]; }
    int node_index(const std::string& name) const;  // -1 when unknown

    // sigma(i, S); -inf when S is outside the search space.
    virtual double local_score(int node, NodeSet parents) const = 0;

    // s_hat(i | potential): max over admissible Pa subsets of `potential`.
    virtual double best_score(int node, NodeSet potential) const = 0;

    // As best_score, also returning the argmax parent set. Ties broken by
    // smallest set size, then lexicographically smallest node list.
    virtual BestParents best(int node, NodeSet potential) const = 0;

    // Visits every admissible (parent set, score) pair of `node` once.
    virtual void admissible_sets(int node,
                                 const std::function<void(NodeSet, double)>& f) const = 0;

    const std::vector<std::string>& warnings() const { return warnings_; }

  protected:
    std::vector<std::string> names_;
    std::vector<std::string> warnings_;

    void set_names(std::vector<std::string> names);
};

// max_node_score of the spec: score and argmax of node over admissible
// subsets of `potential`.
inline BestParents max_node_score(const ScoreProvider& sp, int node, NodeSet potential) {
    return sp.best(node, potential);
}

// Tables in the "preselected set of size <= K plus at most one outside
// parent" shape: 2^K base scores per node plus one 2^K row per outside
// node, each with cumulative-max variants for O(p) best-subset lookup.
class StructuredScoreTable final : public ScoreProvider {
  public:
    struct NodeTable {
        NodeSet pre_mask = 0;
        std::vector<int> pre_list;          // ascending global ids
        bool plus1 = false;
        std::vector<int> plus1_nodes;       // ascending global ids outside pre
        std::vector<int> row_of;            // global id -> plus1 row, -1 otherwise
        std::vector<double> base;           // sigma(i, S), S subset of pre (2^K)
        std::vector<double> base_cmax;      // max over subsets
        std::vector<NodeSet> base_carg;     // argmax (global mask)
        std::vector<std::vector<double>> p1;        // sigma(i, S + {h}) per row
        std::vector<std::vector<double>> p1_cmax;
        std::vector<std::vector<NodeSet>> p1_carg;
    };

    StructuredScoreTable(std::vector<std::string> names, std::vector<NodeTable> tables,
                         std::vector<std::string> warnings = {});

    double local_score(int node, NodeSet parents) const override;
    double best_score(int node, NodeSet potential) const override;
    BestParents best(int node, NodeSet potential) const override;
    void admissible_sets(int node,
                         const std::function<void(NodeSet, double)>& f) const override;

    const NodeTable& table(int node) const { return tables_[node]; }

    // In-place subset-lattice sweep filling the cumulative-max tables.
    static void finalize_node_table(NodeTable& t);

  private:
    std::vector<NodeTable> tables_;
    int compact(int node, NodeSet global) const;
};

// Explicitly listed parent sets per node (score-file interchange and
// exhaustive in-degree-capped spaces). Sets absent from the list are
// disallowed (score -inf). Queries scan the list.
class ListScoreTable final : public ScoreProvider {
  public:
    ListScoreTable(std::vector<std::string> names,
                   std::vector<std::vector<std::pair<NodeSet, double>>> sets);

    double local_score(int node, NodeSet parents) const override;
    double best_score(int node, NodeSet potential) const override;
    BestParents best(int node, NodeSet potential) const override;
    void admissible_sets(int node,
                         const std::function<void(NodeSet, double)>& f) const override;

  private:
    // sorted by (size, lex) per node; unique sets
    std::vector<std::vector<std::pair<NodeSet, double>>> sets_;
};

std::shared_ptr<ScoreProvider> load_score_file(const std::string& path);
void write_score_file(const ScoreProvider& sp, const std::string& path);
std::string score_file_string(const ScoreProvider& sp);
std::shared_ptr<ScoreProvider> parse_score_string(const std::string& text,
                                                  const std::string& origin = "<string>");

// Canonical permutation-invariant sum: terms sorted ascending, then folded
// left to right. Orders realizing the same contribution multiset score
// bit-identically, which the exact-equality acceptance checks rely on.
double canonical_sum(std::vector<double> terms);

// Order score per the truncated order-score sum: node j of `order` (read
// front to back, so parents of order[j] sit at positions > j) contributes
// s_hat(order[j] | order[j+1:] + ctx). Canonical fold.
double score_order(const ScoreProvider& sp, const std::vector<int>& order, NodeSet ctx = 0);

}  // namespace dncdag

#endif
