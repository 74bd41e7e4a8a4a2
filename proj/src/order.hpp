#ifndef DNCDAG_ORDER_HPP
#define DNCDAG_ORDER_HPP

#include <vector>

#include "provider.hpp"

namespace dncdag {

// The node universe of one search: the active nodes plus a fixed context set
// that every active node may always use as potential parents (divide-and-
// conquer runs components with their enclosing-component siblings as
// context; a monolithic search has an empty context).
struct SearchView {
    std::vector<int> nodes;  // ascending global ids
    NodeSet node_mask = 0;
    NodeSet ctx = 0;

    int size() const { return static_cast<int>(nodes.size()); }

    static SearchView whole(const ScoreProvider& sp);
    static SearchView over(NodeSet nodes, NodeSet ctx);
};

// Best score of each active node when everything else (active and context)
// may be a parent. Also the per-node "gap" term: a dormant node parked in
// front of a right order scores exactly this.
std::vector<double> view_gap_terms(const ScoreProvider& sp, const SearchView& view);

// A right suborder: the back end of the eventual full order. seq is stored
// back to front (seq.front() is position 1, seq.back() is the front node),
// so extending appends. Scores of visible nodes only count visible nodes to
// their right (plus ctx) as potential parents.
//
// The insertion-score table keeps, per dormant node h,
//   ins_front[h]  = S(<h, v_n:1>)                      h put at the front
//   ins_inside[h] = max_{k<=n} S(<v_n:k, h, v_k-1:1>)  h anywhere behind the front
//   ins_gap[h]    = S(<[h], v_n:1>)                    h dormant in front with a gap
// Entries are meaningful for dormant nodes only.
struct RightOrder {
    std::vector<int> seq;
    NodeSet mask = 0;
    double score = 0.0;
    double front_term = 0.0;  // contribution of the front node when it was added
    double prev_score = 0.0;  // score before the last extension
    std::vector<double> ins_front, ins_inside, ins_gap;

    int length() const { return static_cast<int>(seq.size()); }
    int front() const { return seq.back(); }
    NodeSet dormant(const SearchView& view) const { return view.node_mask & ~mask; }

    // Full order read left to right (front first).
    std::vector<int> front_to_back() const { return {seq.rbegin(), seq.rend()}; }
};

// Length-0 order with its insertion table (O(p^2); this is the stage-1
// "update from scratch" of the main algorithm).
RightOrder empty_right_order(const ScoreProvider& sp, const SearchView& view,
                             const std::vector<double>& gap_terms);

// New order <j, v_n:1>. The table is left stale (it is still the parent's)
// until update_insertion_scores runs.
RightOrder extend_front(const RightOrder& order, int j, const ScoreProvider& sp,
                        const SearchView& view);

// Refreshes the three per-dormant scores of an order just produced by
// extend_front, using the O(1)-per-entry recurrence on the parent table
// plus one fresh lookup each; O(p) per dormant node.
void update_insertion_scores(RightOrder& order, const ScoreProvider& sp, const SearchView& view,
                             const std::vector<double>& gap_terms);

// Candidate front nodes that survive the no-right-gaps rule: with m the
// largest dormant node whose front placement scores the same as staying
// dormant with a gap, every extension by a node below m is pruned.
NodeSet no_right_gaps_candidates(const RightOrder& order, const SearchView& view);

// True (keep) iff no insertion position behind the front beats putting j at
// the front of `order`.
bool optimal_front(const RightOrder& order, int j, double epsilon = 0.0);

// False (prune) iff j is larger than the current front and transposing the
// two leaves the score unchanged. The equality is decided on the two-term
// sums of the affected node contributions, so bitwise-identical table
// entries compare equal regardless of the accumulated prefix.
bool ordered_front(const RightOrder& order, int j, const ScoreProvider& sp,
                   const SearchView& view);

// True (prune) iff some dormant node scores strictly better inserted behind
// the front than dormant-with-gap. Requires a current table.
bool has_dormant_gap(const RightOrder& order, const SearchView& view, double epsilon = 0.0);

// True (prune) iff some dormant h larger than the front ties the gap score
// when inserted directly behind the front.
bool ordered_dormant_gap(const RightOrder& order, const ScoreProvider& sp, const SearchView& view,
                         const std::vector<double>& gap_terms);

// Duplicate-set pruning: one survivor per distinct node set, the highest
// score, ties going to the lexicographically smallest sequence read front to
// back. Recursive binary partition over membership columns; the output
// ordering depends only on the surviving masks.
std::vector<RightOrder> prune_equal_sets(std::vector<RightOrder> orders, const SearchView& view,
                                         long* removed = nullptr);

// ---------------------------------------------------------------------------
// Left (back-extension) variant. seq is stored front first; extending
// appends at the back. Visible node scores count every node to their right
// (the dormant set and later visible nodes, plus ctx) as potential parents,
// so earlier terms never change when the order grows.
struct LeftOrder {
    std::vector<int> seq;
    NodeSet mask = 0;
    double score = 0.0;
    double back_term = 0.0;
    double prev_score = 0.0;
    std::vector<double> ins_back, ins_inside, ins_gap;

    int length() const { return static_cast<int>(seq.size()); }
    int back() const { return seq.back(); }
    NodeSet dormant(const SearchView& view) const { return view.node_mask & ~mask; }
};

LeftOrder empty_left_order(const ScoreProvider& sp, const SearchView& view,
                           const std::vector<double>& gap_terms);
LeftOrder extend_back(const LeftOrder& order, int j, const ScoreProvider& sp,
                      const SearchView& view);
void update_left_insertion_scores(LeftOrder& order, const ScoreProvider& sp,
                                  const SearchView& view);

// True (keep) iff no earlier insertion position beats appending j at the back.
bool optimal_back(const LeftOrder& order, int j, double epsilon = 0.0);

// False (prune) iff j is smaller than the current back node and the
// transposition leaves the score unchanged.
bool ordered_back(const LeftOrder& order, int j, const ScoreProvider& sp, const SearchView& view);

// True (prune) iff the back node's score ignores the dormant nodes and a
// lower-numbered dormant node exists.
bool no_left_gaps(const LeftOrder& order, const ScoreProvider& sp, const SearchView& view);

std::vector<LeftOrder> prune_equal_sets(std::vector<LeftOrder> orders, const SearchView& view,
                                        long* removed = nullptr);

}  // namespace dncdag

#endif
