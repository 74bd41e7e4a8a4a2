#ifndef DNCDAG_BGE_HPP
#define DNCDAG_BGE_HPP

#include <memory>
#include <string>
#include <vector>

#include "provider.hpp"

namespace dncdag {

// Samples in rows, variables in columns. No missing entries.
struct DataMatrix {
    std::vector<std::string> names;
    int m = 0;  // samples
    int p = 0;  // variables
    std::vector<double> values;  // row-major m x p

    double at(int row, int col) const { return values[static_cast<size_t>(row) * p + col]; }
};

DataMatrix read_data_csv(const std::string& path);
void write_data_csv(const DataMatrix& data, const std::string& path);

// Per-node preselected candidate parents plus an optional single parent
// outside that set.
struct SearchSpace {
    std::vector<NodeSet> preselected;
    std::vector<bool> plus1;

    int num_nodes() const { return static_cast<int>(preselected.size()); }
    int max_preselected() const;
    void validate() const;  // no self-parents, sizes consistent
};

// JSON object mapping each variable name to {"preselected": [names], "plus1": bool}.
SearchSpace read_space_json(const std::string& path, const std::vector<std::string>& names);
SearchSpace parse_space_json(const std::string& text, const std::vector<std::string>& names,
                             const std::string& origin = "<string>");

struct BgeParams {
    double alpha_mu = 0.1;
    double alpha_w = -1.0;  // <= 0: default p + alpha_mu + 1
};

// BGe local log-score of every admissible (node, parent set) pair of the
// search space, cumulative-max tables included.
std::shared_ptr<StructuredScoreTable> compute_bge_tables(const DataMatrix& data,
                                                         const SearchSpace& space,
                                                         const BgeParams& params = {});

// Exhaustive space: every parent set up to `max_parents`, as a list table.
std::shared_ptr<ListScoreTable> compute_bge_capped(const DataMatrix& data, int max_parents,
                                                   const BgeParams& params = {});

// Single BGe local log-score (shared by both table builders; exposed for tests).
class BgeScorer {
  public:
    BgeScorer(const DataMatrix& data, const BgeParams& params);
    double local_score(int node, NodeSet parents) const;
    double t_scale() const { return t_; }

  private:
    int p_, m_;
    double alpha_mu_, alpha_w_, t_;
    std::vector<double> posterior_;  // p x p, R = t*I + centered scatter
    mutable std::vector<std::pair<NodeSet, double>> logdet_cache_;
    double logdet(NodeSet subset) const;
};

}  // namespace dncdag

#endif
