#include "bge.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dncdag {

// ---------------------------------------------------------------------------
// CSV data

DataMatrix read_data_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open data file: " + path);
    DataMatrix d;
    std::string line;
    int lineno = 0;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        size_t start = 0;
        while (true) {
            size_t comma = s.find(',', start);
            std::string field = s.substr(start, comma == std::string::npos ? comma : comma - start);
            while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
            while (!field.empty() && field.front() == ' ') field.erase(field.begin());
            out.push_back(field);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        return out;
    };
    if (!std::getline(in, line)) throw_parse(path + ": empty file");
    ++lineno;
    d.names = split(line);
    d.p = static_cast<int>(d.names.size());
    if (d.p < 1) throw_parse(path + ": no variables in header");
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (static_cast<int>(fields.size()) != d.p)
            throw_parse(path + ": line " + std::to_string(lineno) + ": expected " +
                        std::to_string(d.p) + " fields, got " + std::to_string(fields.size()));
        for (const auto& f : fields) {
            double v;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw_parse(path + ": line " + std::to_string(lineno) + ": bad number '" + f + "'");
            d.values.push_back(v);
        }
        ++d.m;
    }
    if (d.m < 1) throw_parse(path + ": no data rows");
    return d;
}

void write_data_csv(const DataMatrix& data, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw_io("cannot open for writing: " + path);
    for (int j = 0; j < data.p; ++j) out << (j ? "," : "") << data.names[j];
    out << "\n";
    char buf[64];
    for (int i = 0; i < data.m; ++i) {
        for (int j = 0; j < data.p; ++j) {
            auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, data.at(i, j));
            (void)ec;
            if (j) out << ',';
            out.write(buf, ptr - buf);
        }
        out << "\n";
    }
    if (!out) throw_io("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Search space

int SearchSpace::max_preselected() const {
    int k = 0;
    for (NodeSet s : preselected) k = std::max(k, set_size(s));
    return k;
}

void SearchSpace::validate() const {
    if (preselected.size() != plus1.size()) throw_invalid("search space field size mismatch");
    for (int i = 0; i < num_nodes(); ++i)
        if (contains(preselected[i], i))
            throw_invalid("search space: node " + std::to_string(i) + " is its own potential parent");
}

SearchSpace parse_space_json(const std::string& text, const std::vector<std::string>& names,
                             const std::string& origin) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw_parse(origin + ": " + e.what());
    }
    if (!j.is_object()) throw_parse(origin + ": expected a JSON object keyed by variable name");
    const int p = static_cast<int>(names.size());
    auto index_of = [&](const std::string& n) {
        for (int i = 0; i < p; ++i)
            if (names[i] == n) return i;
        throw_parse(origin + ": unknown variable name '" + n + "'");
    };
    SearchSpace space;
    space.preselected.assign(p, 0);
    space.plus1.assign(p, false);
    for (auto it = j.begin(); it != j.end(); ++it) {
        int i = index_of(it.key());
        const auto& entry = it.value();
        if (!entry.is_object()) throw_parse(origin + ": entry for " + it.key() + " must be an object");
        if (entry.contains("preselected")) {
            for (const auto& lbl : entry.at("preselected"))
                space.preselected[i] |= bit(index_of(lbl.get<std::string>()));
        }
        if (entry.contains("plus1")) space.plus1[i] = entry.at("plus1").get<bool>();
    }
    space.validate();
    return space;
}

SearchSpace read_space_json(const std::string& path, const std::vector<std::string>& names) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open search-space file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_space_json(ss.str(), names, path);
}

// ---------------------------------------------------------------------------
// BGe score
//
// Marginal likelihood of linear-Gaussian data with the normal-Wishart prior,
// score-equivalent across Markov-equivalent DAGs. Prior precision T = t*I
// with t = am*(aw-p-1)/(am+1); prior mean taken at the sample mean, so the
// posterior matrix is R = T + S with S the centered scatter. The local score
// of node i with parent set Pa (|Pa| = k) is
//
//   1/2 log(am/(am+m)) - m/2 log(2 pi)
//   + lgamma((m+aw-p+k+1)/2) - lgamma((aw-p+k+1)/2)
//   + (aw-p+2k+1)/2 log t
//   + (m+aw-p+k)/2 log|R_Pa| - (m+aw-p+k+1)/2 log|R_{Pa+i}|

BgeScorer::BgeScorer(const DataMatrix& data, const BgeParams& params) {
    p_ = data.p;
    m_ = data.m;
    if (m_ < 2) throw_invalid("BGe scoring needs at least 2 samples");
    alpha_mu_ = params.alpha_mu;
    alpha_w_ = params.alpha_w > 0 ? params.alpha_w : p_ + alpha_mu_ + 1;
    if (alpha_mu_ <= 0) throw_invalid("alpha_mu must be positive");
    if (alpha_w_ <= p_ + 1) throw_invalid("alpha_w must exceed p + 1");
    t_ = alpha_mu_ * (alpha_w_ - p_ - 1) / (alpha_mu_ + 1);

    std::vector<double> mean(p_, 0.0);
    for (int r = 0; r < m_; ++r)
        for (int c = 0; c < p_; ++c) mean[c] += data.at(r, c);
    for (int c = 0; c < p_; ++c) mean[c] /= m_;

    posterior_.assign(static_cast<size_t>(p_) * p_, 0.0);
    for (int r = 0; r < m_; ++r)
        for (int a = 0; a < p_; ++a) {
            double da = data.at(r, a) - mean[a];
            for (int b = a; b < p_; ++b)
                posterior_[static_cast<size_t>(a) * p_ + b] += da * (data.at(r, b) - mean[b]);
        }
    for (int a = 0; a < p_; ++a) {
        posterior_[static_cast<size_t>(a) * p_ + a] += t_;
        for (int b = a + 1; b < p_; ++b)
            posterior_[static_cast<size_t>(b) * p_ + a] = posterior_[static_cast<size_t>(a) * p_ + b];
    }
}

double BgeScorer::logdet(NodeSet subset) const {
    if (subset == 0) return 0.0;
    for (const auto& [s, v] : logdet_cache_)
        if (s == subset) return v;
    auto idx = set_to_vector(subset);
    const int k = static_cast<int>(idx.size());
    std::vector<double> a(static_cast<size_t>(k) * k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            a[static_cast<size_t>(i) * k + j] = posterior_[static_cast<size_t>(idx[i]) * p_ + idx[j]];
    // Cholesky, log|A| = 2 sum log L_ii
    double ld = 0.0;
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j <= i; ++j) {
            double s = a[static_cast<size_t>(i) * k + j];
            for (int q = 0; q < j; ++q)
                s -= a[static_cast<size_t>(i) * k + q] * a[static_cast<size_t>(j) * k + q];
            if (i == j) {
                if (s <= 0.0) throw_degenerate("singular posterior scatter matrix (degenerate data)");
                a[static_cast<size_t>(i) * k + i] = std::sqrt(s);
                ld += std::log(a[static_cast<size_t>(i) * k + i]);
            } else {
                a[static_cast<size_t>(i) * k + j] = s / a[static_cast<size_t>(j) * k + j];
            }
        }
    }
    ld *= 2.0;
    logdet_cache_.emplace_back(subset, ld);
    return ld;
}

double BgeScorer::local_score(int node, NodeSet parents) const {
    const int k = set_size(parents);
    const double aw = alpha_w_, am = alpha_mu_, m = m_, p = p_;
    double score = 0.5 * std::log(am / (am + m)) - 0.5 * m * std::log(2.0 * M_PI);
    score += std::lgamma(0.5 * (m + aw - p + k + 1)) - std::lgamma(0.5 * (aw - p + k + 1));
    score += 0.5 * (aw - p + 2 * k + 1) * std::log(t_);
    score += 0.5 * (m + aw - p + k) * logdet(parents);
    score -= 0.5 * (m + aw - p + k + 1) * logdet(parents | bit(node));
    return score;
}

std::shared_ptr<StructuredScoreTable> compute_bge_tables(const DataMatrix& data,
                                                         const SearchSpace& space,
                                                         const BgeParams& params) {
    if (space.num_nodes() != data.p) throw_invalid("search space node count does not match data");
    space.validate();
    BgeScorer scorer(data, params);
    const int p = data.p;
    std::vector<std::string> warnings;
    std::vector<StructuredScoreTable::NodeTable> tables(p);
    for (int i = 0; i < p; ++i) {
        auto& t = tables[i];
        t.pre_mask = space.preselected[i];
        t.pre_list = set_to_vector(t.pre_mask);
        t.plus1 = space.plus1[i];
        const int k = static_cast<int>(t.pre_list.size());
        const size_t n_sub = size_t{1} << k;
        int max_parents = k + (t.plus1 ? 1 : 0);
        if (max_parents >= data.m)
            warnings.push_back("node " + data.names[i] + ": parent sets up to size " +
                               std::to_string(max_parents) + " with only " +
                               std::to_string(data.m) + " samples");
        t.base.resize(n_sub);
        for (size_t s = 0; s < n_sub; ++s) {
            NodeSet g = 0;
            for (int b = 0; b < k; ++b)
                if ((s >> b) & 1) g |= bit(t.pre_list[b]);
            t.base[s] = scorer.local_score(i, g);
        }
        if (t.plus1) {
            for (int h = 0; h < p; ++h)
                if (h != i && !contains(t.pre_mask, h)) t.plus1_nodes.push_back(h);
            t.p1.resize(t.plus1_nodes.size());
            for (size_t r = 0; r < t.plus1_nodes.size(); ++r) {
                t.p1[r].resize(n_sub);
                NodeSet hbit = bit(t.plus1_nodes[r]);
                for (size_t s = 0; s < n_sub; ++s) {
                    NodeSet g = hbit;
                    for (int b = 0; b < k; ++b)
                        if ((s >> b) & 1) g |= bit(t.pre_list[b]);
                    t.p1[r][s] = scorer.local_score(i, g);
                }
            }
        }
    }
    return std::make_shared<StructuredScoreTable>(data.names, std::move(tables), std::move(warnings));
}

std::shared_ptr<ListScoreTable> compute_bge_capped(const DataMatrix& data, int max_parents,
                                                   const BgeParams& params) {
    if (max_parents < 0) throw_invalid("max_parents must be nonnegative");
    BgeScorer scorer(data, params);
    const int p = data.p;
    std::vector<std::vector<std::pair<NodeSet, double>>> sets(p);
    for (int i = 0; i < p; ++i) {
        NodeSet others = full_set(p) & ~bit(i);
        // enumerate subsets of size <= max_parents
        std::vector<int> pool = set_to_vector(others);
        std::vector<int> pick;
        auto rec = [&](auto&& self, size_t start, NodeSet cur) -> void {
            sets[i].emplace_back(cur, scorer.local_score(i, cur));
            if (set_size(cur) == max_parents) return;
            for (size_t q = start; q < pool.size(); ++q) self(self, q + 1, cur | bit(pool[q]));
        };
        if (max_parents == 0)
            sets[i].emplace_back(0, scorer.local_score(i, 0));
        else
            rec(rec, 0, 0);
    }
    return std::make_shared<ListScoreTable>(data.names, std::move(sets));
}

}  // namespace dncdag
