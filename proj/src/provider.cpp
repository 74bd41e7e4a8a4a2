#include "provider.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace dncdag {

void ScoreProvider::set_names(std::vector<std::string> names) {
    if (names.empty()) throw_invalid("provider needs at least one variable");
    if (static_cast<int>(names.size()) > kMaxNodes)
        throw_invalid("at most " + std::to_string(kMaxNodes) + " variables supported");
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) throw_invalid("empty variable name");
        if (!seen.insert(n).second) throw_invalid("duplicate variable name: " + n);
    }
    names_ = std::move(names);
}

int ScoreProvider::node_index(const std::string& name) const {
    for (int i = 0; i < num_nodes(); ++i)
        if (names_[i] == name) return i;
    return -1;
}

// ---------------------------------------------------------------------------
// StructuredScoreTable

void StructuredScoreTable::finalize_node_table(NodeTable& t) {
    const int k = static_cast<int>(t.pre_list.size());
    const size_t n_sub = size_t{1} << k;
    auto sweep = [&](const std::vector<double>& vals, NodeSet extra,
                     std::vector<double>& cmax, std::vector<NodeSet>& carg) {
        cmax = vals;
        carg.assign(n_sub, 0);
        for (size_t s = 0; s < n_sub; ++s) {
            NodeSet g = extra;
            for (int b = 0; b < k; ++b)
                if ((s >> b) & 1) g |= bit(t.pre_list[b]);
            carg[s] = g;
        }
        for (int b = 0; b < k; ++b) {
            for (size_t s = 0; s < n_sub; ++s) {
                if (!((s >> b) & 1)) continue;
                size_t without = s & ~(size_t{1} << b);
                if (cmax[without] > cmax[s] ||
                    (cmax[without] == cmax[s] && set_less(carg[without], carg[s]))) {
                    cmax[s] = cmax[without];
                    carg[s] = carg[without];
                }
            }
        }
    };
    sweep(t.base, 0, t.base_cmax, t.base_carg);
    t.p1_cmax.resize(t.p1.size());
    t.p1_carg.resize(t.p1.size());
    for (size_t r = 0; r < t.p1.size(); ++r)
        sweep(t.p1[r], bit(t.plus1_nodes[r]), t.p1_cmax[r], t.p1_carg[r]);
}

StructuredScoreTable::StructuredScoreTable(std::vector<std::string> names,
                                           std::vector<NodeTable> tables,
                                           std::vector<std::string> warnings) {
    set_names(std::move(names));
    warnings_ = std::move(warnings);
    if (tables.size() != names_.size()) throw_invalid("table count does not match variable count");
    const int p = num_nodes();
    for (int i = 0; i < p; ++i) {
        auto& t = tables[i];
        if (contains(t.pre_mask, i)) throw_invalid("node " + names_[i] + " is its own potential parent");
        const size_t n_sub = size_t{1} << t.pre_list.size();
        if (t.base.size() != n_sub) throw_invalid("base table size mismatch for " + names_[i]);
        if (t.plus1) {
            if (t.p1.size() != t.plus1_nodes.size())
                throw_invalid("plus1 table size mismatch for " + names_[i]);
            for (const auto& row : t.p1)
                if (row.size() != n_sub) throw_invalid("plus1 row size mismatch for " + names_[i]);
        }
        t.row_of.assign(p, -1);
        for (size_t r = 0; r < t.plus1_nodes.size(); ++r) t.row_of[t.plus1_nodes[r]] = static_cast<int>(r);
        if (t.base_cmax.empty()) finalize_node_table(t);
    }
    tables_ = std::move(tables);
}

int StructuredScoreTable::compact(int node, NodeSet global) const {
    const auto& t = tables_[node];
    int local = 0;
    for (size_t b = 0; b < t.pre_list.size(); ++b)
        if (contains(global, t.pre_list[b])) local |= 1 << b;
    return local;
}

double StructuredScoreTable::local_score(int node, NodeSet parents) const {
    const auto& t = tables_[node];
    NodeSet outside = parents & ~t.pre_mask;
    if (outside == 0) return t.base[compact(node, parents)];
    if (t.plus1 && set_size(outside) == 1) {
        int r = t.row_of[lowest_node(outside)];
        if (r >= 0) return t.p1[r][compact(node, parents)];
    }
    return kNegInf;
}

double StructuredScoreTable::best_score(int node, NodeSet potential) const {
    const auto& t = tables_[node];
    int local = compact(node, potential);
    double best = t.base_cmax[local];
    if (t.plus1) {
        for_each_node(potential & ~t.pre_mask & ~bit(node), [&](int h) {
            int r = t.row_of[h];
            if (r >= 0 && t.p1_cmax[r][local] > best) best = t.p1_cmax[r][local];
        });
    }
    return best;
}

BestParents StructuredScoreTable::best(int node, NodeSet potential) const {
    const auto& t = tables_[node];
    int local = compact(node, potential);
    BestParents out{t.base_cmax[local], t.base_carg[local]};
    if (t.plus1) {
        for_each_node(potential & ~t.pre_mask & ~bit(node), [&](int h) {
            int r = t.row_of[h];
            if (r < 0) return;
            double v = t.p1_cmax[r][local];
            NodeSet a = t.p1_carg[r][local];
            if (v > out.score || (v == out.score && set_less(a, out.parents)))
                out = {v, a};
        });
    }
    return out;
}

void StructuredScoreTable::admissible_sets(int node,
                                           const std::function<void(NodeSet, double)>& f) const {
    const auto& t = tables_[node];
    const size_t n_sub = t.base.size();
    auto global_of = [&](size_t s) {
        NodeSet g = 0;
        for (size_t b = 0; b < t.pre_list.size(); ++b)
            if ((s >> b) & 1) g |= bit(t.pre_list[b]);
        return g;
    };
    for (size_t s = 0; s < n_sub; ++s) f(global_of(s), t.base[s]);
    for (size_t r = 0; r < t.p1.size(); ++r) {
        NodeSet h = bit(t.plus1_nodes[r]);
        for (size_t s = 0; s < n_sub; ++s) f(global_of(s) | h, t.p1[r][s]);
    }
}

// ---------------------------------------------------------------------------
// ListScoreTable

ListScoreTable::ListScoreTable(std::vector<std::string> names,
                               std::vector<std::vector<std::pair<NodeSet, double>>> sets) {
    set_names(std::move(names));
    if (sets.size() != names_.size()) throw_invalid("set-list count does not match variable count");
    for (int i = 0; i < num_nodes(); ++i) {
        auto& v = sets[i];
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
            return set_less(a.first, b.first);
        });
        for (size_t j = 0; j + 1 < v.size(); ++j)
            if (v[j].first == v[j + 1].first)
                throw_invalid("duplicate parent set for " + names_[i]);
        for (const auto& [s, sc] : v) {
            (void)sc;
            if (contains(s, i)) throw_invalid("node " + names_[i] + " is its own parent");
        }
    }
    sets_ = std::move(sets);
}

double ListScoreTable::local_score(int node, NodeSet parents) const {
    for (const auto& [s, sc] : sets_[node])
        if (s == parents) return sc;
    return kNegInf;
}

double ListScoreTable::best_score(int node, NodeSet potential) const {
    double best = kNegInf;
    for (const auto& [s, sc] : sets_[node])
        if ((s & ~potential) == 0 && sc > best) best = sc;
    return best;
}

BestParents ListScoreTable::best(int node, NodeSet potential) const {
    BestParents out;
    bool first = true;
    for (const auto& [s, sc] : sets_[node]) {
        if ((s & ~potential) != 0) continue;
        if (first || sc > out.score || (sc == out.score && set_less(s, out.parents))) {
            out = {sc, s};
            first = false;
        }
    }
    return out;
}

void ListScoreTable::admissible_sets(int node,
                                     const std::function<void(NodeSet, double)>& f) const {
    for (const auto& [s, sc] : sets_[node]) f(s, sc);
}

// ---------------------------------------------------------------------------
// Score file format:
//   line 1:   p
//   then per variable: "name m_i" followed by m_i lines "score k pa_1 .. pa_k"

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream in(line);
    std::string t;
    while (in >> t) toks.push_back(t);
    return toks;
}

double parse_real(const std::string& tok, int lineno) {
    double v;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw_parse("line " + std::to_string(lineno) + ": bad real '" + tok + "'");
    return v;
}

long parse_int(const std::string& tok, int lineno) {
    long v;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw_parse("line " + std::to_string(lineno) + ": bad integer '" + tok + "'");
    return v;
}

std::string format_real(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, ptr);
}

}  // namespace

std::shared_ptr<ScoreProvider> parse_score_string(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto next_line = [&]() -> std::vector<std::string> {
        while (std::getline(in, line)) {
            ++lineno;
            auto toks = tokenize(line);
            if (!toks.empty()) return toks;
        }
        throw_parse(origin + ": unexpected end of file at line " + std::to_string(lineno));
    };

    auto header = next_line();
    if (header.size() != 1) throw_parse(origin + ": line " + std::to_string(lineno) + ": expected variable count");
    long p = parse_int(header[0], lineno);
    if (p < 1 || p > kMaxNodes) throw_parse(origin + ": unsupported variable count " + std::to_string(p));

    struct Block {
        std::string name;
        std::vector<std::pair<std::vector<std::string>, double>> raw_sets;
    };
    std::vector<Block> blocks;
    std::vector<std::string> names;
    for (long i = 0; i < p; ++i) {
        auto head = next_line();
        if (head.size() != 2)
            throw_parse(origin + ": line " + std::to_string(lineno) + ": expected 'name count'");
        Block b;
        b.name = head[0];
        long mi = parse_int(head[1], lineno);
        if (mi < 0) throw_parse(origin + ": line " + std::to_string(lineno) + ": negative set count");
        for (long j = 0; j < mi; ++j) {
            auto toks = next_line();
            if (toks.size() < 2)
                throw_parse(origin + ": line " + std::to_string(lineno) + ": expected 'score k parents...'");
            double sc = parse_real(toks[0], lineno);
            long k = parse_int(toks[1], lineno);
            if (k < 0 || toks.size() != static_cast<size_t>(2 + k))
                throw_parse(origin + ": line " + std::to_string(lineno) + ": parent count mismatch");
            std::vector<std::string> parents(toks.begin() + 2, toks.end());
            b.raw_sets.emplace_back(std::move(parents), sc);
        }
        names.push_back(b.name);
        blocks.push_back(std::move(b));
    }

    std::unordered_map<std::string, int> index;
    for (size_t i = 0; i < names.size(); ++i) {
        if (!index.emplace(names[i], static_cast<int>(i)).second)
            throw_parse(origin + ": duplicate variable name " + names[i]);
    }

    std::vector<std::vector<std::pair<NodeSet, double>>> sets(p);
    for (size_t i = 0; i < blocks.size(); ++i) {
        std::unordered_set<NodeSet> seen;
        for (const auto& [parents, sc] : blocks[i].raw_sets) {
            NodeSet mask = 0;
            for (const auto& label : parents) {
                auto it = index.find(label);
                if (it == index.end())
                    throw_parse(origin + ": unknown variable name '" + label + "' in block " + names[i]);
                mask |= bit(it->second);
            }
            if (static_cast<size_t>(set_size(mask)) != parents.size())
                throw_parse(origin + ": repeated parent in a set of " + names[i]);
            if (!seen.insert(mask).second)
                throw_parse(origin + ": duplicate parent set for " + names[i]);
            sets[i].emplace_back(mask, sc);
        }
    }
    return std::make_shared<ListScoreTable>(std::move(names), std::move(sets));
}

std::shared_ptr<ScoreProvider> load_score_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_io("cannot open score file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_score_string(ss.str(), path);
}

std::string score_file_string(const ScoreProvider& sp) {
    const int p = sp.num_nodes();
    std::ostringstream out;
    out << p << "\n";
    for (int i = 0; i < p; ++i) {
        std::vector<std::pair<NodeSet, double>> entries;
        sp.admissible_sets(i, [&](NodeSet s, double sc) {
            if (std::isfinite(sc)) entries.emplace_back(s, sc);
        });
        std::sort(entries.begin(), entries.end(),
                  [](const auto& a, const auto& b) { return set_less(a.first, b.first); });
        out << sp.name(i) << " " << entries.size() << "\n";
        for (const auto& [s, sc] : entries) {
            out << format_real(sc) << " " << set_size(s);
            for_each_node(s, [&](int v) { out << " " << sp.name(v); });
            out << "\n";
        }
    }
    return out.str();
}

void write_score_file(const ScoreProvider& sp, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw_io("cannot open for writing: " + path);
    out << score_file_string(sp);
    if (!out) throw_io("write failed: " + path);
}

// ---------------------------------------------------------------------------

double canonical_sum(std::vector<double> terms) {
    std::sort(terms.begin(), terms.end());
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

double score_order(const ScoreProvider& sp, const std::vector<int>& order, NodeSet ctx) {
    std::vector<double> terms;
    terms.reserve(order.size());
    NodeSet right = ctx;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        terms.push_back(sp.best_score(*it, right));
        right |= bit(*it);
    }
    return canonical_sum(std::move(terms));
}

}  // namespace dncdag
