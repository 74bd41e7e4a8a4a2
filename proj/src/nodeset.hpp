#ifndef DNCDAG_NODESET_HPP
#define DNCDAG_NODESET_HPP

#include <bit>
#include <cstdint>
#include <vector>

namespace dncdag {

// Node sets are 64-bit masks over dense 0-based node ids. The search engine
// therefore supports up to 64 variables, which covers the instance sizes the
// suborder search is feasible for anyway.
using NodeSet = std::uint64_t;

constexpr int kMaxNodes = 64;

inline NodeSet bit(int i) { return NodeSet{1} << i; }

inline bool contains(NodeSet s, int i) { return (s >> i) & 1; }

inline int set_size(NodeSet s) { return std::popcount(s); }

inline NodeSet full_set(int p) {
    return p >= kMaxNodes ? ~NodeSet{0} : (NodeSet{1} << p) - 1;
}

inline int lowest_node(NodeSet s) { return std::countr_zero(s); }

// Visits members in ascending order.
template <typename F>
inline void for_each_node(NodeSet s, F&& f) {
    while (s) {
        f(std::countr_zero(s));
        s &= s - 1;
    }
}

inline std::vector<int> set_to_vector(NodeSet s) {
    std::vector<int> out;
    out.reserve(set_size(s));
    for_each_node(s, [&](int v) { out.push_back(v); });
    return out;
}

inline NodeSet vector_to_set(const std::vector<int>& v) {
    NodeSet s = 0;
    for (int i : v) s |= bit(i);
    return s;
}

// Orders parent sets for deterministic tie-breaking: smaller set first, then
// the set whose ascending node list is lexicographically smaller. For equal
// sizes the lex-smaller list is the one owning the lowest differing bit.
inline bool set_less(NodeSet a, NodeSet b) {
    if (a == b) return false;
    int sa = set_size(a), sb = set_size(b);
    if (sa != sb) return sa < sb;
    NodeSet diff = a ^ b;
    return contains(a, lowest_node(diff));
}

// Iterates all submasks of `mask` (including 0 and mask itself).
template <typename F>
inline void for_each_subset(NodeSet mask, F&& f) {
    NodeSet sub = mask;
    while (true) {
        f(sub);
        if (sub == 0) break;
        sub = (sub - 1) & mask;
    }
}

}  // namespace dncdag

#endif
