// Range-minimum, next-smaller-value and previous-smaller-value queries.
//
// Every symbol stores the leftmost minimum of its expansion. Iteration rules
// additionally get a sparse table (range minimum over factor minima) and a
// wavelet tree (leftmost or rightmost factor whose minimum beats a
// threshold). A query then cuts at most two root-to-leaf paths: ranges that
// align with whole symbols are answered from the tables in O(1).
#ifndef ISLP_QUERIES_HPP
#define ISLP_QUERIES_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "islp/navigate.hpp"

namespace islp {

// leftmost minimum of a range: 1-based position and the value there
struct RmqPair {
    std::uint64_t pos = 0;
    Symbol val = 0;
};

struct QueryStats {
    std::uint64_t partial_calls = 0; // recursive calls whose range cuts the symbol
    std::uint64_t descents = 0;      // steps of whole-symbol first/last descents
};

// leftmost expansion minimum per symbol, bottom-up. For an iteration rule the
// minimum always lives in the first enumerated block, because every factor
// contributes at least one copy to every block.
std::vector<RmqPair> compute_rmq_meta(const Grammar& g, const LengthTable& lt);

// static range minimum over a small array, leftmost index on ties
class SparseTable {
public:
    SparseTable() = default;
    explicit SparseTable(const std::vector<Symbol>& v);
    // leftmost index of the minimum in v[l..r], 0-based inclusive
    std::size_t query(std::size_t l, std::size_t r) const;

private:
    std::vector<std::vector<std::uint32_t>> idx_;
    std::vector<Symbol> v_;
};

// wavelet tree over a small sequence; rank arrays per level, positions are
// mapped back through children by binary-searched select
class WaveletTree {
public:
    static constexpr std::size_t npos = (std::size_t)-1;

    WaveletTree() = default;
    explicit WaveletTree(const std::vector<Symbol>& v);

    // smallest index in [l, r) with v[index] < x, npos if none
    std::size_t leftmost_less(std::size_t l, std::size_t r, Symbol x) const;
    // largest such index, npos if none
    std::size_t rightmost_less(std::size_t l, std::size_t r, Symbol x) const;

private:
    struct Node {
        std::uint32_t lo = 0, hi = 0, mid = 0; // rank interval [lo, hi)
        int left = -1, right = -1;
        std::vector<std::uint32_t> r1; // ones among the first i elements
    };
    int build(std::vector<std::uint32_t> seq, std::uint32_t lo, std::uint32_t hi);
    std::size_t left_rec(int nd, std::size_t l, std::size_t r, std::uint32_t rx) const;
    std::size_t right_rec(int nd, std::size_t l, std::size_t r, std::uint32_t rx) const;

    std::vector<Node> nodes_;
    std::vector<Symbol> vals_; // sorted distinct values
    int root_ = -1;
    std::size_t n_ = 0;
};

class QueryEngine {
public:
    explicit QueryEngine(const Grammar& g);

    const Navigator& nav() const { return nav_; }
    const RmqPair& meta(SymbolId a) const { return meta_[a]; }

    // leftmost minimum of T[p..q], 1-based inclusive
    RmqPair rmq(std::uint64_t p, std::uint64_t q, QueryStats* st = nullptr) const;
    // same, relative to exp(a)
    RmqPair rmq_in(SymbolId a, std::uint64_t p, std::uint64_t q, QueryStats* st = nullptr) const;

    // smallest q >= p with T[q] < v, n+1 if none
    std::uint64_t nsv(std::uint64_t p, Symbol v, QueryStats* st = nullptr) const;
    // largest q <= p with T[q] < v, 0 if none
    std::uint64_t psv(std::uint64_t p, Symbol v, QueryStats* st = nullptr) const;

private:
    struct IterAux {
        std::vector<Symbol> v; // factor minima, in factor order
        SparseTable st;
        WaveletTree wt;
        std::uint64_t first_min_r = 1; // leftmost factor holding the rule minimum
    };

    RmqPair rmq_rec(SymbolId a, std::uint64_t p, std::uint64_t q, QueryStats* st) const;
    RmqPair seg_rmq(SymbolId base, std::uint64_t bl, std::uint64_t p, std::uint64_t q,
                    QueryStats* st) const;
    std::uint64_t descend_first(SymbolId a, Symbol v, QueryStats* st) const;
    std::uint64_t descend_last(SymbolId a, Symbol v, QueryStats* st) const;
    std::uint64_t nsv_rec(SymbolId a, std::uint64_t from, Symbol v, QueryStats* st) const;
    std::uint64_t psv_rec(SymbolId a, std::uint64_t upto, Symbol v, QueryStats* st) const;

    Navigator nav_;
    std::vector<RmqPair> meta_;
    std::vector<std::unique_ptr<IterAux>> aux_;
};

} // namespace islp

#endif
