#include "islp/oracles.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "islp/error.hpp"

namespace islp {

Text text_from_bytes(const std::string& bytes) {
    Text t;
    t.reserve(bytes.size());
    for (unsigned char b : bytes) {
        if (b == 0) throw BadParams("byte 0 is reserved");
        t.push_back((Symbol)b);
    }
    return t;
}

std::string bytes_from_text(const Text& t) {
    std::string s;
    s.reserve(t.size());
    for (Symbol x : t) {
        if (x == 0 || x > 255) throw BadParams("symbol does not fit in a byte");
        s.push_back((char)(unsigned char)x);
    }
    return s;
}

// ---- suffix structures ----------------------------------------------------

std::vector<std::uint32_t> suffix_array(const Text& t) {
    const std::size_t n = t.size();
    std::vector<std::uint32_t> sa(n);
    std::iota(sa.begin(), sa.end(), 0);
    std::vector<std::int64_t> rank(n), tmp(n);
    for (std::size_t i = 0; i < n; i++) rank[i] = t[i];
    for (std::size_t k = 1;; k <<= 1) {
        auto cmp = [&](std::uint32_t a, std::uint32_t b) {
            if (rank[a] != rank[b]) return rank[a] < rank[b];
            const std::int64_t ra = a + k < n ? rank[a + k] : -1;
            const std::int64_t rb = b + k < n ? rank[b + k] : -1;
            return ra < rb;
        };
        std::sort(sa.begin(), sa.end(), cmp);
        if (n == 0) break;
        tmp[sa[0]] = 0;
        for (std::size_t i = 1; i < n; i++)
            tmp[sa[i]] = tmp[sa[i - 1]] + (cmp(sa[i - 1], sa[i]) ? 1 : 0);
        rank = tmp;
        if ((std::size_t)rank[sa[n - 1]] == n - 1) break;
    }
    return sa;
}

std::vector<std::uint32_t> lcp_array(const Text& t, const std::vector<std::uint32_t>& sa) {
    const std::size_t n = t.size();
    std::vector<std::uint32_t> rank(n), lcp(n, 0);
    for (std::size_t i = 0; i < n; i++) rank[sa[i]] = (std::uint32_t)i;
    std::uint32_t h = 0;
    for (std::size_t i = 0; i < n; i++) {
        if (rank[i] == 0) {
            h = 0;
            continue;
        }
        const std::size_t j = sa[rank[i] - 1];
        if (h) h--;
        while (i + h < n && j + h < n && t[i + h] == t[j + h]) h++;
        lcp[rank[i]] = h;
    }
    return lcp;
}

// ---- substring complexity -------------------------------------------------

Rational delta(const Text& t, std::size_t cap) {
    const std::size_t n = t.size();
    if (n == 0) throw BadParams("delta of the empty text");
    if (n > cap) throw TooLarge("delta: text longer than the cap");
    const auto sa = suffix_array(t);
    const auto lcp = lcp_array(t, sa);
    // ge[k] = how many adjacent suffix pairs share a prefix of length >= k;
    // distinct k-grams = (n - k + 1) - ge[k]
    std::vector<std::uint64_t> hist(n + 2, 0);
    for (std::size_t i = 1; i < n; i++) hist[std::min<std::size_t>(lcp[i], n)]++;
    std::vector<std::uint64_t> ge(n + 2, 0);
    for (std::size_t k = n; k >= 1; k--) ge[k] = ge[k + 1] + hist[k];
    Rational best = 0;
    for (std::size_t k = 1; k <= n; k++) {
        const std::uint64_t dk = (n - k + 1) - ge[k];
        Rational cand((unsigned long)dk, (unsigned long)k);
        cand.canonicalize();
        if (cand > best) best = cand;
    }
    return best;
}

Rational delta_naive(const Text& t) {
    const std::size_t n = t.size();
    if (n == 0) throw BadParams("delta of the empty text");
    Rational best = 0;
    for (std::size_t k = 1; k <= n; k++) {
        std::set<Text> grams;
        for (std::size_t i = 0; i + k <= n; i++)
            grams.insert(Text(t.begin() + i, t.begin() + i + k));
        Rational cand((unsigned long)grams.size(), (unsigned long)k);
        cand.canonicalize();
        if (cand > best) best = cand;
    }
    return best;
}

// ---- longest-previous-factor parse ----------------------------------------

namespace {

// suffix automaton with the end position of each state's first occurrence
struct Sam {
    struct State {
        std::map<Symbol, int> next;
        int link = -1;
        std::uint32_t len = 0;
        std::uint32_t firstpos = 0;
    };
    std::vector<State> st;
    int last = 0;

    explicit Sam(const Text& t) {
        st.reserve(2 * t.size() + 2);
        st.push_back({});
        for (std::size_t i = 0; i < t.size(); i++) append(t[i], (std::uint32_t)i);
    }

    void append(Symbol c, std::uint32_t pos) {
        const int cur = (int)st.size();
        st.push_back({});
        st[cur].len = st[last].len + 1;
        st[cur].firstpos = pos;
        int p = last;
        while (p >= 0 && !st[p].next.count(c)) {
            st[p].next[c] = cur;
            p = st[p].link;
        }
        if (p < 0) {
            st[cur].link = 0;
        } else {
            const int q = st[p].next[c];
            if (st[p].len + 1 == st[q].len) {
                st[cur].link = q;
            } else {
                const int clone = (int)st.size();
                st.push_back(st[q]);
                st[clone].len = st[p].len + 1;
                // the clone inherits q's occurrences, oldest included
                while (p >= 0 && st[p].next[c] == q) {
                    st[p].next[c] = clone;
                    p = st[p].link;
                }
                st[q].link = clone;
                st[cur].link = clone;
            }
        }
        last = cur;
    }
};

} // namespace

std::uint64_t lz76(const Text& t, std::vector<std::uint64_t>* boundaries) {
    const std::size_t n = t.size();
    if (boundaries) boundaries->clear();
    if (n == 0) return 0;
    Sam sam(t);
    std::uint64_t z = 0;
    std::size_t p = 0;
    while (p < n) {
        int cur = 0;
        std::size_t l = 0;
        while (p + l < n) {
            auto itr = sam.st[cur].next.find(t[p + l]);
            if (itr == sam.st[cur].next.end()) break;
            const int nxt = itr->second;
            // earliest occurrence of the matched string of length l+1 starts
            // at firstpos - l; the source must start strictly before p
            if ((std::size_t)sam.st[nxt].firstpos < l || (std::size_t)sam.st[nxt].firstpos - l >= p)
                break;
            cur = nxt;
            l++;
        }
        if (boundaries) boundaries->push_back(p + 1);
        z++;
        p += l == 0 ? 1 : l;
    }
    return z;
}

std::uint64_t lz76_naive(const Text& t, std::vector<std::uint64_t>* boundaries) {
    const std::size_t n = t.size();
    if (boundaries) boundaries->clear();
    std::uint64_t z = 0;
    std::size_t p = 0;
    auto occurs_before = [&](std::size_t start, std::size_t len) {
        for (std::size_t s = 0; s < start; s++) {
            if (s + len > n) break;
            bool eq = true;
            for (std::size_t x = 0; x < len && eq; x++) eq = t[s + x] == t[start + x];
            if (eq) return true;
        }
        return false;
    };
    while (p < n) {
        std::size_t l = 0;
        while (p + l < n && occurs_before(p, l + 1)) l++;
        if (boundaries) boundaries->push_back(p + 1);
        z++;
        p += l == 0 ? 1 : l;
    }
    return z;
}

// ---- BWT runs ---------------------------------------------------------------

Text bwt_of_rotations(const Text& t) {
    const std::size_t n = t.size();
    if (n == 0) return {};
    Text tt(t);
    tt.insert(tt.end(), t.begin(), t.end());
    const auto sa = suffix_array(tt);
    Text bwt;
    bwt.reserve(n);
    // suffixes of TT starting below n, in order, give the sorted rotations;
    // equal rotations may swap, but they share the same preceding symbol
    for (std::uint32_t s : sa) {
        if (s >= n) continue;
        bwt.push_back(t[(s + n - 1) % n]);
    }
    return bwt;
}

Text bwt_with_sentinel(const Text& t) {
    Text td(t);
    td.push_back(0); // sentinel, smaller than every symbol
    const auto sa = suffix_array(td);
    Text bwt;
    bwt.reserve(td.size());
    for (std::uint32_t s : sa) bwt.push_back(s == 0 ? 0 : td[s - 1]);
    return bwt;
}

static std::uint64_t count_runs(const Text& t) {
    std::uint64_t r = 0;
    for (std::size_t i = 0; i < t.size(); i++)
        if (i == 0 || t[i] != t[i - 1]) r++;
    return r;
}

std::uint64_t bwt_runs(const Text& t) { return count_runs(bwt_of_rotations(t)); }

std::uint64_t bwt_runs_dollar(const Text& t) { return count_runs(bwt_with_sentinel(t)); }

// ---- text families ----------------------------------------------------------

Text gen_s_k(std::uint64_t k) {
    Text t;
    for (std::uint64_t i = 1; i <= k; i++) {
        for (std::uint64_t j = 0; j < i; j++) t.push_back('a');
        t.push_back('b');
    }
    return t;
}

Grammar grammar_s_k(std::uint64_t k) {
    if (k < 1) throw BadParams("s_k needs k >= 1");
    Grammar g;
    g.sigma = 'b';
    g.rules.push_back(TerminalRule{'a'});                                // 0
    g.rules.push_back(TerminalRule{'b'});                                // 1
    g.rules.push_back(IterationRule{1, k, {IterFactor{0, 1}, IterFactor{1, 0}}}); // 2
    g.start = 2;
    return g;
}

Text gen_fibonacci(unsigned i) {
    Text a{'a'}, b{'b'};
    if (i == 0) return a;
    if (i == 1) return b;
    Text prev = a, cur = b;
    for (unsigned x = 2; x <= i; x++) {
        Text nxt(cur);
        nxt.insert(nxt.end(), prev.begin(), prev.end());
        prev = std::move(cur);
        cur = std::move(nxt);
    }
    return cur;
}

Grammar grammar_fibonacci(unsigned i) {
    Grammar g;
    g.sigma = 'b';
    g.rules.push_back(TerminalRule{'a'}); // F_0
    g.rules.push_back(TerminalRule{'b'}); // F_1
    for (unsigned x = 2; x <= i; x++)
        g.rules.push_back(BinaryRule{(SymbolId)(x - 1), (SymbolId)(x - 2)});
    g.start = (SymbolId)(i < g.rules.size() ? i : g.rules.size() - 1);
    return g;
}

Text gen_thue_morse_prefix(std::uint64_t n) {
    Text t;
    t.reserve(n);
    for (std::uint64_t i = 0; i < n; i++)
        t.push_back(std::popcount(i) % 2 ? 'b' : 'a');
    return t;
}

Grammar grammar_thue_morse(unsigned levels) {
    // a -> ab, b -> ba iterated; level L derives 2^L symbols
    Grammar g;
    g.sigma = 'b';
    g.rules.push_back(TerminalRule{'a'}); // A_0
    g.rules.push_back(TerminalRule{'b'}); // B_0
    for (unsigned x = 1; x <= levels; x++) {
        const SymbolId a_prev = (SymbolId)(2 * (x - 1));
        const SymbolId b_prev = (SymbolId)(2 * (x - 1) + 1);
        g.rules.push_back(BinaryRule{a_prev, b_prev}); // A_x
        g.rules.push_back(BinaryRule{b_prev, a_prev}); // B_x
    }
    g.start = (SymbolId)(2 * levels);
    return g;
}

// ---- naive run-length grammar ------------------------------------------------

Grammar build_naive_rlslp(const Text& t, std::uint64_t seed) {
    if (t.empty()) throw BadParams("cannot build a grammar for the empty text");
    Grammar g;
    for (Symbol ch : t) {
        if (ch == 0) throw BadParams("symbol 0 is reserved");
        g.sigma = std::max(g.sigma, ch);
    }
    std::map<Symbol, SymbolId> term;
    std::vector<SymbolId> seq;
    seq.reserve(t.size());
    for (Symbol ch : t) {
        auto itr = term.find(ch);
        if (itr == term.end()) {
            g.rules.push_back(TerminalRule{ch});
            itr = term.emplace(ch, (SymbolId)(g.rules.size() - 1)).first;
        }
        seq.push_back(itr->second);
    }
    std::mt19937_64 rng(seed);

    while (seq.size() > 1) {
        // collapse every maximal run of length >= 2
        std::vector<SymbolId> nxt;
        std::map<std::pair<SymbolId, std::uint64_t>, SymbolId> run_rule;
        bool collapsed = false;
        for (std::size_t i = 0; i < seq.size();) {
            std::size_t j = i;
            while (j < seq.size() && seq[j] == seq[i]) j++;
            const std::uint64_t m = j - i;
            if (m >= 2) {
                auto key = std::make_pair(seq[i], m);
                auto itr = run_rule.find(key);
                if (itr == run_rule.end()) {
                    g.rules.push_back(IterationRule{1, m, {IterFactor{seq[i], 0}}});
                    itr = run_rule.emplace(key, (SymbolId)(g.rules.size() - 1)).first;
                }
                nxt.push_back(itr->second);
                collapsed = true;
            } else {
                nxt.push_back(seq[i]);
            }
            i = j;
        }
        seq = std::move(nxt);
        if (collapsed || seq.size() <= 1) continue;

        // most frequent adjacent pair, ties broken at random
        std::map<std::pair<SymbolId, SymbolId>, std::uint64_t> freq;
        for (std::size_t i = 0; i + 1 < seq.size(); i++)
            freq[{seq[i], seq[i + 1]}]++;
        std::pair<SymbolId, SymbolId> best{};
        std::uint64_t best_cnt = 0, ties = 0;
        for (const auto& [pr, cnt] : freq) {
            if (cnt > best_cnt) {
                best = pr;
                best_cnt = cnt;
                ties = 1;
            } else if (cnt == best_cnt && rng() % ++ties == 0) {
                best = pr;
            }
        }
        g.rules.push_back(BinaryRule{best.first, best.second});
        const SymbolId pid = (SymbolId)(g.rules.size() - 1);
        std::vector<SymbolId> out;
        out.reserve(seq.size());
        for (std::size_t i = 0; i < seq.size();) {
            if (i + 1 < seq.size() && seq[i] == best.first && seq[i + 1] == best.second) {
                out.push_back(pid);
                i += 2;
            } else {
                out.push_back(seq[i]);
                i++;
            }
        }
        seq = std::move(out);
    }
    g.start = seq[0];
    return g;
}

} // namespace islp
