#pragma once
//
// Project : hgraded
// Module  : multi_index.hpp
// Purpose : enumeration of monomial multi-indices q with |q|_1 <= p in d
//           variables (graded lexicographic order) and rank lookup
//

#include <cstdint>
#include <map>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace hgraded {

using MultiIndex = std::vector<int>;

inline int mi_total(const MultiIndex& q) {
    int s = 0;
    for (int e : q) s += e;
    return s;
}

// Packs exponents into a key; supports d <= 8, exponents <= 127.
inline std::uint64_t mi_key(const MultiIndex& q) {
    std::uint64_t k = 0;
    for (std::size_t i = 0; i < q.size(); ++i) k |= (std::uint64_t(q[i]) & 0x7f) << (8 * i);
    return k;
}

struct MonomialBasis {
    int dim = 0;
    int deg = 0;
    std::vector<MultiIndex> list;                    // graded lex order
    std::unordered_map<std::uint64_t, int> rank_of;  // mi_key -> position

    int rank(const MultiIndex& q) const {
        auto it = rank_of.find(mi_key(q));
        return it == rank_of.end() ? -1 : it->second;
    }
    int size() const { return int(list.size()); }
};

namespace detail {

inline void enumerate_degree(int d, int total, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
    if (pos == d - 1) {
        cur[pos] = total;
        out.push_back(cur);
        return;
    }
    for (int e = total; e >= 0; --e) {
        cur[pos] = e;
        enumerate_degree(d, total - e, cur, pos + 1, out);
    }
}

}  // namespace detail

// Shared cache keyed by (dim, deg). Guarded so parallel polyops calls stay safe.
inline const MonomialBasis& monomial_basis(int dim, int deg) {
    if (dim < 0 || dim > 8) throw numeric_error("monomial_basis: dimension out of range");
    if (deg < 0 || deg > 120) throw numeric_error("monomial_basis: degree out of range");
    static std::map<std::pair<int, int>, MonomialBasis> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(dim, deg);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    MonomialBasis b;
    b.dim = dim;
    b.deg = deg;
    if (dim == 0) {
        b.list.push_back(MultiIndex{});
    } else {
        MultiIndex cur(dim, 0);
        for (int t = 0; t <= deg; ++t) detail::enumerate_degree(dim, t, cur, 0, b.list);
    }
    for (int i = 0; i < int(b.list.size()); ++i) b.rank_of[mi_key(b.list[i])] = i;
    return cache.emplace(key, std::move(b)).first->second;
}

inline int n_monomials(int dim, int deg) { return binom_int(deg + dim, dim); }

}  // namespace hgraded
