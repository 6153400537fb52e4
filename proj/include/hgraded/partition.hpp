#pragma once
//
// Project : hgraded
// Module  : partition.hpp
// Purpose : sparse hierarchical block partition by recursive admissibility
//           descent over the block cluster tree
//
// (I,J) is admissible when diam(B_I) <= C_adm * dist(B_I, B_J) with strictly
// positive distance; otherwise the recursion descends until either side is a
// leaf, which yields a small block (min(|I|,|J|) <= C_small by construction).
//

#include <map>
#include <vector>

#include "cluster.hpp"
#include "common.hpp"

namespace hgraded {

struct Block {
    int row_node = 0;  // cluster-tree node ids
    int col_node = 0;
    bool admissible = false;
    int level = 0;
};

struct BlockPartition {
    ClusterTree tree;  // owns permutation and boxes
    std::vector<Block> blocks;
    double c_adm = 2.0;
    int depth = 0;      // block-cluster-tree depth (levels)
    int sparsity = 0;   // max blocks sharing one row or column cluster

    int n() const { return tree.n(); }
    int row_lo(const Block& b) const { return tree.nodes[b.row_node].begin; }
    int row_len(const Block& b) const { return tree.nodes[b.row_node].size(); }
    int col_lo(const Block& b) const { return tree.nodes[b.col_node].begin; }
    int col_len(const Block& b) const { return tree.nodes[b.col_node].size(); }
};

namespace partdetail {

inline bool admissible_pair(const ClusterTree& t, int i, int j, double c_adm) {
    const Box2& bi = t.nodes[i].box;
    const Box2& bj = t.nodes[j].box;
    double d = dist(bi, bj);
    return d > 0.0 && bi.diam() <= c_adm * d;
}

inline void descend(BlockPartition& p, int i, int j, int level) {
    p.depth = std::max(p.depth, level + 1);
    if (partdetail::admissible_pair(p.tree, i, j, p.c_adm)) {
        p.blocks.push_back({i, j, true, level});
        return;
    }
    const ClusterNode& ni = p.tree.nodes[i];
    const ClusterNode& nj = p.tree.nodes[j];
    if (ni.leaf() || nj.leaf()) {
        p.blocks.push_back({i, j, false, level});
        return;
    }
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) descend(p, ni.child[a], nj.child[b], level + 1);
}

}  // namespace partdetail

inline BlockPartition build_block_partition(ClusterTree tree, double c_adm) {
    if (!(c_adm > 0.0)) throw config_error("build_block_partition: C_adm > 0 required");
    BlockPartition p;
    p.tree = std::move(tree);
    p.c_adm = c_adm;
    partdetail::descend(p, 0, 0, 0);
    // sparsity constant: max number of blocks sharing a row/column cluster
    std::map<int, int> row_count, col_count;
    for (const auto& b : p.blocks) {
        row_count[b.row_node]++;
        col_count[b.col_node]++;
    }
    for (const auto& [node, c] : row_count) p.sparsity = std::max(p.sparsity, c);
    for (const auto& [node, c] : col_count) p.sparsity = std::max(p.sparsity, c);
    return p;
}

// Exactness check: the blocks tile {0..N-1}^2 exactly once. Counting plus a
// handful of random membership probes (cheap but effective diagnostics).
inline bool partition_is_exact(const BlockPartition& p, Rng* rng = nullptr, int probes = 256) {
    long long total = 0;
    for (const auto& b : p.blocks) total += 1LL * p.row_len(b) * p.col_len(b);
    if (total != 1LL * p.n() * p.n()) return false;
    if (rng) {
        for (int it = 0; it < probes; ++it) {
            int i = int(rng->next_index(p.n()));
            int j = int(rng->next_index(p.n()));
            int hits = 0;
            for (const auto& b : p.blocks) {
                if (i >= p.row_lo(b) && i < p.row_lo(b) + p.row_len(b) && j >= p.col_lo(b) &&
                    j < p.col_lo(b) + p.col_len(b))
                    ++hits;
            }
            if (hits != 1) return false;
        }
    }
    return true;
}

// Admissibility / small-ness invariants of every block.
inline bool partition_blocks_valid(const BlockPartition& p, int c_small) {
    for (const auto& b : p.blocks) {
        if (b.admissible) {
            if (!partdetail::admissible_pair(p.tree, b.row_node, b.col_node, p.c_adm)) return false;
        } else {
            if (std::min(p.row_len(b), p.col_len(b)) > c_small) return false;
        }
    }
    return true;
}

}  // namespace hgraded
