#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hgraded/assemble.hpp"
#include "hgraded/cluster.hpp"
#include "hgraded/partition.hpp"

using namespace hgraded;

namespace {

std::vector<Box2> point_boxes(const std::vector<Vec2>& pts) {
    std::vector<Box2> out;
    for (auto p : pts) out.push_back(Box2::point(p));
    return out;
}

std::vector<Box2> mesh_dof_boxes(const Mesh& m, int p) {
    DofMap dm = build_dofmap(m, p);
    std::vector<Box2> out;
    for (const auto& d : dm.dofs) out.push_back(d.support_box);
    return out;
}

}  // namespace

TEST_CASE("single dof gives a single leaf") {
    ClusterTree t = build_cluster_tree(point_boxes({{0.3, 0.4}}), 4);
    REQUIRE(t.nodes.size() == 1);
    REQUIRE(t.nodes[0].leaf());
    REQUIRE(t.depth == 1);
    REQUIRE(t.perm == std::vector<int>{0});
}

TEST_CASE("16 grid dofs with C_small=4: depth-2 tree with four leaves of four") {
    std::vector<Vec2> pts;
    for (int j = 0; j < 4; ++j)
        for (int i = 0; i < 4; ++i) pts.push_back({double(i) / 3.0, double(j) / 3.0});
    ClusterTree t = build_cluster_tree(point_boxes(pts), 4);
    REQUIRE(t.depth == 3);  // root, two children, four leaves -> 3 levels
    int leaves = 0;
    for (const auto& n : t.nodes)
        if (n.leaf()) {
            ++leaves;
            REQUIRE(n.size() == 4);
            REQUIRE(n.level == 2);
        }
    REQUIRE(leaves == 4);
    // permutation is a bijection
    std::vector<int> seen(16, 0);
    for (int v : t.perm) seen[v]++;
    for (int c : seen) REQUIRE(c == 1);
}

TEST_CASE("children partition the parent's range") {
    Rng rng(61);
    std::vector<Vec2> pts;
    for (int i = 0; i < 137; ++i) pts.push_back({rng.next_unit(), rng.next_unit()});
    ClusterTree t = build_cluster_tree(point_boxes(pts), 8);
    for (const auto& n : t.nodes) {
        if (n.leaf()) {
            REQUIRE(n.size() <= 8);
            continue;
        }
        const auto& c0 = t.nodes[n.child[0]];
        const auto& c1 = t.nodes[n.child[1]];
        REQUIRE(c0.begin == n.begin);
        REQUIRE(c0.end == c1.begin);
        REQUIRE(c1.end == n.end);
        REQUIRE(c0.size() > 0);
        REQUIRE(c1.size() > 0);
    }
}

TEST_CASE("degenerate coincident centers still terminate via the median fallback") {
    std::vector<Vec2> pts(20, Vec2{0.5, 0.5});
    ClusterTree t = build_cluster_tree(point_boxes(pts), 3);
    for (const auto& n : t.nodes)
        if (n.leaf()) REQUIRE(n.size() <= 3);
}

TEST_CASE("depth grows like log(h_min^{-2}) on the exponential family") {
    std::vector<double> logs, depths;
    for (int L : {6, 8, 10, 12, 14}) {
        GradingSpec g;
        g.alpha = kInf;
        g.H = 0.25;
        g.edge = EdgeTarget::left;
        g.layers = L;
        Mesh m = make_graded_mesh(g);
        auto [hmin, hmax] = mesh_widths(m);
        (void)hmax;
        ClusterTree t = build_cluster_tree(mesh_dof_boxes(m, 1), 32);
        logs.push_back(std::log(1.0 / (hmin * hmin)));
        depths.push_back(double(t.depth));
    }
    // linear budget depth <= c0 + c1 * ln(h_min^{-2}) with fixed constants
    for (std::size_t i = 0; i < logs.size(); ++i) {
        INFO("L-case " << i << ": depth " << depths[i] << " vs log " << logs[i]);
        REQUIRE(depths[i] <= 4.0 + 2.2 * logs[i]);
    }
    // monotone growth stays moderate between consecutive family members
    for (std::size_t i = 1; i < logs.size(); ++i)
        REQUIRE(depths[i] - depths[i - 1] <= 2.2 * (logs[i] - logs[i - 1]) + 2.0);
}

TEST_CASE("partition: N <= C_small gives the single small block") {
    Rng rng(62);
    std::vector<Vec2> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({rng.next_unit(), rng.next_unit()});
    BlockPartition p = build_block_partition(build_cluster_tree(point_boxes(pts), 16), 2.0);
    REQUIRE(p.blocks.size() == 1);
    REQUIRE(!p.blocks[0].admissible);
    REQUIRE(p.row_len(p.blocks[0]) == 10);
    REQUIRE(partition_is_exact(p, &rng));
}

TEST_CASE("two separated clouds: cross blocks admissible at the first level") {
    Rng rng(63);
    std::vector<Vec2> pts;
    for (int i = 0; i < 20; ++i) pts.push_back({0.1 * rng.next_unit(), 0.1 * rng.next_unit()});
    for (int i = 0; i < 20; ++i)
        pts.push_back({0.9 + 0.1 * rng.next_unit(), 0.9 + 0.1 * rng.next_unit()});
    BlockPartition p = build_block_partition(build_cluster_tree(point_boxes(pts), 8), 2.0);
    // diam(cloud) ~ 0.14 <= 2 * dist ~ 2 * 1.13: the off-diagonal pair at level 1
    int adm_level1 = 0;
    for (const auto& b : p.blocks)
        if (b.admissible && b.level == 1) ++adm_level1;
    REQUIRE(adm_level1 == 2);
    REQUIRE(partition_is_exact(p, &rng));
    REQUIRE(partition_blocks_valid(p, 8));
}

TEST_CASE("partition covers the index square exactly once on random dof sets") {
    Rng rng(64);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 5 + int(rng.next_index(200));
        std::vector<Vec2> pts;
        for (int i = 0; i < n; ++i) pts.push_back({rng.next_unit(), rng.next_unit()});
        int c_small = 2 + int(rng.next_index(16));
        double c_adm = 0.5 + 3.0 * rng.next_unit();
        BlockPartition p = build_block_partition(build_cluster_tree(point_boxes(pts), c_small), c_adm);
        REQUIRE(partition_is_exact(p, &rng, 64));
        REQUIRE(partition_blocks_valid(p, c_small));
        // admissibility with strict positivity of the distance
        for (const auto& b : p.blocks) {
            if (!b.admissible) continue;
            const Box2& bi = p.tree.nodes[b.row_node].box;
            const Box2& bj = p.tree.nodes[b.col_node].box;
            REQUIRE(dist(bi, bj) > 0.0);
            REQUIRE(bi.diam() <= c_adm * dist(bi, bj) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("partition on a 100-dof instance covers N^2 entry by entry") {
    Rng rng(65);
    std::vector<Vec2> pts;
    for (int i = 0; i < 100; ++i) pts.push_back({rng.next_unit(), rng.next_unit()});
    BlockPartition p = build_block_partition(build_cluster_tree(point_boxes(pts), 12), 2.0);
    std::vector<int> hits(100 * 100, 0);
    for (const auto& b : p.blocks)
        for (int i = 0; i < p.row_len(b); ++i)
            for (int j = 0; j < p.col_len(b); ++j)
                hits[(p.row_lo(b) + i) * 100 + (p.col_lo(b) + j)]++;
    for (int h : hits) REQUIRE(h == 1);
}
