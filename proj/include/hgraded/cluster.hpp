#pragma once
//
// Project : hgraded
// Module  : cluster.hpp
// Purpose : geometrically balanced binary cluster tree over dof support boxes
//
// Split rule: longest axis of the cluster bounding box at its geometric
// midpoint, dofs assigned by support-box center; degenerate splits fall back
// to the median. Leaves at |I| <= C_small.
//

#include <algorithm>
#include <numeric>
#include <vector>

#include "common.hpp"
#include "geometry.hpp"

namespace hgraded {

struct ClusterNode {
    int begin = 0, end = 0;  // range in the permutation array
    Box2 box;                // bbox of member support boxes
    int child[2] = {-1, -1};
    int level = 0;
    int size() const { return end - begin; }
    bool leaf() const { return child[0] < 0; }
};

struct ClusterTree {
    std::vector<ClusterNode> nodes;  // nodes[0] = root
    std::vector<int> perm;           // perm[new_pos] = original dof index
    std::vector<int> iperm;          // iperm[original] = new_pos
    int c_small = 32;
    int depth = 0;  // number of levels (root-only tree has depth 1)

    int n() const { return int(perm.size()); }
};

namespace clusterdetail {

struct Builder {
    const std::vector<Box2>& boxes;
    std::vector<Vec2> centers;
    ClusterTree tree;

    explicit Builder(const std::vector<Box2>& b) : boxes(b) {
        centers.reserve(b.size());
        for (const auto& box : b) centers.push_back(box.center());
    }

    Box2 range_box(int begin, int end) const {
        Box2 box = boxes[tree.perm[begin]];
        for (int i = begin + 1; i < end; ++i) box.expand(boxes[tree.perm[i]]);
        return box;
    }

    int build(int begin, int end, int level) {
        int id = int(tree.nodes.size());
        tree.nodes.push_back({});
        ClusterNode node;
        node.begin = begin;
        node.end = end;
        node.level = level;
        node.box = range_box(begin, end);
        tree.depth = std::max(tree.depth, level + 1);
        if (end - begin <= tree.c_small) {
            tree.nodes[id] = node;
            return id;
        }
        // geometric midpoint split along the longest axis
        double ex = node.box.hi.x - node.box.lo.x;
        double ey = node.box.hi.y - node.box.lo.y;
        bool use_x = ex >= ey;
        double mid = use_x ? 0.5 * (node.box.lo.x + node.box.hi.x)
                           : 0.5 * (node.box.lo.y + node.box.hi.y);
        auto first = tree.perm.begin() + begin;
        auto last = tree.perm.begin() + end;
        auto split = std::stable_partition(first, last, [&](int dof) {
            double c = use_x ? centers[dof].x : centers[dof].y;
            return c <= mid;
        });
        int cut = int(split - tree.perm.begin());
        if (cut == begin || cut == end) {
            // degenerate: median split by center coordinate (stable tie-break)
            std::stable_sort(first, last, [&](int a, int b) {
                double ca = use_x ? centers[a].x : centers[a].y;
                double cb = use_x ? centers[b].x : centers[b].y;
                return ca < cb;
            });
            cut = begin + (end - begin) / 2;
        }
        node.child[0] = build(begin, cut, level + 1);
        node.child[1] = build(cut, end, level + 1);
        tree.nodes[id] = node;
        return id;
    }
};

}  // namespace clusterdetail

inline ClusterTree build_cluster_tree(const std::vector<Box2>& dof_boxes, int c_small) {
    if (dof_boxes.empty()) throw config_error("build_cluster_tree: no dofs");
    if (c_small < 1) throw config_error("build_cluster_tree: C_small >= 1 required");
    clusterdetail::Builder b(dof_boxes);
    b.tree.c_small = c_small;
    b.tree.perm.resize(dof_boxes.size());
    std::iota(b.tree.perm.begin(), b.tree.perm.end(), 0);
    b.build(0, int(dof_boxes.size()), 0);
    b.tree.iperm.assign(dof_boxes.size(), 0);
    for (int i = 0; i < int(dof_boxes.size()); ++i) b.tree.iperm[b.tree.perm[i]] = i;
    return b.tree;
}

}  // namespace hgraded
