#pragma once
//
// Project : hgraded
// Module  : dofmap.hpp
// Purpose : global degree-p conforming dof numbering with homogeneous
//           Dirichlet elimination, plus the per-dof geometry the clustering
//           needs (characteristic element, support bounding box)
//
// Numbering: interior vertices (ascending id), then interior edges (ascending
// (vmin,vmax), p-1 dofs each, ordered by the exponent of the larger-id
// vertex), then element interiors (ascending element id). Boundary dofs are
// eliminated entirely.
//

#include <algorithm>
#include <map>
#include <vector>

#include "bernstein.hpp"
#include "common.hpp"
#include "geometry.hpp"
#include "mesh.hpp"

namespace hgraded {

enum class DofKind { vertex, edge, cell };

struct DofInfo {
    DofKind kind;
    int characteristic_element;  // T_n
    Box2 support_box;            // bbox of the union of elements touching the carrier
    int entity_a = -1;           // vertex id / edge endpoints / element id
    int entity_b = -1;
    int sub = 0;                 // position on the carrier (edges/cells)
};

struct DofMap {
    int p = 1;
    int n_interior = 0;  // N
    std::vector<DofInfo> dofs;                          // size N
    std::vector<std::vector<int>> element_dofs;         // local index -> global (or -1 if boundary)
    std::vector<MultiIndex> local_indices;              // Bernstein beta per local index

    int local_count() const { return int(local_indices.size()); }
};

// p up to 6 so that degree-(p+2) spline inputs of the elementwise reduction
// can be constructed conformingly; assembly itself enforces p <= 4.
inline DofMap build_dofmap(const Mesh& mesh, int p) {
    if (p < 1 || p > 6) throw config_error("build_dofmap: p in 1..6 required");
    DofMap dm;
    dm.p = p;
    dm.local_indices = bernstein_indices(2, p);

    // adjacency
    auto vadj = vertex_adjacency(mesh);
    std::map<std::pair<int, int>, std::vector<int>> edge_elems;
    for (int t = 0; t < mesh.n_elements(); ++t)
        for (int k = 0; k < 3; ++k) {
            int a = mesh.elements[t].v[k], b = mesh.elements[t].v[(k + 1) % 3];
            edge_elems[{std::min(a, b), std::max(a, b)}].push_back(t);
        }

    // interior-vertex dofs
    std::vector<int> vertex_dof(mesh.n_vertices(), -1);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        if (mesh.vertices[v].on_boundary) continue;
        DofInfo d;
        d.kind = DofKind::vertex;
        d.entity_a = v;
        d.characteristic_element = *std::min_element(vadj[v].begin(), vadj[v].end());
        Box2 box = Box2::point(mesh.vertices[v].coords);
        for (int t : vadj[v]) box.expand(element_bbox(mesh, t));
        d.support_box = box;
        vertex_dof[v] = int(dm.dofs.size());
        dm.dofs.push_back(d);
    }

    // interior-edge dofs (p >= 2): boundary edges have multiplicity 1
    std::map<std::pair<int, int>, int> edge_dof_base;
    if (p >= 2) {
        for (const auto& [e, ts] : edge_elems) {
            if (ts.size() == 1) continue;  // boundary edge
            edge_dof_base[e] = int(dm.dofs.size());
            Box2 box = Box2::point(mesh.vertices[e.first].coords);
            for (int t : ts) box.expand(element_bbox(mesh, t));
            for (int s = 1; s <= p - 1; ++s) {
                DofInfo d;
                d.kind = DofKind::edge;
                d.entity_a = e.first;
                d.entity_b = e.second;
                d.sub = s;
                d.characteristic_element = *std::min_element(ts.begin(), ts.end());
                d.support_box = box;
                dm.dofs.push_back(d);
            }
        }
    }

    // element-interior dofs (p >= 3)
    std::vector<int> cell_dof_base(mesh.n_elements(), -1);
    if (p >= 3) {
        for (int t = 0; t < mesh.n_elements(); ++t) {
            cell_dof_base[t] = int(dm.dofs.size());
            Box2 box = element_bbox(mesh, t);
            int count = 0;
            for (const auto& beta : dm.local_indices)
                if (beta[0] > 0 && beta[1] > 0 && beta[2] > 0) ++count;
            for (int s = 0; s < count; ++s) {
                DofInfo d;
                d.kind = DofKind::cell;
                d.entity_a = t;
                d.sub = s;
                d.characteristic_element = t;
                d.support_box = box;
                dm.dofs.push_back(d);
            }
        }
    }

    dm.n_interior = int(dm.dofs.size());

    // local -> global tables
    dm.element_dofs.assign(mesh.n_elements(), {});
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto& el = mesh.elements[t];
        auto& table = dm.element_dofs[t];
        table.assign(dm.local_count(), -1);
        int cell_cursor = 0;
        for (int li = 0; li < dm.local_count(); ++li) {
            const MultiIndex& beta = dm.local_indices[li];
            int nz = (beta[0] > 0) + (beta[1] > 0) + (beta[2] > 0);
            if (nz == 1) {
                int corner = beta[0] > 0 ? 0 : (beta[1] > 0 ? 1 : 2);
                table[li] = vertex_dof[el.v[corner]];
            } else if (nz == 2) {
                int i = beta[0] > 0 ? 0 : 1;
                int j = beta[2] > 0 ? 2 : 1;
                int gi = el.v[i], gj = el.v[j];
                auto key = std::make_pair(std::min(gi, gj), std::max(gi, gj));
                auto it = edge_dof_base.find(key);
                if (it == edge_dof_base.end()) {
                    table[li] = -1;  // boundary edge
                } else {
                    // dof position = exponent of the larger-id endpoint
                    int exp_larger = (gi > gj) ? beta[i] : beta[j];
                    table[li] = it->second + (exp_larger - 1);
                }
            } else {
                table[li] = cell_dof_base[t] + cell_cursor;
                ++cell_cursor;
            }
        }
    }
    return dm;
}

}  // namespace hgraded
