#pragma once

#include "macroplace/core.hpp"

#include <vector>

namespace mp::testing {

// Hand-rolled random instances, kept independent of the library's synthetic
// generator so oracle tests do not share code with what they check.
struct RandomInstance {
    Netlist netlist;
    Placement placement;
};

inline RandomInstance random_instance(Rng& rng, int n_nodes, int n_nets, double canvas_side = 100.0,
                                      double macro_fraction = 0.3) {
    std::vector<Node> nodes;
    for (int i = 0; i < n_nodes; ++i) {
        Node n;
        n.name = "n" + std::to_string(i);
        bool macro = rng.uniform() < macro_fraction;
        n.kind = macro ? NodeKind::Macro : NodeKind::StdCell;
        double scale = macro ? canvas_side / 12.0 : canvas_side / 60.0;
        n.width = scale * rng.uniform(0.5, 1.5);
        n.height = scale * rng.uniform(0.5, 1.5);
        nodes.push_back(n);
    }
    std::vector<Net> nets;
    for (int i = 0; i < n_nets; ++i) {
        Net net;
        net.name = "e" + std::to_string(i);
        int degree = 2 + rng.uniform_int(std::min(3, n_nodes - 1));
        for (int node : rng.sample_distinct(n_nodes, degree)) {
            const Node& owner = nodes[size_t(node)];
            Pin p;
            p.node = node;
            p.dx = rng.uniform(-owner.width / 2.0, owner.width / 2.0);
            p.dy = rng.uniform(-owner.height / 2.0, owner.height / 2.0);
            net.pins.push_back(p);
        }
        nets.push_back(net);
    }
    Netlist nl({canvas_side, canvas_side}, std::move(nodes), std::move(nets));
    Placement pl(nl.num_nodes());
    for (const Node& n : nl.nodes) {
        pl.pos[size_t(n.id)] = {rng.uniform(n.width / 2.0, canvas_side - n.width / 2.0),
                                rng.uniform(n.height / 2.0, canvas_side - n.height / 2.0)};
        pl.orient[size_t(n.id)] = Orient(rng.uniform_int(4));
    }
    return {std::move(nl), std::move(pl)};
}

// Two-pin chain netlist: pad(0,anchor_y) - cells... - pad(span,anchor_y).
inline Netlist chain_with_pads(int n_cells, double span) {
    std::vector<Node> nodes;
    Node pad_l{-1, "pad_l", 0.0, 0.0, NodeKind::FixedPad, false};
    Node pad_r{-1, "pad_r", 0.0, 0.0, NodeKind::FixedPad, false};
    nodes.push_back(pad_l);
    for (int i = 0; i < n_cells; ++i) nodes.push_back({-1, "c" + std::to_string(i), 1.0, 1.0, NodeKind::StdCell, true});
    nodes.push_back(pad_r);
    std::vector<Net> nets;
    for (int i = 0; i + 1 < n_cells + 2; ++i) {
        Net net;
        net.name = "w" + std::to_string(i);
        net.pins.push_back({i, 0.0, 0.0});
        net.pins.push_back({i + 1, 0.0, 0.0});
        nets.push_back(net);
    }
    return Netlist({span, span}, std::move(nodes), std::move(nets));
}

}  // namespace mp::testing
