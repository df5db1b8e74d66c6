#pragma once

#include <string>
#include <vector>

#include "metricop/metric.hpp"

namespace metricop {

// One Hilbert space in the lattice: a formal label over {I, G, G^-1, &, |}
// plus the operator whose square root defines the norm.
struct LatticeNode {
    std::string label;
    MetricOperator op;

    double norm(const ComplexVector& xi) const { return space_norm(op, xi); }
};

// Directed continuous embedding H(from) -> H(to) with the smallest constant
// c such that |xi|_to <= sqrt(c) |xi|_from.
struct LatticeEdge {
    std::string from;
    std::string to;
    double constant = 0.0;
};

struct SpaceLattice {
    std::vector<LatticeNode> nodes;
    std::vector<LatticeEdge> edges;
    bool extremes = false;

    const LatticeNode& node(const std::string& label) const {
        for (const LatticeNode& n : nodes)
            if (n.label == label) return n;
        throw Error("SpaceLattice: no node labeled " + label);
    }

    bool has_node(const std::string& label) const {
        for (const LatticeNode& n : nodes)
            if (n.label == label) return true;
        return false;
    }
};

// The lattice generated by one metric operator: seven spaces, eight
// embeddings (meets flow into their factors' spaces in norm order:
// H(X&Y) sits inside H(X) and H(Y), which sit inside H(X|Y)).
// With extremes enabled, the global bottom I&G&G^-1 and top I|G|G^-1
// are added along with one covering edge each.
inline SpaceLattice seven_lattice(const MetricOperator& g, bool include_extremes = false) {
    MetricOperator id = MetricOperator::identity(g.dim());
    MetricOperator g_inv = g.inverse();

    MetricOperator meet_ig = meet(id, g);
    MetricOperator meet_iginv = meet(id, g_inv);
    MetricOperator join_ig = join(id, g);
    // Computed through the exact duality (I & G)^-1 = I | G^-1 so diagonal
    // weights come out as 1/(1+g) with no double-reciprocal rounding.
    MetricOperator join_iginv = meet_ig.inverse();
    join_iginv.set_label("(I|G^-1)");

    SpaceLattice lat;
    lat.extremes = include_extremes;
    lat.nodes = {
        {"I&G^-1", meet_iginv}, {"I&G", meet_ig},      {"I", id},      {"G^-1", g_inv},
        {"G", g},               {"I|G^-1", join_iginv}, {"I|G", join_ig},
    };
    if (include_extremes) {
        MetricOperator bottom = meet(meet_ig, g_inv);
        bottom.set_label("I&G&G^-1");
        MetricOperator top = bottom.inverse(); // (I + G + G^-1)^-1, again by duality
        top.set_label("I|G|G^-1");
        lat.nodes.push_back({"I&G&G^-1", bottom});
        lat.nodes.push_back({"I|G|G^-1", top});
    }

    auto add_edge = [&lat](const std::string& from, const std::string& to) {
        lat.edges.push_back({from, to, embedding_constant(lat.node(from).op, lat.node(to).op)});
    };
    add_edge("I&G", "I");
    add_edge("I&G", "G");
    add_edge("I&G^-1", "I");
    add_edge("I&G^-1", "G^-1");
    add_edge("I", "I|G");
    add_edge("G", "I|G");
    add_edge("I", "I|G^-1");
    add_edge("G^-1", "I|G^-1");
    if (include_extremes) {
        add_edge("I&G&G^-1", "I&G");
        add_edge("I|G^-1", "I|G|G^-1");
    }
    return lat;
}

// Embedding constant of the arrow run backwards. Growth of this value
// across a refinement family is what distinguishes a genuine one-way
// embedding from an equivalence of norms.
inline double reversed_constant(const SpaceLattice& lat, const LatticeEdge& edge) {
    return embedding_constant(lat.node(edge.to).op, lat.node(edge.from).op);
}

} // namespace metricop
