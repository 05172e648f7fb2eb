// graphs.hpp — tight-binding Hamiltonians on the example graphs.
//
// Builders for rings (with optional magnetic flux), the square with a center
// node, complete and star graphs, hypercubes, binary trees, and user-defined
// graphs read from edge-list files. All couplings are -gamma times the edge
// weight; on-site energies are zero unless a custom file sets them.
//
// Node label conventions (chosen so published probability tables are directly
// addressable):
//   ring          labels 1..L, periodic (label L+r == label r); internal
//                 index = label-1
//   complete      labels 1..L
//   square_center label 0 = center, 1..4 = corners
//   star          label 0 = center, 1..L = periphery
//   hypercube     labels 0..2^d-1; bit-strings accepted, first character =
//                 least significant bit
//   binary_tree   heap order: root 0, children of i at 2i+1, 2i+2
//   custom        labels 0..N-1 in declared order

#pragma once

#include "qfd/spectral.hpp"
#include "qfd/types.hpp"

#include <string>
#include <vector>

namespace qfd {

enum class GraphKind {
    ring,
    magnetic_ring,
    square_center,
    complete,
    star,
    hypercube,
    binary_tree,
    custom,
};

struct GraphSpec {
    GraphKind kind = GraphKind::ring;
    int nodes = 0;        // L: ring/complete sites, star periphery count
    double alpha = 0.0;   // magnetic flux phase per hop
    int dimension = 0;    // hypercube d
    int generations = 0;  // binary tree depth
    double gamma = 1.0;   // hopping scale
    Mat custom_couplings; // custom: dimensionless couplings, multiplies -gamma

    static GraphSpec ring(int L, double gamma = 1.0);
    static GraphSpec magnetic_ring(int L, double alpha, double gamma = 1.0);
    static GraphSpec square_center(double gamma = 1.0);
    static GraphSpec complete(int L, double gamma = 1.0);
    static GraphSpec star(int periphery, double gamma = 1.0);
    static GraphSpec hypercube(int d, double gamma = 1.0);
    static GraphSpec binary_tree(int generations, double gamma = 1.0);
};

// Number of basis states of the resulting Hamiltonian.
int node_count(const GraphSpec& spec);

// Builds the Hamiltonian matrix. Throws std::invalid_argument on bad
// parameters.
HermitianMatrix build_graph(const GraphSpec& spec);

// Reads a custom graph from an edge-list file:
//   n N            node count declaration (first non-comment line)
//   i j w [phase]  edge, 0-based nodes, weight w (multiplies -gamma),
//                  optional phase in radians applied as e^{i phase} on i->j
//   #...           comment
// Duplicate edges with contradictory data and non-Hermitian assignments
// (e.g. a complex self-coupling) are rejected; errors cite the line number.
GraphSpec load_adjacency(const std::string& path, double gamma = 1.0);

// Internal index of a node label (kind-specific convention above).
// Throws std::out_of_range for labels outside the graph.
int node_index(const GraphSpec& spec, long label);

// Label parser that also accepts hypercube bit-strings ("011" etc.).
int node_index(const GraphSpec& spec, const std::string& label);

// Basis state localized on the given node label.
Vec localized_state(const GraphSpec& spec, long label);
Vec localized_state(const GraphSpec& spec, const std::string& label);

// Closed-form magnetic ring spectrum: -2 gamma cos(2 pi l / L + alpha),
// l = 0..L-1.
std::vector<double> magnetic_ring_levels(int L, double alpha,
                                         double gamma = 1.0);

}  // namespace qfd
