#include "qfd/graphs.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qfd {

GraphSpec GraphSpec::ring(int L, double gamma) {
    GraphSpec s;
    s.kind = GraphKind::ring;
    s.nodes = L;
    s.gamma = gamma;
    return s;
}

GraphSpec GraphSpec::magnetic_ring(int L, double alpha, double gamma) {
    GraphSpec s;
    s.kind = GraphKind::magnetic_ring;
    s.nodes = L;
    s.alpha = alpha;
    s.gamma = gamma;
    return s;
}

GraphSpec GraphSpec::square_center(double gamma) {
    GraphSpec s;
    s.kind = GraphKind::square_center;
    s.nodes = 5;
    s.gamma = gamma;
    return s;
}

GraphSpec GraphSpec::complete(int L, double gamma) {
    GraphSpec s;
    s.kind = GraphKind::complete;
    s.nodes = L;
    s.gamma = gamma;
    return s;
}

GraphSpec GraphSpec::star(int periphery, double gamma) {
    GraphSpec s;
    s.kind = GraphKind::star;
    s.nodes = periphery;
    s.gamma = gamma;
    return s;
}

GraphSpec GraphSpec::hypercube(int d, double gamma) {
    GraphSpec s;
    s.kind = GraphKind::hypercube;
    s.dimension = d;
    s.gamma = gamma;
    return s;
}

GraphSpec GraphSpec::binary_tree(int generations, double gamma) {
    GraphSpec s;
    s.kind = GraphKind::binary_tree;
    s.generations = generations;
    s.gamma = gamma;
    return s;
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

}  // namespace

int node_count(const GraphSpec& spec) {
    switch (spec.kind) {
        case GraphKind::ring:
        case GraphKind::magnetic_ring:
        case GraphKind::complete:
            return spec.nodes;
        case GraphKind::square_center:
            return 5;
        case GraphKind::star:
            return spec.nodes + 1;
        case GraphKind::hypercube:
            return 1 << spec.dimension;
        case GraphKind::binary_tree:
            return (1 << (spec.generations + 1)) - 1;
        case GraphKind::custom:
            return static_cast<int>(spec.custom_couplings.rows());
    }
    throw std::invalid_argument("node_count: unknown graph kind");
}

HermitianMatrix build_graph(const GraphSpec& spec) {
    const double g = spec.gamma;
    require(g > 0.0, "build_graph: gamma must be positive");
    switch (spec.kind) {
        case GraphKind::ring:
        case GraphKind::magnetic_ring: {
            const int L = spec.nodes;
            require(L >= 2, "build_graph: ring needs L >= 2");
            const double alpha =
                spec.kind == GraphKind::magnetic_ring ? spec.alpha : 0.0;
            const cxd hop = -g * std::exp(cxd(0.0, alpha));  // r -> r+1
            Mat H = Mat::Zero(L, L);
            for (int r = 0; r < L; ++r) {
                H(r, (r + 1) % L) += hop;
                H((r + 1) % L, r) += std::conj(hop);
            }
            return HermitianMatrix(std::move(H));
        }
        case GraphKind::square_center: {
            Mat H = Mat::Zero(5, 5);
            auto link = [&](int i, int j) {
                H(i, j) = -g;
                H(j, i) = -g;
            };
            for (int c = 1; c <= 4; ++c) link(0, c);  // center to corners
            link(1, 2);
            link(2, 3);
            link(3, 4);
            link(4, 1);
            return HermitianMatrix(std::move(H));
        }
        case GraphKind::complete: {
            const int L = spec.nodes;
            require(L >= 2, "build_graph: complete graph needs L >= 2");
            Mat H = Mat::Constant(L, L, -g);
            H.diagonal().setZero();
            return HermitianMatrix(std::move(H));
        }
        case GraphKind::star: {
            const int L = spec.nodes;
            require(L >= 1, "build_graph: star needs >= 1 periphery node");
            Mat H = Mat::Zero(L + 1, L + 1);
            for (int r = 1; r <= L; ++r) {
                H(0, r) = -g;
                H(r, 0) = -g;
            }
            return HermitianMatrix(std::move(H));
        }
        case GraphKind::hypercube: {
            const int d = spec.dimension;
            require(d >= 1, "build_graph: hypercube needs d >= 1");
            const int n = 1 << d;
            Mat H = Mat::Zero(n, n);
            for (int x = 0; x < n; ++x) {
                for (int j = 0; j < d; ++j) {
                    H(x, x ^ (1 << j)) = -g;  // single bit flip
                }
            }
            return HermitianMatrix(std::move(H));
        }
        case GraphKind::binary_tree: {
            const int gen = spec.generations;
            require(gen >= 1, "build_graph: binary tree needs generations >= 1");
            const int n = (1 << (gen + 1)) - 1;
            Mat H = Mat::Zero(n, n);
            for (int i = 0; 2 * i + 2 < n; ++i) {
                H(i, 2 * i + 1) = -g;
                H(2 * i + 1, i) = -g;
                H(i, 2 * i + 2) = -g;
                H(2 * i + 2, i) = -g;
            }
            return HermitianMatrix(std::move(H));
        }
        case GraphKind::custom: {
            require(spec.custom_couplings.rows() > 0,
                    "build_graph: custom graph has no couplings");
            return HermitianMatrix(-g * spec.custom_couplings);
        }
    }
    throw std::invalid_argument("build_graph: unknown graph kind");
}

GraphSpec load_adjacency(const std::string& path, double gamma) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("load_adjacency: cannot open " + path);
    }
    auto fail = [&](int line, const std::string& what) {
        std::ostringstream msg;
        msg << "load_adjacency: " << path << ":" << line << ": " << what;
        throw std::invalid_argument(msg.str());
    };

    int n = -1;
    Mat couplings;
    std::map<std::pair<int, int>, cxd> seen;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find('#');
        std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;  // blank or comment

        if (n < 0) {
            if (first != "n") fail(lineno, "expected node declaration 'n N'");
            if (!(ls >> n) || n < 1) fail(lineno, "invalid node count");
            couplings = Mat::Zero(n, n);
            continue;
        }

        int i = 0, j = 0;
        double w = 0.0, phase = 0.0;
        std::istringstream es(line);
        if (!(es >> i >> j >> w)) fail(lineno, "expected edge 'i j weight [phase]'");
        es >> phase;  // optional
        if (i < 0 || i >= n || j < 0 || j >= n) fail(lineno, "node out of range");

        const cxd value = w * std::exp(cxd(0.0, phase));
        if (i == j && std::abs(value.imag()) > tol::hermitian) {
            fail(lineno, "self-coupling must be real (non-Hermitian phase)");
        }
        auto key = std::minmax(i, j);
        // Store the coupling as seen from key.first -> key.second.
        const cxd canonical = (i <= j) ? value : std::conj(value);
        auto it = seen.find(key);
        if (it != seen.end()) {
            if (std::abs(it->second - canonical) > tol::hermitian) {
                fail(lineno, "contradicts earlier edge between the same nodes");
            }
            continue;
        }
        seen.emplace(key, canonical);
        couplings(key.first, key.second) = canonical;
        if (i != j) couplings(key.second, key.first) = std::conj(canonical);
    }
    if (n < 0) {
        throw std::invalid_argument("load_adjacency: " + path +
                                    ": missing node declaration 'n N'");
    }

    GraphSpec s;
    s.kind = GraphKind::custom;
    s.nodes = n;
    s.gamma = gamma;
    s.custom_couplings = std::move(couplings);
    return s;
}

int node_index(const GraphSpec& spec, long label) {
    const int n = node_count(spec);
    switch (spec.kind) {
        case GraphKind::ring:
        case GraphKind::magnetic_ring: {
            // Periodic labels 1..L; label L+r is the same node as r.
            long idx = (label - 1) % n;
            if (idx < 0) idx += n;
            return static_cast<int>(idx);
        }
        case GraphKind::complete: {
            if (label < 1 || label > n) {
                throw std::out_of_range("node_index: complete graph labels are 1..L");
            }
            return static_cast<int>(label - 1);
        }
        default: {
            if (label < 0 || label >= n) {
                throw std::out_of_range("node_index: label out of range");
            }
            return static_cast<int>(label);
        }
    }
}

int node_index(const GraphSpec& spec, const std::string& label) {
    if (spec.kind == GraphKind::hypercube) {
        const bool bits = !label.empty() &&
                          label.find_first_not_of("01") == std::string::npos &&
                          label.size() == static_cast<size_t>(spec.dimension);
        if (bits) {
            int idx = 0;
            for (size_t j = 0; j < label.size(); ++j) {
                if (label[j] == '1') idx |= 1 << j;
            }
            return idx;
        }
    }
    size_t pos = 0;
    long value = std::stol(label, &pos);
    if (pos != label.size()) {
        throw std::invalid_argument("node_index: cannot parse label '" + label + "'");
    }
    return node_index(spec, value);
}

Vec localized_state(const GraphSpec& spec, long label) {
    Vec v = Vec::Zero(node_count(spec));
    v(node_index(spec, label)) = 1.0;
    return v;
}

Vec localized_state(const GraphSpec& spec, const std::string& label) {
    Vec v = Vec::Zero(node_count(spec));
    v(node_index(spec, label)) = 1.0;
    return v;
}

std::vector<double> magnetic_ring_levels(int L, double alpha, double gamma) {
    if (L < 2) throw std::invalid_argument("magnetic_ring_levels: L must be >= 2");
    std::vector<double> levels(L);
    for (int l = 0; l < L; ++l) {
        levels[l] = -2.0 * gamma * std::cos(two_pi * l / L + alpha);
    }
    return levels;
}

}  // namespace qfd
