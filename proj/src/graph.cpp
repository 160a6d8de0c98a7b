#include "girg/graph.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "girg/geometry.hpp"
#include "girg/io.hpp"

namespace girg {

Graph::Graph(WeightSequence weights, std::vector<double> positions, std::size_t d,
             std::vector<Edge> edges)
    : weights_(std::move(weights)), positions_(std::move(positions)), d_(d) {
    const std::size_t n = weights_.size();
    if (positions_.size() != n * d_) throw std::invalid_argument("Graph: positions size != n * d");

    offsets_.assign(n + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n) throw std::invalid_argument("Graph: vertex id out of range");
        if (u == v) throw std::invalid_argument("Graph: self-loop");
        ++offsets_[u + 1];
        ++offsets_[v + 1];
    }
    for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] += offsets_[v];
    neighbors_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [u, v] : edges) {
        neighbors_[fill[u]++] = v;
        neighbors_[fill[v]++] = u;
    }
    edges.clear();
    edges.shrink_to_fit();
    for (std::size_t v = 0; v < n; ++v) {
        auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v]);
        auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[v + 1]);
        std::sort(first, last);
        if (std::adjacent_find(first, last) != last) throw std::invalid_argument("Graph: duplicate edge");
    }
}

std::vector<Edge> Graph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (Vertex u = 0; u < num_vertices(); ++u)
        for (Vertex v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

std::uint64_t Graph::adjacency_hash() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    const auto feed = [&h](std::uint64_t x) {
        for (int i = 0; i < 8; ++i) {
            h ^= (x >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    feed(num_vertices());
    for (Vertex u = 0; u < num_vertices(); ++u)
        for (Vertex v : neighbors(u))
            if (u < v) feed((static_cast<std::uint64_t>(u) << 32) | v);
    return h;
}

std::string validate_graph(const Graph& g) {
    const std::size_t n = g.num_vertices();
    std::size_t degree_sum = 0;
    for (Vertex u = 0; u < n; ++u) {
        const auto nb = g.neighbors(u);
        degree_sum += nb.size();
        for (std::size_t i = 0; i < nb.size(); ++i) {
            const Vertex v = nb[i];
            if (v >= n) return "neighbour out of range at vertex " + std::to_string(u);
            if (v == u) return "self-loop at vertex " + std::to_string(u);
            if (i > 0 && nb[i - 1] >= v) return "unsorted or duplicate neighbours at vertex " + std::to_string(u);
            const auto back = g.neighbors(v);
            if (!std::binary_search(back.begin(), back.end(), u))
                return "asymmetric edge " + std::to_string(u) + "-" + std::to_string(v);
        }
    }
    if (degree_sum != 2 * g.num_edges()) return "edge count mismatch";
    return {};
}

void write_graph(std::ostream& out, const Graph& g) {
    out << "# girg-lab v1 n=" << g.num_vertices() << " m=" << g.num_edges() << " d=" << g.dim() << '\n';
    for (Vertex u = 0; u < g.num_vertices(); ++u)
        for (Vertex v : g.neighbors(u))
            if (u < v) out << u << ' ' << v << '\n';
    out << "# weights\n";
    if (g.num_vertices() > 0) write_weights(out, g.weights());
    out << "# positions\n";
    write_positions(out, g.positions(), g.dim());
}

void write_graph(const std::string& path, const Graph& g) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_graph(out, g);
    if (!out) throw IoError("write failed: " + path);
}

Graph read_graph(std::istream& in) {
    LineReader reader(in);
    const std::string header = reader.expect("graph header");
    if (header.rfind("# girg-lab v1", 0) != 0) reader.fail("not a girg-lab v1 graph file");
    const auto fields = parse_header_fields(header);
    std::size_t n = 0, m = 0, d = 0;
    try {
        n = parse_u64(fields.at("n"));
        m = parse_u64(fields.at("m"));
        d = parse_u64(fields.at("d"));
    } catch (const std::exception& e) {
        reader.fail(std::string("bad graph header: ") + e.what());
    }

    std::vector<Edge> edges;
    edges.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::string line = reader.expect("edge line");
        const auto toks = split_ws(line);
        if (toks.size() != 2) reader.fail("expected 'u v'");
        std::uint64_t u = 0, v = 0;
        try {
            u = parse_u64(toks[0]);
            v = parse_u64(toks[1]);
        } catch (const std::invalid_argument& e) {
            reader.fail(e.what());
        }
        if (u >= v || v >= n) reader.fail("edge must satisfy u < v < n");
        edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
    }
    if (reader.expect("'# weights'") != "# weights") reader.fail("expected '# weights'");
    WeightSequence weights;
    if (n > 0) {
        weights = read_weights(reader);
        if (weights.size() != n) reader.fail("weights section size differs from n");
    }
    if (reader.expect("'# positions'") != "# positions") reader.fail("expected '# positions'");
    auto positions = read_positions(reader, n, d);
    try {
        return Graph(std::move(weights), std::move(positions), d, std::move(edges));
    } catch (const std::invalid_argument& e) {
        reader.fail(e.what());
    }
}

Graph read_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open for reading: " + path);
    return read_graph(in);
}

}  // namespace girg
