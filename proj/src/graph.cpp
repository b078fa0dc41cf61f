#include "sandpile/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "json.hpp"

namespace sandpile {

namespace {

std::map<std::string, int> label_index(const std::vector<std::string> &labels) {
    std::map<std::string, int> idx;
    for (size_t i = 0; i < labels.size(); ++i) {
        if (!idx.emplace(labels[i], static_cast<int>(i)).second)
            throw DuplicateVertex("duplicate vertex label: " + labels[i]);
    }
    return idx;
}

}  // namespace

SinkedMultigraph SinkedMultigraph::build(std::vector<std::string> vertices, const std::string &sink,
                                         const std::vector<Edge> &edges, bool undirected) {
    SinkedMultigraph g;
    g.labels_ = std::move(vertices);
    auto idx = label_index(g.labels_);
    auto it = idx.find(sink);
    if (it == idx.end()) throw UnknownLabel("sink label not among vertices: " + sink);
    g.sink_ = it->second;
    g.undirected_ = undirected;
    g.out_.assign(g.labels_.size(), {});
    for (const Edge &e : edges) {
        auto fu = idx.find(e.from);
        auto fv = idx.find(e.to);
        if (fu == idx.end()) throw UnknownLabel("unknown vertex label: " + e.from);
        if (fv == idx.end()) throw UnknownLabel("unknown vertex label: " + e.to);
        if (fu->second == fv->second) throw LoopEdge("loop edge at vertex: " + e.from);
        if (e.mult <= 0) throw GraphError("edge multiplicity must be positive");
        g.out_[fu->second][fv->second] += e.mult;
        if (undirected) g.out_[fv->second][fu->second] += e.mult;
    }
    g.finalize();
    return g;
}

void SinkedMultigraph::finalize() {
    const int n = vertex_count();
    // Reverse reachability from the sink must cover every vertex.
    std::vector<std::vector<int>> in(n);
    for (int u = 0; u < n; ++u)
        for (const auto &[v, m] : out_[u]) in[v].push_back(u);
    std::vector<bool> seen(n, false);
    std::deque<int> queue{sink_};
    seen[sink_] = true;
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : in[v])
            if (!seen[u]) {
                seen[u] = true;
                queue.push_back(u);
            }
    }
    for (int v = 0; v < n; ++v)
        if (!seen[v]) throw SinkNotGlobal("no directed path from " + labels_[v] + " to the sink");

    vertex_to_nonsink_.assign(n, -1);
    for (int v = 0; v < n; ++v) {
        if (v == sink_) continue;
        vertex_to_nonsink_[v] = static_cast<int>(nonsink_to_vertex_.size());
        nonsink_to_vertex_.push_back(v);
        nonsink_labels_.push_back(labels_[v]);
    }
}

Int SinkedMultigraph::multiplicity_by_label(const std::string &u, const std::string &v) const {
    auto find = [&](const std::string &l) {
        auto it = std::find(labels_.begin(), labels_.end(), l);
        if (it == labels_.end()) throw UnknownLabel("unknown vertex label: " + l);
        return static_cast<int>(it - labels_.begin());
    };
    int ui = find(u), vi = find(v);
    auto it = out_[ui].find(vi);
    return it == out_[ui].end() ? Int(0) : it->second;
}

int SinkedMultigraph::nonsink_index(const std::string &label) const {
    for (size_t i = 0; i < nonsink_labels_.size(); ++i)
        if (nonsink_labels_[i] == label) return static_cast<int>(i);
    throw UnknownLabel("not a non-sink vertex: " + label);
}

IntMatrix SinkedMultigraph::reduced_laplacian() const {
    const int k = nonsink_count();
    IntMatrix m(k, k);
    for (int i = 0; i < k; ++i) {
        int u = nonsink_to_vertex_[i];
        Int deg(0);
        for (const auto &[v, mult] : out_[u]) {
            deg += mult;
            int j = vertex_to_nonsink_[v];
            if (j >= 0) m.at(i, j) = -mult;
        }
        m.at(i, i) = deg;
    }
    return m;
}

IntVec SinkedMultigraph::degree_vector() const {
    IntVec d;
    d.reserve(nonsink_count());
    for (int u : nonsink_to_vertex_) {
        Int deg(0);
        for (const auto &[v, mult] : out_[u]) deg += mult;
        d.push_back(deg);
    }
    return d;
}

IntVec SinkedMultigraph::sigma_max() const {
    IntVec d = degree_vector();
    for (Int &x : d) x -= 1;
    return d;
}

std::string SinkedMultigraph::to_json_string(int indent) const {
    nlohmann::ordered_json j;
    j["vertices"] = labels_;
    j["sink"] = sink_label();
    j["undirected"] = undirected_;
    auto edges = nlohmann::ordered_json::array();
    for (int u = 0; u < vertex_count(); ++u) {
        for (const auto &[v, mult] : out_[u]) {
            if (undirected_ && v < u) continue;  // each undirected edge once
            nlohmann::ordered_json e;
            e["from"] = labels_[u];
            e["to"] = labels_[v];
            e["mult"] = mult.get_si();
            edges.push_back(std::move(e));
        }
    }
    j["edges"] = std::move(edges);
    return j.dump(indent);
}

namespace {

std::pair<std::vector<Edge>, std::vector<std::string>> edges_from_json(const nlohmann::json &j) {
    std::vector<std::string> vertices = j.at("vertices").get<std::vector<std::string>>();
    std::vector<Edge> edges;
    for (const auto &e : j.at("edges")) {
        Edge edge;
        edge.from = e.at("from").get<std::string>();
        edge.to = e.at("to").get<std::string>();
        edge.mult = e.contains("mult") ? e.at("mult").get<long>() : 1;
        edges.push_back(std::move(edge));
    }
    return {std::move(edges), std::move(vertices)};
}

}  // namespace

SinkedMultigraph SinkedMultigraph::from_json_string(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    auto [edges, vertices] = edges_from_json(j);
    bool undirected = j.value("undirected", false);
    return build(std::move(vertices), j.at("sink").get<std::string>(), edges, undirected);
}

BaseGraph base_from_json_string(const std::string &text) {
    nlohmann::json j = nlohmann::json::parse(text);
    auto [edges, vertices] = edges_from_json(j);
    return BaseGraph{std::move(vertices), std::move(edges)};
}

SinkedMultigraph cone(const BaseGraph &base) {
    std::string apex = "q";
    if (std::find(base.vertices.begin(), base.vertices.end(), apex) != base.vertices.end())
        apex = "apex";
    std::vector<std::string> vertices{apex};
    vertices.insert(vertices.end(), base.vertices.begin(), base.vertices.end());
    std::vector<Edge> edges = base.edges;
    for (const std::string &v : base.vertices) edges.push_back({apex, v, 1});
    return SinkedMultigraph::build(std::move(vertices), apex, edges, /*undirected=*/true);
}

SinkedMultigraph family(const std::string &name, int n) {
    std::vector<std::string> vertices{"q"};
    std::vector<Edge> edges;
    auto v = [](int i) { return "v" + std::to_string(i); };
    if (name == "cycle") {
        if (n < 3) throw BadSize("cycle requires n >= 3");
        for (int i = 1; i < n; ++i) vertices.push_back(v(i));
        edges.push_back({"q", v(1), 1});
        for (int i = 1; i + 1 < n; ++i) edges.push_back({v(i), v(i + 1), 1});
        edges.push_back({v(n - 1), "q", 1});
    } else if (name == "path") {
        if (n < 2) throw BadSize("path requires n >= 2");
        for (int i = 1; i < n; ++i) vertices.push_back(v(i));
        edges.push_back({"q", v(1), 1});
        for (int i = 1; i + 1 < n; ++i) edges.push_back({v(i), v(i + 1), 1});
    } else if (name == "complete") {
        if (n < 2) throw BadSize("complete requires n >= 2");
        for (int i = 1; i < n; ++i) vertices.push_back(v(i));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) edges.push_back({vertices[i], vertices[j], 1});
    } else {
        throw BadSpec("unknown family: " + name);
    }
    return SinkedMultigraph::build(std::move(vertices), "q", edges, /*undirected=*/true);
}

BaseGraph base_family(const std::string &name, int n) {
    BaseGraph b;
    auto u = [](int i) { return "u" + std::to_string(i); };
    if (name == "cycle") {
        if (n < 3) throw BadSize("cycle requires n >= 3");
        for (int i = 0; i < n; ++i) b.vertices.push_back(u(i));
        for (int i = 0; i < n; ++i) b.edges.push_back({u(i), u((i + 1) % n), 1});
    } else if (name == "complete") {
        if (n < 2) throw BadSize("complete requires n >= 2");
        for (int i = 0; i < n; ++i) b.vertices.push_back(u(i));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) b.edges.push_back({u(i), u(j), 1});
    } else if (name == "petersen") {
        // outer 5-cycle, inner 5-cycle with step 2, spokes
        for (int i = 0; i < 10; ++i) b.vertices.push_back(u(i));
        for (int i = 0; i < 5; ++i) {
            b.edges.push_back({u(i), u((i + 1) % 5), 1});
            b.edges.push_back({u(5 + i), u(5 + (i + 2) % 5), 1});
            b.edges.push_back({u(i), u(5 + i), 1});
        }
    } else {
        throw BadSpec("unknown base family: " + name);
    }
    return b;
}

}  // namespace sandpile
