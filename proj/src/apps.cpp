#include "linkmirage/apps.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_set>

#include "linkmirage/generators.hpp"
#include "linkmirage/parallel.hpp"
#include "linkmirage/random.hpp"

namespace linkmirage {

std::vector<std::size_t> cumulative_neighbors(std::span<const Graph> perturbed, VertexId v) {
    std::unordered_set<VertexId> seen;
    std::vector<std::size_t> out;
    out.reserve(perturbed.size());
    for (std::size_t t = 0; t < perturbed.size(); ++t) {
        if (!perturbed[t].contains(v)) {
            throw std::invalid_argument("vertex " + std::to_string(v) + " absent at t = " + std::to_string(t));
        }
        for (VertexId w : perturbed[t].neighbors(v)) {
            seen.insert(w);
        }
        out.push_back(seen.size());
    }
    return out;
}

std::vector<double> attack_probability(std::span<const Graph> perturbed, VertexId v, double f) {
    if (!(f >= 0.0 && f <= 1.0)) {
        throw std::invalid_argument("malicious fraction f must lie in [0, 1]");
    }
    std::vector<double> out;
    for (std::size_t n : cumulative_neighbors(perturbed, v)) {
        out.push_back(1.0 - std::pow(1.0 - f, static_cast<double>(n)));
    }
    return out;
}

std::vector<Edge> k_hop_edges(const Graph& g, unsigned k) {
    std::vector<Edge> out;
    std::vector<std::int64_t> dist(g.id_bound(), -1);
    std::vector<VertexId> touched;
    for (VertexId s : g.vertices()) {
        std::queue<VertexId> q;
        q.push(s);
        dist[s] = 0;
        touched.assign(1, s);
        while (!q.empty()) {
            const VertexId v = q.front();
            q.pop();
            if (dist[v] == static_cast<std::int64_t>(k)) {
                continue;
            }
            for (VertexId w : g.neighbors(v)) {
                if (dist[w] < 0) {
                    dist[w] = dist[v] + 1;
                    touched.push_back(w);
                    q.push(w);
                    if (s < w) {
                        out.emplace_back(s, w);
                    }
                }
            }
        }
        for (VertexId v : touched) {
            dist[v] = -1;
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

SamplingReport sampling_probability(std::span<const Graph> perturbed, std::span<const Graph> original, unsigned k) {
    if (perturbed.size() != original.size() || perturbed.empty()) {
        throw std::invalid_argument("perturbed and original sequences are misaligned");
    }
    std::unordered_set<std::uint64_t> fake, envelope;
    for (std::size_t t = 0; t < original.size(); ++t) {
        for (const Edge& e : k_hop_edges(original[t], k)) {
            envelope.insert(edge_key(e));
        }
        for (const Edge& e : perturbed[t].edges()) {
            fake.insert(edge_key(e));
        }
    }
    if (envelope.empty()) {
        throw std::invalid_argument("k-hop envelope is empty (edgeless input)");
    }
    SamplingReport out;
    out.perturbed_edges = fake.size();
    out.envelope_edges = envelope.size();
    for (std::uint64_t key : fake) {
        if (!envelope.contains(key)) {
            ++out.out_of_envelope;
        }
    }
    out.probability = static_cast<double>(out.perturbed_edges) / static_cast<double>(out.envelope_edges);
    return out;
}

SybilWorld build_sybil_world(const SybilScenario& scenario, std::uint64_t seed) {
    if (scenario.attack_edges < 1 || scenario.walk_length < 1) {
        throw std::invalid_argument("sybil scenario needs attack_edges >= 1 and walk_length >= 1");
    }
    const Graph& honest = scenario.honest;
    if (honest.num_vertices() == 0 || scenario.sybil_vertices == 0) {
        throw std::invalid_argument("sybil scenario needs non-empty honest and sybil regions");
    }
    Rng rng = make_stream(seed, {0x5b1});
    const auto hv = honest.vertices();
    const VertexId offset = static_cast<VertexId>(honest.id_bound());
    const std::size_t s = scenario.sybil_vertices;
    const double mean_degree = 2.0 * static_cast<double>(honest.num_edges()) / static_cast<double>(hv.size());
    const double p = s > 1 ? std::min(1.0, mean_degree / static_cast<double>(s - 1)) : 0.0;

    std::vector<Edge> edges = honest.edges();
    std::vector<VertexId> vertices(hv.begin(), hv.end());
    for (const Edge& e : erdos_renyi(s, p, rng).edges()) {
        edges.emplace_back(e.u + offset, e.v + offset);
    }
    for (std::size_t i = 0; i < s; ++i) {
        vertices.push_back(offset + static_cast<VertexId>(i));
    }
    std::unordered_set<std::uint64_t> cross;
    const std::size_t max_cross = hv.size() * s;
    while (cross.size() < std::min(scenario.attack_edges, max_cross)) {
        const Edge e(hv[uniform_index(rng, hv.size())], offset + static_cast<VertexId>(uniform_index(rng, s)));
        if (cross.insert(edge_key(e)).second) {
            edges.push_back(e);
        }
    }
    SybilWorld world;
    world.graph = Graph::from_edges(std::move(vertices), std::move(edges));
    world.is_sybil.assign(world.graph.id_bound(), 0);
    for (std::size_t i = 0; i < s; ++i) {
        world.is_sybil[offset + i] = 1;
    }
    world.attack_edges = cross.size();
    return world;
}

std::size_t count_attack_edges(const Graph& g, std::span<const char> is_sybil) {
    auto side = [&](VertexId v) { return v < is_sybil.size() && is_sybil[v]; };
    std::size_t n = 0;
    for (const Edge& e : g.edges()) {
        if (side(e.u) != side(e.v)) {
            ++n;
        }
    }
    return n;
}

namespace {

/// Routing table of one vertex: the neighbour index a route leaves by, for
/// each neighbour index it arrived from.
std::vector<std::uint32_t> routing_table(std::size_t degree, std::uint64_t seed, std::size_t instance, VertexId v) {
    std::vector<std::uint32_t> perm(degree);
    for (std::size_t i = 0; i < degree; ++i) {
        perm[i] = static_cast<std::uint32_t>(i);
    }
    Rng rng = make_stream(seed, {0x7ab, instance, v});
    for (std::size_t i = degree; i > 1; --i) {
        std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
    }
    return perm;
}

bool honest_connected(const Graph& g, std::span<const char> is_sybil) {
    auto sybil = [&](VertexId v) { return v < is_sybil.size() && is_sybil[v]; };
    std::vector<VertexId> honest;
    for (VertexId v : g.vertices()) {
        if (!sybil(v)) {
            honest.push_back(v);
        }
    }
    if (honest.empty()) {
        return true;
    }
    std::vector<char> seen(g.id_bound(), 0);
    std::queue<VertexId> q;
    q.push(honest[0]);
    seen[honest[0]] = 1;
    std::size_t count = 1;
    while (!q.empty()) {
        const VertexId v = q.front();
        q.pop();
        for (VertexId w : g.neighbors(v)) {
            if (!sybil(w) && !seen[w]) {
                seen[w] = 1;
                ++count;
                q.push(w);
            }
        }
    }
    return count == honest.size();
}

}  // namespace

SybilResult sybil_eval(const SybilScenario& scenario, const SybilWorld& world, const Graph& g_prime,
                       std::uint64_t seed, unsigned threads) {
    const auto vs = g_prime.vertices();
    std::vector<VertexId> honest;
    for (VertexId v : vs) {
        if (!(v < world.is_sybil.size() && world.is_sybil[v])) {
            honest.push_back(v);
        }
    }
    if (honest.empty()) {
        throw std::invalid_argument("no honest vertices in the perturbed graph");
    }
    SybilResult out;
    out.attack_edges_after = count_attack_edges(g_prime, world.is_sybil);
    out.honest_disconnected = !honest_connected(g_prime, world.is_sybil);

    const std::size_t routes = scenario.routes > 0
                                   ? scenario.routes
                                   : static_cast<std::size_t>(
                                         std::ceil(kRouteFactor * std::sqrt(static_cast<double>(g_prime.num_edges()))));

    // Route r of every vertex runs in routing instance r, which has its own
    // permutation tables. Within one instance distinct routes never share a
    // tail, so intersections only come from different instances.
    std::vector<std::vector<std::uint64_t>> tails(honest.size());
    std::vector<std::vector<std::uint32_t>> tables(vs.size());
    for (std::size_t r = 0; r < routes; ++r) {
        parallel_for(vs.size(), threads, [&](std::size_t i) {
            tables[i] = routing_table(g_prime.degree(vs[i]), seed, r, vs[i]);
        });
        parallel_for(honest.size(), threads, [&](std::size_t hi) {
            const VertexId start = honest[hi];
            if (g_prime.degree(start) == 0) {
                return;
            }
            Rng rng = make_stream(seed, {0x70a, r, start});
            VertexId prev = start;
            VertexId cur = g_prime.neighbors(start)[uniform_index(rng, g_prime.degree(start))];
            for (std::size_t step = 1; step < scenario.walk_length; ++step) {
                auto nb = g_prime.neighbors(cur);
                const auto in = static_cast<std::size_t>(std::lower_bound(nb.begin(), nb.end(), prev) - nb.begin());
                const VertexId next = nb[tables[g_prime.index_of(cur)][in]];
                prev = cur;
                cur = next;
            }
            tails[hi].push_back(edge_key(Edge(prev, cur)));
        });
    }
    for (auto& mine : tails) {
        std::sort(mine.begin(), mine.end());
        mine.erase(std::unique(mine.begin(), mine.end()), mine.end());
    }

    const std::size_t nv = std::min(scenario.verifiers, honest.size());
    out.verifiers = nv;
    if (nv == 0) {
        return out;
    }
    Rng pick = make_stream(seed, {0x7e5});
    std::vector<std::size_t> order(honest.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    for (std::size_t i = 0; i < nv; ++i) {
        std::swap(order[i], order[i + uniform_index(pick, order.size() - i)]);
    }
    std::vector<double> rates(nv, 0.0);
    parallel_for(nv, threads, [&](std::size_t k) {
        const std::size_t vi = order[k];
        const auto& mine = tails[vi];
        std::size_t rejected = 0;
        for (std::size_t si = 0; si < honest.size(); ++si) {
            if (si == vi) {
                continue;  // a verifier always accepts itself
            }
            const auto& theirs = tails[si];
            bool hit = false;
            for (std::size_t a = 0, b = 0; a < mine.size() && b < theirs.size() && !hit;) {
                if (mine[a] < theirs[b]) {
                    ++a;
                } else if (theirs[b] < mine[a]) {
                    ++b;
                } else {
                    hit = true;
                }
            }
            rejected += hit ? 0 : 1;
        }
        const std::size_t suspects = honest.size() - 1;
        rates[k] = suspects == 0 ? 0.0 : static_cast<double>(rejected) / static_cast<double>(suspects);
    });
    double sum = 0.0;
    for (double r : rates) {
        sum += r;
    }
    out.false_positive_rate = sum / static_cast<double>(nv);
    return out;
}

}  // namespace linkmirage
