#include "dedb/stratify.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "dedb/errors.hpp"

namespace dedb {

DependencyGraph build_dependency_graph(const std::vector<Rule>& rules) {
    std::set<std::string> nodes;
    std::set<DepEdge> edges;
    for (const Rule& r : rules) {
        for (const Atom& h : r.head) nodes.insert(h.pred);
        for (const Literal& l : r.body) nodes.insert(l.atom.pred);
        for (const Atom& h : r.head)
            for (const Literal& l : r.body) edges.insert({l.atom.pred, h.pred, l.positive});
    }
    DependencyGraph g;
    g.nodes.assign(nodes.begin(), nodes.end());
    g.edges.assign(edges.begin(), edges.end());
    return g;
}

std::string DependencyGraph::to_dot() const {
    std::string out = "digraph dependencies {\n";
    for (const std::string& n : nodes) out += "  \"" + n + "\";\n";
    for (const DepEdge& e : edges)
        out += "  \"" + e.from + "\" -> \"" + e.to + "\" [label=\"" + (e.positive ? "+" : "-") +
               "\"" + (e.positive ? "" : ", style=dashed") + "];\n";
    out += "}\n";
    return out;
}

namespace {

struct UnionFind {
    std::unordered_map<std::string, std::string> parent;
    const std::string& find(const std::string& x) {
        auto it = parent.find(x);
        if (it == parent.end()) {
            parent[x] = x;
            return parent.find(x)->first;
        }
        if (it->second == x) return it->first;
        const std::string root = find(it->second);
        parent[x] = root;
        return parent.find(x)->second;
    }
    void unite(const std::string& a, const std::string& b) {
        std::string ra = find(a), rb = find(b);
        if (ra != rb) parent[ra] = rb;
    }
};

// Finds some cycle containing a negative edge, for error reporting.
std::vector<std::string> negative_cycle_witness(const DependencyGraph& g) {
    std::map<std::string, std::vector<std::pair<std::string, bool>>> succ;
    for (const DepEdge& e : g.edges) succ[e.from].push_back({e.to, e.positive});

    // For each negative edge q -neg-> p, search a path p ->* q.
    for (const DepEdge& e : g.edges) {
        if (e.positive) continue;
        std::map<std::string, std::string> pred_of;
        std::vector<std::string> queue{e.to};
        pred_of[e.to] = "";
        bool found = e.to == e.from;
        while (!queue.empty() && !found) {
            std::string cur = queue.back();
            queue.pop_back();
            for (const auto& [nxt, pos] : succ[cur]) {
                if (pred_of.count(nxt)) continue;
                pred_of[nxt] = cur;
                if (nxt == e.from) { found = true; break; }
                queue.push_back(nxt);
            }
        }
        if (!found) continue;
        std::vector<std::string> path;
        for (std::string cur = e.from; !cur.empty(); cur = pred_of[cur]) {
            path.push_back(cur);
            if (cur == e.to) break;
        }
        std::reverse(path.begin(), path.end());
        path.push_back(e.to);  // close the cycle through the negative edge
        return path;
    }
    return {};
}

}  // namespace

StratifyResult stratification(const std::vector<Rule>& rules) {
    StratifyResult res;

    UnionFind groups;
    std::set<std::string> preds;
    for (const Rule& r : rules) {
        for (const Atom& h : r.head) preds.insert(h.pred);
        for (const Literal& l : r.body) preds.insert(l.atom.pred);
        for (std::size_t i = 1; i < r.head.size(); ++i) groups.unite(r.head[0].pred, r.head[i].pred);
    }

    std::unordered_map<std::string, int> stratum;
    for (const std::string& p : preds) stratum[groups.find(p)] = 0;

    const int bound = static_cast<int>(preds.size()) + 1;
    bool changed = true;
    bool overflow = false;
    while (changed && !overflow) {
        changed = false;
        for (const Rule& r : rules) {
            const std::string& hg = groups.find(r.head[0].pred);
            for (const Literal& l : r.body) {
                int need = stratum[groups.find(l.atom.pred)] + (l.positive ? 0 : 1);
                if (stratum[hg] < need) {
                    stratum[hg] = need;
                    changed = true;
                    if (need > bound) overflow = true;
                }
            }
        }
    }

    if (overflow) {
        res.ok = false;
        res.witness_cycle = negative_cycle_witness(build_dependency_graph(rules));
        for (std::size_t i = 0; i < res.witness_cycle.size(); ++i) {
            if (i) res.witness_text += " -> ";
            res.witness_text += res.witness_cycle[i];
        }
        return res;
    }

    res.ok = true;
    for (const std::string& p : preds) res.strat.stratum[p] = stratum[groups.find(p)];

    int max_stratum = 0;
    for (const auto& [p, s] : res.strat.stratum) max_stratum = std::max(max_stratum, s);
    std::vector<std::vector<Rule>> layers(static_cast<std::size_t>(max_stratum) + 1);
    for (const Rule& r : rules)
        layers[static_cast<std::size_t>(res.strat.stratum[r.head[0].pred])].push_back(r);
    for (auto& layer : layers)
        if (!layer.empty()) res.strat.partition.layers.push_back(std::move(layer));
    if (res.strat.partition.layers.empty() && !rules.empty())
        res.strat.partition.layers.push_back({});
    return res;
}

Stratification require_stratification(const std::vector<Rule>& rules) {
    StratifyResult r = stratification(rules);
    if (!r.ok) throw UnstratifiableError(r.witness_text);
    return std::move(r.strat);
}

Partition soft_partition(const std::vector<Rule>& rules, const RewriteProvenance& provenance) {
    if (provenance.rule_layer.size() != rules.size())
        throw Error("missing provenance: " + std::to_string(rules.size()) + " rules, " +
                    std::to_string(provenance.rule_layer.size()) + " layer entries");
    int max_layer = -1;
    for (int l : provenance.rule_layer) {
        if (l < 0) throw Error("missing provenance: rule without a layer");
        max_layer = std::max(max_layer, l);
    }
    std::vector<std::vector<Rule>> layers(static_cast<std::size_t>(max_layer) + 1);
    for (std::size_t i = 0; i < rules.size(); ++i)
        layers[static_cast<std::size_t>(provenance.rule_layer[i])].push_back(rules[i]);
    Partition p;
    for (auto& layer : layers)
        if (!layer.empty()) p.layers.push_back(std::move(layer));
    return p;
}

}  // namespace dedb
