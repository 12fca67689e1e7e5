#include <walkforge/dimension.hpp>

#include <algorithm>
#include <functional>
#include <numeric>

#include <nlohmann/json.hpp>

namespace walkforge::dimension
{

namespace
{

struct Graph
{
    std::vector<StepRef> steps;
    std::vector<std::size_t> target;
};

Graph graph(const Model& model)
{
    Graph g;
    g.steps = step_union(model);
    for (const auto& s : g.steps) {
        g.target.push_back(target_class(model, s.cls, model.step_set(s.cls)[s.index].displacement));
    }
    return g;
}

bool connected(std::size_t n, const std::vector<bool>& active, const std::vector<std::pair<std::size_t, std::size_t>>& edges)
{
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
    for (const auto& [a, b] : edges) {
        parent[find(a)] = find(b);
    }
    std::optional<std::size_t> root;
    for (std::size_t v = 0; v < n; ++v) {
        if (active[v]) {
            if (root && find(v) != *root) {
                return false;
            }
            root = find(v);
        }
    }
    return true;
}

std::string subset_string(const std::vector<int>& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        out += (i ? "," : "") + std::to_string(s[i]);
    }
    return out + "}";
}

} // namespace

std::vector<StepRef> step_union(const Model& model)
{
    std::vector<StepRef> out;
    for (std::size_t c = 0; c < model.class_count(); ++c) {
        for (std::size_t i = 0; i < model.step_set(c).size(); ++i) {
            out.push_back({c, i});
        }
    }
    return out;
}

std::vector<EulerianSystem> eulerian_systems(const Model& model)
{
    const std::size_t n = model.class_count();
    if (n > max_classes) {
        throw Error("the Eulerian case split supports at most " + std::to_string(max_classes) + " residue classes");
    }
    const Graph g = graph(model);
    std::vector<std::pair<std::size_t, std::size_t>> possible;
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = r + 1; s < n; ++s) {
            for (std::size_t k = 0; k < g.steps.size(); ++k) {
                const auto from = g.steps[k].cls;
                const auto to = g.target[k];
                if ((from == r && to == s) || (from == s && to == r)) {
                    possible.emplace_back(r, s);
                    break;
                }
            }
        }
    }
    const std::size_t r0 = model.start_class();
    std::vector<EulerianSystem> out;
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        if (!(mask >> r0 & 1U)) {
            continue;
        }
        std::vector<bool> active(n);
        std::size_t size = 0;
        for (std::size_t v = 0; v < n; ++v) {
            active[v] = mask >> v & 1U;
            size += active[v];
        }
        std::vector<std::pair<std::size_t, std::size_t>> inside;
        for (const auto& e : possible) {
            if (active[e.first] && active[e.second]) {
                inside.push_back(e);
            }
        }
        // spanning trees of the active vertices
        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> trees;
        std::vector<std::pair<std::size_t, std::size_t>> chosen;
        std::function<void(std::size_t)> pick = [&](std::size_t from) {
            if (chosen.size() + 1 == size) {
                if (connected(n, active, chosen)) {
                    trees.push_back(chosen);
                }
                return;
            }
            for (std::size_t k = from; k < inside.size(); ++k) {
                chosen.push_back(inside[k]);
                pick(k + 1);
                chosen.pop_back();
            }
        };
        pick(0);
        for (std::size_t end = 0; end < n; ++end) {
            if (!active[end]) {
                continue;
            }
            for (const auto& t : trees) {
                out.push_back({r0, end, active, t});
            }
        }
    }
    return out;
}

lp::Program system_program(const Model& model, const EulerianSystem& system)
{
    const Graph g = graph(model);
    const std::size_t n = model.class_count();
    lp::Program p;
    p.variables = g.steps.size();
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<Rational> row(p.variables);
        bool any = false;
        for (std::size_t k = 0; k < g.steps.size(); ++k) {
            const auto from = g.steps[k].cls;
            const auto to = g.target[k];
            if (from == to) {
                continue;
            }
            if (from == v) {
                row[k] += 1;
                any = true;
            }
            if (to == v) {
                row[k] -= 1;
                any = true;
            }
        }
        const int rhs = (v == system.start) - (v == system.end);
        if (any || rhs != 0) {
            p.add(std::move(row), lp::Sense::eq, rhs);
        }
    }
    for (std::size_t k = 0; k < g.steps.size(); ++k) {
        if (!system.active[g.steps[k].cls] || !system.active[g.target[k]]) {
            std::vector<Rational> row(p.variables);
            row[k] = 1;
            p.add(std::move(row), lp::Sense::eq, 0);
        }
    }
    for (const auto& [r, s] : system.tree) {
        std::vector<Rational> row(p.variables);
        for (std::size_t k = 0; k < g.steps.size(); ++k) {
            const auto from = g.steps[k].cls;
            const auto to = g.target[k];
            if ((from == r && to == s) || (from == s && to == r)) {
                row[k] = 1;
            }
        }
        p.add(std::move(row), lp::Sense::ge, 1);
    }
    return p;
}

bool realizable(const Model& model, const std::vector<std::int64_t>& counts)
{
    const Graph g = graph(model);
    if (counts.size() != g.steps.size()) {
        throw Error("step count vector has " + std::to_string(counts.size()) + " entries, expected "
                    + std::to_string(g.steps.size()));
    }
    const std::size_t n = model.class_count();
    std::vector<std::int64_t> balance(n, 0);
    std::vector<bool> touched(n, false);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    bool any = false;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] < 0) {
            throw Error("step counts must be nonnegative");
        }
        if (counts[k] == 0) {
            continue;
        }
        any = true;
        const auto from = g.steps[k].cls;
        const auto to = g.target[k];
        balance[from] += counts[k];
        balance[to] -= counts[k];
        touched[from] = touched[to] = true;
        edges.emplace_back(from, to);
    }
    if (!any) {
        return true;
    }
    const std::size_t r0 = model.start_class();
    if (!touched[r0]) {
        return false;
    }
    for (std::size_t v = 0; v < n; ++v) {
        const bool circuit = balance[r0] == 0;
        if (v == r0 && !(balance[v] == 0 || balance[v] == 1)) {
            return false;
        }
        if (v != r0 && !(balance[v] == 0 || (!circuit && balance[v] == -1))) {
            return false;
        }
    }
    return connected(n, touched, edges);
}

std::vector<std::vector<std::int64_t>> endpoint_inequalities(const Model& model)
{
    const auto steps = step_union(model);
    std::vector<std::vector<std::int64_t>> out;
    for (int a = 0; a < model.nonneg_axes(); ++a) {
        std::vector<std::int64_t> row;
        for (const auto& s : steps) {
            row.push_back(model.step_set(s.cls)[s.index].displacement[static_cast<std::size_t>(a)]);
        }
        out.push_back(std::move(row));
    }
    return out;
}

Implication implies(const Model& model, const std::vector<EulerianSystem>& systems, const std::vector<int>& kept,
                    int target)
{
    const auto ineq = endpoint_inequalities(model);
    Implication res;
    if (std::find(kept.begin(), kept.end(), target) != kept.end()) {
        res.implied = true;
        return res;
    }
    auto as_row = [](const std::vector<std::int64_t>& v) {
        return std::vector<Rational>(v.begin(), v.end());
    };
    res.implied = true;
    for (std::size_t si = 0; si < systems.size(); ++si) {
        lp::Program p = system_program(model, systems[si]);
        for (int k : kept) {
            p.add(as_row(ineq.at(static_cast<std::size_t>(k))), lp::Sense::ge, 0);
        }
        p.add(as_row(ineq.at(static_cast<std::size_t>(target))), lp::Sense::le, -1);
        auto r = lp::solve(p);
        if (!r.feasible) {
            if (!lp::check_farkas(p, r.farkas)) {
                throw Error("internal error: invalid infeasibility certificate");
            }
            res.farkas.push_back(std::move(r.farkas));
            continue;
        }
        res.implied = false;
        res.farkas.clear();
        res.rational_witness = r.point;
        res.witness_system = si;
        // circuits: scaling a rational point keeps every constraint
        BigInt scale = 1;
        for (const auto& v : r.point) {
            scale = boost::multiprecision::lcm(scale, denominator(v));
        }
        std::vector<BigInt> scaled;
        std::vector<Rational> scaled_q;
        for (const auto& v : r.point) {
            scaled.push_back(numerator(Rational(v * scale)));
            scaled_q.emplace_back(scaled.back());
        }
        if (lp::satisfies(p, scaled_q)) {
            res.integer_witness = scaled;
        } else if (auto ip = lp::integer_point(p)) {
            res.integer_witness = std::move(*ip);
        }
        break;
    }
    return res;
}

DimensionReport dimension(const Model& model)
{
    DimensionReport rep;
    rep.inequalities = endpoint_inequalities(model);
    const int p = static_cast<int>(rep.inequalities.size());
    const auto systems = eulerian_systems(model);
    for (int size = 0; size <= p; ++size) {
        // subsets of the given size in lexicographic order
        std::vector<int> subset(static_cast<std::size_t>(size));
        std::iota(subset.begin(), subset.end(), 0);
        while (true) {
            bool ok = true;
            std::vector<std::pair<int, Implication>> certs;
            for (int t = 0; t < p && ok; ++t) {
                if (std::find(subset.begin(), subset.end(), t) != subset.end()) {
                    continue;
                }
                auto imp = implies(model, systems, subset, t);
                if (!imp.implied) {
                    rep.rejections.push_back({subset, t, imp});
                    ok = false;
                } else {
                    certs.emplace_back(t, std::move(imp));
                }
            }
            if (ok) {
                rep.implying_subset = subset;
                rep.delta = size;
                rep.certificates = std::move(certs);
                return rep;
            }
            int i = size - 1;
            while (i >= 0 && subset[static_cast<std::size_t>(i)] == p - size + i) {
                --i;
            }
            if (i < 0) {
                break;
            }
            ++subset[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) {
                subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j) - 1] + 1;
            }
        }
    }
    throw Error("internal error: the full set of inequalities must imply itself");
}

namespace
{

nlohmann::json rationals(const std::vector<Rational>& v)
{
    auto out = nlohmann::json::array();
    for (const auto& x : v) {
        out.push_back(walkforge::to_string(x));
    }
    return out;
}

nlohmann::json implication_json(const Implication& imp)
{
    nlohmann::json j = {{"implied", imp.implied}};
    if (imp.implied) {
        auto f = nlohmann::json::array();
        for (const auto& y : imp.farkas) {
            f.push_back(rationals(y));
        }
        j["farkas"] = f;
    } else {
        j["rational_witness"] = rationals(*imp.rational_witness);
        j["witness_system"] = imp.witness_system;
        if (imp.integer_witness) {
            auto w = nlohmann::json::array();
            for (const auto& v : *imp.integer_witness) {
                w.push_back(v.str());
            }
            j["integer_witness"] = w;
        } else {
            j["integer_witness"] = nullptr;
        }
    }
    return j;
}

} // namespace

nlohmann::json DimensionReport::to_json() const
{
    nlohmann::json j;
    j["inequalities"] = inequalities;
    j["implying_subset"] = implying_subset;
    j["dimension"] = delta;
    auto certs = nlohmann::json::array();
    for (const auto& [t, imp] : certificates) {
        auto c = implication_json(imp);
        c["target"] = t;
        certs.push_back(c);
    }
    j["certificates"] = certs;
    auto rej = nlohmann::json::array();
    for (const auto& r : rejections) {
        auto c = implication_json(r.implication);
        c["subset"] = subset_string(r.subset);
        c["target"] = r.target;
        rej.push_back(c);
    }
    j["rejections"] = rej;
    return j;
}

} // namespace walkforge::dimension
