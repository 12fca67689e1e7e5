#include <walkforge/symmetry.hpp>

#include <algorithm>
#include <deque>
#include <numeric>
#include <random>

#include <walkforge/model_io.hpp>

namespace walkforge
{

Symmetry identity_symmetry(int dimension)
{
    Symmetry g;
    g.permutation.resize(static_cast<std::size_t>(dimension));
    std::iota(g.permutation.begin(), g.permutation.end(), 0);
    g.signs.assign(static_cast<std::size_t>(dimension), 1);
    return g;
}

Symmetry diagonal_reflection()
{
    return Symmetry{{1, 0}, {1, 1}, 0};
}

Symmetry pair_swap(int dimension)
{
    Symmetry g = identity_symmetry(dimension);
    g.class_shift = 1;
    return g;
}

Symmetry compose(const Symmetry& a, const Symmetry& b, int shift_modulus)
{
    Symmetry c;
    const std::size_t d = a.permutation.size();
    c.permutation.resize(d);
    c.signs.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        auto pa = static_cast<std::size_t>(a.permutation[i]);
        c.permutation[i] = b.permutation[pa];
        c.signs[i] = a.signs[i] * b.signs[pa];
    }
    c.class_shift = static_cast<int>(floor_mod(a.class_shift + b.class_shift, shift_modulus));
    return c;
}

namespace
{

std::vector<int> transform(const Symmetry& g, const std::vector<int>& v)
{
    std::vector<int> out(v.size());
    for (std::size_t a = 0; a < v.size(); ++a) {
        out[a] = g.signs[a] * v[static_cast<std::size_t>(g.permutation[a])];
    }
    return out;
}

} // namespace

Model apply(const Symmetry& g, const Model& model)
{
    const int d = model.dimension();
    if (g.permutation.size() != static_cast<std::size_t>(d) || g.signs.size() != static_cast<std::size_t>(d)) {
        throw ModelError("symmetry dimension does not match the model");
    }
    std::vector<int> sorted = g.permutation;
    std::sort(sorted.begin(), sorted.end());
    for (int a = 0; a < d; ++a) {
        if (sorted[static_cast<std::size_t>(a)] != a) {
            throw ModelError("symmetry is not a permutation");
        }
        auto sa = static_cast<std::size_t>(a);
        if (g.signs[sa] != 1 && g.signs[sa] != -1) {
            throw ModelError("symmetry signs must be +1 or -1");
        }
        if (a < model.nonneg_axes() && (g.permutation[sa] >= model.nonneg_axes() || g.signs[sa] != 1)) {
            throw ModelError("symmetry does not preserve the region");
        }
    }
    for (std::size_t q = 0; q < model.moduli().size(); ++q) {
        const auto& poly = model.residue_polys()[q];
        for (std::size_t a = 0; a < static_cast<std::size_t>(d); ++a) {
            auto moved = poly.position_coeffs[static_cast<std::size_t>(g.permutation[a])] * g.signs[a];
            if (floor_mod(moved - poly.position_coeffs[a], model.moduli()[q]) != 0) {
                throw ModelError("symmetry is incompatible with the residue polynomials");
            }
        }
    }
    if (g.class_shift != 0 && model.moduli().size() != 1) {
        throw ModelError("class shifts need a single modulus");
    }
    ModelSpec spec;
    spec.dimension = d;
    spec.nonneg_axes = model.nonneg_axes();
    spec.moduli = model.moduli();
    spec.residue_polys = model.residue_polys();
    spec.label = model.label();
    for (std::size_t a = 0; a < static_cast<std::size_t>(d); ++a) {
        spec.start.push_back(g.signs[a] * model.start()[static_cast<std::size_t>(g.permutation[a])]);
    }
    for (std::size_t c = 0; c < model.class_count(); ++c) {
        ResidueVector r = model.residue_vector(c);
        if (g.class_shift != 0) {
            r.entries[0] = static_cast<int>(floor_mod(r.entries[0] + g.class_shift, model.moduli()[0]));
        }
        std::vector<Step> steps;
        for (const auto& step : model.step_set(c)) {
            steps.push_back(Step{transform(g, step.displacement), step.weight});
        }
        spec.step_sets[r] = std::move(steps);
    }
    return Model(std::move(spec));
}

std::vector<Symmetry> close_group(const std::vector<Symmetry>& generators, int dimension, int shift_modulus)
{
    std::vector<Symmetry> group{identity_symmetry(dimension)};
    std::deque<Symmetry> queue{group.front()};
    while (!queue.empty()) {
        Symmetry cur = queue.front();
        queue.pop_front();
        for (const auto& gen : generators) {
            Symmetry next = compose(gen, cur, shift_modulus);
            if (std::find(group.begin(), group.end(), next) == group.end()) {
                group.push_back(next);
                queue.push_back(next);
            }
        }
    }
    return group;
}

Model canonical_form(const Model& model, const std::vector<Symmetry>& symmetries)
{
    const int shift_mod = model.moduli().size() == 1 ? model.moduli()[0] : 1;
    auto group = close_group(symmetries, model.dimension(), shift_mod);
    std::optional<Model> best;
    std::string best_key;
    for (const auto& g : group) {
        Model image = apply(g, model);
        std::string key = canonical_key(image);
        if (!best || key < best_key) {
            best = std::move(image);
            best_key = std::move(key);
        }
    }
    return *best;
}

std::string to_string(SymmetryConvention c)
{
    switch (c) {
    case SymmetryConvention::none:
        return "none";
    case SymmetryConvention::diagonal:
        return "diagonal";
    case SymmetryConvention::swap:
        return "swap";
    case SymmetryConvention::diagonal_and_swap:
        return "diagonal+swap";
    }
    return "?";
}

SymmetryConvention parse_convention(const std::string& text)
{
    for (auto c : {SymmetryConvention::none, SymmetryConvention::diagonal, SymmetryConvention::swap,
                   SymmetryConvention::diagonal_and_swap}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    throw Error("unknown symmetry convention '" + text + "'");
}

std::string to_string(Family f)
{
    return f == Family::space ? "space" : "time";
}

Family parse_family(const std::string& text)
{
    if (text == "space") {
        return Family::space;
    }
    if (text == "time") {
        return Family::time;
    }
    throw Error("unsupported model family '" + text + "'");
}

std::vector<Symmetry> convention_generators(SymmetryConvention c)
{
    switch (c) {
    case SymmetryConvention::none:
        return {};
    case SymmetryConvention::diagonal:
        return {diagonal_reflection()};
    case SymmetryConvention::swap:
        return {pair_swap()};
    case SymmetryConvention::diagonal_and_swap:
        return {diagonal_reflection(), pair_swap()};
    }
    return {};
}

namespace
{

std::vector<Step> mask_steps(unsigned mask)
{
    std::vector<Step> steps;
    for (int b = 0; b < 8; ++b) {
        if ((mask >> b) & 1U) {
            steps.push_back(Step{compass_displacement(b), Rational(1)});
        }
    }
    return steps;
}

std::string mask_names(unsigned mask)
{
    std::string out = "{";
    for (int b = 0; b < 8; ++b) {
        if ((mask >> b) & 1U) {
            if (out.size() > 1) {
                out += ',';
            }
            out += compass_names()[static_cast<std::size_t>(b)];
        }
    }
    return out + "}";
}

// Compass index image under (x, y) -> (y, x).
constexpr int reflected_bit[8] = {2, 1, 0, 7, 6, 5, 4, 3};

unsigned reflect_mask(unsigned mask)
{
    unsigned out = 0;
    for (int b = 0; b < 8; ++b) {
        if ((mask >> b) & 1U) {
            out |= 1U << reflected_bit[b];
        }
    }
    return out;
}

} // namespace

std::string family_label(Family family, unsigned mask0, unsigned mask1)
{
    return to_string(family) + ":" + mask_names(mask0) + ":" + mask_names(mask1);
}

Model family_model(Family family, unsigned mask0, unsigned mask1)
{
    ModelSpec spec;
    spec.dimension = 2;
    spec.nonneg_axes = 2;
    spec.moduli = {2};
    ResiduePolynomial poly;
    if (family == Family::space) {
        poly.position_coeffs = {1, 1};
    } else {
        poly.position_coeffs = {0, 0};
        poly.time_coeff = 1;
    }
    spec.residue_polys = {poly};
    spec.start = {0, 0};
    spec.step_sets[ResidueVector{{0}}] = mask_steps(mask0);
    spec.step_sets[ResidueVector{{1}}] = mask_steps(mask1);
    spec.label = family_label(family, mask0, mask1);
    return Model(std::move(spec));
}

std::vector<Model> enumerate_model_space(const FamilyConfig& config)
{
    const auto generators = convention_generators(config.convention);
    const unsigned first = config.include_empty ? 0U : 1U;
    std::vector<std::pair<unsigned, unsigned>> reps;
    for (unsigned a = first; a < 256; ++a) {
        for (unsigned b = first; b < 256; ++b) {
            if (a == 0 && b == 0) {
                continue;
            }
            if (config.exclude_homogeneous && a == b) {
                continue;
            }
            Model m = family_model(config.family, a, b);
            if (generators.empty() || canonical_key(canonical_form(m, generators)) == canonical_key(m)) {
                reps.emplace_back(a, b);
            }
        }
    }
    std::vector<std::size_t> chosen(reps.size());
    std::iota(chosen.begin(), chosen.end(), 0);
    if (config.limit && *config.limit < reps.size()) {
        if (config.seed) {
            std::mt19937_64 rng(*config.seed);
            for (std::size_t i = 0; i < *config.limit; ++i) {
                std::size_t j = i + static_cast<std::size_t>(rng() % (reps.size() - i));
                std::swap(chosen[i], chosen[j]);
            }
            chosen.resize(*config.limit);
            std::sort(chosen.begin(), chosen.end());
        } else {
            chosen.resize(*config.limit);
        }
    }
    std::vector<Model> out;
    out.reserve(chosen.size());
    for (std::size_t idx : chosen) {
        out.push_back(family_model(config.family, reps[idx].first, reps[idx].second));
    }
    return out;
}

std::vector<OrbitCount> pair_orbit_counts()
{
    std::vector<OrbitCount> out;
    for (bool include_empty : {false, true}) {
        for (auto c : {SymmetryConvention::none, SymmetryConvention::diagonal, SymmetryConvention::swap,
                       SymmetryConvention::diagonal_and_swap}) {
            const bool reflect = c == SymmetryConvention::diagonal || c == SymmetryConvention::diagonal_and_swap;
            const bool swap = c == SymmetryConvention::swap || c == SymmetryConvention::diagonal_and_swap;
            const unsigned first = include_empty ? 0U : 1U;
            OrbitCount count{c, include_empty, 0, 0};
            for (unsigned a = first; a < 256; ++a) {
                for (unsigned b = first; b < 256; ++b) {
                    ++count.ordered_pairs;
                    // the pair is counted iff it is the least member of its orbit
                    std::vector<std::pair<unsigned, unsigned>> orbit{{a, b}};
                    if (reflect) {
                        orbit.emplace_back(reflect_mask(a), reflect_mask(b));
                    }
                    if (swap) {
                        const auto n = orbit.size();
                        for (std::size_t i = 0; i < n; ++i) {
                            orbit.emplace_back(orbit[i].second, orbit[i].first);
                        }
                    }
                    if (*std::min_element(orbit.begin(), orbit.end()) == std::make_pair(a, b)) {
                        ++count.orbits;
                    }
                }
            }
            out.push_back(count);
        }
    }
    return out;
}

} // namespace walkforge
