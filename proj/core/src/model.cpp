#include <walkforge/model.hpp>

#include <algorithm>
#include <numeric>

namespace walkforge
{

namespace
{

const std::vector<std::vector<int>> compass_steps = {{0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1}, {-1, 0}, {-1, 1}};

} // namespace

std::int64_t ResiduePolynomial::evaluate(std::span<const std::int64_t> position, std::int64_t n) const
{
    std::int64_t v = constant + time_coeff * n;
    for (std::size_t a = 0; a < position_coeffs.size(); ++a) {
        v += position_coeffs[a] * position[a];
    }
    return v;
}

int compass_index(std::span<const int> displacement)
{
    if (displacement.size() != 2) {
        return -1;
    }
    for (std::size_t i = 0; i < compass_steps.size(); ++i) {
        if (compass_steps[i][0] == displacement[0] && compass_steps[i][1] == displacement[1]) {
            return static_cast<int>(i);
        }
    }
    return -1;
}

const std::vector<std::string>& compass_names()
{
    static const std::vector<std::string> names = {"N", "NE", "E", "SE", "S", "SW", "W", "NW"};
    return names;
}

std::vector<int> compass_displacement(int index)
{
    return compass_steps.at(static_cast<std::size_t>(index));
}

bool step_less(const Step& a, const Step& b)
{
    int ca = compass_index(a.displacement);
    int cb = compass_index(b.displacement);
    auto rank = [](int c) { return c < 0 ? 8 : c; };
    if (rank(ca) != rank(cb)) {
        return rank(ca) < rank(cb);
    }
    if (a.displacement != b.displacement) {
        return a.displacement < b.displacement;
    }
    return a.weight < b.weight;
}

Model::Model(ModelSpec spec)
    : dimension_(spec.dimension), nonneg_axes_(spec.nonneg_axes), moduli_(std::move(spec.moduli)),
      residue_polys_(std::move(spec.residue_polys)), start_(std::move(spec.start)), label_(std::move(spec.label))
{
    if (dimension_ < 1) {
        throw ModelError("dimension must be positive");
    }
    if (nonneg_axes_ < 0 || nonneg_axes_ > dimension_) {
        throw ModelError("nonneg_axes must lie in [0, dimension]");
    }
    if (moduli_.empty()) {
        throw ModelError("at least one modulus is required");
    }
    if (residue_polys_.size() != moduli_.size()) {
        throw ModelError("expected " + std::to_string(moduli_.size()) + " residue polynomials, got "
                         + std::to_string(residue_polys_.size()));
    }
    std::size_t classes = 1;
    for (int m : moduli_) {
        if (m < 1) {
            throw ModelError("moduli must be positive");
        }
        classes *= static_cast<std::size_t>(m);
        if (classes > (1U << 16)) {
            throw ModelError("too many residue classes");
        }
    }
    for (const auto& poly : residue_polys_) {
        if (poly.position_coeffs.size() != static_cast<std::size_t>(dimension_)) {
            throw ModelError("residue polynomial has " + std::to_string(poly.position_coeffs.size())
                             + " position coefficients, expected " + std::to_string(dimension_));
        }
    }
    if (start_.size() != static_cast<std::size_t>(dimension_)) {
        throw ModelError("start has wrong dimension");
    }
    if (!in_region(start_)) {
        throw ModelError("start point lies outside the region");
    }
    step_sets_.assign(classes, {});
    bool any = false;
    for (auto& [key, steps] : spec.step_sets) {
        if (key.entries.size() != moduli_.size()) {
            throw ModelError("residue key has wrong length");
        }
        for (std::size_t q = 0; q < moduli_.size(); ++q) {
            if (key.entries[q] < 0 || key.entries[q] >= moduli_[q]) {
                throw ModelError("residue key entry " + std::to_string(key.entries[q]) + " not reduced mod "
                                 + std::to_string(moduli_[q]));
            }
        }
        for (const auto& step : steps) {
            if (step.displacement.size() != static_cast<std::size_t>(dimension_)) {
                throw ModelError("step has wrong dimension");
            }
            if (step.weight == 0) {
                throw ModelError("step weights must be nonzero");
            }
        }
        std::sort(steps.begin(), steps.end(), step_less);
        for (std::size_t i = 1; i < steps.size(); ++i) {
            if (steps[i].displacement == steps[i - 1].displacement) {
                throw ModelError("duplicate step in one step set");
            }
        }
        any = any || !steps.empty();
        step_sets_[class_index(key)] = std::move(steps);
    }
    if (!any) {
        throw ModelError("all step sets are empty");
    }
}

ResidueVector Model::residue_vector(std::size_t class_index) const
{
    ResidueVector r;
    r.entries.resize(moduli_.size());
    for (std::size_t q = moduli_.size(); q-- > 0;) {
        r.entries[q] = static_cast<int>(class_index % static_cast<std::size_t>(moduli_[q]));
        class_index /= static_cast<std::size_t>(moduli_[q]);
    }
    return r;
}

std::size_t Model::class_index(const ResidueVector& r) const
{
    std::size_t idx = 0;
    for (std::size_t q = 0; q < moduli_.size(); ++q) {
        idx = idx * static_cast<std::size_t>(moduli_[q]) + static_cast<std::size_t>(r.entries[q]);
    }
    return idx;
}

std::size_t Model::class_at(std::span<const std::int64_t> position, std::int64_t n) const
{
    std::size_t idx = 0;
    for (std::size_t q = 0; q < moduli_.size(); ++q) {
        auto r = floor_mod(residue_polys_[q].evaluate(position, n), moduli_[q]);
        idx = idx * static_cast<std::size_t>(moduli_[q]) + static_cast<std::size_t>(r);
    }
    return idx;
}

bool Model::in_region(std::span<const std::int64_t> position) const
{
    for (int a = 0; a < nonneg_axes_; ++a) {
        if (position[static_cast<std::size_t>(a)] < 0) {
            return false;
        }
    }
    return true;
}

int Model::max_step_length() const
{
    int best = 0;
    for (const auto& set : step_sets_) {
        for (const auto& step : set) {
            for (int v : step.displacement) {
                best = std::max(best, std::abs(v));
            }
        }
    }
    return best;
}

ModelSpec Model::spec() const
{
    ModelSpec s;
    s.dimension = dimension_;
    s.nonneg_axes = nonneg_axes_;
    s.moduli = moduli_;
    s.residue_polys = residue_polys_;
    for (std::size_t c = 0; c < step_sets_.size(); ++c) {
        s.step_sets[residue_vector(c)] = step_sets_[c];
    }
    s.start = start_;
    s.label = label_;
    return s;
}

Model Model::with_label(std::string label) const
{
    Model copy = *this;
    copy.label_ = std::move(label);
    return copy;
}

std::size_t target_class(const Model& model, std::size_t r, std::span<const int> displacement)
{
    ResidueVector rv = model.residue_vector(r);
    for (std::size_t q = 0; q < model.moduli().size(); ++q) {
        const auto& poly = model.residue_polys()[q];
        std::int64_t shift = poly.time_coeff;
        for (std::size_t a = 0; a < displacement.size(); ++a) {
            shift += poly.position_coeffs[a] * displacement[a];
        }
        rv.entries[q] = static_cast<int>(floor_mod(rv.entries[q] + shift, model.moduli()[q]));
    }
    return model.class_index(rv);
}

std::vector<Step> TransitionTable::steps(const Model& model, std::size_t r, std::size_t s) const
{
    std::vector<Step> out;
    for (std::size_t i : subsets.at(r).at(s)) {
        out.push_back(model.step_set(r)[i]);
    }
    return out;
}

TransitionTable transition_table(const Model& model)
{
    const std::size_t n = model.class_count();
    TransitionTable t;
    t.class_count = n;
    t.target.resize(n);
    t.subsets.assign(n, std::vector<std::vector<std::size_t>>(n));
    t.laurent.assign(n, std::vector<SparseLaurent>(n));
    for (std::size_t r = 0; r < n; ++r) {
        const auto& steps = model.step_set(r);
        for (std::size_t i = 0; i < steps.size(); ++i) {
            std::size_t s = target_class(model, r, steps[i].displacement);
            t.target[r].push_back(s);
            t.subsets[r][s].push_back(i);
            auto& coeff = t.laurent[r][s][steps[i].displacement];
            coeff += steps[i].weight;
        }
    }
    return t;
}

Inhomogeneity classify_inhomogeneity(const Model& model)
{
    const auto& sets = model.step_sets();
    bool all_equal = std::all_of(sets.begin(), sets.end(), [&](const auto& s) { return s == sets.front(); });
    bool trivial_moduli = std::all_of(model.moduli().begin(), model.moduli().end(), [](int m) { return m == 1; });
    if (all_equal || trivial_moduli) {
        return Inhomogeneity::homogeneous;
    }
    bool no_position = true;
    bool no_time = true;
    for (std::size_t q = 0; q < model.moduli().size(); ++q) {
        const auto& poly = model.residue_polys()[q];
        const int m = model.moduli()[q];
        for (auto c : poly.position_coeffs) {
            no_position = no_position && floor_mod(c, m) == 0;
        }
        no_time = no_time && floor_mod(poly.time_coeff, m) == 0;
    }
    if (no_position) {
        return Inhomogeneity::time_inhomogeneous;
    }
    if (no_time) {
        return Inhomogeneity::space_inhomogeneous;
    }
    return Inhomogeneity::mixed;
}

std::string to_string(Inhomogeneity tag)
{
    switch (tag) {
    case Inhomogeneity::homogeneous:
        return "homogeneous";
    case Inhomogeneity::time_inhomogeneous:
        return "time_inhomogeneous";
    case Inhomogeneity::space_inhomogeneous:
        return "space_inhomogeneous";
    case Inhomogeneity::mixed:
        return "mixed";
    }
    return "?";
}

} // namespace walkforge
