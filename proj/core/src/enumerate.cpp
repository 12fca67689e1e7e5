#include <walkforge/enumerate.hpp>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace walkforge
{

EvaluationPoint EvaluationPoint::ones(int dimension)
{
    return EvaluationPoint{std::vector<std::optional<Rational>>(static_cast<std::size_t>(dimension), Rational(1))};
}

EvaluationPoint EvaluationPoint::symbolic(int dimension)
{
    return EvaluationPoint{std::vector<std::optional<Rational>>(static_cast<std::size_t>(dimension))};
}

EvaluationPoint EvaluationPoint::parse(const std::string& text, int dimension)
{
    if (text == "symbolic") {
        return symbolic(dimension);
    }
    auto names = spatial_variable_names(dimension);
    EvaluationPoint e = ones(dimension);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw Error("bad evaluation entry '" + item + "', expected var=value");
        }
        auto name = item.substr(0, eq);
        auto value = item.substr(eq + 1);
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end()) {
            throw Error("unknown variable '" + name + "' in evaluation point");
        }
        auto& slot = e.values[static_cast<std::size_t>(it - names.begin())];
        if (value == "symbolic") {
            slot.reset();
        } else {
            slot = parse_rational(value);
        }
    }
    return e;
}

std::string EvaluationPoint::to_string(int dimension) const
{
    auto names = spatial_variable_names(dimension);
    std::string out;
    for (std::size_t a = 0; a < values.size(); ++a) {
        if (a != 0) {
            out += ',';
        }
        out += names[a] + "=" + (values[a] ? walkforge::to_string(*values[a]) : std::string("symbolic"));
    }
    return out;
}

namespace
{

std::int64_t lcm64(std::int64_t a, std::int64_t b)
{
    return a / std::gcd(a, b) * b;
}

// Period in v of c * v mod m.
std::int64_t coefficient_period(std::int64_t c, std::int64_t m)
{
    return m / std::gcd(floor_mod(c, m), m);
}

void check_eval(const Model& model, const EvaluationPoint& eval)
{
    if (eval.values.size() != static_cast<std::size_t>(model.dimension())) {
        throw Error("evaluation point has " + std::to_string(eval.values.size()) + " entries, model dimension is "
                    + std::to_string(model.dimension()));
    }
}

} // namespace

StateDescriptor reduce_state(const Model& model, const EvaluationPoint& eval)
{
    check_eval(model, eval);
    StateDescriptor s;
    for (int a = 0; a < model.dimension(); ++a) {
        const auto sa = static_cast<std::size_t>(a);
        if (a < model.nonneg_axes() || !eval.values[sa]) {
            s.tracked_axes.push_back(a);
            continue;
        }
        std::int64_t period = 1;
        for (std::size_t q = 0; q < model.moduli().size(); ++q) {
            period = lcm64(period, coefficient_period(model.residue_polys()[q].position_coeffs[sa], model.moduli()[q]));
        }
        if (period == 1) {
            s.dropped_axes.push_back(a);
        } else {
            s.collapsed_axes.push_back(a);
            s.collapsed_moduli.push_back(static_cast<int>(period));
        }
    }
    std::int64_t t = 1;
    for (std::size_t q = 0; q < model.moduli().size(); ++q) {
        t = lcm64(t, coefficient_period(model.residue_polys()[q].time_coeff, model.moduli()[q]));
    }
    s.time_modulus = static_cast<int>(t);
    return s;
}

namespace
{

Rational rational_pow(const Rational& c, std::int64_t e)
{
    if (e < 0) {
        if (c == 0) {
            throw Error("evaluation point sets a variable to 0 where negative powers occur");
        }
        return rational_pow(1 / c, -e);
    }
    Rational r(1);
    for (std::int64_t i = 0; i < e; ++i) {
        r *= c;
    }
    return r;
}

// Everything the DP needs, independent of the coefficient ring.
struct Plan
{
    const Model* model = nullptr;
    StateDescriptor state;
    int N = 0;

    // Tracked axes; a single dummy axis (model axis -1) when none is tracked.
    std::vector<int> axis;
    std::vector<bool> nonneg;
    std::vector<std::int64_t> start;
    std::vector<std::int64_t> pos;
    std::vector<std::int64_t> neg;
    std::vector<std::int64_t> lowest;
    std::vector<std::int64_t> extent;
    std::vector<std::size_t> stride;
    std::size_t box = 1;

    std::vector<int> coll_mod;
    std::vector<std::size_t> block_stride;
    std::size_t blocks = 1;
    std::size_t start_block = 0;
    Rational start_weight{1};

    struct StepData
    {
        std::vector<int> delta;
        std::vector<std::size_t> target_block;
        Rational weight;
    };
    std::vector<std::vector<StepData>> steps;
    std::size_t total_steps = 0;

    // Constant multiplier per tracked axis (nullopt when symbolic or 1).
    std::vector<std::optional<Rational>> tracked_constant;

    std::int64_t lo(std::size_t a, int n) const
    {
        std::int64_t v = start[a] - static_cast<std::int64_t>(n) * neg[a];
        return nonneg[a] ? std::max<std::int64_t>(v, 0) : v;
    }
    std::int64_t hi(std::size_t a, int n) const { return start[a] + static_cast<std::int64_t>(n) * pos[a]; }
    std::size_t dims() const { return axis.size(); }
};

Plan make_plan(const Model& model, int N, const EvaluationPoint& eval, const EnumerationLimits& limits)
{
    if (N < 0) {
        throw Error("number of terms must be nonnegative");
    }
    Plan plan;
    plan.model = &model;
    plan.state = reduce_state(model, eval);
    plan.N = N;
    const auto& st = plan.state;
    for (int a : st.tracked_axes) {
        plan.axis.push_back(a);
    }
    if (plan.axis.empty()) {
        plan.axis.push_back(-1);
    }
    const std::size_t D = plan.axis.size();
    auto component = [](const Step& s, int a) { return a < 0 ? 0 : s.displacement[static_cast<std::size_t>(a)]; };
    for (std::size_t t = 0; t < D; ++t) {
        const int a = plan.axis[t];
        plan.nonneg.push_back(a >= 0 && a < model.nonneg_axes());
        plan.start.push_back(a < 0 ? 0 : model.start()[static_cast<std::size_t>(a)]);
        std::int64_t p = 0;
        std::int64_t m = 0;
        for (const auto& set : model.step_sets()) {
            for (const auto& s : set) {
                p = std::max<std::int64_t>(p, component(s, a));
                m = std::max<std::int64_t>(m, -component(s, a));
            }
        }
        plan.pos.push_back(p);
        plan.neg.push_back(m);
        plan.tracked_constant.push_back(a < 0 || !eval.values[static_cast<std::size_t>(a)]
                                                || *eval.values[static_cast<std::size_t>(a)] == 1
                                            ? std::nullopt
                                            : eval.values[static_cast<std::size_t>(a)]);
    }
    plan.lowest.resize(D);
    plan.extent.resize(D);
    plan.stride.resize(D);
    for (std::size_t t = 0; t < D; ++t) {
        plan.lowest[t] = plan.lo(t, N);
        plan.extent[t] = plan.hi(t, N) - plan.lowest[t] + 1;
    }
    long double cells = 1;
    for (std::size_t t = D; t-- > 0;) {
        plan.stride[t] = plan.box;
        plan.box *= static_cast<std::size_t>(plan.extent[t]);
        cells *= static_cast<long double>(plan.extent[t]);
    }
    plan.coll_mod = st.collapsed_moduli;
    plan.block_stride.resize(plan.coll_mod.size());
    for (std::size_t c = plan.coll_mod.size(); c-- > 0;) {
        plan.block_stride[c] = plan.blocks;
        plan.blocks *= static_cast<std::size_t>(plan.coll_mod[c]);
    }
    cells *= static_cast<long double>(plan.blocks);
    if (cells > static_cast<long double>(limits.cell_limit)) {
        throw Error("state space of " + std::to_string(static_cast<double>(cells)) + " cells exceeds the limit of "
                    + std::to_string(limits.cell_limit));
    }

    // Constants on untracked axes are folded into the step and start weights.
    std::vector<int> folded = st.collapsed_axes;
    folded.insert(folded.end(), st.dropped_axes.begin(), st.dropped_axes.end());
    for (int a : folded) {
        plan.start_weight *= rational_pow(*eval.values[static_cast<std::size_t>(a)], model.start()[static_cast<std::size_t>(a)]);
    }
    for (std::size_t c = 0; c < st.collapsed_axes.size(); ++c) {
        auto r = floor_mod(model.start()[static_cast<std::size_t>(st.collapsed_axes[c])], plan.coll_mod[c]);
        plan.start_block += static_cast<std::size_t>(r) * plan.block_stride[c];
    }
    plan.steps.resize(model.class_count());
    for (std::size_t r = 0; r < model.class_count(); ++r) {
        for (const auto& s : model.step_set(r)) {
            Plan::StepData d;
            for (int a : plan.axis) {
                d.delta.push_back(component(s, a));
            }
            d.weight = s.weight;
            for (int a : folded) {
                d.weight *= rational_pow(*eval.values[static_cast<std::size_t>(a)], s.displacement[static_cast<std::size_t>(a)]);
            }
            d.target_block.resize(plan.blocks);
            for (std::size_t b = 0; b < plan.blocks; ++b) {
                std::size_t nb = 0;
                for (std::size_t c = 0; c < plan.coll_mod.size(); ++c) {
                    auto res = static_cast<std::int64_t>(b / plan.block_stride[c] % static_cast<std::size_t>(plan.coll_mod[c]));
                    res = floor_mod(res + s.displacement[static_cast<std::size_t>(st.collapsed_axes[c])], plan.coll_mod[c]);
                    nb += static_cast<std::size_t>(res) * plan.block_stride[c];
                }
                d.target_block[b] = nb;
            }
            plan.steps[r].push_back(std::move(d));
            ++plan.total_steps;
        }
    }
    return plan;
}

// Lazily reduced arithmetic mod p with uint32 cells: a cell receives at most
// total_steps contributions below p per step, reduced once afterwards.
struct ModRing32
{
    using T = std::uint32_t;
    PrimeField field;
    explicit ModRing32(std::uint32_t p) : field(p) {}
    T convert(const Rational& v) const { return field.from_rational(v); }
    static bool fits(std::uint32_t p, std::size_t max_terms)
    {
        return static_cast<long double>(p) * static_cast<long double>(std::max<std::size_t>(max_terms, 1)) < 4294967296.0L;
    }
    bool is_one(T w) const { return w == 1; }
    T zero() const { return 0; }
    void add_row(T* __restrict d, const T* __restrict s, std::size_t n, T w) const
    {
        if (w == 1) {
            for (std::size_t i = 0; i < n; ++i) {
                d[i] += s[i];
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) {
                d[i] += field.mul(s[i], w);
            }
        }
    }
    void normalize(T* __restrict d, std::size_t n) const
    {
        // Barrett reduction; valid because every cell is below 2^32
        const std::uint64_t p = field.prime();
        const std::uint64_t inv = (std::uint64_t{1} << 32) / p;
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t x = d[i];
            auto r = static_cast<T>(x - ((x * inv) >> 32) * p);
            d[i] = r >= p ? r - static_cast<T>(p) : r;
        }
    }
    void mask_copy(T* __restrict d, const T* __restrict s, const unsigned char* __restrict keep, std::size_t n) const
    {
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = s[i] & (T{0} - keep[i]);
        }
    }
    Rational to_rational(T v) const { return Rational(v); }
};

// Fallback for large primes: uint64 cells reduced with %.
struct ModRing64
{
    using T = std::uint64_t;
    PrimeField field;

    explicit ModRing64(std::uint32_t p) : field(p) {}
    T convert(const Rational& v) const { return field.from_rational(v); }
    bool is_one(T w) const { return w == 1; }
    T zero() const { return 0; }
    void add_row(T* __restrict d, const T* __restrict s, std::size_t n, T w) const
    {
        for (std::size_t i = 0; i < n; ++i) {
            d[i] += s[i] * w % field.prime();
        }
    }
    void normalize(T* d, std::size_t n) const
    {
        for (std::size_t i = 0; i < n; ++i) {
            d[i] %= field.prime();
        }
    }
    void mask_copy(T* __restrict d, const T* __restrict s, const unsigned char* __restrict keep, std::size_t n) const
    {
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = s[i] & (T{0} - keep[i]);
        }
    }
    Rational to_rational(T v) const { return Rational(v); }
};

template <typename V>
struct ExactRing
{
    using T = V;
    bool integer_only;

    T convert(const Rational& v) const
    {
        if constexpr (std::is_same_v<V, BigInt>) {
            if (boost::multiprecision::denominator(v) != 1) {
                throw Error("weight " + to_string(v) + " is not an integer; use the rational domain");
            }
            return boost::multiprecision::numerator(v);
        } else {
            return v;
        }
    }
    bool is_one(const T& w) const { return w == 1; }
    T zero() const { return T(0); }
    void add_row(T* d, const T* s, std::size_t n, const T& w) const
    {
        const bool one = w == 1;
        for (std::size_t i = 0; i < n; ++i) {
            if (s[i] != 0) {
                if (one) {
                    d[i] += s[i];
                } else {
                    d[i] += s[i] * w;
                }
            }
        }
    }
    void normalize(T*, std::size_t) const {}
    void mask_copy(T* d, const T* s, const unsigned char* keep, std::size_t n) const
    {
        for (std::size_t i = 0; i < n; ++i) {
            d[i] = keep[i] ? s[i] : T(0);
        }
    }
    Rational to_rational(const T& v) const { return Rational(v); }
};

template <typename Ring>
class Engine
{
public:
    using T = typename Ring::T;

    Engine(const Plan& plan, Ring ring) : plan_(plan), ring_(std::move(ring))
    {
        const std::size_t cells = plan_.blocks * plan_.box;
        cur_.assign(cells, ring_.zero());
        next_.assign(cells, ring_.zero());
        for (const auto& set : plan_.steps) {
            std::vector<T> ws;
            for (const auto& s : set) {
                ws.push_back(ring_.convert(s.weight));
            }
            weights_.push_back(std::move(ws));
        }
        std::size_t idx = plan_.start_block * plan_.box;
        for (std::size_t t = 0; t < plan_.dims(); ++t) {
            idx += static_cast<std::size_t>(plan_.start[t] - plan_.lowest[t]) * plan_.stride[t];
        }
        cur_[idx] = ring_.convert(plan_.start_weight);
        const std::size_t width = static_cast<std::size_t>(plan_.extent.back());
        masked_.assign(width, ring_.zero());
    }

    const Ring& ring() const { return ring_; }
    const std::vector<T>& layer() const { return cur_; }

    /// Calls f(block, row coords (all tracked axes but the last), row pointer,
    /// first last-axis coordinate, length) for every row of layer n.
    template <typename F>
    void for_each_row(int n, const std::vector<T>& data, F&& f) const
    {
        const std::size_t D = plan_.dims();
        std::vector<std::int64_t> coord(D - 1);
        for (std::size_t t = 0; t + 1 < D; ++t) {
            coord[t] = plan_.lo(t, n);
        }
        const std::int64_t jlo = plan_.lo(D - 1, n);
        const auto len = static_cast<std::size_t>(plan_.hi(D - 1, n) - jlo + 1);
        while (true) {
            std::size_t base = 0;
            for (std::size_t t = 0; t + 1 < D; ++t) {
                base += static_cast<std::size_t>(coord[t] - plan_.lowest[t]) * plan_.stride[t];
            }
            base += static_cast<std::size_t>(jlo - plan_.lowest[D - 1]);
            for (std::size_t b = 0; b < plan_.blocks; ++b) {
                f(b, coord, data.data() + b * plan_.box + base, jlo, len);
            }
            std::size_t t = D - 1;
            while (t-- > 0) {
                if (++coord[t] <= plan_.hi(t, n)) {
                    break;
                }
                coord[t] = plan_.lo(t, n);
            }
            if (t == static_cast<std::size_t>(-1)) {
                break;
            }
        }
    }

    /// Advances from layer n to layer n + 1.
    void step(int n)
    {
        const Model& model = *plan_.model;
        const std::size_t D = plan_.dims();
        for_each_row(n + 1, next_, [&](std::size_t, const std::vector<std::int64_t>&, const T* row, std::int64_t, std::size_t len) {
            T* w = const_cast<T*>(row);
            std::fill(w, w + len, ring_.zero());
        });
        const auto& polys = model.residue_polys();
        const auto& moduli = model.moduli();
        const std::size_t K = moduli.size();
        const int last_axis = plan_.axis.back();
        std::vector<std::int64_t> base(K);
        std::vector<std::int64_t> slope(K);
        std::int64_t period = 1;
        for (std::size_t q = 0; q < K; ++q) {
            slope[q] = last_axis < 0 ? 0 : polys[q].position_coeffs[static_cast<std::size_t>(last_axis)];
            period = lcm64(period, coefficient_period(slope[q], moduli[q]));
        }
        std::vector<std::size_t> phase_class(static_cast<std::size_t>(period));
        std::vector<char> present(model.class_count());

        for_each_row(n, cur_, [&](std::size_t b, const std::vector<std::int64_t>& coord, const T* row, std::int64_t jlo, std::size_t len) {
            for (std::size_t q = 0; q < K; ++q) {
                std::int64_t v = polys[q].constant + polys[q].time_coeff * n;
                for (std::size_t t = 0; t + 1 < D; ++t) {
                    v += polys[q].position_coeffs[static_cast<std::size_t>(plan_.axis[t])] * coord[t];
                }
                for (std::size_t c = 0; c < plan_.coll_mod.size(); ++c) {
                    auto res = static_cast<std::int64_t>(b / plan_.block_stride[c] % static_cast<std::size_t>(plan_.coll_mod[c]));
                    v += polys[q].position_coeffs[static_cast<std::size_t>(plan_.state.collapsed_axes[c])] * res;
                }
                base[q] = v + slope[q] * jlo;
            }
            std::fill(present.begin(), present.end(), 0);
            const auto phases = static_cast<std::size_t>(period);
            for (std::size_t ph = 0; ph < phases; ++ph) {
                std::size_t cls = 0;
                for (std::size_t q = 0; q < K; ++q) {
                    cls = cls * static_cast<std::size_t>(moduli[q])
                          + static_cast<std::size_t>(floor_mod(base[q] + slope[q] * static_cast<std::int64_t>(ph), moduli[q]));
                }
                phase_class[ph] = cls;
                if (ph < len) {
                    present[cls] = 1;
                }
            }
            for (std::size_t r = 0; r < present.size(); ++r) {
                if (!present[r] || plan_.steps[r].empty()) {
                    continue;
                }
                const T* src = row;
                if (phases > 1) {
                    ring_.mask_copy(masked_.data(), row, keep_pattern(phase_class, r), len);
                    src = masked_.data();
                }
                for (std::size_t i = 0; i < plan_.steps[r].size(); ++i) {
                    const auto& s = plan_.steps[r][i];
                    bool inside = true;
                    std::size_t target = s.target_block[b] * plan_.box;
                    for (std::size_t t = 0; t + 1 < D; ++t) {
                        const std::int64_t c = coord[t] + s.delta[t];
                        if (plan_.nonneg[t] && c < 0) {
                            inside = false;
                            break;
                        }
                        target += static_cast<std::size_t>(c - plan_.lowest[t]) * plan_.stride[t];
                    }
                    if (!inside) {
                        continue;
                    }
                    const std::int64_t v = s.delta[D - 1];
                    std::int64_t j0 = jlo;
                    if (plan_.nonneg[D - 1]) {
                        j0 = std::max<std::int64_t>(j0, -v);
                    }
                    const std::int64_t j1 = jlo + static_cast<std::int64_t>(len);
                    if (j0 >= j1) {
                        continue;
                    }
                    T* dst = next_.data() + target + static_cast<std::size_t>(j0 + v - plan_.lowest[D - 1]);
                    ring_.add_row(dst, src + (j0 - jlo), static_cast<std::size_t>(j1 - j0), weights_[r][i]);
                }
            }
        });
        for_each_row(n + 1, next_, [&](std::size_t, const std::vector<std::int64_t>&, const T* row, std::int64_t, std::size_t len) {
            ring_.normalize(const_cast<T*>(row), len);
        });
        cur_.swap(next_);
    }

private:
    // 0/1 row selecting the columns of class r, tiled from the phase classes.
    const unsigned char* keep_pattern(const std::vector<std::size_t>& phase_class, std::size_t r)
    {
        std::vector<unsigned char> key(phase_class.size());
        for (std::size_t ph = 0; ph < phase_class.size(); ++ph) {
            key[ph] = phase_class[ph] == r;
        }
        auto it = keep_cache_.find(key);
        if (it == keep_cache_.end()) {
            std::vector<unsigned char> row(masked_.size());
            for (std::size_t j = 0; j < row.size(); ++j) {
                row[j] = key[j % key.size()];
            }
            it = keep_cache_.emplace(std::move(key), std::move(row)).first;
        }
        return it->second.data();
    }

    const Plan& plan_;
    Ring ring_;
    std::vector<T> cur_;
    std::vector<T> next_;
    std::vector<std::vector<T>> weights_;
    std::vector<T> masked_;
    std::map<std::vector<unsigned char>, std::vector<unsigned char>> keep_cache_;
};

std::vector<std::string> symbolic_names(const Model& model, const EvaluationPoint& eval)
{
    auto names = spatial_variable_names(model.dimension());
    std::vector<std::string> out;
    for (std::size_t a = 0; a < names.size(); ++a) {
        if (!eval.values[a]) {
            out.push_back(names[a]);
        }
    }
    out.emplace_back("t");
    return out;
}

// Runs the DP and hands every nonzero cell of every layer to visit(n, coords, block, value).
template <typename Ring, typename Visit>
void run_cells(const Plan& plan, Ring ring, Visit&& visit)
{
    Engine<Ring> engine(plan, std::move(ring));
    const std::size_t D = plan.dims();
    std::vector<std::int64_t> coords(D);
    for (int n = 0; n <= plan.N; ++n) {
        engine.for_each_row(n, engine.layer(), [&](std::size_t b, const std::vector<std::int64_t>& c, const auto* row, std::int64_t jlo, std::size_t len) {
            std::copy(c.begin(), c.end(), coords.begin());
            for (std::size_t j = 0; j < len; ++j) {
                if (row[j] != 0) {
                    coords[D - 1] = jlo + static_cast<std::int64_t>(j);
                    visit(n, coords, b, engine.ring().to_rational(row[j]));
                }
            }
        });
        if (n < plan.N) {
            engine.step(n);
        }
    }
}

// Fast path: every variable constant, result is a univariate series mod p.
template <typename Ring>
std::vector<Rational> run_sums_mod(const Plan& plan, Ring ring)
{
    const PrimeField field = ring.field;
    const std::uint32_t p = field.prime();
    const std::size_t D = plan.dims();
    std::vector<std::vector<std::uint32_t>> powers(D);
    bool weighted = false;
    for (std::size_t t = 0; t < D; ++t) {
        if (plan.tracked_constant[t]) {
            weighted = true;
            const auto c = field.from_rational(*plan.tracked_constant[t]);
            powers[t].resize(static_cast<std::size_t>(plan.extent[t]));
            // tracked constant axes are constrained, so lowest == 0
            std::uint32_t acc = field.pow(c, static_cast<std::uint64_t>(plan.lowest[t]));
            for (auto& v : powers[t]) {
                v = acc;
                acc = field.mul(acc, c);
            }
        }
    }
    Engine<Ring> engine(plan, std::move(ring));
    std::vector<Rational> out;
    for (int n = 0; n <= plan.N; ++n) {
        std::uint64_t total = 0;
        engine.for_each_row(n, engine.layer(), [&](std::size_t, const std::vector<std::int64_t>& c, const auto* row, std::int64_t jlo, std::size_t len) {
            if (!weighted) {
                std::uint64_t s = 0;
                for (std::size_t j = 0; j < len; ++j) {
                    s += row[j];
                }
                total = (total + s % p) % p;
                return;
            }
            std::uint32_t rowf = 1;
            for (std::size_t t = 0; t + 1 < D; ++t) {
                if (!powers[t].empty()) {
                    rowf = field.mul(rowf, powers[t][static_cast<std::size_t>(c[t] - plan.lowest[t])]);
                }
            }
            std::uint64_t s = 0;
            for (std::size_t j = 0; j < len; ++j) {
                auto v = static_cast<std::uint32_t>(row[j] % p);
                if (!powers[D - 1].empty()) {
                    v = field.mul(v, powers[D - 1][static_cast<std::size_t>(jlo + static_cast<std::int64_t>(j) - plan.lowest[D - 1])]);
                }
                s += v;
            }
            total = (total + field.mul(static_cast<std::uint32_t>(s % p), rowf)) % p;
        });
        out.emplace_back(total);
        if (n < plan.N) {
            engine.step(n);
        }
    }
    return out;
}

template <typename Visit>
void dispatch_cells(const Plan& plan, const CoefficientDomain& domain, Visit&& visit)
{
    switch (domain.kind) {
    case CoefficientDomain::Kind::modular:
        if (ModRing32::fits(domain.prime, plan.total_steps)) {
            run_cells(plan, ModRing32(domain.prime), visit);
        } else {
            run_cells(plan, ModRing64(domain.prime), visit);
        }
        return;
    case CoefficientDomain::Kind::integer:
        run_cells(plan, ExactRing<BigInt>{true}, visit);
        return;
    case CoefficientDomain::Kind::rational:
        run_cells(plan, ExactRing<Rational>{false}, visit);
        return;
    }
}

} // namespace

Series count_walks(const Model& model, int N, const CoefficientDomain& domain, const EvaluationPoint& eval,
                   const EnumerationLimits& limits)
{
    check_eval(model, eval);
    const Plan plan = make_plan(model, N, eval, limits);
    const auto names = symbolic_names(model, eval);
    Series out(domain, names, N);
    const bool all_constant = names.size() == 1;
    if (all_constant && domain.kind == CoefficientDomain::Kind::modular) {
        std::vector<Rational> coeffs = ModRing32::fits(domain.prime, plan.total_steps)
                                           ? run_sums_mod(plan, ModRing32(domain.prime))
                                           : run_sums_mod(plan, ModRing64(domain.prime));
        for (int n = 0; n <= N; ++n) {
            out.add_term({n}, coeffs[static_cast<std::size_t>(n)]);
        }
        return out;
    }
    // exponent slot of each tracked axis (-1 when it carries a constant)
    std::vector<int> slot;
    int next_slot = 0;
    for (int a : plan.axis) {
        slot.push_back(a >= 0 && !eval.values[static_cast<std::size_t>(a)] ? next_slot++ : -1);
    }
    std::vector<std::map<std::int64_t, Rational>> power_cache(plan.dims());
    Series::Exponent e(names.size());
    dispatch_cells(plan, domain, [&](int n, const std::vector<std::int64_t>& coords, std::size_t, Rational value) {
        for (std::size_t t = 0; t < plan.dims(); ++t) {
            if (slot[t] >= 0) {
                e[static_cast<std::size_t>(slot[t])] = static_cast<int>(coords[t]);
            } else if (plan.tracked_constant[t]) {
                auto& cache = power_cache[t];
                auto it = cache.find(coords[t]);
                if (it == cache.end()) {
                    it = cache.emplace(coords[t], rational_pow(*plan.tracked_constant[t], coords[t])).first;
                }
                value *= it->second;
            }
        }
        e.back() = n;
        out.add_term(e, value);
    });
    return out;
}

FullCounts count_walks_full(const Model& model, int N, const CoefficientDomain& domain, const EnumerationLimits& limits)
{
    const auto eval = EvaluationPoint::symbolic(model.dimension());
    const Plan plan = make_plan(model, N, eval, limits);
    auto names = symbolic_names(model, eval);
    FullCounts out{Series(domain, names, N), std::vector<Series>(model.class_count(), Series(domain, names, N))};
    Series::Exponent e(names.size());
    dispatch_cells(plan, domain, [&](int n, const std::vector<std::int64_t>& coords, std::size_t, const Rational& value) {
        for (std::size_t t = 0; t < coords.size(); ++t) {
            e[t] = static_cast<int>(coords[t]);
        }
        e.back() = n;
        out.total.add_term(e, value);
        out.per_class[model.class_at(coords, n)].add_term(e, value);
    });
    return out;
}

} // namespace walkforge
