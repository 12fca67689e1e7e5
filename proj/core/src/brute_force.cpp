#include <walkforge/enumerate.hpp>

namespace walkforge
{

namespace
{

void extend(const Model& model, std::vector<std::int64_t>& pos, int n, int max_len, const Rational& weight,
            std::vector<EndpointCounts>& out)
{
    out[static_cast<std::size_t>(n)][pos] += weight;
    if (n == max_len) {
        return;
    }
    for (const auto& step : model.step_set(model.class_at(pos, n))) {
        for (std::size_t a = 0; a < pos.size(); ++a) {
            pos[a] += step.displacement[a];
        }
        if (model.in_region(pos)) {
            extend(model, pos, n + 1, max_len, weight * step.weight, out);
        }
        for (std::size_t a = 0; a < pos.size(); ++a) {
            pos[a] -= step.displacement[a];
        }
    }
}

} // namespace

std::vector<EndpointCounts> brute_force_all(const Model& model, int n)
{
    if (n < 0 || n > brute_force_max_length) {
        throw Error("brute force is limited to lengths 0.." + std::to_string(brute_force_max_length));
    }
    std::vector<EndpointCounts> out(static_cast<std::size_t>(n) + 1);
    auto pos = model.start();
    extend(model, pos, 0, n, Rational(1), out);
    for (auto& counts : out) {
        std::erase_if(counts, [](const auto& kv) { return kv.second == 0; });
    }
    return out;
}

EndpointCounts brute_force(const Model& model, int n)
{
    return brute_force_all(model, n).back();
}

} // namespace walkforge
