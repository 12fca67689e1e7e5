#include <walkforge/series.hpp>

#include <nlohmann/json.hpp>

namespace walkforge
{

Series::Series(CoefficientDomain domain, std::vector<std::string> variables, int order)
    : domain_(domain), variables_(std::move(variables)), order_(order)
{
    if (order_ < 0) {
        throw Error("series order must be nonnegative");
    }
    if (variables_.empty() || variables_.back() != "t") {
        throw Error("the last series variable must be t");
    }
}

Series Series::univariate(CoefficientDomain domain, const std::vector<Rational>& coefficients)
{
    if (coefficients.empty()) {
        throw Error("a univariate series needs at least one coefficient");
    }
    Series s(domain, {"t"}, static_cast<int>(coefficients.size()) - 1);
    for (std::size_t n = 0; n < coefficients.size(); ++n) {
        s.add_term({static_cast<int>(n)}, coefficients[n]);
    }
    return s;
}

Rational Series::normalize(const Rational& value) const
{
    switch (domain_.kind) {
    case CoefficientDomain::Kind::modular:
        if (boost::multiprecision::denominator(value) == 1) {
            BigInt r = boost::multiprecision::numerator(value) % domain_.prime;
            return Rational(r < 0 ? r + domain_.prime : r);
        }
        return Rational(PrimeField(domain_.prime).from_rational(value));
    case CoefficientDomain::Kind::integer:
        if (boost::multiprecision::denominator(value) != 1) {
            throw Error("non-integer coefficient " + to_string(value) + " in an exact series");
        }
        return value;
    case CoefficientDomain::Kind::rational:
        return value;
    }
    return value;
}

void Series::add_term(const Exponent& exponent, const Rational& value)
{
    if (exponent.size() != variables_.size()) {
        throw Error("exponent arity does not match the series variables");
    }
    if (exponent.back() < 0 || exponent.back() > order_) {
        throw Error("t-exponent outside [0, order]");
    }
    if (value == 0) {
        return;
    }
    auto it = terms_.find(exponent);
    Rational sum = normalize(it == terms_.end() ? value : it->second + value);
    if (sum == 0) {
        if (it != terms_.end()) {
            terms_.erase(it);
        }
        return;
    }
    if (it == terms_.end()) {
        terms_.emplace(exponent, std::move(sum));
    } else {
        it->second = std::move(sum);
    }
}

Rational Series::coefficient(const Exponent& exponent) const
{
    auto it = terms_.find(exponent);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::vector<Rational> Series::univariate_coefficients() const
{
    if (!is_univariate()) {
        throw Error("series is not univariate in t");
    }
    std::vector<Rational> out(static_cast<std::size_t>(order_) + 1);
    for (const auto& [e, c] : terms_) {
        out[static_cast<std::size_t>(e[0])] = c;
    }
    return out;
}

std::vector<std::uint32_t> Series::modular_coefficients() const
{
    if (domain_.kind != CoefficientDomain::Kind::modular) {
        throw Error("series is not over a prime field");
    }
    std::vector<std::uint32_t> out(static_cast<std::size_t>(order_) + 1, 0);
    for (const auto& [e, c] : sum_spatial().terms_) {
        out[static_cast<std::size_t>(e[0])] = boost::multiprecision::numerator(c).convert_to<std::uint32_t>();
    }
    return out;
}

Series Series::sum_spatial() const
{
    Series out(domain_, {"t"}, order_);
    for (const auto& [e, c] : terms_) {
        out.add_term({e.back()}, c);
    }
    return out;
}

Series Series::reduce_mod(std::uint32_t p) const
{
    Series out(CoefficientDomain::modular(p), variables_, order_);
    for (const auto& [e, c] : terms_) {
        out.add_term(e, c);
    }
    return out;
}

nlohmann::json Series::to_json() const
{
    using nlohmann::json;
    const bool modular = domain_.kind == CoefficientDomain::Kind::modular;
    auto encode = [&](const Rational& c) -> json {
        if (modular) {
            return boost::multiprecision::numerator(c).convert_to<std::uint64_t>();
        }
        return walkforge::to_string(c);
    };
    json j;
    j["domain"] = domain_.to_string();
    j["variables"] = variables_;
    j["order"] = order_;
    if (is_univariate()) {
        j["format"] = "dense";
        json coeffs = json::array();
        for (const auto& c : univariate_coefficients()) {
            coeffs.push_back(encode(c));
        }
        j["coefficients"] = std::move(coeffs);
    } else {
        j["format"] = "sparse";
        json terms = json::array();
        for (const auto& [e, c] : terms_) {
            terms.push_back(json{{"exponent", e}, {"coefficient", encode(c)}});
        }
        j["terms"] = std::move(terms);
    }
    return j;
}

Series Series::from_json(const nlohmann::json& j)
{
    try {
        auto decode = [](const nlohmann::json& v) -> Rational {
            if (v.is_string()) {
                return parse_rational(v.get<std::string>());
            }
            if (v.is_number_unsigned()) {
                return Rational(v.get<std::uint64_t>());
            }
            return Rational(v.get<std::int64_t>());
        };
        Series s(CoefficientDomain::parse(j.at("domain").get<std::string>()),
                 j.at("variables").get<std::vector<std::string>>(), j.at("order").get<int>());
        const std::string format = j.at("format").get<std::string>();
        if (format == "dense") {
            const auto& coeffs = j.at("coefficients");
            for (std::size_t n = 0; n < coeffs.size(); ++n) {
                s.add_term({static_cast<int>(n)}, decode(coeffs[n]));
            }
        } else if (format == "sparse") {
            for (const auto& term : j.at("terms")) {
                s.add_term(term.at("exponent").get<Exponent>(), decode(term.at("coefficient")));
            }
        } else {
            throw Error("unknown series format '" + format + "'");
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw Error(std::string("malformed series file: ") + e.what());
    }
}

std::vector<std::string> spatial_variable_names(int dimension)
{
    std::vector<std::string> names{"x"};
    if (dimension == 2) {
        names.emplace_back("y");
    } else {
        for (int i = 1; i < dimension; ++i) {
            names.push_back("y" + std::to_string(i));
        }
    }
    return names;
}

std::uint64_t fingerprint(const Series& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](const std::string& text) {
        for (unsigned char ch : text) {
            h ^= ch;
            h *= 1099511628211ULL;
        }
        h ^= 0xff;
        h *= 1099511628211ULL;
    };
    mix(s.domain().to_string());
    for (const auto& [e, c] : s.terms()) {
        for (int v : e) {
            mix(std::to_string(v));
        }
        mix(to_string(c));
    }
    return h;
}

} // namespace walkforge
