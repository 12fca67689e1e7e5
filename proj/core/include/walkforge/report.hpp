#ifndef WALKFORGE_REPORT_HPP
#define WALKFORGE_REPORT_HPP

#include <istream>
#include <map>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include <walkforge/pipeline.hpp>

namespace walkforge::report
{

struct EquationSize
{
    int order = 0;
    int degree = 0;
    std::string label;
};

struct Summary
{
    std::optional<nlohmann::json> config;
    std::size_t records = 0;
    std::size_t corrupt = 0;
    std::size_t duplicates = 0;
    std::size_t trivial = 0;
    std::size_t homogeneous = 0;
    std::size_t low_dimension = 0;
    std::size_t pool = 0;
    std::size_t dfinite = 0;
    std::size_t algebraic = 0;
    std::size_t unknown = 0;
    std::size_t errors = 0;
    std::optional<EquationSize> largest_ode;
    std::optional<EquationSize> largest_algebraic;
    double seconds_total = 0;
    double seconds_max = 0;
    std::map<int, std::size_t> delta_histogram;

    /// D-finite (algebraic included) share of the pool.
    double dfinite_fraction() const;
    nlohmann::json to_json() const;
    std::string to_text() const;
};

/// Targets from the full classification run with 10000 terms; shown for
/// comparison only.
struct Reference
{
    std::size_t pool;
    std::size_t dfinite;
    std::size_t algebraic;
    int largest_order;
    int largest_degree;
};

Reference reference_for(Family family);
inline constexpr std::size_t reference_pairs = 32993;

/// Records are deduplicated by label (first wins) so the result does not
/// depend on the order workers finished in.
Summary summarize(std::istream& log);
Summary summarize_file(const std::string& path);

} // namespace walkforge::report

#endif
