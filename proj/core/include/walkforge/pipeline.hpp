#ifndef WALKFORGE_PIPELINE_HPP
#define WALKFORGE_PIPELINE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include <walkforge/guess.hpp>
#include <walkforge/symmetry.hpp>

namespace walkforge::pipeline
{

struct PipelineConfig
{
    Family family = Family::space;
    SymmetryConvention convention = SymmetryConvention::diagonal;
    /// Sample size; a full sweep when unset.
    std::optional<std::size_t> sample;
    std::uint64_t seed = 1;
    int terms = 2000;
    std::uint32_t prime = default_prime;
    int ode_order = 12;
    int ode_degree = 60;
    int alg_order = 8;
    int alg_degree = 60;
    int probe_terms = 60;
    unsigned jobs = 1;
    std::string out;
    bool resume = false;
    bool filters_only = false;

    /// Throws if the terms cannot support the ansatz sizes plus held-out margin.
    void validate() const;
    /// The fields that must agree for a log to be resumed.
    nlohmann::json to_json() const;
};

struct TrivialVerdict
{
    bool trivial = false;
    int window_from = 0;
    int window_to = 0;
};

/// Trivial iff f_n = F(1,1,t) coefficients are constant on [N/2, N], checked
/// modulo two primes.
TrivialVerdict filter_trivial(const Model& model, int probe_terms);

struct DimensionVerdict
{
    int delta = 0;
    bool excluded = false;
};

/// delta <= 1 models have algebraic generating functions and leave the pool.
DimensionVerdict filter_dimension(const Model& model);

enum class Classification { filtered, algebraic, dfinite, unknown, error };

std::string to_string(Classification c);
Classification parse_classification(const std::string& text);

struct ResultRecord
{
    std::string label;
    std::string canonical;
    std::string tag;
    TrivialVerdict trivial;
    std::optional<bool> homogeneous;
    std::optional<int> delta;
    /// "trivial", "homogeneous", "dimension" or empty.
    std::string removed_by;
    int terms = 0;
    std::uint32_t prime = 0;
    std::string fingerprint;
    std::vector<guess::GuessedEquation> equations;
    Classification classification = Classification::unknown;
    std::string error;
    double seconds_enumerate = 0;
    double seconds_guess = 0;
    double seconds_total = 0;

    nlohmann::json to_json() const;
    static ResultRecord from_json(const nlohmann::json& j);
};

/// FNV-1a over the coefficient list, as 16 hex digits.
std::string fingerprint(const std::vector<std::uint32_t>& terms);

/// Filters, enumeration and guessing for one model; exceptions become error records.
ResultRecord classify_model(const Model& model, const PipelineConfig& config);

/// Canonical representatives of the configured family (and sample).
std::vector<Model> select_models(const PipelineConfig& config);

struct RunStats
{
    std::size_t selected = 0;
    std::size_t skipped = 0;
    std::size_t processed = 0;
    std::size_t errors = 0;
    double seconds = 0;
};

/// Labels of the records already in a log; a partial trailing line is
/// ignored (and trimmed when `repair` is set).
std::vector<std::string> logged_labels(const std::string& path, bool repair = false);

/// Runs classify_model over the models with `config.jobs` workers and
/// appends one line per record to config.out, in model order. With resume,
/// models already in the log are skipped; the log's config line must match.
RunStats run_classification(const PipelineConfig& config, const std::vector<Model>& models,
                            const std::function<void(const ResultRecord&)>& on_record = {});

} // namespace walkforge::pipeline

#endif
