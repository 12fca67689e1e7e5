#include <walkforge/pipeline.hpp>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <walkforge/dimension.hpp>
#include <walkforge/enumerate.hpp>
#include <walkforge/model_io.hpp>

namespace walkforge::pipeline
{

namespace
{

constexpr std::uint32_t second_probe_prime = 1000003;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::uint32_t> counting_sequence(const Model& model, int N, std::uint32_t p)
{
    return count_walks(model, N, CoefficientDomain::modular(p), EvaluationPoint::ones(model.dimension()))
        .modular_coefficients();
}

bool constant_tail(const std::vector<std::uint32_t>& f, int from)
{
    for (std::size_t n = static_cast<std::size_t>(from) + 1; n < f.size(); ++n) {
        if (f[n] != f[static_cast<std::size_t>(from)]) {
            return false;
        }
    }
    return true;
}

nlohmann::json config_line(const PipelineConfig& config)
{
    return {{"type", "config"}, {"config", config.to_json()}};
}

} // namespace

void PipelineConfig::validate() const
{
    if (probe_terms < 50) {
        throw Error("the triviality probe needs at least 50 terms");
    }
    if (!is_prime(prime)) {
        throw Error(std::to_string(prime) + " is not prime");
    }
    if (jobs < 1) {
        throw Error("at least one worker is required");
    }
    if (sample && *sample == 0) {
        throw Error("sample size must be positive");
    }
    if (filters_only) {
        return;
    }
    if (ode_order < 1 || ode_degree < 0 || alg_order < 1 || alg_degree < 0) {
        throw Error("guess bounds need order >= 1 and degree >= 0");
    }
    const int limit = terms - guess::held_out_margin(terms);
    const int ode_rows = limit - ode_order;
    const int alg_rows = limit;
    if (ode_rows < (ode_order + 1) * (ode_degree + 1) + 10 || alg_rows < (alg_order + 1) * (alg_degree + 1) + 10) {
        throw Error(std::to_string(terms) + " terms are too few for the guess bounds and held-out margin");
    }
}

nlohmann::json PipelineConfig::to_json() const
{
    nlohmann::json j = {{"family", to_string(family)},
                        {"convention", to_string(convention)},
                        {"seed", seed},
                        {"terms", terms},
                        {"prime", prime},
                        {"ode_order", ode_order},
                        {"ode_degree", ode_degree},
                        {"alg_order", alg_order},
                        {"alg_degree", alg_degree},
                        {"probe_terms", probe_terms},
                        {"filters_only", filters_only}};
    j["sample"] = sample ? nlohmann::json(*sample) : nlohmann::json(nullptr);
    return j;
}

TrivialVerdict filter_trivial(const Model& model, int probe_terms)
{
    if (probe_terms < 50) {
        throw Error("the triviality probe needs at least 50 terms");
    }
    TrivialVerdict v;
    v.window_from = probe_terms / 2;
    v.window_to = probe_terms;
    v.trivial = constant_tail(counting_sequence(model, probe_terms, default_prime), v.window_from)
                && constant_tail(counting_sequence(model, probe_terms, second_probe_prime), v.window_from);
    return v;
}

DimensionVerdict filter_dimension(const Model& model)
{
    DimensionVerdict v;
    v.delta = dimension::dimension(model).delta;
    v.excluded = v.delta <= 1;
    return v;
}

std::string to_string(Classification c)
{
    switch (c) {
    case Classification::filtered:
        return "filtered";
    case Classification::algebraic:
        return "algebraic";
    case Classification::dfinite:
        return "dfinite";
    case Classification::unknown:
        return "unknown";
    case Classification::error:
        return "error";
    }
    return "?";
}

Classification parse_classification(const std::string& text)
{
    for (auto c : {Classification::filtered, Classification::algebraic, Classification::dfinite, Classification::unknown,
                   Classification::error}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    throw Error("unknown classification '" + text + "'");
}

nlohmann::json ResultRecord::to_json() const
{
    nlohmann::json j = {{"type", "record"},
                        {"label", label},
                        {"canonical", canonical},
                        {"tag", tag},
                        {"trivial", {{"verdict", trivial.trivial}, {"window", {trivial.window_from, trivial.window_to}}}},
                        {"removed_by", removed_by.empty() ? nlohmann::json(nullptr) : nlohmann::json(removed_by)},
                        {"terms", terms},
                        {"prime", prime},
                        {"fingerprint", fingerprint},
                        {"classification", to_string(classification)},
                        {"seconds", {{"enumerate", seconds_enumerate}, {"guess", seconds_guess}, {"total", seconds_total}}}};
    j["homogeneous"] = homogeneous ? nlohmann::json(*homogeneous) : nlohmann::json(nullptr);
    j["delta"] = delta ? nlohmann::json(*delta) : nlohmann::json(nullptr);
    j["equations"] = nlohmann::json::array();
    for (const auto& eq : equations) {
        j["equations"].push_back(eq.to_json());
    }
    if (!error.empty()) {
        j["error"] = error;
    }
    return j;
}

ResultRecord ResultRecord::from_json(const nlohmann::json& j)
{
    if (j.value("type", std::string()) != "record") {
        throw Error("not a result record");
    }
    ResultRecord r;
    r.label = j.at("label").get<std::string>();
    r.canonical = j.at("canonical").get<std::string>();
    r.tag = j.at("tag").get<std::string>();
    r.trivial.trivial = j.at("trivial").at("verdict").get<bool>();
    r.trivial.window_from = j.at("trivial").at("window").at(0).get<int>();
    r.trivial.window_to = j.at("trivial").at("window").at(1).get<int>();
    if (!j.at("homogeneous").is_null()) {
        r.homogeneous = j.at("homogeneous").get<bool>();
    }
    if (!j.at("delta").is_null()) {
        r.delta = j.at("delta").get<int>();
    }
    if (!j.at("removed_by").is_null()) {
        r.removed_by = j.at("removed_by").get<std::string>();
    }
    r.terms = j.at("terms").get<int>();
    r.prime = j.at("prime").get<std::uint32_t>();
    r.fingerprint = j.at("fingerprint").get<std::string>();
    for (const auto& e : j.at("equations")) {
        r.equations.push_back(guess::GuessedEquation::from_json(e));
    }
    r.classification = parse_classification(j.at("classification").get<std::string>());
    r.error = j.value("error", std::string());
    r.seconds_enumerate = j.at("seconds").at("enumerate").get<double>();
    r.seconds_guess = j.at("seconds").at("guess").get<double>();
    r.seconds_total = j.at("seconds").at("total").get<double>();
    return r;
}

std::string fingerprint(const std::vector<std::uint32_t>& terms)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : terms) {
        for (int b = 0; b < 4; ++b) {
            h = (h ^ ((v >> (8 * b)) & 0xffU)) * 1099511628211ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

ResultRecord classify_model(const Model& model, const PipelineConfig& config)
{
    const auto t0 = std::chrono::steady_clock::now();
    ResultRecord r;
    r.label = model.label();
    r.terms = config.terms;
    r.prime = config.prime;
    try {
        r.canonical = canonical_key(model);
        r.tag = to_string(classify_inhomogeneity(model));
        r.trivial = filter_trivial(model, config.probe_terms);
        if (r.trivial.trivial) {
            r.removed_by = "trivial";
        } else {
            r.homogeneous = r.tag == "homogeneous";
            if (*r.homogeneous) {
                r.removed_by = "homogeneous";
            } else {
                const auto dim = filter_dimension(model);
                r.delta = dim.delta;
                if (dim.excluded) {
                    r.removed_by = "dimension";
                }
            }
        }
        if (!r.removed_by.empty()) {
            r.classification = Classification::filtered;
        } else if (config.filters_only) {
            r.classification = Classification::unknown;
        } else {
            const auto te = std::chrono::steady_clock::now();
            const auto terms = counting_sequence(model, config.terms - 1, config.prime);
            r.seconds_enumerate = seconds_since(te);
            r.fingerprint = fingerprint(terms);
            const auto tg = std::chrono::steady_clock::now();
            r.classification = Classification::unknown;
            auto ode = guess::fit_differential(terms, config.prime, config.ode_order, config.ode_degree);
            if (ode && ode->status == guess::Status::verified) {
                r.equations.push_back(*ode);
                r.classification = Classification::dfinite;
                auto alg = guess::fit_algebraic(terms, config.prime, config.alg_order, config.alg_degree);
                if (alg && alg->status == guess::Status::verified) {
                    r.equations.push_back(*alg);
                    r.classification = Classification::algebraic;
                }
            }
            r.seconds_guess = seconds_since(tg);
        }
    } catch (const std::exception& e) {
        r.classification = Classification::error;
        r.error = e.what();
    }
    r.seconds_total = seconds_since(t0);
    return r;
}

std::vector<Model> select_models(const PipelineConfig& config)
{
    FamilyConfig fc;
    fc.family = config.family;
    fc.convention = config.convention;
    if (config.sample) {
        fc.seed = config.seed;
        fc.limit = config.sample;
    }
    return enumerate_model_space(fc);
}

std::vector<std::string> logged_labels(const std::string& path, bool repair)
{
    std::vector<std::string> labels;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return labels;
    }
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    in.close();
    const std::size_t complete = content.rfind('\n') == std::string::npos ? 0 : content.rfind('\n') + 1;
    if (repair && complete < content.size()) {
        std::filesystem::resize_file(path, complete);
    }
    std::istringstream lines(content.substr(0, complete));
    std::string line;
    while (std::getline(lines, line)) {
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (!j.is_discarded() && j.is_object() && j.value("type", std::string()) == "record" && j.contains("label")) {
            labels.push_back(j["label"].get<std::string>());
        }
    }
    return labels;
}

RunStats run_classification(const PipelineConfig& config, const std::vector<Model>& models,
                            const std::function<void(const ResultRecord&)>& on_record)
{
    config.validate();
    if (config.out.empty()) {
        throw Error("an output path is required");
    }
    const auto t0 = std::chrono::steady_clock::now();
    RunStats stats;
    stats.selected = models.size();

    std::set<std::string> done;
    const bool exists = std::filesystem::exists(config.out) && std::filesystem::file_size(config.out) > 0;
    if (exists && !config.resume) {
        throw Error("log " + config.out + " exists; pass resume to continue it");
    }
    if (exists) {
        std::ifstream in(config.out);
        std::string first;
        std::getline(in, first);
        auto j = nlohmann::json::parse(first, nullptr, false);
        if (j.is_discarded() || j.value("type", std::string()) != "config" || j["config"] != config.to_json()) {
            throw Error("log " + config.out + " was written with a different configuration");
        }
        for (auto& l : logged_labels(config.out, true)) {
            done.insert(std::move(l));
        }
    }
    std::ofstream out(config.out, std::ios::app);
    if (!out) {
        throw Error("cannot open " + config.out);
    }
    if (!exists) {
        out << config_line(config).dump() << '\n' << std::flush;
    }

    std::vector<const Model*> todo;
    for (const auto& m : models) {
        if (done.count(m.label())) {
            ++stats.skipped;
        } else {
            todo.push_back(&m);
        }
    }

    // workers finish in any order; records are written in model order
    std::atomic<std::size_t> next{0};
    std::mutex mu;
    std::map<std::size_t, ResultRecord> pending;
    std::size_t to_write = 0;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= todo.size()) {
                return;
            }
            ResultRecord rec = classify_model(*todo[i], config);
            std::lock_guard lock(mu);
            pending.emplace(i, std::move(rec));
            while (!pending.empty() && pending.begin()->first == to_write) {
                const auto& r = pending.begin()->second;
                out << r.to_json().dump() << '\n' << std::flush;
                ++stats.processed;
                if (r.classification == Classification::error) {
                    ++stats.errors;
                }
                if (on_record) {
                    on_record(r);
                }
                pending.erase(pending.begin());
                ++to_write;
            }
        }
    };
    const unsigned n = std::min<unsigned>(config.jobs, static_cast<unsigned>(std::max<std::size_t>(todo.size(), 1)));
    std::vector<std::thread> threads;
    for (unsigned k = 1; k < n; ++k) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads) {
        t.join();
    }
    stats.seconds = seconds_since(t0);
    return stats;
}

} // namespace walkforge::pipeline
