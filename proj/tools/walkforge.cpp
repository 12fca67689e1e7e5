#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <set>

#include <walkforge/dimension.hpp>
#include <walkforge/enumerate.hpp>
#include <walkforge/funceq.hpp>
#include <walkforge/guess.hpp>
#include <walkforge/model_io.hpp>
#include <walkforge/orbit.hpp>
#include <walkforge/pipeline.hpp>
#include <walkforge/report.hpp>

using namespace walkforge;

namespace
{

constexpr int exit_error = 1;
constexpr int exit_check_failed = 2;

void emit(const nlohmann::json& j, const std::string& out)
{
    if (out.empty() || out == "-") {
        std::cout << j.dump(1) << "\n";
        return;
    }
    std::ofstream f(out);
    if (!f) {
        throw Error("cannot write " + out);
    }
    f << j.dump(1) << "\n";
}

nlohmann::json read_json(const std::string& path)
{
    std::ifstream f(path);
    if (!f) {
        throw Error("cannot read " + path);
    }
    return nlohmann::json::parse(f);
}

std::vector<int> parse_int_list(const std::string& text)
{
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        out.push_back(std::stoi(item));
        if (comma == std::string::npos) {
            break;
        }
        pos = comma + 1;
    }
    return out;
}

struct EnumerateArgs
{
    std::string model;
    int terms = 100;
    std::string domain = "exact";
    std::string eval = "x=1,y=1";
    bool full = false;
    std::string out;
};

int run_enumerate(const EnumerateArgs& a)
{
    const Model model = load_model(a.model);
    const auto domain = CoefficientDomain::parse(a.domain);
    if (a.terms < 1) {
        throw Error("--terms must be positive");
    }
    if (a.full) {
        auto full = count_walks_full(model, a.terms - 1, domain);
        nlohmann::json j = {{"total", full.total.to_json()}, {"per_class", nlohmann::json::array()}};
        for (const auto& s : full.per_class) {
            j["per_class"].push_back(s.to_json());
        }
        emit(j, a.out);
        return 0;
    }
    const auto eval = EvaluationPoint::parse(a.eval, model.dimension());
    emit(count_walks(model, a.terms - 1, domain, eval).to_json(), a.out);
    return 0;
}

struct FunceqArgs
{
    std::string model;
    int terms = 30;
    std::string eval = "x=1,y=1";
    bool check_kernel = false;
    std::string lemma2;
    std::uint64_t seed = 1;
    std::string out;
};

int run_funceq(const FunceqArgs& a)
{
    const Model model = load_model(a.model);
    const auto eval = EvaluationPoint::parse(a.eval, model.dimension());
    const auto system = funceq::build_system(model, eval);
    const int N = a.terms - 1;
    if (N < 0) {
        throw Error("--terms must be positive");
    }
    const auto f = funceq::solve(system, N);
    nlohmann::json j;
    j["model"] = model.label();
    j["terms"] = a.terms;
    j["classes"] = system.size;
    j["depth"] = system.depth;
    j["a"] = nlohmann::json::array();
    for (const auto& ai : system.a) {
        j["a"].push_back(funceq::to_string(ai));
    }
    j["B"] = nlohmann::json::array();
    for (std::size_t i = 0; i < system.B.size(); ++i) {
        for (std::size_t s = 0; s < system.size; ++s) {
            for (std::size_t r = 0; r < system.size; ++r) {
                if (!funceq::is_zero(system.B[i][s][r])) {
                    j["B"].push_back({{"i", i}, {"s", s}, {"r", r}, {"entry", funceq::to_string(system.B[i][s][r])}});
                }
            }
        }
    }
    // the solution keeps x symbolic
    EvaluationPoint dp_eval = eval;
    dp_eval.values[0] = std::nullopt;
    Series total = funceq::to_series(f[0], system.symbolic_y, N);
    for (std::size_t s = 1; s < f.size(); ++s) {
        const Series part = funceq::to_series(f[s], system.symbolic_y, N);
        for (const auto& [e, c] : part.terms()) {
            total.add_term(e, c);
        }
    }
    const Series reference = count_walks(model, N, CoefficientDomain::rational(), dp_eval);
    const bool match = total.terms() == reference.terms();
    j["series"] = total.to_json();
    j["matches_enumeration"] = match;
    bool ok = match;
    if (a.check_kernel) {
        const auto K = funceq::kernel_matrix(system);
        bool zero = true;
        for (const auto& r : funceq::kernel_residual(system, K, f, N)) {
            zero = zero && funceq::is_zero(r);
        }
        j["kernel_residual_zero"] = zero;
        j["kernel_determinant"] = funceq::to_string(funceq::determinant(K.K));
        ok = ok && zero;
    }
    if (!a.lemma2.empty()) {
        const auto v = parse_int_list(a.lemma2);
        if (v.size() != 3) {
            throw Error("--lemma2 expects n,k,p");
        }
        const auto p = static_cast<std::uint32_t>(v[2]);
        std::mt19937_64 rng(a.seed);
        std::set<std::uint32_t> lambdas;
        while (static_cast<int>(lambdas.size()) < v[0]) {
            lambdas.insert(static_cast<std::uint32_t>(1 + rng() % (p - 1)));
        }
        const auto res = funceq::lemma2_check(v[0], v[1], {lambdas.begin(), lambdas.end()}, p);
        j["lemma2"] = {{"n", v[0]},          {"k", v[1]},           {"prime", p},
                       {"omega", res.omega}, {"determinant", res.determinant}, {"formula", res.formula},
                       {"sign", res.sign},   {"equal_up_to_sign", res.equal()}};
        ok = ok && res.equal();
    }
    emit(j, a.out);
    return ok ? 0 : exit_check_failed;
}

struct GuessArgs
{
    std::string series;
    std::string kind = "ode";
    int max_order = 4;
    int max_degree = 10;
    std::uint32_t prime = default_prime;
    std::string out;
};

int run_guess(const GuessArgs& a)
{
    Series s = Series::from_json(read_json(a.series));
    if (!s.is_univariate()) {
        s = s.sum_spatial();
    }
    if (s.domain().kind == CoefficientDomain::Kind::modular) {
        if (s.domain().prime != a.prime) {
            throw Error("series is reduced modulo " + std::to_string(s.domain().prime) + ", not "
                        + std::to_string(a.prime));
        }
    } else {
        s = s.reduce_mod(a.prime);
    }
    const auto eq = guess::fit(guess::parse_kind(a.kind), s.modular_coefficients(), a.prime, a.max_order, a.max_degree);
    if (!eq) {
        emit({{"found", false}, {"kind", a.kind}, {"max_order", a.max_order}, {"max_degree", a.max_degree},
              {"terms", s.order() + 1}},
             a.out);
        return 0;
    }
    auto j = eq->to_json();
    j["found"] = true;
    emit(j, a.out);
    return 0;
}

int run_dimension(const std::string& model_path, const std::string& out)
{
    const Model model = load_model(model_path);
    auto j = dimension::dimension(model).to_json();
    j["model"] = model.label();
    emit(j, out);
    return 0;
}

int run_orbit(const std::string& example, int terms, int check_order, bool flip, const std::string& out)
{
    orbit::ReproduceOptions opt;
    opt.check_order = check_order;
    opt.flip_sign = flip;
    orbit::ComparisonReport r;
    if (example == "darco") {
        r = orbit::reproduce_darco(terms, opt);
    } else if (example == "timeinhom") {
        r = orbit::reproduce_time_inhom(terms, opt);
    } else {
        throw Error("unknown example '" + example + "' (darco or timeinhom)");
    }
    emit(r.to_json(), out);
    bool ok = r.match;
    for (const auto& c : r.checks) {
        ok = ok && c.holds;
    }
    return ok ? 0 : exit_check_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Enumeration, functional equations, guessing and classification of inhomogeneous lattice walks"};
    app.require_subcommand(1);
    int status = 0;

    EnumerateArgs en;
    auto* c_en = app.add_subcommand("enumerate", "count walks of a model");
    c_en->add_option("model", en.model, "model file")->required()->check(CLI::ExistingFile);
    c_en->add_option("--terms", en.terms, "number of coefficients (t^0 .. t^(N-1))");
    c_en->add_option("--domain", en.domain, "exact, integer, rational or mod:P");
    c_en->add_option("--eval", en.eval, "x=..,y=.. values (a value may be 'symbolic'), or 'symbolic'");
    c_en->add_flag("--full", en.full, "per-class series F_r(x, y, t) with all variables symbolic");
    c_en->add_option("--out", en.out, "output file (stdout if omitted)");
    c_en->callback([&] { status = run_enumerate(en); });

    FunceqArgs fe;
    auto* c_fe = app.add_subcommand("funceq", "solve the functional equations of a half-space model");
    c_fe->add_option("model", fe.model, "model file")->required()->check(CLI::ExistingFile);
    c_fe->add_option("--terms", fe.terms, "number of coefficients");
    c_fe->add_option("--eval", fe.eval, "values of the free variables");
    c_fe->add_flag("--check-kernel", fe.check_kernel, "verify the kernel form of the equations");
    c_fe->add_option("--lemma2", fe.lemma2, "n,k,p: check the determinant identity with random lambdas");
    c_fe->add_option("--seed", fe.seed, "seed for the lambdas");
    c_fe->add_option("--out", fe.out, "output file");
    c_fe->callback([&] { status = run_funceq(fe); });

    GuessArgs gu;
    auto* c_gu = app.add_subcommand("guess", "guess a recurrence, ODE or algebraic equation");
    c_gu->add_option("series", gu.series, "series JSON file")->required()->check(CLI::ExistingFile);
    c_gu->add_option("--kind", gu.kind, "rec, ode or alg")->check(CLI::IsMember({"rec", "ode", "alg"}));
    c_gu->add_option("--max-order", gu.max_order, "largest order (degree in F for alg)");
    c_gu->add_option("--max-degree", gu.max_degree, "largest polynomial degree");
    c_gu->add_option("--prime", gu.prime, "prime modulus");
    c_gu->add_option("--out", gu.out, "output file");
    c_gu->callback([&] { status = run_guess(gu); });

    std::string dim_model;
    std::string dim_out;
    auto* c_dim = app.add_subcommand("dimension", "model dimension with certificates");
    c_dim->add_option("model", dim_model, "model file")->required()->check(CLI::ExistingFile);
    c_dim->add_option("--out", dim_out, "output file");
    c_dim->callback([&] { status = run_dimension(dim_model, dim_out); });

    std::string ex;
    int orbit_terms = 25;
    int check_order = -1;
    bool flip = false;
    std::string orbit_out;
    auto* c_or = app.add_subcommand("orbit-check", "compare an orbit-sum formula with enumeration");
    c_or->add_option("--example", ex, "darco or timeinhom")->required();
    c_or->add_option("--terms", orbit_terms, "highest power of t compared");
    c_or->add_option("--check-order", check_order, "also check orbit relations and boundary terms to this order");
    c_or->add_flag("--flip-sign", flip, "negative control: flip one group sign");
    c_or->add_option("--out", orbit_out, "output file");
    c_or->callback([&] { status = run_orbit(ex, orbit_terms, check_order, flip, orbit_out); });

    pipeline::PipelineConfig pc;
    std::string family = "space";
    std::string convention = "diagonal";
    std::size_t sample = 0;
    auto* c_cl = app.add_subcommand("classify", "filter, enumerate and guess over a model family");
    c_cl->add_option("--family", family, "space or time")->check(CLI::IsMember({"space", "time"}));
    c_cl->add_option("--convention", convention, "none, diagonal, swap or diagonal+swap");
    c_cl->add_option("--sample", sample, "random sample size (full family if omitted)");
    c_cl->add_option("--seed", pc.seed, "sampling seed");
    c_cl->add_option("--terms", pc.terms, "coefficients per model");
    c_cl->add_option("--prime", pc.prime, "prime modulus");
    c_cl->add_option("--ode-order", pc.ode_order, "largest ODE order");
    c_cl->add_option("--ode-degree", pc.ode_degree, "largest ODE degree");
    c_cl->add_option("--alg-order", pc.alg_order, "largest degree in F");
    c_cl->add_option("--alg-degree", pc.alg_degree, "largest degree in t");
    c_cl->add_option("--probe-terms", pc.probe_terms, "triviality probe length");
    c_cl->add_option("--jobs", pc.jobs, "worker threads");
    c_cl->add_option("--out", pc.out, "results log (JSON lines)")->required();
    c_cl->add_flag("--resume", pc.resume, "skip models already in the log");
    c_cl->add_flag("--filters-only", pc.filters_only, "dry run: filters only, no enumeration or guessing");
    c_cl->callback([&] {
        pc.family = parse_family(family);
        pc.convention = parse_convention(convention);
        if (sample > 0) {
            pc.sample = sample;
        }
        const auto models = pipeline::select_models(pc);
        std::cerr << models.size() << " models selected\n";
        const auto stats = pipeline::run_classification(pc, models);
        std::cerr << stats.processed << " processed, " << stats.skipped << " already logged, " << stats.errors
                  << " errors, " << stats.seconds << " s\n";
        std::cout << report::summarize_file(pc.out).to_text();
    });

    std::string log;
    bool as_json = false;
    auto* c_re = app.add_subcommand("report", "summarize a results log");
    c_re->add_option("log", log, "results log")->required()->check(CLI::ExistingFile);
    c_re->add_flag("--json", as_json, "JSON output");
    c_re->callback([&] {
        const auto s = report::summarize_file(log);
        if (as_json) {
            std::cout << s.to_json().dump(1) << "\n";
        } else {
            std::cout << s.to_text();
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "walkforge: " << e.what() << "\n";
        return exit_error;
    }
    return status;
}
