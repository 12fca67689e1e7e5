#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <walkforge/pipeline.hpp>
#include <walkforge/report.hpp>

using namespace walkforge;
using namespace walkforge::pipeline;

namespace
{

constexpr unsigned N = 1U << 0;
constexpr unsigned NE = 1U << 1;
constexpr unsigned E = 1U << 2;
constexpr unsigned SE = 1U << 3;
constexpr unsigned S = 1U << 4;
constexpr unsigned SW = 1U << 5;
constexpr unsigned W = 1U << 6;
constexpr unsigned NW = 1U << 7;

PipelineConfig small_config(const std::string& out)
{
    PipelineConfig c;
    c.terms = 300;
    c.ode_order = 4;
    c.ode_degree = 12;
    c.alg_order = 3;
    c.alg_degree = 12;
    c.out = out;
    return c;
}

std::string temp_path(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("walkforge_test_" + name);
    std::filesystem::remove(p);
    return p.string();
}

std::vector<nlohmann::json> records_without_timings(const std::string& path)
{
    std::vector<nlohmann::json> out;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        auto j = nlohmann::json::parse(line);
        if (j["type"] == "record") {
            j.erase("seconds");
            out.push_back(j);
        }
    }
    return out;
}

std::vector<Model> few_models()
{
    return {family_model(Family::space, N | E | S | W, 255), family_model(Family::space, SW, SW | W),
            family_model(Family::space, NE | NW, N | NE | E | SE | NW), family_model(Family::space, N | S, E | W),
            family_model(Family::space, N | E | S | W, N | E | S | W), family_model(Family::space, N | SE, E | NW)};
}

} // namespace

TEST(Filters, Trivial)
{
    // every step leaves the quarter plane: 1, 0, 0, ...
    EXPECT_TRUE(filter_trivial(family_model(Family::space, SW | W, S), 50).trivial);
    // only the diagonal ray stays admissible: 1, 1, 1, ...
    EXPECT_TRUE(filter_trivial(family_model(Family::space, NE, N), 60).trivial);
    EXPECT_FALSE(filter_trivial(family_model(Family::space, N | E | S | W, N | E | S | W), 60).trivial);
    EXPECT_TRUE(filter_trivial(family_model(Family::time, N, E), 60).trivial);
    const auto v = filter_trivial(family_model(Family::time, N | E, E), 80);
    EXPECT_FALSE(v.trivial);
    EXPECT_EQ(v.window_from, 40);
    EXPECT_EQ(v.window_to, 80);
    EXPECT_THROW(filter_trivial(family_model(Family::time, N, E), 49), Error);
}

TEST(Filters, Dimension)
{
    const auto simple = filter_dimension(family_model(Family::space, N | E | S | W, N | E | S | W));
    EXPECT_EQ(simple.delta, 2);
    EXPECT_FALSE(simple.excluded);
    const auto low = filter_dimension(family_model(Family::space, NE | NW, N | NE | E | SE | NW));
    EXPECT_LE(low.delta, 1);
    EXPECT_TRUE(low.excluded);
}

TEST(Pipeline, ConfigValidation)
{
    PipelineConfig c = small_config("x");
    EXPECT_NO_THROW(c.validate());
    c.terms = 60;
    EXPECT_THROW(c.validate(), Error);
    c.filters_only = true;
    EXPECT_NO_THROW(c.validate());
    c.probe_terms = 20;
    EXPECT_THROW(c.validate(), Error);
}

TEST(Pipeline, ClassifiesParityWalk)
{
    const auto r = classify_model(family_model(Family::space, N | E | S | W, 255), small_config("x"));
    ASSERT_EQ(r.classification, Classification::dfinite) << r.error;
    EXPECT_TRUE(r.removed_by.empty());
    EXPECT_EQ(r.delta, 2);
    ASSERT_EQ(r.equations.size(), 1U);
    EXPECT_EQ(r.equations[0].kind, guess::EquationKind::differential);
    EXPECT_EQ(r.equations[0].status, guess::Status::verified);
    EXPECT_GE(r.equations[0].terms_verified - r.equations[0].terms_used, guess::held_out_margin(300));
    EXPECT_EQ(r.fingerprint.size(), 16U);
    const auto back = ResultRecord::from_json(r.to_json());
    EXPECT_EQ(back.to_json(), r.to_json());
}

TEST(Pipeline, FilterOrder)
{
    auto c = small_config("x");
    const auto trivial = classify_model(family_model(Family::space, SW, SW | W), c);
    EXPECT_EQ(trivial.removed_by, "trivial");
    EXPECT_FALSE(trivial.homogeneous);
    EXPECT_FALSE(trivial.delta);
    const auto hom = classify_model(family_model(Family::space, N | E | S | W, N | E | S | W), c);
    EXPECT_EQ(hom.removed_by, "homogeneous");
    EXPECT_FALSE(hom.delta);
    const auto low = classify_model(family_model(Family::space, NE | NW, N | NE | E | SE | NW), c);
    EXPECT_EQ(low.removed_by, "dimension");
    EXPECT_EQ(low.classification, Classification::filtered);
    EXPECT_TRUE(low.equations.empty());
}

TEST(Pipeline, ErrorsAreIsolated)
{
    ModelSpec s;
    s.dimension = 2;
    s.nonneg_axes = 2;
    s.moduli = {7};
    s.residue_polys = {{0, {1, 1}, 0}};
    s.start = {0, 0};
    for (int r = 0; r < 7; ++r) {
        s.step_sets[ResidueVector{{r}}] = {{{1, 0}, 1}, {{0, 1}, 1}, {{-1, 0}, 1}, {{0, -1}, 1 + r % 2}};
    }
    s.label = "seven classes";
    const auto r = classify_model(Model(s), small_config("x"));
    EXPECT_EQ(r.classification, Classification::error);
    EXPECT_FALSE(r.error.empty());
}

TEST(Pipeline, DeterministicAcrossWorkerCounts)
{
    const auto a = temp_path("det_a.jsonl");
    const auto b = temp_path("det_b.jsonl");
    auto ca = small_config(a);
    auto cb = small_config(b);
    cb.jobs = 3;
    const auto models = few_models();
    const auto sa = run_classification(ca, models);
    const auto sb = run_classification(cb, models);
    EXPECT_EQ(sa.processed, models.size());
    EXPECT_EQ(sb.processed, models.size());
    EXPECT_EQ(records_without_timings(a), records_without_timings(b));
    EXPECT_EQ(records_without_timings(a).size(), models.size());
}

TEST(Pipeline, ResumeSkipsFinishedModels)
{
    const auto full = temp_path("full.jsonl");
    const auto part = temp_path("part.jsonl");
    const auto models = few_models();
    run_classification(small_config(full), models);

    auto c = small_config(part);
    run_classification(c, std::vector<Model>(models.begin(), models.begin() + 3));
    // simulate a crash in the middle of a line
    {
        std::ofstream out(part, std::ios::app);
        out << "{\"type\":\"record\",\"label\":\"trunc";
    }
    EXPECT_THROW(run_classification(c, models), Error);
    c.resume = true;
    std::vector<std::string> seen;
    const auto stats = run_classification(c, models, [&](const ResultRecord& r) { seen.push_back(r.label); });
    EXPECT_EQ(stats.skipped, 3U);
    EXPECT_EQ(stats.processed, 3U);
    EXPECT_EQ(seen.size(), 3U);
    EXPECT_EQ(records_without_timings(part), records_without_timings(full));

    const auto again = run_classification(c, models);
    EXPECT_EQ(again.processed, 0U);
    EXPECT_EQ(again.skipped, models.size());

    auto other = c;
    other.terms = 400;
    EXPECT_THROW(run_classification(other, models), Error);
}

TEST(Pipeline, FiltersOnlyDryRun)
{
    const auto path = temp_path("dry.jsonl");
    auto c = small_config(path);
    c.filters_only = true;
    run_classification(c, few_models());
    const auto s = report::summarize_file(path);
    EXPECT_EQ(s.records, 6U);
    EXPECT_EQ(s.dfinite, 0U);
    EXPECT_EQ(s.trivial + s.homogeneous + s.low_dimension + s.pool, 6U);
    EXPECT_EQ(s.homogeneous, 1U);
}

TEST(Pipeline, SampleSelection)
{
    PipelineConfig c;
    c.family = Family::time;
    c.sample = 7;
    c.seed = 9;
    const auto a = select_models(c);
    const auto b = select_models(c);
    ASSERT_EQ(a.size(), 7U);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].label(), b[i].label());
    }
}

TEST(Report, EmptyLog)
{
    std::istringstream in("");
    const auto s = report::summarize(in);
    EXPECT_EQ(s.records, 0U);
    EXPECT_EQ(s.pool, 0U);
    EXPECT_EQ(s.dfinite_fraction(), 0.0);
    EXPECT_FALSE(s.largest_ode);
}

TEST(Report, CountsAndCorruption)
{
    ResultRecord alg;
    alg.label = "a";
    alg.classification = Classification::algebraic;
    guess::GuessedEquation ode;
    ode.kind = guess::EquationKind::differential;
    ode.order = 2;
    ode.degree = 5;
    ode.coefficients.assign(3, std::vector<std::uint32_t>(6, 1));
    guess::GuessedEquation eq = ode;
    eq.kind = guess::EquationKind::algebraic;
    alg.equations = {ode, eq};
    ResultRecord unknown;
    unknown.label = "b";
    ResultRecord filtered;
    filtered.label = "c";
    filtered.removed_by = "trivial";
    filtered.classification = Classification::filtered;
    std::ostringstream log;
    log << nlohmann::json{{"type", "config"}, {"config", {{"family", "space"}, {"filters_only", false}}}}.dump() << "\n";
    log << alg.to_json().dump() << "\n" << unknown.to_json().dump() << "\n" << filtered.to_json().dump() << "\n";
    log << "{not json\n" << alg.to_json().dump() << "\n";
    std::istringstream in(log.str());
    const auto s = report::summarize(in);
    EXPECT_EQ(s.records, 3U);
    EXPECT_EQ(s.corrupt, 1U);
    EXPECT_EQ(s.duplicates, 1U);
    EXPECT_EQ(s.algebraic, 1U);
    EXPECT_EQ(s.dfinite, 1U);
    EXPECT_EQ(s.unknown, 1U);
    EXPECT_EQ(s.trivial, 1U);
    EXPECT_EQ(s.pool, 2U);
    EXPECT_DOUBLE_EQ(s.dfinite_fraction(), 0.5);
    ASSERT_TRUE(s.largest_ode);
    EXPECT_EQ(s.largest_ode->order, 2);
    const auto j = s.to_json();
    EXPECT_EQ(j["reference"]["pool"], 23906);
    EXPECT_NE(s.to_text().find("not reproduced"), std::string::npos);
}
