#include <walkforge/report.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace walkforge::report
{

namespace
{

void track(std::optional<EquationSize>& best, const guess::GuessedEquation& eq, const std::string& label)
{
    // larger ansatz wins; ties go to the smaller label so the answer is order independent
    const int size = (eq.order + 1) * (eq.degree + 1);
    if (!best) {
        best = EquationSize{eq.order, eq.degree, label};
        return;
    }
    const int best_size = (best->order + 1) * (best->degree + 1);
    if (size > best_size || (size == best_size && label < best->label)) {
        best = EquationSize{eq.order, eq.degree, label};
    }
}

nlohmann::json size_json(const std::optional<EquationSize>& s)
{
    if (!s) {
        return nullptr;
    }
    return {{"order", s->order}, {"degree", s->degree}, {"label", s->label}};
}

std::string percent(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f%%", 100 * v);
    return buf;
}

} // namespace

double Summary::dfinite_fraction() const
{
    return pool == 0 ? 0.0 : static_cast<double>(dfinite) / static_cast<double>(pool);
}

Reference reference_for(Family family)
{
    if (family == Family::space) {
        return {23906, 3784, 2474, 24, 1183};
    }
    return {25370, 2603, 1535, 28, 1256};
}

Summary summarize(std::istream& log)
{
    Summary s;
    std::set<std::string> seen;
    std::string line;
    while (std::getline(log, line)) {
        if (line.empty()) {
            continue;
        }
        auto j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            ++s.corrupt;
            continue;
        }
        if (j.value("type", std::string()) == "config") {
            if (!s.config) {
                s.config = j.value("config", nlohmann::json::object());
            }
            continue;
        }
        pipeline::ResultRecord r;
        try {
            r = pipeline::ResultRecord::from_json(j);
        } catch (const std::exception&) {
            ++s.corrupt;
            continue;
        }
        if (!seen.insert(r.label).second) {
            ++s.duplicates;
            continue;
        }
        ++s.records;
        s.seconds_total += r.seconds_total;
        s.seconds_max = std::max(s.seconds_max, r.seconds_total);
        if (r.delta) {
            ++s.delta_histogram[*r.delta];
        }
        if (r.removed_by == "trivial") {
            ++s.trivial;
        } else if (r.removed_by == "homogeneous") {
            ++s.homogeneous;
        } else if (r.removed_by == "dimension") {
            ++s.low_dimension;
        }
        switch (r.classification) {
        case pipeline::Classification::filtered:
            break;
        case pipeline::Classification::error:
            ++s.errors;
            break;
        case pipeline::Classification::algebraic:
            ++s.algebraic;
            [[fallthrough]];
        case pipeline::Classification::dfinite:
            ++s.dfinite;
            [[fallthrough]];
        case pipeline::Classification::unknown:
            ++s.pool;
            break;
        }
        if (r.classification == pipeline::Classification::unknown) {
            ++s.unknown;
        }
        for (const auto& eq : r.equations) {
            if (eq.kind == guess::EquationKind::differential) {
                track(s.largest_ode, eq, r.label);
            } else if (eq.kind == guess::EquationKind::algebraic) {
                track(s.largest_algebraic, eq, r.label);
            }
        }
    }
    return s;
}

Summary summarize_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read " + path);
    }
    return summarize(in);
}

nlohmann::json Summary::to_json() const
{
    nlohmann::json j = {{"records", records},
                        {"corrupt_lines", corrupt},
                        {"duplicates", duplicates},
                        {"trivial", trivial},
                        {"homogeneous", homogeneous},
                        {"low_dimension", low_dimension},
                        {"pool", pool},
                        {"dfinite", dfinite},
                        {"algebraic", algebraic},
                        {"unknown", unknown},
                        {"errors", errors},
                        {"dfinite_fraction", dfinite_fraction()},
                        {"largest_ode", size_json(largest_ode)},
                        {"largest_algebraic", size_json(largest_algebraic)},
                        {"seconds_total", seconds_total},
                        {"seconds_max", seconds_max}};
    nlohmann::json hist = nlohmann::json::object();
    for (const auto& [d, c] : delta_histogram) {
        hist[std::to_string(d)] = c;
    }
    j["delta_histogram"] = hist;
    j["config"] = config ? *config : nlohmann::json(nullptr);
    if (config && config->contains("family")) {
        const auto ref = reference_for(parse_family((*config)["family"].get<std::string>()));
        j["reference"] = {{"note", "full classification with 10000 terms; comparison targets, not claims"},
                          {"pairs", reference_pairs},
                          {"pool", ref.pool},
                          {"dfinite", ref.dfinite},
                          {"algebraic", ref.algebraic},
                          {"dfinite_fraction", static_cast<double>(ref.dfinite) / static_cast<double>(ref.pool)},
                          {"largest_ode", {{"order", ref.largest_order}, {"degree", ref.largest_degree}}}};
    }
    return j;
}

std::string Summary::to_text() const
{
    std::ostringstream os;
    os << "records          " << records;
    if (corrupt > 0 || duplicates > 0) {
        os << " (" << corrupt << " corrupt lines, " << duplicates << " duplicates skipped)";
    }
    os << "\n";
    os << "trivial          " << trivial << "\n";
    os << "homogeneous      " << homogeneous << "\n";
    os << "dimension <= 1   " << low_dimension << "\n";
    os << "pool             " << pool << "\n";
    os << "d-finite         " << dfinite << " (" << percent(dfinite_fraction()) << " of pool)\n";
    os << "  algebraic      " << algebraic << "\n";
    os << "unknown          " << unknown << "\n";
    os << "errors           " << errors << "\n";
    if (largest_ode) {
        os << "largest ODE      order " << largest_ode->order << ", degree " << largest_ode->degree << " ("
           << largest_ode->label << ")\n";
    }
    if (largest_algebraic) {
        os << "largest alg. eq. degree " << largest_algebraic->order << " in F, " << largest_algebraic->degree
           << " in t (" << largest_algebraic->label << ")\n";
    }
    os << "time             " << seconds_total << " s total, " << seconds_max << " s max per model\n";
    if (config && config->contains("family")) {
        const auto fam = parse_family((*config)["family"].get<std::string>());
        const auto ref = reference_for(fam);
        os << "\nreference (full " << to_string(fam)
           << " classification, 10000 terms mod 45007; targets for comparison, not reproduced):\n";
        os << "  pool " << ref.pool << " of " << reference_pairs << " pairs, d-finite " << ref.dfinite << " ("
           << percent(static_cast<double>(ref.dfinite) / static_cast<double>(ref.pool)) << "), algebraic "
           << ref.algebraic << ", largest ODE order " << ref.largest_order << " degree " << ref.largest_degree << "\n";
        if (config->contains("terms") && !(*config)["filters_only"].get<bool>()) {
            os << "  this run: " << (*config)["terms"] << " terms, ODE order <= " << (*config)["ode_order"]
               << " degree <= " << (*config)["ode_degree"] << ", algebraic degree <= " << (*config)["alg_order"]
               << " in F and " << (*config)["alg_degree"]
               << " in t; equations beyond these bounds are counted as unknown\n";
        }
    }
    return os.str();
}

} // namespace walkforge::report
