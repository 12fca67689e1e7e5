#include <walkforge/model_io.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace walkforge
{

ParseError::ParseError(const std::string& message, int line, int column)
    : Error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message : message),
      line_(line), column_(column)
{
}

namespace
{

[[noreturn]] void fail_at(const YAML::Node& node, const std::string& message)
{
    const auto mark = node.Mark();
    if (mark.is_null()) {
        throw ParseError(message, 0, 0);
    }
    throw ParseError(message, mark.line + 1, mark.column + 1);
}

YAML::Node require(const YAML::Node& root, const char* key)
{
    YAML::Node node = root[key];
    if (!node) {
        fail_at(root, std::string("missing key '") + key + "'");
    }
    return node;
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& what)
{
    if (!node.IsScalar()) {
        fail_at(node, what + " must be a scalar");
    }
    try {
        return node.as<T>();
    } catch (const YAML::Exception&) {
        fail_at(node, "bad value for " + what + ": '" + node.Scalar() + "'");
    }
}

template <typename T>
std::vector<T> scalar_list(const YAML::Node& node, const std::string& what)
{
    if (!node.IsSequence()) {
        fail_at(node, what + " must be a list");
    }
    std::vector<T> out;
    for (const auto& item : node) {
        out.push_back(scalar<T>(item, what + " entry"));
    }
    return out;
}

std::vector<std::string_view> split_ws(std::string_view text)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) {
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ' && text[j] != '\t') {
            ++j;
        }
        if (j > i) {
            out.push_back(text.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

ResidueVector parse_key(const std::string& text)
{
    ResidueVector r;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        std::size_t pos = 0;
        int v = std::stoi(part, &pos);
        if (part.find_first_not_of(" \t", pos) != std::string::npos) {
            throw std::invalid_argument(part);
        }
        r.entries.push_back(v);
    }
    if (r.entries.empty()) {
        throw std::invalid_argument(text);
    }
    return r;
}

} // namespace

Step parse_step(std::string_view text, int dimension)
{
    auto parts = split_ws(text);
    if (parts.size() != static_cast<std::size_t>(dimension) && parts.size() != static_cast<std::size_t>(dimension) + 1) {
        throw Error("step '" + std::string(text) + "' must have " + std::to_string(dimension) + " components and an optional weight");
    }
    Step step;
    for (int a = 0; a < dimension; ++a) {
        auto rat = parse_rational(parts[static_cast<std::size_t>(a)]);
        if (boost::multiprecision::denominator(rat) != 1) {
            throw Error("step components must be integers in '" + std::string(text) + "'");
        }
        step.displacement.push_back(boost::multiprecision::numerator(rat).convert_to<int>());
    }
    if (parts.size() > static_cast<std::size_t>(dimension)) {
        step.weight = parse_rational(parts.back());
    }
    return step;
}

std::string format_step(const Step& step)
{
    std::string out;
    for (std::size_t a = 0; a < step.displacement.size(); ++a) {
        if (a != 0) {
            out += ' ';
        }
        out += std::to_string(step.displacement[a]);
    }
    if (step.weight != 1) {
        out += ' ' + to_string(step.weight);
    }
    return out;
}

Model parse_model(std::string_view text)
{
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ParseError(e.msg, e.mark.line + 1, e.mark.column + 1);
    }
    if (!root.IsMap()) {
        throw ParseError("model file must be a mapping", 1, 1);
    }
    ModelSpec spec;
    if (root["label"]) {
        spec.label = scalar<std::string>(root["label"], "label");
    }
    spec.dimension = scalar<int>(require(root, "dimension"), "dimension");
    spec.nonneg_axes = scalar<int>(require(root, "nonneg_axes"), "nonneg_axes");
    spec.moduli = scalar_list<int>(require(root, "moduli"), "moduli");
    const auto polys = require(root, "residue_polys");
    if (!polys.IsSequence()) {
        fail_at(polys, "residue_polys must be a list");
    }
    for (const auto& node : polys) {
        if (!node.IsMap()) {
            fail_at(node, "residue polynomial must be a mapping");
        }
        ResiduePolynomial poly;
        poly.constant = node["constant"] ? scalar<std::int64_t>(node["constant"], "constant") : 0;
        poly.position_coeffs = scalar_list<std::int64_t>(require(node, "position_coeffs"), "position_coeffs");
        poly.time_coeff = node["time_coeff"] ? scalar<std::int64_t>(node["time_coeff"], "time_coeff") : 0;
        spec.residue_polys.push_back(std::move(poly));
    }
    spec.start = scalar_list<std::int64_t>(require(root, "start"), "start");
    const auto sets = require(root, "step_sets");
    if (!sets.IsMap()) {
        fail_at(sets, "step_sets must be a mapping");
    }
    for (const auto& entry : sets) {
        const auto key_text = scalar<std::string>(entry.first, "residue key");
        ResidueVector key;
        try {
            key = parse_key(key_text);
        } catch (const std::exception&) {
            fail_at(entry.first, "bad residue key '" + key_text + "'");
        }
        if (spec.step_sets.count(key) != 0) {
            fail_at(entry.first, "duplicate residue key '" + key_text + "'");
        }
        if (!entry.second.IsSequence()) {
            fail_at(entry.second, "step set must be a list");
        }
        std::vector<Step> steps;
        for (const auto& item : entry.second) {
            try {
                steps.push_back(parse_step(scalar<std::string>(item, "step"), spec.dimension));
            } catch (const ParseError&) {
                throw;
            } catch (const Error& e) {
                fail_at(item, e.what());
            }
        }
        spec.step_sets.emplace(std::move(key), std::move(steps));
    }
    for (const auto& entry : root) {
        static const std::vector<std::string> known = {"label", "dimension", "nonneg_axes", "moduli", "residue_polys", "start", "step_sets"};
        auto name = entry.first.as<std::string>();
        if (std::find(known.begin(), known.end(), name) == known.end()) {
            fail_at(entry.first, "unknown key '" + name + "'");
        }
    }
    return Model(std::move(spec));
}

Model load_model(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open model file '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

namespace
{

template <typename Range>
std::string flow_list(const Range& values)
{
    std::string out = "[";
    bool first = true;
    for (const auto& v : values) {
        if (!first) {
            out += ", ";
        }
        first = false;
        out += std::to_string(v);
    }
    return out + "]";
}

std::string body(const Model& model)
{
    std::string out;
    out += "dimension: " + std::to_string(model.dimension()) + "\n";
    out += "nonneg_axes: " + std::to_string(model.nonneg_axes()) + "\n";
    out += "moduli: " + flow_list(model.moduli()) + "\n";
    out += "residue_polys:\n";
    for (const auto& poly : model.residue_polys()) {
        out += "  - {constant: " + std::to_string(poly.constant) + ", position_coeffs: " + flow_list(poly.position_coeffs)
               + ", time_coeff: " + std::to_string(poly.time_coeff) + "}\n";
    }
    out += "start: " + flow_list(model.start()) + "\n";
    out += "step_sets:\n";
    for (std::size_t c = 0; c < model.class_count(); ++c) {
        const auto r = model.residue_vector(c);
        std::string key;
        for (std::size_t q = 0; q < r.entries.size(); ++q) {
            key += (q != 0 ? "," : "") + std::to_string(r.entries[q]);
        }
        out += "  \"" + key + "\": [";
        const auto& steps = model.step_set(c);
        for (std::size_t i = 0; i < steps.size(); ++i) {
            out += (i != 0 ? ", \"" : "\"") + format_step(steps[i]) + "\"";
        }
        out += "]\n";
    }
    return out;
}

std::string quote(const std::string& s)
{
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') {
            out += '\\';
        }
        out += ch;
    }
    return out + "\"";
}

} // namespace

std::string serialize(const Model& model)
{
    return "label: " + quote(model.label()) + "\n" + body(model);
}

std::string canonical_key(const Model& model)
{
    return body(model);
}

} // namespace walkforge
