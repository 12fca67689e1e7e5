#ifndef WALKFORGE_MODEL_IO_HPP
#define WALKFORGE_MODEL_IO_HPP

#include <string>
#include <string_view>

#include <walkforge/model.hpp>

namespace walkforge
{

/// Syntax error in a model file. line/column are 1-based, 0 if unknown.
class ParseError : public Error
{
public:
    ParseError(const std::string& message, int line, int column);

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

/// Parses a YAML model document:
///
///     label: example
///     dimension: 2
///     nonneg_axes: 1
///     moduli: [2]
///     residue_polys:
///       - {constant: 0, position_coeffs: [1, 1], time_coeff: 0}
///     start: [0, 0]
///     step_sets:
///       "0": ["0 1", "1 0", "0 -1", "-1 0"]
///       "1": ["1 1", "1 -1 2/3"]
///
/// Steps are "dx dy ... [weight]".
Model parse_model(std::string_view text);
Model load_model(const std::string& path);

/// Canonical text: fixed key order, every residue class listed in
/// lexicographic order (empty ones as []), steps in canonical step order.
std::string serialize(const Model& model);
/// serialize() without the label line; equal iff the models are equal up to label.
std::string canonical_key(const Model& model);

std::string format_step(const Step& step);
Step parse_step(std::string_view text, int dimension);

} // namespace walkforge

#endif
