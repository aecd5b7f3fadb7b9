#pragma once

#include <string>
#include <string_view>
#include <variant>

#include "belief/mass.hpp"

namespace belief {

/// 17 significant digits, as printf "%.17g".
std::string format_real(double value);
/// JSON string literal with escapes.
std::string json_quote(std::string_view text);

using AnyMass = std::variant<PowerMass, HyperMass>;

/// {"frame":[...],"algebra":"power"|"hyper","focal":[{"element":..,"mass":..}]}
/// Focal elements are listed in canonical order.
std::string to_json(const PowerMass& m);
std::string to_json(const HyperMass& m);

/// Parses a mass document. Unknown keys are ignored. Throws belief::Error on
/// malformed input.
AnyMass mass_from_json(std::string_view text, MassOptions options = {});

}  // namespace belief
