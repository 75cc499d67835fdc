#pragma once

#include <optional>
#include <string>
#include <vector>

namespace cfrac {

/// Incremental input/output properties of a relation u -> y.
///
/// The parameter is stored in the units the property is usually quoted in:
/// `InputStrict` carries mu (coercivity), `OutputStrict` carries the
/// incremental secant gain gamma (the relation is 1/gamma-cocoercive), and
/// `Gain` carries the Lipschitz constant. `Positive` carries no parameter.
enum class PropertyKind { Positive, InputStrict, OutputStrict, Gain };

struct PropertyTag {
    PropertyKind kind = PropertyKind::Positive;
    double value = 0.0;

    static PropertyTag positive() { return {PropertyKind::Positive, 0.0}; }
    static PropertyTag input_strict(double mu) { return {PropertyKind::InputStrict, mu}; }
    static PropertyTag output_strict(double gamma) { return {PropertyKind::OutputStrict, gamma}; }
    static PropertyTag gain(double lambda) { return {PropertyKind::Gain, lambda}; }

    friend bool operator==(const PropertyTag&, const PropertyTag&) = default;
};

/// At most one tag per kind, ordered by kind.
using PropertySet = std::vector<PropertyTag>;

[[nodiscard]] std::optional<double> find_property(const PropertySet& set, PropertyKind kind);
[[nodiscard]] inline bool has_property(const PropertySet& set, PropertyKind kind) {
    return find_property(set, kind).has_value();
}

[[nodiscard]] std::string to_string(const PropertyTag& tag);
[[nodiscard]] std::string to_string(const PropertySet& set);

}  // namespace cfrac
