#include "cfrac/property.hpp"
#include "cfrac/format.hpp"

#include <algorithm>

namespace cfrac {

std::optional<double> find_property(const PropertySet& set, PropertyKind kind) {
    auto it = std::find_if(set.begin(), set.end(), [&](const PropertyTag& t) { return t.kind == kind; });
    if (it == set.end()) return std::nullopt;
    return it->value;
}

std::string to_string(const PropertyTag& tag) {
    switch (tag.kind) {
        case PropertyKind::Positive: return "positive";
        case PropertyKind::InputStrict: return "input-strict(" + format_number(tag.value) + ")";
        case PropertyKind::OutputStrict: return "output-strict(gamma=" + format_number(tag.value) + ")";
        case PropertyKind::Gain: return "gain(" + format_number(tag.value) + ")";
    }
    return "?";
}

std::string to_string(const PropertySet& set) {
    std::string out = "{";
    for (std::size_t i = 0; i < set.size(); ++i) {
        if (i) out += ", ";
        out += to_string(set[i]);
    }
    return out + "}";
}

}  // namespace cfrac
