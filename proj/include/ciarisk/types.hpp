#pragma once

#include <array>
#include <string_view>

namespace ciarisk {

// The three protected properties every assessment decomposes along.
enum class Dimension { confidentiality, integrity, availability };

inline constexpr std::array<Dimension, 3> kAllDimensions = {
    Dimension::confidentiality, Dimension::integrity, Dimension::availability};

enum class AssetKind { component, software, process };

enum class Severity { info, medium, high };

enum class HypothesisSource { expert, empirical };

const char* to_string(Dimension d);
const char* to_string(AssetKind k);
const char* to_string(Severity s);
const char* to_string(HypothesisSource s);

Dimension dimension_from_string(std::string_view name);
AssetKind asset_kind_from_string(std::string_view name);
Severity severity_from_string(std::string_view name);
HypothesisSource source_from_string(std::string_view name);

}  // namespace ciarisk
