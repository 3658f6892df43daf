#include "ciarisk/types.hpp"

#include <string>

#include "ciarisk/error.hpp"

namespace ciarisk {

const char* to_string(Dimension d) {
    switch (d) {
    case Dimension::confidentiality: return "confidentiality";
    case Dimension::integrity: return "integrity";
    case Dimension::availability: return "availability";
    }
    return "?";
}

const char* to_string(AssetKind k) {
    switch (k) {
    case AssetKind::component: return "component";
    case AssetKind::software: return "software";
    case AssetKind::process: return "process";
    }
    return "?";
}

const char* to_string(Severity s) {
    switch (s) {
    case Severity::info: return "info";
    case Severity::medium: return "medium";
    case Severity::high: return "high";
    }
    return "?";
}

const char* to_string(HypothesisSource s) {
    switch (s) {
    case HypothesisSource::expert: return "expert";
    case HypothesisSource::empirical: return "empirical";
    }
    return "?";
}

Dimension dimension_from_string(std::string_view name) {
    if (name == "confidentiality") return Dimension::confidentiality;
    if (name == "integrity") return Dimension::integrity;
    if (name == "availability") return Dimension::availability;
    raise(Errc::parse_error, "unknown dimension '" + std::string(name) + "'");
}

AssetKind asset_kind_from_string(std::string_view name) {
    if (name == "component") return AssetKind::component;
    if (name == "software") return AssetKind::software;
    if (name == "process") return AssetKind::process;
    raise(Errc::parse_error, "unknown asset kind '" + std::string(name) + "'");
}

Severity severity_from_string(std::string_view name) {
    if (name == "info") return Severity::info;
    if (name == "medium") return Severity::medium;
    if (name == "high") return Severity::high;
    raise(Errc::parse_error, "unknown severity '" + std::string(name) + "'");
}

HypothesisSource source_from_string(std::string_view name) {
    if (name == "expert") return HypothesisSource::expert;
    if (name == "empirical") return HypothesisSource::empirical;
    raise(Errc::parse_error, "unknown hypothesis source '" + std::string(name) + "'");
}

}  // namespace ciarisk
