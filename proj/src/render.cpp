#include "ciarisk/render.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <vector>

#include "ciarisk/error.hpp"
#include "ciarisk/text.hpp"

namespace ciarisk::render {

namespace {

std::string capitalized(std::string word) {
    if (!word.empty()) word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
    return word;
}

std::string fixed3(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", value);
    return buf;
}

std::string grid_to_string(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
        if (widths.size() < row.size()) widths.resize(row.size(), 0);
        for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
    }
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out += row[i];
            if (i + 1 < row.size()) out.append(widths[i] - row[i].size() + 2, ' ');
        }
        out += '\n';
    }
    return out;
}

}  // namespace

double round_money(double value) {
    return std::round(value * 10.0) / 10.0;
}

nlohmann::json report_to_json(const fair::RiskReport& report) {
    nlohmann::json dims = nlohmann::json::array();
    for (const auto& d : report.dimensions) {
        nlohmann::json entry = {
            {"dimension", to_string(d.dimension)},
            {"probability", d.probability},
            {"loss", round_money(d.loss)},
            {"risk", round_money(d.risk)},
        };
        if (d.qualitative) entry["level"] = fair::to_string(*d.qualitative);
        dims.push_back(std::move(entry));
    }
    return {
        {"timestamp", report.timestamp},
        {"snapshot_version", report.snapshot_version},
        {"dimensions", std::move(dims)},
        {"total_risk", round_money(report.total_risk)},
    };
}

nlohmann::json residual_to_json(const engine::ResidualReport& residual) {
    return {
        {"before", report_to_json(residual.before)},
        {"after", report_to_json(residual.after)},
        {"applied_controls", residual.applied_control_ids},
    };
}

fair::RiskReport report_from_json(const nlohmann::json& j) {
    fair::RiskReport report;
    report.timestamp = j.at("timestamp").get<double>();
    report.snapshot_version = j.at("snapshot_version").get<std::uint64_t>();
    report.total_risk = j.at("total_risk").get<double>();
    for (const auto& entry : j.at("dimensions")) {
        fair::DimensionRisk d;
        d.dimension = dimension_from_string(entry.at("dimension").get<std::string>());
        d.probability = entry.at("probability").get<double>();
        d.loss = entry.at("loss").get<double>();
        d.risk = entry.at("risk").get<double>();
        if (entry.contains("level"))
            d.qualitative = fair::risk_level_from_string(entry.at("level").get<std::string>());
        report.dimensions.push_back(std::move(d));
    }
    return report;
}

std::string report_table(const fair::RiskReport& report) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> header = {"Value"};
    std::vector<std::string> probability = {"Probability"};
    std::vector<std::string> loss = {"Loss"};
    std::vector<std::string> risk = {"Risk assessment"};
    std::vector<std::string> level = {"Level"};
    bool any_level = false;
    for (const auto& d : report.dimensions) {
        header.push_back(capitalized(to_string(d.dimension)));
        probability.push_back(text::format_double(d.probability));
        loss.push_back(text::format_money(round_money(d.loss)));
        risk.push_back(text::format_money(round_money(d.risk)));
        level.push_back(d.qualitative ? fair::to_string(*d.qualitative) : "-");
        any_level = any_level || d.qualitative.has_value();
    }
    rows.push_back(std::move(header));
    rows.push_back(std::move(probability));
    rows.push_back(std::move(loss));
    rows.push_back(std::move(risk));
    if (any_level) rows.push_back(std::move(level));

    std::string out = grid_to_string(rows);
    out += "Total risk  " + text::format_money(round_money(report.total_risk)) +
           "  (snapshot v" + std::to_string(report.snapshot_version) + ")\n";
    return out;
}

std::string residual_table(const engine::ResidualReport& residual) {
    std::string out = "Before controls:\n" + report_table(residual.before);
    out += "After controls:\n" + report_table(residual.after);
    out += "Applied controls: ";
    if (residual.applied_control_ids.empty()) {
        out += "(none)";
    } else {
        for (std::size_t i = 0; i < residual.applied_control_ids.size(); ++i) {
            if (i > 0) out += ", ";
            out += residual.applied_control_ids[i];
        }
    }
    out += '\n';
    return out;
}

std::string report_csv(const fair::RiskReport& report) {
    std::string out = "dimension,probability,loss,risk\n";
    for (const auto& d : report.dimensions) {
        out += std::string(to_string(d.dimension)) + "," + text::format_double(d.probability) + "," +
               text::format_money(round_money(d.loss)) + "," + text::format_money(round_money(d.risk)) + "\n";
    }
    out += "total,,," + text::format_money(round_money(report.total_risk)) + "\n";
    return out;
}

namespace {

std::vector<std::size_t> ranking_order(const ahp::PriorityVector& ranking) {
    std::vector<std::size_t> order(ranking.weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return ranking.weights[a] > ranking.weights[b]; });
    return order;
}

}  // namespace

nlohmann::json ranking_to_json(const ahp::PriorityVector& ranking) {
    nlohmann::json alternatives = nlohmann::json::array();
    for (std::size_t i : ranking_order(ranking)) {
        alternatives.push_back({
            {"label", ranking.labels[i]},
            {"weight", std::round(ranking.weights[i] * 1000.0) / 1000.0},
            {"percent", std::round(ranking.weights[i] * 1000.0) / 10.0},
        });
    }
    return {{"alternatives", std::move(alternatives)}};
}

std::string ranking_table(const ahp::PriorityVector& ranking) {
    std::vector<std::vector<std::string>> rows;
    rows.push_back({"Alternative", "Weight", "Percent"});
    for (std::size_t i : ranking_order(ranking)) {
        char percent[64];
        std::snprintf(percent, sizeof(percent), "%.1f%%", ranking.weights[i] * 100.0);
        rows.push_back({ranking.labels[i], fixed3(ranking.weights[i]), percent});
    }
    return grid_to_string(rows);
}

std::string ranking_csv(const ahp::PriorityVector& ranking) {
    std::string out = "label,weight,percent\n";
    for (std::size_t i : ranking_order(ranking)) {
        char percent[64];
        std::snprintf(percent, sizeof(percent), "%.1f", ranking.weights[i] * 100.0);
        out += ranking.labels[i] + "," + fixed3(ranking.weights[i]) + "," + percent + "\n";
    }
    return out;
}

}  // namespace ciarisk::render
