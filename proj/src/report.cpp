#include "specscreen/report.hpp"

#include "specscreen/error.hpp"

#include <cmath>
#include <limits>

namespace specscreen {
namespace {

nlohmann::json number_or_null(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

double number_from(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

nlohmann::json to_json(const HubReport& report) {
    nlohmann::json vertices = nlohmann::json::array();
    for (const auto& v : report.vertices) {
        vertices.push_back({{"vertex", v.vertex},
                            {"name", v.name},
                            {"degree", v.degree},
                            {"rho_j", v.rho_j},
                            {"pvalue", v.pvalue}});
    }
    return {{"frequency", report.frequency},
            {"bin", report.bin},
            {"mode", to_string(report.mode)},
            {"delta", report.delta},
            {"rho", report.rho},
            {"critical_rho", number_or_null(report.critical_rho)},
            {"hubs", report.hubs()},
            {"vertices", std::move(vertices)},
            {"warnings", report.warnings}};
}

HubReport hub_report_from_json(const nlohmann::json& j) {
    try {
        HubReport r;
        r.frequency = j.at("frequency").get<double>();
        r.bin = j.value("bin", std::size_t{0});
        r.mode = parse_screening_mode(j.at("mode").get<std::string>());
        r.delta = j.at("delta").get<std::size_t>();
        r.rho = j.at("rho").get<double>();
        r.critical_rho = j.contains("critical_rho") ? number_from(j["critical_rho"])
                                                    : std::numeric_limits<double>::quiet_NaN();
        for (const auto& v : j.at("vertices")) {
            VertexRecord rec;
            rec.vertex = v.value("vertex", r.vertices.size());
            rec.name = v.at("name").get<std::string>();
            rec.degree = v.at("degree").get<std::size_t>();
            rec.rho_j = v.at("rho_j").get<double>();
            rec.pvalue = v.at("pvalue").get<double>();
            r.vertices.push_back(std::move(rec));
        }
        if (j.contains("warnings")) r.warnings = j["warnings"].get<std::vector<std::string>>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        fail_data(std::string("malformed hub report: ") + e.what());
    }
}

nlohmann::json to_json(const AggregateResult& result) {
    return {{"vertex", result.vertex},
            {"disjunctive", result.disjunctive},
            {"conjunctive", result.conjunctive},
            {"persistent", {{"K", result.K}, {"pvalue", result.persistent}}}};
}

}  // namespace specscreen
