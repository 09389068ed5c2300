#include "run_config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "owabms/error.hpp"

namespace owabms::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& message) {
    throw Error(ErrorKind::InvalidInput, "config: " + message);
}

const json& require(const json& object, const char* key, const std::string& where) {
    if (!object.contains(key)) bad(where + " is missing '" + key + "'");
    return object.at(key);
}

double number(const json& value, const std::string& where) {
    if (!value.is_number()) bad(where + " must be a number");
    return value.get<double>();
}

int integer(const json& value, const std::string& where) {
    if (!value.is_number_integer()) bad(where + " must be an integer");
    return value.get<int>();
}

std::string text(const json& value, const std::string& where) {
    if (!value.is_string()) bad(where + " must be a string");
    return value.get<std::string>();
}

}  // namespace

ExpertPanel RunConfig::panel() const {
    return ExpertPanel(experts, moment_mode);
}

WeightVector RunConfig::weights() const {
    if (preset) return preset_weights(*preset, experts.size());
    if (explicit_weights.size() != experts.size()) {
        throw Error(ErrorKind::LengthMismatch, "config: " + std::to_string(explicit_weights.size()) +
                                                   " weights for " + std::to_string(experts.size()) + " experts");
    }
    return WeightVector(explicit_weights);
}

std::optional<SearchDomain> RunConfig::domain() const {
    if (!p_max) return std::nullopt;
    return SearchDomain::make(*p_max);
}

std::string RunConfig::weights_token() const {
    return preset ? preset->token() : weights().describe();
}

RunConfig parse_run_config(std::string_view source) {
    json doc;
    try {
        doc = json::parse(source);
    } catch (const json::parse_error& e) {
        bad(std::string("not valid JSON (") + e.what() + ")");
    }
    if (!doc.is_object()) bad("top level must be an object");

    RunConfig config;
    try {
        config.family = parse_family(text(require(doc, "family", "config"), "family"));
        if (doc.contains("moment_mode")) {
            config.moment_mode = parse_moment_mode(text(doc.at("moment_mode"), "moment_mode"));
        }

        const auto& experts = require(doc, "experts", "config");
        if (!experts.is_array() || experts.empty()) bad("experts must be a non-empty array");
        for (std::size_t i = 0; i < experts.size(); ++i) {
            const auto where = "experts[" + std::to_string(i) + "]";
            const auto& e = experts[i];
            if (!e.is_object()) bad(where + " must be an object");
            Expert expert;
            expert.label = e.contains("label") ? text(e.at("label"), where + ".label") : "#" + std::to_string(i + 1);
            expert.prior = PriorSpec::make(config.family, number(require(e, "alpha", where), where + ".alpha"),
                                           number(require(e, "beta", where), where + ".beta"));
            expert.confidence = number(require(e, "confidence", where), where + ".confidence");
            config.experts.push_back(std::move(expert));
        }

        const auto& weights = require(doc, "weights", "config");
        if (weights.is_string()) {
            config.preset = Preset::parse(weights.get<std::string>());
        } else if (weights.is_array()) {
            for (std::size_t i = 0; i < weights.size(); ++i) {
                config.explicit_weights.push_back(number(weights[i], "weights[" + std::to_string(i) + "]"));
            }
        } else {
            bad("weights must be a preset token or an array of numbers");
        }

        if (doc.contains("table")) {
            const auto& table = doc.at("table");
            if (table.contains("T")) config.max_periods = integer(table.at("T"), "table.T");
            if (table.contains("K")) config.max_claims = integer(table.at("K"), "table.K");
            if (config.max_periods < 0 || config.max_claims < 0) bad("table.T and table.K must be nonnegative");
        }
        if (doc.contains("domain") && !doc.at("domain").is_null()) {
            const auto& domain = doc.at("domain");
            if (domain.contains("p_max") && !domain.at("p_max").is_null()) {
                config.p_max = number(domain.at("p_max"), "domain.p_max");
            }
        }
        if (doc.contains("output")) {
            const auto& output = doc.at("output");
            if (output.contains("format")) config.format = parse_table_format(text(output.at("format"), "output.format"));
            if (output.contains("precision")) config.precision = integer(output.at("precision"), "output.precision");
            if (config.precision < 0 || config.precision > 17) bad("output.precision must lie in 0..17");
        }
    } catch (const json::exception& e) {
        bad(e.what());
    }

    // cross-field checks
    config.panel();
    config.weights();
    if (config.p_max) SearchDomain::make(*config.p_max);
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open config '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_run_config(buffer.str());
}

}  // namespace owabms::cli
