#ifndef OWABMS_TOOLS_RUN_CONFIG_HPP
#define OWABMS_TOOLS_RUN_CONFIG_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "owabms/models.hpp"
#include "owabms/optimizer.hpp"
#include "owabms/owa.hpp"
#include "owabms/premiums.hpp"
#include "owabms/table_io.hpp"

namespace owabms::cli {

// One JSON document per run:
//   {"family": "poisson-gamma", "moment_mode": "paper-prop1",
//    "experts": [{"label": "#1", "alpha": 0.77, "beta": 3.4, "confidence": 0.25}, ...],
//    "weights": "hurwicz:0.5" | [0.5, 0, 0, 0.5],
//    "table": {"T": 4, "K": 4}, "domain": {"p_max": 10},
//    "output": {"format": "csv", "precision": 4}}
struct RunConfig {
    Family family = Family::PoissonGamma;
    MomentMode moment_mode = MomentMode::PaperProp1;
    std::vector<Expert> experts;
    std::optional<Preset> preset;
    std::vector<double> explicit_weights;
    int max_periods = 4;
    int max_claims = 4;
    std::optional<double> p_max;
    TableFormat format = TableFormat::Csv;
    int precision = 4;

    ExpertPanel panel() const;
    WeightVector weights() const;
    std::optional<SearchDomain> domain() const;
    std::string weights_token() const;
};

// Throws Error(InvalidInput / InvalidParameters / LengthMismatch) naming the offending field.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

}  // namespace owabms::cli

#endif  // OWABMS_TOOLS_RUN_CONFIG_HPP
