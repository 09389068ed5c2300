#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "owabms/error.hpp"
#include "owabms/estimation.hpp"
#include "owabms/formulations.hpp"
#include "owabms/premiums.hpp"
#include "owabms/table_io.hpp"
#include "run_config.hpp"

namespace owabms::cli {
namespace {

const std::vector<std::string> kAuditPresets{"sum", "max", "min", "antikcentrum:2", "hurwicz:0.5", "hurwicz:0.7"};

std::string fixed(double value, int precision) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(precision);
    os << value;
    return os.str();
}

std::string general(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.10g", value);
    return buffer;
}

struct CommonOptions {
    std::string config_path;
    std::string moment_mode;
    std::optional<int> precision;
    std::string out_path;
};

RunConfig load(const CommonOptions& options) {
    auto config = load_run_config(options.config_path);
    if (!options.moment_mode.empty()) config.moment_mode = parse_moment_mode(options.moment_mode);
    if (options.precision) {
        if (*options.precision < 0 || *options.precision > 17) {
            throw Error(ErrorKind::InvalidInput, "--precision must lie in 0..17");
        }
        config.precision = *options.precision;
    }
    return config;
}

// Runs `body` against --out (when given) or the standard stream.
void emit(const std::string& out_path, std::ostream& out, const std::function<void(std::ostream&)>& body) {
    if (out_path.empty()) {
        body(out);
        return;
    }
    std::ofstream file(out_path, std::ios::binary);
    if (!file) throw Error(ErrorKind::InvalidInput, "cannot write '" + out_path + "'");
    body(file);
}

std::string permutation_text(const std::vector<std::size_t>& permutation) {
    std::string text = "[";
    for (std::size_t r = 0; r < permutation.size(); ++r) {
        if (r > 0) text += ", ";
        text += std::to_string(permutation[r] + 1);
    }
    return text + "]";
}

int cmd_table(const CommonOptions& options, const std::string& format, unsigned threads, std::ostream& out) {
    auto config = load(options);
    if (!format.empty()) config.format = parse_table_format(format);
    const auto table = bonus_malus_table(config.panel(), config.weights(), config.max_periods, config.max_claims,
                                         config.domain(), threads);
    emit(options.out_path, out, [&](std::ostream& os) { write_table(os, table, config.format, config.precision); });
    return kSuccess;
}

int cmd_premium(const CommonOptions& options, int periods, int claims, std::ostream& out) {
    const auto config = load(options);
    const auto history = ClaimHistory::make(periods, claims);
    const auto panel = config.panel();
    const auto weights = config.weights();
    const auto collective = owa_collective_premium(panel, weights, config.domain());
    const auto bayes = owa_bayes_premium(panel, history, weights, config.domain());
    const double bmp = bonus_malus(panel, history, weights, config.domain());
    const int p = config.precision;
    emit(options.out_path, out, [&](std::ostream& os) {
        os << "weights: " << weights.describe() << "\n";
        os << "history: t=" << periods << " k=" << claims << "\n";
        os << "collective premium: " << fixed(collective.premium, p) << " (loss " << fixed(collective.loss_value, p)
           << ", order " << permutation_text(collective.permutation) << ")\n";
        os << "bayes premium: " << fixed(bayes.premium, p) << " (loss " << fixed(bayes.loss_value, p) << ", order "
           << permutation_text(bayes.permutation) << ")\n";
        os << "bonus-malus premium: " << fixed(bmp, p) << "\n";
    });
    return kSuccess;
}

struct FitArgs {
    std::string portfolio;
    std::string family;
    std::optional<double> reference_alpha;
    std::optional<double> reference_beta;
    bool censored_top = false;
    std::string out_path;
};

int cmd_fit(const FitArgs& args, std::ostream& out) {
    std::ifstream in(args.portfolio);
    if (!in) throw Error(ErrorKind::InvalidInput, "cannot open portfolio '" + args.portfolio + "'");
    const auto histogram = PortfolioHistogram::from_csv(in);
    const auto family = parse_family(args.family);
    if (args.reference_alpha.has_value() != args.reference_beta.has_value()) {
        throw Error(ErrorKind::InvalidInput, "--reference-alpha and --reference-beta go together");
    }
    FitOptions options;
    options.top = args.censored_top ? TopBucketMode::Censored : TopBucketMode::Exact;
    const auto fit = fit_prior(histogram, family, options);

    bool dominated = false;
    std::ostringstream report;
    report << "family: " << to_string(family) << "\n";
    report << "policies: " << histogram.total_policies() << " (mean " << general(histogram.mean()) << ", variance "
           << general(histogram.variance()) << ")\n";
    report << "top bucket: " << (args.censored_top ? "censored" : "exact") << "\n";
    report << "alpha: " << general(fit.prior.alpha) << "\n";
    report << "beta: " << general(fit.prior.beta) << "\n";
    report << "log-likelihood: " << fixed(fit.log_likelihood, 6) << "\n";
    report << "iterations: " << fit.iterations << (fit.converged ? " (converged)" : " (iteration cap)") << "\n";
    if (args.reference_alpha) {
        const auto reference = PriorSpec::make(family, *args.reference_alpha, *args.reference_beta);
        const double reference_ll = marginal_log_likelihood(histogram, reference, options.top);
        const double gap = fit.log_likelihood - reference_ll;
        dominated = gap < -1e-6;
        report << "reference (" << general(reference.alpha) << ", " << general(reference.beta)
               << ") log-likelihood: " << fixed(reference_ll, 6) << "\n";
        report << "dominance: " << (dominated ? "FAILS" : "holds") << " (fit - reference = " << fixed(gap, 6)
               << ")\n";
    }
    emit(args.out_path, out, [&](std::ostream& os) { os << report.str(); });
    return dominated ? kAuditFailure : kSuccess;
}

struct AuditArgs {
    double grid_step = 1e-4;
    int trials = 100;
    bool all_presets = false;
};

int cmd_audit(const CommonOptions& options, const AuditArgs& args, std::ostream& out) {
    const auto config = load(options);
    if (!(args.grid_step > 0.0)) throw Error(ErrorKind::InvalidInput, "--grid-step must be positive");
    if (args.trials < 0) throw Error(ErrorKind::InvalidInput, "--trials must be nonnegative");
    const auto panel = config.panel();

    std::vector<std::pair<std::string, WeightVector>> cases;
    if (args.all_presets) {
        for (const auto& token : kAuditPresets) {
            cases.emplace_back(token, preset_weights(Preset::parse(token), panel.size()));
        }
    } else {
        cases.emplace_back(config.weights_token(), config.weights());
    }

    std::vector<ClaimHistory> histories{ClaimHistory::none()};
    for (int t = 1; t <= config.max_periods; ++t) {
        for (int k = 0; k <= config.max_claims; ++k) histories.push_back(ClaimHistory::make(t, k));
    }

    std::ostringstream report;
    bool passed = true;
    for (const auto& [name, weights] : cases) {
        double worst_premium = 0.0;
        double worst_loss = 0.0;
        bool ok = true;
        for (const auto& history : histories) {
            const auto set = panel.bayes_losses(history);
            const auto exact = minimize_owa(set, weights, config.domain());
            const auto grid_domain = config.domain().value_or(SearchDomain::make(set.max_mean() + 1.0));
            const auto grid = grid_oracle(set, weights, grid_domain, args.grid_step);
            const double premium_gap = std::abs(exact.premium - grid.premium);
            const double loss_gap = exact.loss_value - grid.loss_value;
            worst_premium = std::max(worst_premium, premium_gap);
            worst_loss = std::max(worst_loss, loss_gap);
            if (premium_gap > args.grid_step * (1.0 + 1e-9) || loss_gap > 1e-6) ok = false;
            if (weights.convex_case() && std::all_of(weights.weights().begin(), weights.weights().end(),
                                                     [](double w) { return w == 1.0; })) {
                if (std::abs(exact.premium - sum_closed_form(set)) > 1e-9) ok = false;
            }
        }
        passed = passed && ok;
        report << (ok ? "PASS" : "FAIL") << "  " << name << " grid agreement over " << histories.size()
               << " loss sets: max |P - P_grid| " << general(worst_premium) << ", max loss excess "
               << general(std::max(0.0, worst_loss)) << "\n";

        if (!weights.nonnegative()) {
            report << "SKIP  " << name << " property audit (weights have a negative entry)\n";
            continue;
        }
        const auto audit = audit_properties(panel, weights, args.trials);
        for (const auto& check : audit.checks) {
            report << (check.passed ? "PASS" : "FAIL") << "  " << name << " " << check.property << ": "
                   << check.detail << "\n";
        }
        passed = passed && audit.all_passed();
    }
    report << (passed ? "audit passed" : "audit FAILED") << "\n";
    emit(options.out_path, out, [&](std::ostream& os) { os << report.str(); });
    return passed ? kSuccess : kAuditFailure;
}

struct ExportArgs {
    std::string directory = ".";
    int periods = 0;
    int claims = 0;
};

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error(ErrorKind::InvalidInput, "cannot write '" + path.string() + "'");
    body(file);
}

int cmd_export(const CommonOptions& options, const ExportArgs& args, std::ostream& out) {
    const auto config = load(options);
    const auto panel = config.panel();
    const auto weights = config.weights();
    const auto set = panel.bayes_losses(ClaimHistory::make(args.periods, args.claims));
    const auto domain = config.domain().value_or(default_domain(set));
    const auto solution = minimize_owa(set, weights, domain);

    std::filesystem::create_directories(args.directory);
    const std::filesystem::path dir(args.directory);
    std::ostringstream report;
    bool passed = true;

    auto export_one = [&](const ModelDescription& model, const std::vector<double>& values) {
        write_file(dir / (model.name + ".lp"), [&](std::ostream& os) { write_lp(os, model); });
        write_file(dir / (model.name + ".model.txt"), [&](std::ostream& os) { write_structured(os, model); });
        const auto check = check_assignment(model, values);
        const bool ok = check.max_violation <= 1e-6 &&
                        std::abs(check.objective - solution.loss_value) <= 1e-6 * std::max(1.0, solution.loss_value);
        passed = passed && ok;
        report << "wrote " << (dir / (model.name + ".lp")).string() << " and "
               << (dir / (model.name + ".model.txt")).string() << ": " << model.variables.size() << " variables ("
               << model.count_variables(VariableKind::Binary) << " binary), " << model.constraints.size()
               << " constraints (" << model.count_constraints(ConstraintKind::ConvexQuadratic) << " quadratic)\n";
        report << (ok ? "PASS" : "FAIL") << "  " << model.name << " certificate: max violation "
               << general(check.max_violation) << ", objective " << general(check.objective) << " vs loss "
               << general(solution.loss_value) << "\n";
    };

    const auto owap = build_owap_model(set, weights, domain);
    report << "premium " << general(solution.premium) << " on [" << general(domain.lower) << ", "
           << general(domain.upper) << "], big-M " << general(owap.big_m) << "\n";
    export_one(owap, owap_assignment(set, solution.premium));
    if (weights.convex_case()) {
        export_one(build_convex_model(set, weights, domain), convex_assignment(set, weights, solution.premium));
    } else {
        report << "convex model skipped: weights " << weights.describe() << " are not non-increasing\n";
    }
    emit(options.out_path, out, [&](std::ostream& os) { os << report.str(); });
    return passed ? kSuccess : kAuditFailure;
}

void add_common(CLI::App* sub, CommonOptions& options, bool with_out = true) {
    sub->add_option("--config", options.config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--moment-mode", options.moment_mode, "paper-prop1 or prior-second-moment");
    sub->add_option("--precision", options.precision, "decimal places in printed values");
    if (with_out) sub->add_option("--out", options.out_path, "write output here instead of stdout");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"OWA Bonus-Malus premiums from several experts' priors", "owabms"};
    app.require_subcommand(1);

    CommonOptions common;
    std::string format;
    unsigned threads = 1;
    auto* table = app.add_subcommand("table", "bonus-malus table for t = 0..T, k = 0..K");
    add_common(table, common);
    table->add_option("--format", format, "csv or structured-text");
    table->add_option("--threads", threads, "worker threads for table rows")->check(CLI::Range(1u, 256u));

    int periods = 0;
    int claims = 0;
    auto* premium = app.add_subcommand("premium", "collective, Bayes and bonus-malus premium for one history");
    add_common(premium, common);
    premium->add_option("-t,--periods", periods, "observed periods")->check(CLI::NonNegativeNumber);
    premium->add_option("-k,--claims", claims, "total claims")->check(CLI::NonNegativeNumber);

    FitArgs fit_args;
    auto* fit = app.add_subcommand("fit", "maximum-likelihood prior from a portfolio histogram");
    fit->add_option("--portfolio", fit_args.portfolio, "CSV with header claims,policies")->required();
    fit->add_option("--family", fit_args.family, "poisson-gamma or geometric-beta")->required();
    fit->add_option("--reference-alpha", fit_args.reference_alpha, "alpha to compare against");
    fit->add_option("--reference-beta", fit_args.reference_beta, "beta to compare against");
    fit->add_flag("--censored-top", fit_args.censored_top, "treat the open top bucket as censored");
    fit->add_option("--out", fit_args.out_path, "write output here instead of stdout");

    AuditArgs audit_args;
    auto* audit = app.add_subcommand("audit", "grid-oracle agreement and premium properties");
    add_common(audit, common);
    audit->add_option("--grid-step", audit_args.grid_step, "grid spacing for the brute-force oracle");
    audit->add_option("--trials", audit_args.trials, "random trials per property");
    audit->add_flag("--all-presets", audit_args.all_presets, "audit sum, max, min, akC and both Hurwicz presets");

    ExportArgs export_args;
    auto* exporter = app.add_subcommand("export-model", "write OWAP and convex model files plus a certificate check");
    add_common(exporter, common);
    exporter->add_option("--dir", export_args.directory, "directory for the model files");
    exporter->add_option("-t,--periods", export_args.periods, "observed periods (0 for the collective loss)")
        ->check(CLI::NonNegativeNumber);
    exporter->add_option("-k,--claims", export_args.claims, "total claims")->check(CLI::NonNegativeNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kValidationError;
    }

    try {
        if (table->parsed()) return cmd_table(common, format, threads, out);
        if (premium->parsed()) return cmd_premium(common, periods, claims, out);
        if (fit->parsed()) return cmd_fit(fit_args, out);
        if (audit->parsed()) return cmd_audit(common, audit_args, out);
        if (exporter->parsed()) return cmd_export(common, export_args, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return is_validation_error(e.kind()) ? kValidationError : kModelError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kModelError;
    }
    return kValidationError;
}

}  // namespace owabms::cli
