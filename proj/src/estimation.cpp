#include "owabms/estimation.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "owabms/error.hpp"

namespace owabms {
namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& field, int line_number) {
    try {
        std::size_t used = 0;
        const long long value = std::stoll(field, &used);
        if (used == field.size() && value >= 0) return static_cast<T>(value);
    } catch (const std::exception&) {
    }
    throw Error(ErrorKind::InvalidInput,
                "portfolio CSV line " + std::to_string(line_number) + ": bad count '" + field + "'");
}

struct Objective {
    const PortfolioHistogram* hist;
    Family family;
    TopBucketMode top;
};

double negative_log_likelihood(const gsl_vector* x, void* params) {
    const auto& objective = *static_cast<const Objective*>(params);
    const double alpha = std::exp(gsl_vector_get(x, 0));
    const double beta = std::exp(gsl_vector_get(x, 1));
    if (!(std::isfinite(alpha) && std::isfinite(beta) && alpha > 0.0 && beta > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    const double value =
        -marginal_log_likelihood(*objective.hist, PriorSpec{objective.family, alpha, beta}, objective.top);
    return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
}

struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
struct VectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

FitResult run_simplex(const Objective& objective, std::array<double, 2> start, const FitOptions& options) {
    gsl_multimin_function fn{&negative_log_likelihood, 2, const_cast<Objective*>(&objective)};
    std::unique_ptr<gsl_vector, VectorDeleter> x(gsl_vector_alloc(2));
    std::unique_ptr<gsl_vector, VectorDeleter> step(gsl_vector_alloc(2));
    gsl_vector_set(x.get(), 0, start[0]);
    gsl_vector_set(x.get(), 1, start[1]);
    gsl_vector_set_all(step.get(), 0.25);

    std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> minimizer(
        gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2));
    gsl_multimin_fminimizer_set(minimizer.get(), &fn, x.get(), step.get());

    FitResult result;
    double previous = minimizer->fval;
    for (result.iterations = 1; result.iterations <= options.max_iterations; ++result.iterations) {
        if (gsl_multimin_fminimizer_iterate(minimizer.get()) != GSL_SUCCESS) break;
        const double current = minimizer->fval;
        const double improvement = previous - current;
        previous = current;
        if (improvement < options.objective_tolerance &&
            gsl_multimin_fminimizer_size(minimizer.get()) < options.simplex_tolerance) {
            result.converged = true;
            break;
        }
    }
    result.iterations = std::min(result.iterations, options.max_iterations);
    const gsl_vector* best = gsl_multimin_fminimizer_x(minimizer.get());
    result.prior = PriorSpec{objective.family, std::exp(gsl_vector_get(best, 0)), std::exp(gsl_vector_get(best, 1))};
    result.log_likelihood = -minimizer->fval;
    return result;
}

}  // namespace

PortfolioHistogram::PortfolioHistogram(std::vector<HistogramBucket> buckets, bool open_top)
    : buckets_(std::move(buckets)), open_top_(open_top) {
    if (buckets_.empty()) {
        throw Error(ErrorKind::InvalidInput, "portfolio histogram is empty");
    }
    for (std::size_t i = 0; i < buckets_.size(); ++i) {
        if (buckets_[i].claim_count < 0 || buckets_[i].policies < 0) {
            throw Error(ErrorKind::InvalidInput, "portfolio histogram has a negative entry");
        }
        if (i > 0 && buckets_[i].claim_count <= buckets_[i - 1].claim_count) {
            throw Error(ErrorKind::InvalidInput, "portfolio claim counts must be strictly increasing");
        }
    }
    if (total_policies() <= 0) {
        throw Error(ErrorKind::InvalidInput, "portfolio histogram has no policies");
    }
}

PortfolioHistogram PortfolioHistogram::from_csv(std::istream& in) {
    std::string line;
    int line_number = 0;
    bool header_seen = false;
    bool open_top = false;
    std::vector<HistogramBucket> buckets;
    while (std::getline(in, line)) {
        ++line_number;
        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "claims,policies") {
                throw Error(ErrorKind::InvalidInput, "portfolio CSV must start with the header 'claims,policies'");
            }
            header_seen = true;
            continue;
        }
        if (open_top) {
            throw Error(ErrorKind::InvalidInput, "the open 'k+' bucket must be the last row");
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw Error(ErrorKind::InvalidInput, "portfolio CSV line " + std::to_string(line_number) + " lacks a comma");
        }
        std::string claims = trim(line.substr(0, comma));
        const std::string policies = trim(line.substr(comma + 1));
        if (!claims.empty() && claims.back() == '+') {
            open_top = true;
            claims.pop_back();
        }
        buckets.push_back({parse_number<int>(claims, line_number), parse_number<std::int64_t>(policies, line_number)});
    }
    if (!header_seen) {
        throw Error(ErrorKind::InvalidInput, "portfolio CSV is empty");
    }
    return PortfolioHistogram(std::move(buckets), open_top);
}

std::int64_t PortfolioHistogram::total_policies() const {
    std::int64_t total = 0;
    for (const auto& b : buckets_) total += b.policies;
    return total;
}

double PortfolioHistogram::mean() const {
    double sum = 0.0;
    for (const auto& b : buckets_) sum += static_cast<double>(b.policies) * b.claim_count;
    return sum / static_cast<double>(total_policies());
}

double PortfolioHistogram::variance() const {
    const double m = mean();
    double sum = 0.0;
    for (const auto& b : buckets_) {
        const double d = b.claim_count - m;
        sum += static_cast<double>(b.policies) * d * d;
    }
    return sum / static_cast<double>(total_policies());
}

int PortfolioHistogram::distinct_counts_with_mass() const {
    int count = 0;
    for (const auto& b : buckets_) count += b.policies > 0 ? 1 : 0;
    return count;
}

double marginal_log_pmf(const PriorSpec& prior, int claims) {
    PriorSpec::make(prior.family, prior.alpha, prior.beta);
    const double a = prior.alpha;
    const double b = prior.beta;
    const double k = claims;
    if (prior.family == Family::PoissonGamma) {
        return std::lgamma(a + k) - std::lgamma(a) - std::lgamma(k + 1.0) + a * std::log(b / (1.0 + b)) -
               k * std::log1p(b);
    }
    // B(a + 1, b + k) / B(a, b)
    return std::lgamma(a + 1.0) + std::lgamma(b + k) - std::lgamma(a + b + k + 1.0) - std::lgamma(a) -
           std::lgamma(b) + std::lgamma(a + b);
}

double marginal_log_likelihood(const PortfolioHistogram& hist, const PriorSpec& prior, TopBucketMode top) {
    PriorSpec::make(prior.family, prior.alpha, prior.beta);
    double total = 0.0;
    const auto& buckets = hist.buckets();
    for (std::size_t i = 0; i < buckets.size(); ++i) {
        const auto& bucket = buckets[i];
        if (bucket.policies == 0) continue;
        double log_p = 0.0;
        const bool censored = top == TopBucketMode::Censored && hist.open_top() && i + 1 == buckets.size();
        if (censored) {
            double below = 0.0;
            for (int k = 0; k < bucket.claim_count; ++k) below += std::exp(marginal_log_pmf(prior, k));
            log_p = below < 1.0 ? std::log1p(-below) : -std::numeric_limits<double>::infinity();
        } else {
            log_p = marginal_log_pmf(prior, bucket.claim_count);
        }
        total += static_cast<double>(bucket.policies) * log_p;
    }
    return total;
}

PriorSpec moment_init(const PortfolioHistogram& hist, Family family) {
    const double m = std::max(hist.mean(), 1e-3);
    const double v = hist.variance();
    if (family == Family::PoissonGamma) {
        if (v > m) {
            const double beta = m / (v - m);
            return PriorSpec{family, m * beta, beta};
        }
        return PriorSpec{family, 1.0, 1.0 / m};
    }
    return PriorSpec{family, 3.0, 2.0 * m};
}

FitResult fit_prior(const PortfolioHistogram& hist, Family family, const FitOptions& options) {
    if (hist.distinct_counts_with_mass() < 2) {
        throw Error(ErrorKind::InvalidInput, "fitting needs at least two distinct claim counts with policies");
    }
    gsl_set_error_handler_off();
    const Objective objective{&hist, family, options.top};
    const auto init = moment_init(hist, family);
    const std::array<double, 2> centre{std::log(init.alpha), std::log(init.beta)};

    static constexpr std::array<std::array<double, 2>, 4> kOffsets{{{0.5, 0.5}, {-0.5, -0.5}, {0.5, -0.5}, {-0.5, 0.5}}};
    FitResult best = run_simplex(objective, centre, options);
    for (int r = 0; r < options.restarts; ++r) {
        const auto& offset = kOffsets[static_cast<std::size_t>(r) % kOffsets.size()];
        const double scale = 1.0 + static_cast<double>(r / static_cast<int>(kOffsets.size()));
        auto run = run_simplex(objective, {centre[0] + scale * offset[0], centre[1] + scale * offset[1]}, options);
        if (run.log_likelihood > best.log_likelihood) best = run;
    }
    return best;
}

}  // namespace owabms
