#ifndef OWABMS_ESTIMATION_HPP
#define OWABMS_ESTIMATION_HPP

#include <cstdint>
#include <istream>
#include <vector>

#include "owabms/models.hpp"

namespace owabms {

struct HistogramBucket {
    int claim_count = 0;
    std::int64_t policies = 0;
};

// Claim-count frequencies of a portfolio. With open_top the last bucket reads "claim_count or more".
class PortfolioHistogram {
public:
    PortfolioHistogram(std::vector<HistogramBucket> buckets, bool open_top = false);

    // CSV with header `claims,policies`; a trailing `8+,7` row marks an open top bucket.
    static PortfolioHistogram from_csv(std::istream& in);

    const std::vector<HistogramBucket>& buckets() const { return buckets_; }
    bool open_top() const { return open_top_; }

    std::int64_t total_policies() const;
    // Moments treat the open top bucket as exactly its claim count.
    double mean() const;
    double variance() const;
    int distinct_counts_with_mass() const;

private:
    std::vector<HistogramBucket> buckets_;
    bool open_top_ = false;
};

enum class TopBucketMode {
    Exact,     // the open top bucket counts as exactly its claim count
    Censored,  // log P(X >= top) = log(1 - sum_{k < top} pmf(k))
};

// Prior-predictive claim-count log-pmf: negative binomial for PoissonGamma,
// beta-geometric for GeometricBeta.
double marginal_log_pmf(const PriorSpec& prior, int claims);

double marginal_log_likelihood(const PortfolioHistogram& hist, const PriorSpec& prior,
                               TopBucketMode top = TopBucketMode::Exact);

// PoissonGamma: beta = m / (v - m), alpha = m beta (falls back to (1, 1/m) when v <= m).
// GeometricBeta: alpha = 3, beta = 2 m.
PriorSpec moment_init(const PortfolioHistogram& hist, Family family);

struct FitOptions {
    TopBucketMode top = TopBucketMode::Exact;
    int max_iterations = 10000;
    double objective_tolerance = 1e-10;
    double simplex_tolerance = 1e-8;
    int restarts = 4;
};

struct FitResult {
    PriorSpec prior;
    double log_likelihood = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Maximum likelihood over (log alpha, log beta) by Nelder-Mead from moment_init plus
// `restarts` perturbed starts; the best run is returned. Needs two or more claim counts with mass.
FitResult fit_prior(const PortfolioHistogram& hist, Family family, const FitOptions& options = {});

}  // namespace owabms

#endif  // OWABMS_ESTIMATION_HPP
