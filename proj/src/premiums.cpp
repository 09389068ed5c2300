#include "owabms/premiums.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "owabms/error.hpp"

namespace owabms {

ExpertPanel::ExpertPanel(std::vector<Expert> experts, MomentMode mode) : experts_(std::move(experts)), mode_(mode) {
    if (experts_.empty()) {
        throw Error(ErrorKind::InvalidParameters, "expert panel is empty");
    }
    double total = 0.0;
    for (const auto& expert : experts_) {
        PriorSpec::make(expert.prior.family, expert.prior.alpha, expert.prior.beta);
        if (expert.prior.family != experts_.front().prior.family) {
            throw Error(ErrorKind::InvalidParameters, "expert '" + expert.label + "' uses a different prior family");
        }
        if (!(expert.confidence > 0.0 && expert.confidence <= 1.0)) {
            throw Error(ErrorKind::InvalidParameters, "expert '" + expert.label + "' confidence must lie in (0, 1]");
        }
        total += expert.confidence;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorKind::InvalidParameters, "expert confidences sum to " + std::to_string(total) + ", not 1");
    }
}

ScaledLossSet ExpertPanel::collective_losses() const {
    return bayes_losses(ClaimHistory::none());
}

ScaledLossSet ExpertPanel::bayes_losses(ClaimHistory history) const {
    std::vector<QuadraticLoss> losses;
    std::vector<double> confidences;
    losses.reserve(experts_.size());
    confidences.reserve(experts_.size());
    for (const auto& expert : experts_) {
        losses.push_back(bayes_loss(expert.prior, history, mode_));
        confidences.push_back(expert.confidence);
    }
    return ScaledLossSet(std::move(losses), std::move(confidences));
}

PremiumSolution owa_collective_premium(const ExpertPanel& panel, const WeightVector& weights,
                                       std::optional<SearchDomain> domain) {
    return minimize_owa(panel.collective_losses(), weights, domain);
}

PremiumSolution owa_bayes_premium(const ExpertPanel& panel, ClaimHistory history, const WeightVector& weights,
                                  std::optional<SearchDomain> domain) {
    return minimize_owa(panel.bayes_losses(history), weights, domain);
}

namespace {

double ratio_percent(double bayes, double collective) {
    if (!(collective > 1e-12)) {
        throw Error(ErrorKind::DegenerateCollective,
                    "collective premium " + std::to_string(collective) + " is not positive");
    }
    return 100.0 * bayes / collective;
}

}  // namespace

double bonus_malus(const ExpertPanel& panel, ClaimHistory history, const WeightVector& weights,
                   std::optional<SearchDomain> domain) {
    const double collective = owa_collective_premium(panel, weights, domain).premium;
    if (history.periods == 0) {
        ratio_percent(collective, collective);
        return 100.0;
    }
    return ratio_percent(owa_bayes_premium(panel, history, weights, domain).premium, collective);
}

double lemaire_premium(const Expert& expert, ClaimHistory history, MomentMode /*mode*/) {
    if (history.periods == 0) return 100.0;
    return ratio_percent(risk_premium_mean(posterior(expert.prior, history)), risk_premium_mean(expert.prior));
}

std::optional<double> BonusMalusTable::cell(int periods, int claims) const {
    if (periods < 0 || periods > max_periods || claims < 0 || claims > max_claims) return std::nullopt;
    return cells[static_cast<std::size_t>(periods)][static_cast<std::size_t>(claims)];
}

namespace {

BonusMalusTable empty_table(Family family, const WeightVector& weights, int max_periods, int max_claims) {
    if (max_periods < 0 || max_claims < 0) {
        throw Error(ErrorKind::InvalidParameters, "table dimensions must be nonnegative");
    }
    BonusMalusTable table{family, weights, max_periods, max_claims, {}};
    table.cells.assign(static_cast<std::size_t>(max_periods) + 1,
                       std::vector<std::optional<double>>(static_cast<std::size_t>(max_claims) + 1));
    table.cells[0][0] = 100.0;
    return table;
}

}  // namespace

BonusMalusTable bonus_malus_table(const ExpertPanel& panel, const WeightVector& weights, int max_periods,
                                  int max_claims, std::optional<SearchDomain> domain, unsigned threads) {
    auto table = empty_table(panel.family(), weights, max_periods, max_claims);
    const double collective = owa_collective_premium(panel, weights, domain).premium;
    ratio_percent(collective, collective);

    auto fill_row = [&](int t) {
        for (int k = 0; k <= max_claims; ++k) {
            const double bayes = owa_bayes_premium(panel, ClaimHistory::make(t, k), weights, domain).premium;
            table.cells[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] = ratio_percent(bayes, collective);
        }
    };

    threads = std::clamp<unsigned>(threads, 1, static_cast<unsigned>(std::max(1, max_periods)));
    if (threads == 1) {
        for (int t = 1; t <= max_periods; ++t) fill_row(t);
        return table;
    }
    // Rows are dealt round-robin; each worker writes only its own rows.
    std::vector<std::exception_ptr> failures(threads);
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&, w] {
            try {
                for (int t = 1 + static_cast<int>(w); t <= max_periods; t += static_cast<int>(threads)) fill_row(t);
            } catch (...) {
                failures[w] = std::current_exception();
            }
        });
    }
    for (auto& worker : workers) worker.join();
    for (auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return table;
}

BonusMalusTable lemaire_table(const Expert& expert, int max_periods, int max_claims) {
    auto table = empty_table(expert.prior.family, WeightVector({1.0}, "single"), max_periods, max_claims);
    for (int t = 1; t <= max_periods; ++t) {
        for (int k = 0; k <= max_claims; ++k) {
            table.cells[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)] =
                lemaire_premium(expert, ClaimHistory::make(t, k));
        }
    }
    return table;
}

}  // namespace owabms
