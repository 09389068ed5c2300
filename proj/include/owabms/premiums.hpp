#ifndef OWABMS_PREMIUMS_HPP
#define OWABMS_PREMIUMS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "owabms/models.hpp"
#include "owabms/optimizer.hpp"
#include "owabms/owa.hpp"

namespace owabms {

// Experts sharing one prior family, with confidences summing to 1.
class ExpertPanel {
public:
    ExpertPanel(std::vector<Expert> experts, MomentMode mode = MomentMode::PaperProp1);

    const std::vector<Expert>& experts() const { return experts_; }
    std::size_t size() const { return experts_.size(); }
    Family family() const { return experts_.front().prior.family; }
    MomentMode moment_mode() const { return mode_; }

    ScaledLossSet collective_losses() const;
    ScaledLossSet bayes_losses(ClaimHistory history) const;

private:
    std::vector<Expert> experts_;
    MomentMode mode_;
};

PremiumSolution owa_collective_premium(const ExpertPanel& panel, const WeightVector& weights,
                                       std::optional<SearchDomain> domain = std::nullopt);

PremiumSolution owa_bayes_premium(const ExpertPanel& panel, ClaimHistory history, const WeightVector& weights,
                                  std::optional<SearchDomain> domain = std::nullopt);

// 100 * BP / CP. Throws DegenerateCollective when CP <= 1e-12.
double bonus_malus(const ExpertPanel& panel, ClaimHistory history, const WeightVector& weights,
                   std::optional<SearchDomain> domain = std::nullopt);

// Single-expert ratio 100 * bayes mean / prior mean from the closed forms.
// The moment mode does not enter the ratio; it is accepted for symmetry with the OWA path.
double lemaire_premium(const Expert& expert, ClaimHistory history, MomentMode mode = MomentMode::PaperProp1);

struct BonusMalusTable {
    Family family = Family::PoissonGamma;
    WeightVector weights{std::vector<double>{1.0}};
    int max_periods = 0;
    int max_claims = 0;
    // cells[t][k]; row 0 holds only the base cell (t = 0 forces k = 0).
    std::vector<std::vector<std::optional<double>>> cells;

    std::optional<double> cell(int periods, int claims) const;
};

// threads > 1 evaluates rows concurrently; the output does not depend on it.
BonusMalusTable bonus_malus_table(const ExpertPanel& panel, const WeightVector& weights, int max_periods,
                                  int max_claims, std::optional<SearchDomain> domain = std::nullopt,
                                  unsigned threads = 1);

BonusMalusTable lemaire_table(const Expert& expert, int max_periods, int max_claims);

// ---- property audit -------------------------------------------------------

struct PropertyCheck {
    std::string property;
    bool passed = true;
    std::string detail;
};

struct AuditReport {
    std::vector<PropertyCheck> checks;

    bool all_passed() const;
};

struct AdditivityWitness {
    double premium_x = 0.0;
    double premium_y = 0.0;
    double premium_sum = 0.0;

    bool additive(double tolerance = 1e-9) const;
};

// MAX-preset collective premiums for two experts pricing X, Y and X + Y under
// Gamma(2,10)/Gamma(2,20), Gamma(3,10)/Gamma(7,20) and their sums, PaperProp1 mode.
AdditivityWitness additivity_witness();

// Randomized checks, each repeated `trials` times with a fixed seed:
//   hull: min_i mean_i <= P* <= max_i mean_i for collective and random Bayes histories
//   affine: P*(aX + b) = a P*(X) + b within 1e-6 for a, b in [0, 3]
//   constant: losses (P - C)^2 give P* = C
//   additivity: reports the non-additive witness (informational, always passes)
// Requires nonnegative weights (InvalidParameters otherwise).
AuditReport audit_properties(const ExpertPanel& panel, const WeightVector& weights, int trials,
                             std::uint64_t seed = 20170101);

}  // namespace owabms

#endif  // OWABMS_PREMIUMS_HPP
