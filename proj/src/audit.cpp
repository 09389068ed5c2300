#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "owabms/error.hpp"
#include "owabms/premiums.hpp"

namespace owabms {
namespace {

ExpertPanel two_expert_panel(double alpha1, double beta1, double alpha2, double beta2) {
    return ExpertPanel({Expert{"#1", PriorSpec::make(Family::PoissonGamma, alpha1, beta1), 0.5},
                        Expert{"#2", PriorSpec::make(Family::PoissonGamma, alpha2, beta2), 0.5}},
                       MomentMode::PaperProp1);
}

bool within_hull(const ScaledLossSet& set, double premium) {
    const double tol = 1e-9 * std::max(1.0, set.max_mean());
    return premium >= set.min_mean() - tol && premium <= set.max_mean() + tol;
}

}  // namespace

bool AuditReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

bool AdditivityWitness::additive(double tolerance) const {
    return std::abs(premium_sum - (premium_x + premium_y)) <= tolerance;
}

AdditivityWitness additivity_witness() {
    const auto max = preset_weights(Preset{PresetKind::Max}, 2);
    AdditivityWitness witness;
    witness.premium_x = owa_collective_premium(two_expert_panel(2, 10, 2, 20), max).premium;
    witness.premium_y = owa_collective_premium(two_expert_panel(3, 10, 7, 20), max).premium;
    witness.premium_sum = owa_collective_premium(two_expert_panel(5, 10, 9, 20), max).premium;
    return witness;
}

AuditReport audit_properties(const ExpertPanel& panel, const WeightVector& weights, int trials, std::uint64_t seed) {
    if (!weights.nonnegative()) {
        throw Error(ErrorKind::InvalidParameters, "property audit needs nonnegative weights");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> periods(1, 5);
    std::uniform_int_distribution<int> claims(0, 10);
    AuditReport report;

    {
        PropertyCheck check{"P1/P2 hull containment", true, ""};
        const auto collective = panel.collective_losses();
        const double cp = minimize_owa(collective, weights).premium;
        if (!within_hull(collective, cp)) {
            check.passed = false;
            check.detail = "collective premium " + std::to_string(cp) + " outside expert means";
        }
        for (int i = 0; i < trials && check.passed; ++i) {
            const auto history = ClaimHistory::make(periods(rng), claims(rng));
            const auto set = panel.bayes_losses(history);
            const double bp = minimize_owa(set, weights).premium;
            if (!within_hull(set, bp)) {
                check.passed = false;
                check.detail = "Bayes premium " + std::to_string(bp) + " at t=" + std::to_string(history.periods) +
                               " k=" + std::to_string(history.total_claims) + " outside expert means";
            }
        }
        if (check.passed) check.detail = std::to_string(trials + 1) + " premiums inside [min mean, max mean]";
        report.checks.push_back(check);
    }

    {
        PropertyCheck check{"P3 linear invariance", true, ""};
        const auto base = panel.collective_losses();
        const double p0 = minimize_owa(base, weights).premium;
        double worst = 0.0;
        for (int i = 0; i < trials; ++i) {
            const double a = 3.0 * unit(rng);
            const double b = 3.0 * unit(rng);
            std::vector<QuadraticLoss> moved;
            for (const auto& loss : base.losses()) moved.push_back(affine_transform(loss, a, b));
            const ScaledLossSet shifted(std::move(moved), {base.confidences().begin(), base.confidences().end()});
            const double p1 = minimize_owa(shifted, weights).premium;
            const double gap = std::abs(p1 - (a * p0 + b));
            worst = std::max(worst, gap);
            if (gap > 1e-6 && check.passed) {
                check.passed = false;
                std::ostringstream os;
                os << "a=" << a << " b=" << b << ": P*=" << p1 << " vs a P*(X) + b = " << a * p0 + b;
                check.detail = os.str();
            }
        }
        if (check.passed) {
            std::ostringstream os;
            os << trials << " random (a, b); max deviation " << worst;
            check.detail = os.str();
        }
        report.checks.push_back(check);
    }

    {
        PropertyCheck check{"P4 constant risk", true, ""};
        const auto base = panel.collective_losses();
        const std::vector<double> confidences(base.confidences().begin(), base.confidences().end());
        for (int i = 0; i < trials; ++i) {
            const double constant = 5.0 * unit(rng);
            const ScaledLossSet degenerate(std::vector<QuadraticLoss>(panel.size(), {constant, constant * constant}),
                                           confidences);
            const double p = minimize_owa(degenerate, weights).premium;
            if (std::abs(p - constant) > 1e-12 * std::max(1.0, constant)) {
                check.passed = false;
                std::ostringstream os;
                os << "C=" << constant << " gave P*=" << p;
                check.detail = os.str();
                break;
            }
        }
        if (check.passed) check.detail = std::to_string(trials) + " constants C in [0, 5) returned P* = C";
        report.checks.push_back(check);
    }

    {
        const auto witness = additivity_witness();
        std::ostringstream os;
        os << "P*(X+Y) = " << witness.premium_sum << ", P*(X) + P*(Y) = " << witness.premium_x + witness.premium_y
           << (witness.additive() ? " (additive)" : " (not additive)");
        report.checks.push_back(PropertyCheck{"P5 additivity (witness)", true, os.str()});
    }
    return report;
}

}  // namespace owabms
