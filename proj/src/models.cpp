#include "owabms/models.hpp"

#include <cmath>

#include "owabms/error.hpp"

namespace owabms {

std::string_view to_string(Family family) {
    return family == Family::PoissonGamma ? "poisson-gamma" : "geometric-beta";
}

std::string_view to_string(MomentMode mode) {
    return mode == MomentMode::PaperProp1 ? "paper-prop1" : "prior-second-moment";
}

Family parse_family(std::string_view token) {
    if (token == "poisson-gamma") return Family::PoissonGamma;
    if (token == "geometric-beta") return Family::GeometricBeta;
    throw Error(ErrorKind::InvalidInput,
                "unknown family '" + std::string(token) + "' (expected poisson-gamma or geometric-beta)");
}

MomentMode parse_moment_mode(std::string_view token) {
    if (token == "paper-prop1") return MomentMode::PaperProp1;
    if (token == "prior-second-moment") return MomentMode::PriorSecondMoment;
    throw Error(ErrorKind::InvalidInput,
                "unknown moment mode '" + std::string(token) +
                    "' (expected paper-prop1 or prior-second-moment)");
}

PriorSpec PriorSpec::make(Family family, double alpha, double beta) {
    if (!(std::isfinite(alpha) && alpha > 0.0) || !(std::isfinite(beta) && beta > 0.0)) {
        throw Error(ErrorKind::InvalidParameters, "prior parameters must be positive and finite (alpha=" +
                                                      std::to_string(alpha) + ", beta=" + std::to_string(beta) + ")");
    }
    return PriorSpec{family, alpha, beta};
}

ClaimHistory ClaimHistory::make(int periods, int total_claims) {
    if (periods < 0 || total_claims < 0) {
        throw Error(ErrorKind::InvalidParameters, "claim history needs nonnegative periods and claims");
    }
    if (periods == 0 && total_claims != 0) {
        throw Error(ErrorKind::InvalidParameters, "claims recorded over zero periods");
    }
    return ClaimHistory{periods, total_claims};
}

PriorSpec posterior(const PriorSpec& prior, ClaimHistory history) {
    const double t = history.periods;
    const double k = history.total_claims;
    if (prior.family == Family::PoissonGamma) {
        return PriorSpec{prior.family, prior.alpha + k, prior.beta + t};
    }
    return PriorSpec{prior.family, prior.alpha + t, prior.beta + k};
}

double risk_premium_mean(const PriorSpec& prior) {
    if (prior.family == Family::PoissonGamma) {
        return prior.alpha / prior.beta;
    }
    if (prior.alpha <= 1.0) {
        throw Error(ErrorKind::InsufficientPriorMoments,
                    "geometric-beta mean needs alpha > 1 (alpha=" + std::to_string(prior.alpha) + ")");
    }
    return prior.beta / (prior.alpha - 1.0);
}

QuadraticLoss collective_loss(const PriorSpec& prior, MomentMode mode) {
    const double a = prior.alpha;
    const double b = prior.beta;
    if (prior.family == Family::PoissonGamma) {
        const double mean = a / b;
        const double second = mode == MomentMode::PaperProp1 ? mean * (mean + 1.0) : a * (a + 1.0) / (b * b);
        return {mean, second};
    }
    if (a <= 2.0) {
        throw Error(ErrorKind::InsufficientPriorMoments,
                    "geometric-beta loss needs alpha > 2 (alpha=" + std::to_string(a) + ")");
    }
    return {b / (a - 1.0), b * (b + 1.0) / ((a - 1.0) * (a - 2.0))};
}

QuadraticLoss bayes_loss(const PriorSpec& prior, ClaimHistory history, MomentMode mode) {
    return collective_loss(posterior(prior, history), mode);
}

double loss_at(const QuadraticLoss& loss, double premium) {
    return premium * premium - 2.0 * loss.mean * premium + loss.second_moment;
}

QuadraticLoss affine_transform(const QuadraticLoss& loss, double scale, double shift) {
    return {scale * loss.mean + shift,
            scale * scale * loss.second_moment + 2.0 * scale * shift * loss.mean + shift * shift};
}

}  // namespace owabms
