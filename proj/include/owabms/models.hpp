#ifndef OWABMS_MODELS_HPP
#define OWABMS_MODELS_HPP

#include <string>
#include <string_view>

namespace owabms {

// Claim-count model with its conjugate prior on the risk parameter.
//   PoissonGamma:  X ~ Poisson(theta),   theta ~ Gamma(alpha, rate beta)
//   GeometricBeta: X ~ Geometric(theta), theta ~ Beta(alpha, beta),
//                  X counts failures before the first success, E[X | theta] = (1 - theta) / theta
enum class Family { PoissonGamma, GeometricBeta };

// How the constant term of a Poisson-Gamma quadratic loss is formed.
//   PaperProp1:        M = E (E + 1) with E = alpha / beta
//   PriorSecondMoment: M = alpha (alpha + 1) / beta^2, the prior second moment of theta
// Geometric-Beta losses are identical in both modes.
enum class MomentMode { PaperProp1, PriorSecondMoment };

std::string_view to_string(Family family);
std::string_view to_string(MomentMode mode);
Family parse_family(std::string_view token);
MomentMode parse_moment_mode(std::string_view token);

struct PriorSpec {
    Family family = Family::PoissonGamma;
    double alpha = 1.0;
    double beta = 1.0;

    // Throws InvalidParameters unless alpha > 0 and beta > 0 (both finite).
    static PriorSpec make(Family family, double alpha, double beta);

    bool operator==(const PriorSpec&) const = default;
};

// t observed periods with k total claims; k = t * mean claims is the sufficient statistic.
struct ClaimHistory {
    int periods = 0;
    int total_claims = 0;

    static ClaimHistory make(int periods, int total_claims);
    static ClaimHistory none() { return {}; }

    bool operator==(const ClaimHistory&) const = default;
};

// The loss P -> P^2 - 2 mean P + second_moment.
struct QuadraticLoss {
    double mean = 0.0;
    double second_moment = 0.0;

    bool operator==(const QuadraticLoss&) const = default;
};

struct Expert {
    std::string label;
    PriorSpec prior;
    double confidence = 1.0;
};

PriorSpec posterior(const PriorSpec& prior, ClaimHistory history);

// Closed-form prior mean of the risk premium. Needs alpha > 1 for GeometricBeta.
double risk_premium_mean(const PriorSpec& prior);

QuadraticLoss collective_loss(const PriorSpec& prior, MomentMode mode);
QuadraticLoss bayes_loss(const PriorSpec& prior, ClaimHistory history, MomentMode mode);

double loss_at(const QuadraticLoss& loss, double premium);

// Moments of a X + b given the moments of X.
QuadraticLoss affine_transform(const QuadraticLoss& loss, double scale, double shift);

}  // namespace owabms

#endif  // OWABMS_MODELS_HPP
