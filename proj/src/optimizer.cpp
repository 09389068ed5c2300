#include "owabms/optimizer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "owabms/error.hpp"

namespace owabms {
namespace {

constexpr double kCoefficientTolerance = 1e-12;
constexpr double kBreakpointTolerance = 1e-9;
constexpr double kTieTolerance = 1e-9;

// Coefficients of a P^2 + b P + c.
struct Quadratic {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;

    double operator()(double p) const { return (a * p + b) * p + c; }
};

Quadratic scaled_quadratic(const QuadraticLoss& loss, double confidence) {
    return {confidence, -2.0 * confidence * loss.mean, confidence * loss.second_moment};
}

// Real roots of the difference of two scaled losses.
void append_crossings(const Quadratic& lhs, const Quadratic& rhs, std::vector<double>& out) {
    const double a = lhs.a - rhs.a;
    const double b = lhs.b - rhs.b;
    const double c = lhs.c - rhs.c;
    const double scale_a = std::max(std::abs(lhs.a), std::abs(rhs.a));
    const double scale_b = std::max(std::abs(lhs.b), std::abs(rhs.b));

    if (std::abs(a) <= kCoefficientTolerance * scale_a) {
        // Equal leading coefficients: linear difference, or identical losses when b vanishes too.
        if (std::abs(b) <= kCoefficientTolerance * std::max(scale_b, scale_a)) return;
        out.push_back(-c / b);
        return;
    }
    const double scale_c = std::max(std::abs(lhs.c), std::abs(rhs.c));
    const double disc = b * b - 4.0 * a * c;
    const double disc_error = 2.0 * std::abs(b) * scale_b + 4.0 * (std::abs(a) * scale_c + std::abs(c) * scale_a);
    if (std::abs(disc) <= kCoefficientTolerance * disc_error) {
        // tangent
        out.push_back(-b / (2.0 * a));
        return;
    }
    if (disc < 0.0) return;
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    if (q == 0.0) {
        // b == 0 and c == 0
        out.push_back(0.0);
        return;
    }
    out.push_back(q / a);
    out.push_back(c / q);
}

bool same_point(double x, double y) {
    return std::abs(x - y) <= kBreakpointTolerance * std::max(1.0, std::abs(y));
}

bool strictly_better(double candidate, double incumbent) {
    return candidate < incumbent - kTieTolerance * std::max(std::abs(candidate), std::abs(incumbent));
}

}  // namespace

ScaledLossSet::ScaledLossSet(std::vector<QuadraticLoss> losses, std::vector<double> confidences)
    : losses_(std::move(losses)), confidences_(std::move(confidences)) {
    if (losses_.size() != confidences_.size()) {
        throw Error(ErrorKind::LengthMismatch, std::to_string(losses_.size()) + " losses with " +
                                                   std::to_string(confidences_.size()) + " confidences");
    }
    if (losses_.empty()) {
        throw Error(ErrorKind::InvalidParameters, "loss set needs at least one expert");
    }
    double total = 0.0;
    for (double c : confidences_) {
        if (!(std::isfinite(c) && c > 0.0)) {
            throw Error(ErrorKind::InvalidParameters, "confidences must be positive");
        }
        total += c;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw Error(ErrorKind::InvalidParameters, "confidences sum to " + std::to_string(total) + ", not 1");
    }
    for (const auto& loss : losses_) {
        if (!std::isfinite(loss.mean) || !std::isfinite(loss.second_moment)) {
            throw Error(ErrorKind::InvalidParameters, "loss coefficients must be finite");
        }
    }
}

double ScaledLossSet::scaled_loss(std::size_t expert, double premium) const {
    return confidences_[expert] * loss_at(losses_[expert], premium);
}

void ScaledLossSet::scaled_losses(double premium, std::span<double> out) const {
    for (std::size_t i = 0; i < losses_.size(); ++i) {
        out[i] = scaled_loss(i, premium);
    }
}

double ScaledLossSet::min_mean() const {
    return std::min_element(losses_.begin(), losses_.end(),
                            [](const auto& x, const auto& y) { return x.mean < y.mean; })
        ->mean;
}

double ScaledLossSet::max_mean() const {
    return std::max_element(losses_.begin(), losses_.end(),
                            [](const auto& x, const auto& y) { return x.mean < y.mean; })
        ->mean;
}

SearchDomain SearchDomain::make(double upper) {
    if (!(std::isfinite(upper) && upper > 0.0)) {
        throw Error(ErrorKind::InvalidParameters, "search domain upper bound must be positive and finite");
    }
    return SearchDomain{0.0, upper};
}

std::vector<double> pairwise_crossings(const ScaledLossSet& set) {
    const auto n = set.size();
    std::vector<Quadratic> quads;
    quads.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        quads.push_back(scaled_quadratic(set.losses()[i], set.confidences()[i]));
    }
    std::vector<double> roots;
    roots.reserve(n * (n - 1));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            append_crossings(quads[i], quads[j], roots);
        }
    }
    std::erase_if(roots, [](double r) { return !(std::isfinite(r) && r > 0.0); });
    std::sort(roots.begin(), roots.end());
    return roots;
}

SearchDomain default_domain(const ScaledLossSet& set) {
    double upper = std::max(set.max_mean(), 0.0) + 1.0;
    const auto roots = pairwise_crossings(set);
    if (!roots.empty()) {
        upper = std::max(upper, roots.back() + 1.0);
    }
    return SearchDomain{0.0, upper};
}

Breakpoints breaking_points(const ScaledLossSet& set, const SearchDomain& domain) {
    Breakpoints result;
    result.points.push_back(domain.lower);
    for (double r : pairwise_crossings(set)) {
        if (r <= domain.lower || r >= domain.upper) continue;
        if (same_point(r, result.points.back()) || same_point(domain.upper, r)) continue;
        result.points.push_back(r);
    }
    if (domain.upper > domain.lower) {
        result.points.push_back(domain.upper);
    }
    return result;
}

double owa_objective(const ScaledLossSet& set, const WeightVector& weights, double premium) {
    const auto n = set.size();
    if (n <= 16) {
        std::array<double, 16> buffer{};
        std::span<double> values(buffer.data(), n);
        set.scaled_losses(premium, values);
        return owa_evaluate(values, weights);
    }
    std::vector<double> values(n);
    set.scaled_losses(premium, values);
    return owa_evaluate(values, weights);
}

PremiumSolution minimize_owa(const ScaledLossSet& set, const WeightVector& weights,
                             std::optional<SearchDomain> domain) {
    const auto n = set.size();
    if (weights.size() != n) {
        throw Error(ErrorKind::LengthMismatch,
                    std::to_string(weights.size()) + " weights for " + std::to_string(n) + " experts");
    }
    if (!domain) {
        if (!weights.nonnegative()) {
            throw Error(ErrorKind::UnboundedProblem,
                        "weights " + weights.describe() + " have a negative entry; an explicit p_max is required");
        }
        domain = default_domain(set);
    }
    if (!(domain->upper >= domain->lower)) {
        throw Error(ErrorKind::InvalidParameters, "search domain is empty");
    }

    const auto points = breaking_points(set, *domain).points;
    std::vector<Quadratic> quads;
    quads.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        quads.push_back(scaled_quadratic(set.losses()[i], set.confidences()[i]));
    }

    PremiumSolution best;
    bool have_best = false;
    std::vector<double> values(n);

    auto consider = [&](double premium, double value, std::size_t interval, const std::vector<std::size_t>& order) {
        if (!have_best || strictly_better(value, best.loss_value)) {
            best.premium = premium;
            best.loss_value = value;
            best.interval_index = interval;
            best.permutation = order;
            have_best = true;
        }
    };

    if (points.size() == 1) {
        // Zero-width domain.
        const double p = points.front();
        set.scaled_losses(p, values);
        consider(p, owa_evaluate(values, weights), 0, non_increasing_order(values));
        return best;
    }

    for (std::size_t j = 0; j + 1 < points.size(); ++j) {
        const double left = points[j];
        const double right = points[j + 1];
        const double mid = 0.5 * (left + right);
        set.scaled_losses(mid, values);
        const auto order = non_increasing_order(values);

        Quadratic aggregate;
        for (std::size_t r = 0; r < n; ++r) {
            const auto& q = quads[order[r]];
            aggregate.a += weights[r] * q.a;
            aggregate.b += weights[r] * q.b;
            aggregate.c += weights[r] * q.c;
        }

        consider(left, aggregate(left), j, order);
        if (aggregate.a > 0.0) {
            const double vertex = -aggregate.b / (2.0 * aggregate.a);
            if (vertex > left && vertex < right) {
                consider(vertex, aggregate(vertex), j, order);
            }
        }
        consider(right, aggregate(right), j, order);
    }
    return best;
}

double sum_closed_form(const ScaledLossSet& set) {
    double total = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        total += set.confidences()[i] * set.losses()[i].mean;
    }
    return total;
}

PremiumSolution grid_oracle(const ScaledLossSet& set, const WeightVector& weights, const SearchDomain& domain,
                            double step) {
    if (!(step > 0.0)) {
        throw Error(ErrorKind::InvalidParameters, "grid step must be positive");
    }
    if (weights.size() != set.size()) {
        throw Error(ErrorKind::LengthMismatch, "weights and experts differ in length");
    }
    PremiumSolution best;
    best.premium = domain.lower;
    best.loss_value = owa_objective(set, weights, domain.lower);

    const double width = domain.upper - domain.lower;
    const auto steps = static_cast<long long>(std::floor(width / step + 1e-9));
    for (long long i = 1; i <= steps; ++i) {
        const double p = domain.lower + static_cast<double>(i) * step;
        const double value = owa_objective(set, weights, p);
        if (value < best.loss_value) {
            best.premium = p;
            best.loss_value = value;
        }
    }
    const double last = domain.lower + static_cast<double>(steps) * step;
    if (domain.upper - last > 1e-12 * std::max(1.0, domain.upper)) {
        const double value = owa_objective(set, weights, domain.upper);
        if (value < best.loss_value) {
            best.premium = domain.upper;
            best.loss_value = value;
        }
    }
    std::vector<double> values(set.size());
    set.scaled_losses(best.premium, values);
    best.permutation = non_increasing_order(values);
    return best;
}

}  // namespace owabms
