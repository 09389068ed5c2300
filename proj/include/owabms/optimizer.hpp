#ifndef OWABMS_OPTIMIZER_HPP
#define OWABMS_OPTIMIZER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "owabms/models.hpp"
#include "owabms/owa.hpp"

namespace owabms {

// One quadratic loss per expert together with the expert confidences c_i.
// The objects being aggregated are the scaled losses c_i L_i(P).
class ScaledLossSet {
public:
    // Throws LengthMismatch for unequal lengths, InvalidParameters for an empty set,
    // a non-positive confidence, or confidences not summing to 1 within 1e-9.
    ScaledLossSet(std::vector<QuadraticLoss> losses, std::vector<double> confidences);

    std::size_t size() const { return losses_.size(); }
    std::span<const QuadraticLoss> losses() const { return losses_; }
    std::span<const double> confidences() const { return confidences_; }

    double scaled_loss(std::size_t expert, double premium) const;
    void scaled_losses(double premium, std::span<double> out) const;

    double min_mean() const;
    double max_mean() const;

private:
    std::vector<QuadraticLoss> losses_;
    std::vector<double> confidences_;
};

struct SearchDomain {
    double lower = 0.0;
    double upper = 1.0;

    static SearchDomain make(double upper);
};

struct Breakpoints {
    std::vector<double> points;

    std::size_t interval_count() const { return points.empty() ? 0 : points.size() - 1; }
};

struct PremiumSolution {
    double premium = 0.0;
    double loss_value = 0.0;
    // 0-based index of the closed interval [points[i], points[i+1]] holding the premium.
    std::size_t interval_index = 0;
    // Expert indices in non-increasing scaled-loss order at that interval's midpoint.
    std::vector<std::size_t> permutation;
};

// Every positive real solution of c_i L_i(P) = c_j L_j(P) over pairs i < j, sorted, not deduplicated.
std::vector<double> pairwise_crossings(const ScaledLossSet& set);

// [0, max(max_i mean_i + 1, p_k + 1)] where p_k is the largest pairwise crossing.
SearchDomain default_domain(const ScaledLossSet& set);

// {lower, crossings strictly inside the domain (deduplicated), upper}.
Breakpoints breaking_points(const ScaledLossSet& set, const SearchDomain& domain);

// OWA of the scaled losses at a premium, evaluated directly through owa_evaluate.
double owa_objective(const ScaledLossSet& set, const WeightVector& weights, double premium);

// Exact global minimizer of the OWA-aggregated loss over the domain (breaking-point enumeration).
// Without a domain, nonnegative weights use default_domain(); weights with a negative entry
// throw UnboundedProblem. Ties within relative 1e-9 resolve to the smallest premium.
PremiumSolution minimize_owa(const ScaledLossSet& set, const WeightVector& weights,
                             std::optional<SearchDomain> domain = std::nullopt);

// sum_i c_i mean_i, the minimizer for all-ones weights.
double sum_closed_form(const ScaledLossSet& set);

// Brute-force minimum over lower, lower + step, ..., upper (upper always included).
PremiumSolution grid_oracle(const ScaledLossSet& set, const WeightVector& weights, const SearchDomain& domain,
                            double step);

}  // namespace owabms

#endif  // OWABMS_OPTIMIZER_HPP
