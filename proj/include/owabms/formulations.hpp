#ifndef OWABMS_FORMULATIONS_HPP
#define OWABMS_FORMULATIONS_HPP

#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "owabms/optimizer.hpp"
#include "owabms/owa.hpp"

namespace owabms {

enum class VariableKind { Continuous, Binary };
enum class ConstraintKind { Linear, ConvexQuadratic };
enum class Sense { LessEqual, GreaterEqual, Equal };

struct Variable {
    std::string name;
    VariableKind kind = VariableKind::Continuous;
    double lower = 0.0;
    double upper = 0.0;  // +/- infinity for free directions
};

struct LinearTerm {
    std::size_t variable = 0;
    double coefficient = 0.0;
};

struct QuadraticTerm {
    std::size_t first = 0;
    std::size_t second = 0;
    double coefficient = 0.0;
};

// sum(linear) + sum(quadratic) <sense> rhs
struct Constraint {
    std::string name;
    std::string group;
    ConstraintKind kind = ConstraintKind::Linear;
    std::vector<LinearTerm> linear;
    std::vector<QuadraticTerm> quadratic;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
};

struct ModelDescription {
    std::string name;
    std::vector<Variable> variables;
    std::vector<LinearTerm> objective;  // minimized
    std::vector<Constraint> constraints;
    double big_m = 0.0;
    std::size_t expert_count = 0;

    std::size_t variable_index(const std::string& name) const;
    std::size_t count_variables(VariableKind kind) const;
    std::size_t count_constraints(ConstraintKind kind) const;
    std::size_t count_group(const std::string& group) const;
};

// 1.1 * max_i c_i L_i over both domain endpoints; 1 when that maximum is 0.
double big_m_value(const ScaledLossSet& set, const SearchDomain& domain);

// Variables in order: P, y_1..y_n, z_1..z_n, w_1_1..w_n_n (row i, column j).
// Groups: ctr1 (y_i >= c_i L_i(P)), ctr2 (y_i - z_j + M w_ij <= M), ctr3 (z_j >= z_j+1), ctr3b (sum_i w_ij = 1).
ModelDescription build_owap_model(const ScaledLossSet& set, const WeightVector& weights, const SearchDomain& domain);

// Dual-assignment form for non-increasing nonnegative weights.
// Variables in order: P, y_1..y_n, v_1..v_n, w_1..w_n. Groups: epigraph, dual.
// Throws WeightsNotConvexCase otherwise.
ModelDescription build_convex_model(const ScaledLossSet& set, const WeightVector& weights,
                                    const SearchDomain& domain);

// Variable values induced by a premium: y_i = c_i L_i(P), z the sorted y, w the sorting permutation.
std::vector<double> owap_assignment(const ScaledLossSet& set, double premium);

// y as above, w_n = 0, w_i = w_i+1 + (omega_i - omega_i+1) y_(i+1), v_(j) = omega_j y_(j) - w_j.
std::vector<double> convex_assignment(const ScaledLossSet& set, const WeightVector& weights, double premium);

struct AssignmentCheck {
    double max_violation = 0.0;  // over constraints, bounds and integrality
    double objective = 0.0;
    std::string worst;           // name of the worst constraint or variable
};

AssignmentCheck check_assignment(const ModelDescription& model, const std::vector<double>& values);

// LP-format text; quadratic constraints appear as comments.
void write_lp(std::ostream& out, const ModelDescription& model);

// Line-oriented text carrying every constraint exactly, %.17g coefficients.
void write_structured(std::ostream& out, const ModelDescription& model);

}  // namespace owabms

#endif  // OWABMS_FORMULATIONS_HPP
