#include "owabms/formulations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "owabms/error.hpp"

namespace owabms {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string indexed(const char* stem, std::size_t i) {
    return std::string(stem) + "_" + std::to_string(i + 1);
}

std::string indexed(const char* stem, std::size_t i, std::size_t j) {
    return std::string(stem) + "_" + std::to_string(i + 1) + "_" + std::to_string(j + 1);
}

std::string number(double value) {
    if (value == kInf) return "inf";
    if (value == -kInf) return "-inf";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

std::string_view token(VariableKind kind) {
    return kind == VariableKind::Binary ? "binary" : "continuous";
}

std::string_view token(ConstraintKind kind) {
    return kind == ConstraintKind::Linear ? "linear" : "convex-quadratic";
}

std::string_view token(Sense sense) {
    switch (sense) {
        case Sense::LessEqual: return "<=";
        case Sense::GreaterEqual: return ">=";
        case Sense::Equal: return "=";
    }
    return "=";
}

// Adds the epigraph rows c_i P^2 - 2 c_i E_i P - y_i <= -c_i M_i.
void add_epigraph(ModelDescription& model, const ScaledLossSet& set, const char* group, std::size_t first_y) {
    for (std::size_t i = 0; i < set.size(); ++i) {
        const double c = set.confidences()[i];
        const auto& loss = set.losses()[i];
        Constraint row{indexed(group, i), group, ConstraintKind::ConvexQuadratic, {}, {}, Sense::LessEqual,
                       -c * loss.second_moment};
        row.linear = {{0, -2.0 * c * loss.mean}, {first_y + i, -1.0}};
        row.quadratic = {{0, 0, c}};
        model.constraints.push_back(std::move(row));
    }
}

double evaluate(const std::vector<LinearTerm>& linear, const std::vector<QuadraticTerm>& quadratic,
                const std::vector<double>& values) {
    double sum = 0.0;
    for (const auto& term : linear) sum += term.coefficient * values[term.variable];
    for (const auto& term : quadratic) sum += term.coefficient * values[term.first] * values[term.second];
    return sum;
}

void write_terms(std::ostream& out, const ModelDescription& model, const std::vector<LinearTerm>& terms) {
    bool first = true;
    for (const auto& term : terms) {
        if (term.coefficient == 0.0) continue;
        out << (term.coefficient < 0.0 ? " - " : (first ? " " : " + ")) << number(std::abs(term.coefficient)) << ' '
            << model.variables[term.variable].name;
        first = false;
    }
    if (first) out << " 0 " << model.variables.front().name;
}

}  // namespace

std::size_t ModelDescription::variable_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables.size(); ++i) {
        if (variables[i].name == name) return i;
    }
    throw Error(ErrorKind::InvalidInput, "model has no variable '" + name + "'");
}

std::size_t ModelDescription::count_variables(VariableKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(variables.begin(), variables.end(), [&](const auto& v) { return v.kind == kind; }));
}

std::size_t ModelDescription::count_constraints(ConstraintKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(constraints.begin(), constraints.end(), [&](const auto& c) { return c.kind == kind; }));
}

std::size_t ModelDescription::count_group(const std::string& group) const {
    return static_cast<std::size_t>(
        std::count_if(constraints.begin(), constraints.end(), [&](const auto& c) { return c.group == group; }));
}

double big_m_value(const ScaledLossSet& set, const SearchDomain& domain) {
    double largest = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        largest = std::max({largest, set.scaled_loss(i, domain.lower), set.scaled_loss(i, domain.upper)});
    }
    return largest > 0.0 ? 1.1 * largest : 1.0;
}

ModelDescription build_owap_model(const ScaledLossSet& set, const WeightVector& weights, const SearchDomain& domain) {
    const std::size_t n = set.size();
    if (weights.size() != n) {
        throw Error(ErrorKind::LengthMismatch, "weights have length " + std::to_string(weights.size()) + " for " +
                                                   std::to_string(n) + " experts");
    }
    ModelDescription model;
    model.name = "owap";
    model.expert_count = n;
    model.big_m = big_m_value(set, domain);

    const std::size_t y0 = 1;
    const std::size_t z0 = 1 + n;
    const std::size_t w0 = 1 + 2 * n;
    model.variables.push_back({"P", VariableKind::Continuous, domain.lower, domain.upper});
    for (std::size_t i = 0; i < n; ++i) model.variables.push_back({indexed("y", i), VariableKind::Continuous, 0.0, kInf});
    for (std::size_t j = 0; j < n; ++j) model.variables.push_back({indexed("z", j), VariableKind::Continuous, 0.0, kInf});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) model.variables.push_back({indexed("w", i, j), VariableKind::Binary, 0.0, 1.0});
    }

    for (std::size_t j = 0; j < n; ++j) model.objective.push_back({z0 + j, weights[j]});

    add_epigraph(model, set, "ctr1", y0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            model.constraints.push_back({indexed("ctr2", i, j), "ctr2", ConstraintKind::Linear,
                                         {{y0 + i, 1.0}, {z0 + j, -1.0}, {w0 + i * n + j, model.big_m}}, {},
                                         Sense::LessEqual, model.big_m});
        }
    }
    for (std::size_t j = 0; j + 1 < n; ++j) {
        model.constraints.push_back({indexed("ctr3", j), "ctr3", ConstraintKind::Linear,
                                     {{z0 + j, 1.0}, {z0 + j + 1, -1.0}}, {}, Sense::GreaterEqual, 0.0});
    }
    for (std::size_t j = 0; j < n; ++j) {
        Constraint row{indexed("ctr3b", j), "ctr3b", ConstraintKind::Linear, {}, {}, Sense::Equal, 1.0};
        for (std::size_t i = 0; i < n; ++i) row.linear.push_back({w0 + i * n + j, 1.0});
        model.constraints.push_back(std::move(row));
    }
    return model;
}

ModelDescription build_convex_model(const ScaledLossSet& set, const WeightVector& weights,
                                    const SearchDomain& domain) {
    const std::size_t n = set.size();
    if (weights.size() != n) {
        throw Error(ErrorKind::LengthMismatch, "weights have length " + std::to_string(weights.size()) + " for " +
                                                   std::to_string(n) + " experts");
    }
    if (!weights.convex_case()) {
        throw Error(ErrorKind::WeightsNotConvexCase,
                    "weights " + weights.describe() + " are not non-increasing and nonnegative");
    }
    ModelDescription model;
    model.name = "convex";
    model.expert_count = n;
    model.big_m = big_m_value(set, domain);

    const std::size_t y0 = 1;
    const std::size_t v0 = 1 + n;
    const std::size_t w0 = 1 + 2 * n;
    model.variables.push_back({"P", VariableKind::Continuous, domain.lower, domain.upper});
    for (std::size_t j = 0; j < n; ++j) model.variables.push_back({indexed("y", j), VariableKind::Continuous, 0.0, kInf});
    for (std::size_t j = 0; j < n; ++j) model.variables.push_back({indexed("v", j), VariableKind::Continuous, -kInf, kInf});
    for (std::size_t i = 0; i < n; ++i) model.variables.push_back({indexed("w", i), VariableKind::Continuous, -kInf, kInf});

    for (std::size_t j = 0; j < n; ++j) model.objective.push_back({v0 + j, 1.0});
    for (std::size_t i = 0; i < n; ++i) model.objective.push_back({w0 + i, 1.0});

    add_epigraph(model, set, "epigraph", y0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            model.constraints.push_back({indexed("dual", i, j), "dual", ConstraintKind::Linear,
                                         {{v0 + j, 1.0}, {w0 + i, 1.0}, {y0 + j, -weights[i]}}, {},
                                         Sense::GreaterEqual, 0.0});
        }
    }
    return model;
}

std::vector<double> owap_assignment(const ScaledLossSet& set, double premium) {
    const std::size_t n = set.size();
    std::vector<double> y(n);
    set.scaled_losses(premium, y);
    const auto order = non_increasing_order(y);

    std::vector<double> values(1 + 2 * n + n * n, 0.0);
    values[0] = premium;
    for (std::size_t i = 0; i < n; ++i) values[1 + i] = y[i];
    for (std::size_t j = 0; j < n; ++j) {
        values[1 + n + j] = y[order[j]];
        values[1 + 2 * n + order[j] * n + j] = 1.0;
    }
    return values;
}

std::vector<double> convex_assignment(const ScaledLossSet& set, const WeightVector& weights, double premium) {
    const std::size_t n = set.size();
    if (weights.size() != n) {
        throw Error(ErrorKind::LengthMismatch, "weights and experts differ in length");
    }
    std::vector<double> y(n);
    set.scaled_losses(premium, y);
    const auto order = non_increasing_order(y);

    std::vector<double> w(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) {
        w[i] = w[i + 1] + (weights[i] - weights[i + 1]) * y[order[i + 1]];
    }
    std::vector<double> values(1 + 3 * n, 0.0);
    values[0] = premium;
    for (std::size_t j = 0; j < n; ++j) values[1 + j] = y[j];
    for (std::size_t j = 0; j < n; ++j) values[1 + n + order[j]] = weights[j] * y[order[j]] - w[j];
    for (std::size_t i = 0; i < n; ++i) values[1 + 2 * n + i] = w[i];
    return values;
}

AssignmentCheck check_assignment(const ModelDescription& model, const std::vector<double>& values) {
    if (values.size() != model.variables.size()) {
        throw Error(ErrorKind::LengthMismatch, "assignment has " + std::to_string(values.size()) + " values for " +
                                                   std::to_string(model.variables.size()) + " variables");
    }
    AssignmentCheck check;
    auto record = [&](double violation, const std::string& name) {
        if (violation > check.max_violation) {
            check.max_violation = violation;
            check.worst = name;
        }
    };
    for (std::size_t i = 0; i < values.size(); ++i) {
        const auto& var = model.variables[i];
        const double x = values[i];
        if (!std::isfinite(x)) {
            record(kInf, var.name);
            continue;
        }
        record(std::max({0.0, var.lower - x, x - var.upper}), var.name);
        if (var.kind == VariableKind::Binary) record(std::abs(x - std::round(x)), var.name);
    }
    for (const auto& row : model.constraints) {
        const double lhs = evaluate(row.linear, row.quadratic, values);
        double violation = 0.0;
        switch (row.sense) {
            case Sense::LessEqual: violation = lhs - row.rhs; break;
            case Sense::GreaterEqual: violation = row.rhs - lhs; break;
            case Sense::Equal: violation = std::abs(lhs - row.rhs); break;
        }
        record(std::max(0.0, violation), row.name);
    }
    check.objective = evaluate(model.objective, {}, values);
    return check;
}

void write_lp(std::ostream& out, const ModelDescription& model) {
    out << "\\ model " << model.name << ", " << model.expert_count << " experts, big-M " << number(model.big_m)
        << "\n";
    out << "Minimize\n obj:";
    write_terms(out, model, model.objective);
    out << "\nSubject To\n";
    for (const auto& row : model.constraints) {
        if (row.kind == ConstraintKind::ConvexQuadratic) {
            out << "\\ " << row.name << ":";
            write_terms(out, model, row.linear);
            for (const auto& q : row.quadratic) {
                out << " + " << number(q.coefficient) << ' ' << model.variables[q.first].name;
                if (q.first == q.second) {
                    out << "^2";
                } else {
                    out << " * " << model.variables[q.second].name;
                }
            }
            out << ' ' << token(row.sense) << ' ' << number(row.rhs) << "\n";
            continue;
        }
        out << ' ' << row.name << ':';
        write_terms(out, model, row.linear);
        out << ' ' << token(row.sense) << ' ' << number(row.rhs) << "\n";
    }
    out << "Bounds\n";
    for (const auto& var : model.variables) {
        if (var.kind == VariableKind::Binary) continue;
        if (var.lower == -kInf && var.upper == kInf) {
            out << ' ' << var.name << " free\n";
        } else if (var.upper == kInf) {
            out << ' ' << var.name << " >= " << number(var.lower) << "\n";
        } else {
            out << ' ' << number(var.lower) << " <= " << var.name << " <= " << number(var.upper) << "\n";
        }
    }
    if (model.count_variables(VariableKind::Binary) > 0) {
        out << "Binaries\n";
        for (const auto& var : model.variables) {
            if (var.kind == VariableKind::Binary) out << ' ' << var.name << "\n";
        }
    }
    out << "End\n";
}

void write_structured(std::ostream& out, const ModelDescription& model) {
    out << "model " << model.name << "\n";
    out << "experts " << model.expert_count << "\n";
    out << "big_m " << number(model.big_m) << "\n";
    for (const auto& var : model.variables) {
        out << "variable " << var.name << ' ' << token(var.kind) << ' ' << number(var.lower) << ' '
            << number(var.upper) << "\n";
    }
    out << "objective minimize " << model.objective.size();
    for (const auto& term : model.objective) {
        out << ' ' << model.variables[term.variable].name << ' ' << number(term.coefficient);
    }
    out << "\n";
    for (const auto& row : model.constraints) {
        out << "constraint " << row.name << ' ' << row.group << ' ' << token(row.kind) << " linear "
            << row.linear.size();
        for (const auto& term : row.linear) {
            out << ' ' << model.variables[term.variable].name << ' ' << number(term.coefficient);
        }
        out << " quadratic " << row.quadratic.size();
        for (const auto& term : row.quadratic) {
            out << ' ' << model.variables[term.first].name << ' ' << model.variables[term.second].name << ' '
                << number(term.coefficient);
        }
        out << ' ' << token(row.sense) << ' ' << number(row.rhs) << "\n";
    }
    out << "end\n";
}

}  // namespace owabms
