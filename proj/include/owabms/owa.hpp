#ifndef OWABMS_OWA_HPP
#define OWABMS_OWA_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace owabms {

enum class PresetKind { Sum, Max, Min, Median, KCentrum, AntiKCentrum, Trimmed, Range, Hurwicz };

// A named OWA weight pattern, independent of the number of experts.
// Tokens: sum, max, min, median, kcentrum:k, antikcentrum:k, trimmed:k1:k2, range, hurwicz:h
struct Preset {
    PresetKind kind = PresetKind::Sum;
    int k1 = 0;
    int k2 = 0;
    double h = 0.0;

    static Preset parse(std::string_view token);
    std::string token() const;
};

class WeightVector {
public:
    // Throws InvalidParameters for an empty vector, a non-finite entry, or any weight above 1.
    explicit WeightVector(std::vector<double> weights, std::optional<std::string> preset_name = std::nullopt);

    std::span<const double> weights() const { return weights_; }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::size_t size() const { return weights_.size(); }
    const std::optional<std::string>& preset_name() const { return preset_name_; }

    bool nonnegative() const;
    // omega_1 >= ... >= omega_n >= 0
    bool convex_case() const;

    std::string describe() const;

private:
    std::vector<double> weights_;
    std::optional<std::string> preset_name_;
};

// MEDIAN puts its single unit weight at position ceil((n+1)/2), the lower median of the
// non-increasing sort. HURWICZ(h) is (1-h, 0, ..., 0, h); for n = 1 it is (1).
WeightVector preset_weights(const Preset& preset, std::size_t n);

// Indices sorting values non-increasingly; ties keep the original index order.
std::vector<std::size_t> non_increasing_order(std::span<const double> values);

double owa_evaluate(std::span<const double> values, const WeightVector& weights);

}  // namespace owabms

#endif  // OWABMS_OWA_HPP
