#ifndef OWABMS_TESTS_RANDOM_PANELS_HPP
#define OWABMS_TESTS_RANDOM_PANELS_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "owabms/optimizer.hpp"
#include "owabms/owa.hpp"

namespace panels {

// n in 2..6, E in (0, 5), M in [E^2, E^2 + 5], confidences uniform then normalized.
inline owabms::ScaledLossSet random_set(std::mt19937_64& rng, std::size_t min_n = 2, std::size_t max_n = 6) {
    std::uniform_int_distribution<std::size_t> size(min_n, max_n);
    std::uniform_real_distribution<double> mean(0.0, 5.0);
    std::uniform_real_distribution<double> excess(0.0, 5.0);
    std::uniform_real_distribution<double> raw(0.05, 1.0);
    const std::size_t n = size(rng);
    std::vector<owabms::QuadraticLoss> losses;
    std::vector<double> confidences;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = mean(rng);
        while (e == 0.0) e = mean(rng);
        losses.push_back({e, e * e + excess(rng)});
        confidences.push_back(raw(rng));
        total += confidences.back();
    }
    for (auto& c : confidences) c /= total;
    return owabms::ScaledLossSet(std::move(losses), std::move(confidences));
}

// Every nonnegative preset family at representative parameters for n experts.
inline std::vector<std::string> nonnegative_presets(std::size_t n) {
    std::vector<std::string> tokens{"sum", "max", "min", "median", "kcentrum:2", "antikcentrum:2", "hurwicz:0.5",
                                    "hurwicz:0.7"};
    if (n >= 3) tokens.push_back("trimmed:1:1");
    return tokens;
}

}  // namespace panels

#endif  // OWABMS_TESTS_RANDOM_PANELS_HPP
