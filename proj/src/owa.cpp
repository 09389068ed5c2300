#include "owabms/owa.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>

#include "owabms/error.hpp"

namespace owabms {
namespace {

std::vector<std::string_view> split(std::string_view token, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = token.find(sep, start);
        parts.push_back(token.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

int parse_int(std::string_view text, std::string_view token) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw Error(ErrorKind::InvalidPresetParameter, "bad integer in preset '" + std::string(token) + "'");
    }
    return value;
}

double parse_double(std::string_view text, std::string_view token) {
    std::string copy(text);
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(copy, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != copy.size()) {
        throw Error(ErrorKind::InvalidPresetParameter, "bad number in preset '" + std::string(token) + "'");
    }
    return value;
}

void expect_arity(const std::vector<std::string_view>& parts, std::size_t arity, std::string_view token) {
    if (parts.size() != arity) {
        throw Error(ErrorKind::InvalidPresetParameter, "wrong number of parameters in preset '" + std::string(token) + "'");
    }
}

std::string format_number(double value) {
    std::ostringstream os;
    os << value;
    return os.str();
}

}  // namespace

Preset Preset::parse(std::string_view token) {
    const auto parts = split(token, ':');
    const auto name = parts.front();
    Preset preset;
    if (name == "sum") {
        preset.kind = PresetKind::Sum;
        expect_arity(parts, 1, token);
    } else if (name == "max") {
        preset.kind = PresetKind::Max;
        expect_arity(parts, 1, token);
    } else if (name == "min") {
        preset.kind = PresetKind::Min;
        expect_arity(parts, 1, token);
    } else if (name == "median") {
        preset.kind = PresetKind::Median;
        expect_arity(parts, 1, token);
    } else if (name == "range") {
        preset.kind = PresetKind::Range;
        expect_arity(parts, 1, token);
    } else if (name == "kcentrum" || name == "antikcentrum") {
        preset.kind = name == "kcentrum" ? PresetKind::KCentrum : PresetKind::AntiKCentrum;
        expect_arity(parts, 2, token);
        preset.k1 = parse_int(parts[1], token);
    } else if (name == "trimmed") {
        preset.kind = PresetKind::Trimmed;
        expect_arity(parts, 3, token);
        preset.k1 = parse_int(parts[1], token);
        preset.k2 = parse_int(parts[2], token);
    } else if (name == "hurwicz") {
        preset.kind = PresetKind::Hurwicz;
        expect_arity(parts, 2, token);
        preset.h = parse_double(parts[1], token);
    } else {
        throw Error(ErrorKind::InvalidPresetParameter, "unknown preset '" + std::string(token) + "'");
    }
    return preset;
}

std::string Preset::token() const {
    switch (kind) {
        case PresetKind::Sum: return "sum";
        case PresetKind::Max: return "max";
        case PresetKind::Min: return "min";
        case PresetKind::Median: return "median";
        case PresetKind::Range: return "range";
        case PresetKind::KCentrum: return "kcentrum:" + std::to_string(k1);
        case PresetKind::AntiKCentrum: return "antikcentrum:" + std::to_string(k1);
        case PresetKind::Trimmed: return "trimmed:" + std::to_string(k1) + ":" + std::to_string(k2);
        case PresetKind::Hurwicz: return "hurwicz:" + format_number(h);
    }
    return "?";
}

WeightVector::WeightVector(std::vector<double> weights, std::optional<std::string> preset_name)
    : weights_(std::move(weights)), preset_name_(std::move(preset_name)) {
    if (weights_.empty()) {
        throw Error(ErrorKind::InvalidParameters, "weight vector is empty");
    }
    for (double w : weights_) {
        if (!std::isfinite(w)) {
            throw Error(ErrorKind::InvalidParameters, "weight vector has a non-finite entry");
        }
        if (w > 1.0) {
            throw Error(ErrorKind::InvalidParameters, "OWA weights must not exceed 1 (got " + format_number(w) + ")");
        }
    }
}

bool WeightVector::nonnegative() const {
    return std::all_of(weights_.begin(), weights_.end(), [](double w) { return w >= 0.0; });
}

bool WeightVector::convex_case() const {
    if (!nonnegative()) return false;
    return std::is_sorted(weights_.begin(), weights_.end(), std::greater<>{});
}

std::string WeightVector::describe() const {
    std::ostringstream os;
    if (preset_name_) os << *preset_name_ << ' ';
    os << '(';
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (i) os << ", ";
        os << weights_[i];
    }
    os << ')';
    return os.str();
}

WeightVector preset_weights(const Preset& preset, std::size_t n) {
    if (n == 0) {
        throw Error(ErrorKind::InvalidPresetParameter, "preset needs at least one expert");
    }
    const auto count = static_cast<int>(n);
    std::vector<double> w(n, 0.0);
    switch (preset.kind) {
        case PresetKind::Sum:
            std::fill(w.begin(), w.end(), 1.0);
            break;
        case PresetKind::Max:
            w.front() = 1.0;
            break;
        case PresetKind::Min:
            w.back() = 1.0;
            break;
        case PresetKind::Median:
            // position ceil((n+1)/2), 1-based
            w[(n + 1 + 1) / 2 - 1] = 1.0;
            break;
        case PresetKind::KCentrum:
        case PresetKind::AntiKCentrum:
            if (preset.k1 < 1 || preset.k1 > count) {
                throw Error(ErrorKind::InvalidPresetParameter,
                            preset.token() + " needs 1 <= k <= n (n=" + std::to_string(n) + ")");
            }
            if (preset.kind == PresetKind::KCentrum) {
                std::fill(w.begin(), w.begin() + preset.k1, 1.0);
            } else {
                std::fill(w.end() - preset.k1, w.end(), 1.0);
            }
            break;
        case PresetKind::Trimmed:
            if (preset.k1 < 0 || preset.k2 < 0 || preset.k1 + preset.k2 >= count) {
                throw Error(ErrorKind::InvalidPresetParameter,
                            preset.token() + " needs k1, k2 >= 0 and k1 + k2 < n (n=" + std::to_string(n) + ")");
            }
            std::fill(w.begin() + preset.k1, w.end() - preset.k2, 1.0);
            break;
        case PresetKind::Range:
            w.front() += 1.0;
            w.back() -= 1.0;
            break;
        case PresetKind::Hurwicz:
            if (!(preset.h >= 0.0 && preset.h <= 1.0)) {
                throw Error(ErrorKind::InvalidPresetParameter, preset.token() + " needs 0 <= h <= 1");
            }
            w.front() += 1.0 - preset.h;
            w.back() += preset.h;
            break;
    }
    return WeightVector(std::move(w), preset.token());
}

std::vector<std::size_t> non_increasing_order(std::span<const double> values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

double owa_evaluate(std::span<const double> values, const WeightVector& weights) {
    if (values.size() != weights.size()) {
        throw Error(ErrorKind::LengthMismatch, "OWA over " + std::to_string(values.size()) + " values with " +
                                                   std::to_string(weights.size()) + " weights");
    }
    auto weighted = [&](std::span<double> sorted) {
        std::copy(values.begin(), values.end(), sorted.begin());
        std::sort(sorted.begin(), sorted.end(), std::greater<>{});
        double total = 0.0;
        for (std::size_t r = 0; r < sorted.size(); ++r) {
            total += weights[r] * sorted[r];
        }
        return total;
    };
    if (values.size() <= 16) {
        std::array<double, 16> buffer{};
        return weighted(std::span<double>(buffer.data(), values.size()));
    }
    std::vector<double> buffer(values.size());
    return weighted(buffer);
}

}  // namespace owabms
