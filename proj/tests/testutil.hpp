#pragma once

// Deterministic data generators shared by the unit and acceptance suites.
// mt19937 output is pinned by the standard, and the uint32 -> double mapping
// below avoids std::uniform_real_distribution (whose output is
// implementation-defined), so seeded fixtures are identical on every platform.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace testutil {

inline double unit_interval(std::mt19937& g) {
    return static_cast<double>(g()) * (1.0 / 4294967296.0);  // [0, 1)
}

inline double symmetric_unit(std::mt19937& g) {
    return 2.0 * unit_interval(g) - 1.0;  // [-1, 1)
}

// n values in [-1, 1), row-major when used as a matrix.
inline std::vector<double> seeded_values(std::uint32_t seed, std::size_t n) {
    std::mt19937 g(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = symmetric_unit(g);
    }
    return v;
}

// n values in [0, 1).
inline std::vector<double> seeded_unit_values(std::uint32_t seed, std::size_t n) {
    std::mt19937 g(seed);
    std::vector<double> v(n);
    for (auto& x : v) {
        x = unit_interval(g);
    }
    return v;
}

inline std::size_t uniform_index(std::mt19937& g, std::size_t n) {
    return static_cast<std::size_t>(unit_interval(g) * static_cast<double>(n)) % n;
}

// Attention payload with every (b, h, q) row normalized to sum 1.
inline std::vector<double> seeded_attention_rows(std::uint32_t seed,
                                                 std::size_t rows,
                                                 std::size_t n_key) {
    std::mt19937 g(seed);
    std::vector<double> data(rows * n_key);
    for (std::size_t r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (std::size_t k = 0; k < n_key; ++k) {
            data[r * n_key + k] = unit_interval(g);
            sum += data[r * n_key + k];
        }
        if (sum == 0.0) {
            for (std::size_t k = 0; k < n_key; ++k) {
                data[r * n_key + k] = 1.0 / static_cast<double>(n_key);
            }
        } else {
            for (std::size_t k = 0; k < n_key; ++k) {
                data[r * n_key + k] /= sum;
            }
        }
    }
    return data;
}

}  // namespace testutil
