#include "xyz/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "xyz/errors.hpp"
#include "xyz/rng.hpp"

namespace xyz {

PackedMatrix rademacher_matrix(std::size_t n, std::size_t p, std::mt19937_64& rng) {
    PackedMatrix x(n, p);
    for (std::size_t j = 0; j < p; ++j) {
        auto col = x.column_words(j);
        for (std::size_t w = 0; w < col.size(); ++w) col[w] = rng();
        col[col.size() - 1] &= x.last_word_mask();
    }
    return x;
}

std::vector<std::int8_t> plant_interaction(const PackedMatrix& x, std::size_t j, std::size_t k,
                                           double gamma, std::mt19937_64& rng) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) throw data_error("plant_interaction: gamma outside [0,1]");
    const std::size_t n = x.n_rows();
    const auto agree_rows = static_cast<std::size_t>(std::llround(gamma * static_cast<double>(n)));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::int8_t> y(n);
    for (std::size_t t = 0; t < n; ++t) {
        const std::size_t i = order[t];
        const int prod = x.get(i, j) * x.get(i, k);
        y[i] = static_cast<std::int8_t>(t < agree_rows ? prod : -prod);
    }
    return y;
}

PlantedBinaryInstance planted_binary_instance(std::size_t n, std::size_t p, double gamma,
                                              std::uint64_t seed) {
    std::mt19937_64 rng = make_stream(seed, 0x5e17);
    PlantedBinaryInstance inst;
    inst.x = rademacher_matrix(n, p, rng);
    inst.y = plant_interaction(inst.x, 0, 1, gamma, rng);
    const auto agree = static_cast<double>(
        static_cast<std::size_t>(std::llround(gamma * static_cast<double>(n))));
    inst.planted_strength = agree / static_cast<double>(n);
    return inst;
}

RealMatrix gaussian_matrix(std::size_t n, std::size_t p, std::mt19937_64& rng) {
    RealMatrix x(n, p);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t j = 0; j < p; ++j) {
        auto col = x.column(j);
        for (std::size_t i = 0; i < n; ++i) col[i] = gauss(rng);
    }
    return x;
}

RealMatrix uniform_matrix(std::size_t n, std::size_t p, std::mt19937_64& rng) {
    RealMatrix x(n, p);
    for (std::size_t j = 0; j < p; ++j) {
        auto col = x.column(j);
        for (std::size_t i = 0; i < n; ++i) col[i] = 2.0 * uniform_unit(rng) - 1.0;
    }
    return x;
}

} // namespace xyz
