#include "steerqkd/filtering.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include "steerqkd/errors.hpp"
#include "steerqkd/qber.hpp"

namespace steerqkd {

namespace {

double branch_probability(const Matrix4c &rho, const Matrix4c &K) {
    return (K * rho * K.adjoint()).trace().real();
}

bool useful_at(const DensityMatrix &rho, const FilterPair &f) {
    try {
        return modified_protocol_useful(rho, f);
    } catch (const FilterAnnihilates &) {
        return false;
    }
}

} // namespace

void validate(const FilterPair &f) {
    for (double eps : {f.eps1, f.eps2}) {
        if (!(eps >= 0.0 && eps <= 1.0)) {
            std::ostringstream msg;
            msg << "filter strength must lie in [0, 1], got " << eps;
            throw BadParam(msg.str());
        }
    }
}

Matrix2c filter_operator(double eps) {
    Matrix2c m = Matrix2c::Zero();
    m(0, 0) = eps;
    m(1, 1) = 1.0;
    return m;
}

Matrix2c filter_complement(double eps) {
    Matrix2c m = Matrix2c::Zero();
    m(0, 0) = std::sqrt(std::max(0.0, 1.0 - eps * eps));
    return m;
}

FilterOutcome apply_local_filters(const DensityMatrix &rho, const FilterPair &f) {
    validate(f);
    const Matrix4c K = kron(filter_operator(f.eps1), filter_operator(f.eps2));
    const Matrix4c unnormalized = K * rho.matrix() * K.adjoint();
    const double p = unnormalized.trace().real();
    if (!(p >= kMinSuccessProbability)) {
        std::ostringstream msg;
        msg << "success probability " << p << " below "
            << kMinSuccessProbability;
        throw FilterAnnihilates(msg.str());
    }
    FilterOutcome out;
    out.filtered_state = DensityMatrix::from_matrix(Matrix4c(unnormalized / p));
    out.p_succ = p;
    out.q_min_filtered = qber_min(tensor_spectrum(out.filtered_state));
    out.literal_keyn_product = p * qber_min(tensor_spectrum(rho));
    return out;
}

std::array<double, 4> branch_probabilities(const DensityMatrix &rho,
                                           const FilterPair &f) {
    validate(f);
    const std::array<Matrix2c, 2> a{filter_operator(f.eps1),
                                    filter_complement(f.eps1)};
    const std::array<Matrix2c, 2> b{filter_operator(f.eps2),
                                    filter_complement(f.eps2)};
    std::array<double, 4> out{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            out[2 * i + j] = branch_probability(rho.matrix(), kron(a[i], b[j]));
        }
    }
    return out;
}

bool modified_protocol_useful(const DensityMatrix &rho, const FilterPair &f) {
    return apply_local_filters(rho, f).q_min_filtered < critical_qber();
}

std::vector<double> filter_grid(double step) {
    if (!(step > 0.0 && step <= 0.5)) {
        std::ostringstream msg;
        msg << "grid step must lie in (0, 0.5], got " << step;
        throw BadParam(msg.str());
    }
    const auto n = static_cast<std::int64_t>(std::floor(1.0 / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n));
    for (std::int64_t k = 1; k <= n; ++k) {
        grid.push_back(std::min(1.0, static_cast<double>(k) * step));
    }
    return grid;
}

std::vector<FilterPair> serial::filter_search(const DensityMatrix &rho,
                                              double grid_step) {
    const auto grid = filter_grid(grid_step);
    std::vector<FilterPair> hits;
    for (double e1 : grid) {
        for (double e2 : grid) {
            if (useful_at(rho, {e1, e2})) {
                hits.push_back({e1, e2});
            }
        }
    }
    return hits;
}

std::vector<FilterPair> filter_search(const DensityMatrix &rho, double grid_step) {
    const auto grid = filter_grid(grid_step);
    const auto n = static_cast<std::int64_t>(grid.size());
    std::vector<unsigned char> mask(static_cast<std::size_t>(n * n), 0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t idx = 0; idx < n * n; ++idx) {
        mask[static_cast<std::size_t>(idx)] =
            useful_at(rho, {grid[idx / n], grid[idx % n]}) ? 1 : 0;
    }
    std::vector<FilterPair> hits;
    for (std::int64_t idx = 0; idx < n * n; ++idx) {
        if (mask[static_cast<std::size_t>(idx)] != 0) {
            hits.push_back({grid[idx / n], grid[idx % n]});
        }
    }
    return hits;
}

} // namespace steerqkd
