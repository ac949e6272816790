#include "galclust/fcm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "galclust/rng.hpp"

namespace galclust {

namespace {

void compute_centers(const Matrix& x, const Matrix& u, double m, Matrix& centers)
{
    const std::size_t c = u.rows();
    const std::size_t d = x.cols();
    std::vector<double> acc(d);
    for (std::size_t i = 0; i < c; ++i) {
        std::fill(acc.begin(), acc.end(), 0.0);
        double weight_sum = 0.0;
        for (std::size_t k = 0; k < x.rows(); ++k) {
            const double w = std::pow(u(i, k), m);
            if (w == 0.0) {
                continue;
            }
            weight_sum += w;
            const auto point = x.row(k);
            for (std::size_t f = 0; f < d; ++f) {
                acc[f] += w * point[f];
            }
        }
        if (weight_sum == 0.0) {
            continue; // no mass on this cluster; keep the previous centre
        }
        auto center = centers.row(i);
        for (std::size_t f = 0; f < d; ++f) {
            center[f] = acc[f] / weight_sum;
        }
    }
}

void column_memberships(std::span<const double> point, const Matrix& centers, double m, std::span<double> out)
{
    const std::size_t c = centers.rows();
    std::size_t coincident = 0;
    double min_dist = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < c; ++i) {
        out[i] = squared_distance(point, centers.row(i));
        if (out[i] == 0.0) {
            ++coincident;
        }
        min_dist = std::min(min_dist, out[i]);
    }
    if (coincident > 0) {
        const double share = 1.0 / static_cast<double>(coincident);
        for (std::size_t i = 0; i < c; ++i) {
            out[i] = out[i] == 0.0 ? share : 0.0;
        }
        return;
    }
    // mu_i = 1 / sum_j (d_i / d_j)^(2/(m-1)), evaluated on squared distances
    // scaled by the smallest one so that no weight overflows.
    const double exponent = 1.0 / (m - 1.0);
    double total = 0.0;
    for (std::size_t i = 0; i < c; ++i) {
        const double ratio = min_dist / out[i];
        out[i] = exponent == 1.0 ? ratio : std::pow(ratio, exponent);
        total += out[i];
    }
    for (std::size_t i = 0; i < c; ++i) {
        out[i] /= total;
    }
}

} // namespace

std::vector<double> fcm_memberships(std::span<const double> point, const Matrix& centers, double fuzzifier)
{
    if (!(fuzzifier > 1.0)) {
        throw std::invalid_argument("fcm: fuzzifier must exceed 1");
    }
    if (centers.cols() != point.size()) {
        throw std::invalid_argument("fcm: centre dimension does not match point");
    }
    std::vector<double> out(centers.rows());
    column_memberships(point, centers, fuzzifier, out);
    return out;
}

double fcm_objective(const Matrix& x, const FuzzyPartition& partition, const Centroids& centroids)
{
    const Matrix& u = partition.memberships;
    if (u.cols() != x.rows() || u.rows() != centroids.centers.rows()) {
        throw std::invalid_argument("fcm_objective: shape mismatch");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < x.rows(); ++k) {
        for (std::size_t i = 0; i < u.rows(); ++i) {
            const double w = std::pow(u(i, k), partition.fuzzifier);
            if (w != 0.0) {
                total += w * squared_distance(x.row(k), centroids.centers.row(i));
            }
        }
    }
    return total;
}

HardLabeling defuzzify(const FuzzyPartition& partition)
{
    const Matrix& u = partition.memberships;
    HardLabeling out;
    out.k = static_cast<int>(u.rows());
    out.labels.resize(u.cols());
    for (std::size_t k = 0; k < u.cols(); ++k) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < u.rows(); ++i) {
            if (u(i, k) > u(best, k)) {
                best = i;
            }
        }
        out.labels[k] = static_cast<int>(best);
    }
    return out;
}

FcmResult fcm(const Matrix& x, int clusters, double fuzzifier, double epsilon, std::uint64_t seed, int max_iter)
{
    if (clusters < 2) {
        throw std::invalid_argument("fcm: at least two clusters are required");
    }
    if (!(fuzzifier > 1.0)) {
        throw std::invalid_argument("fcm: fuzzifier must exceed 1");
    }
    if (!(epsilon > 0.0)) {
        throw std::invalid_argument("fcm: epsilon must be positive");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("fcm: max_iter must be at least 1");
    }
    if (x.rows() == 0) {
        throw std::invalid_argument("fcm: no data");
    }
    const auto c = static_cast<std::size_t>(clusters);
    const std::size_t n = x.rows();

    Rng rng(seed);
    Matrix u(c, n);
    for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < c; ++i) {
            u(i, k) = rng.uniform01();
            sum += u(i, k);
        }
        if (sum == 0.0) {
            for (std::size_t i = 0; i < c; ++i) {
                u(i, k) = 1.0 / static_cast<double>(c);
            }
            continue;
        }
        for (std::size_t i = 0; i < c; ++i) {
            u(i, k) /= sum;
        }
    }

    FcmResult result;
    Matrix centers(c, x.cols());
    Matrix next(c, n);
    std::vector<double> column(c);
    int iteration = 0;
    bool converged = false;
    while (iteration < max_iter) {
        ++iteration;
        compute_centers(x, u, fuzzifier, centers);

        double max_change = 0.0;
        double max_sum_error = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            column_memberships(x.row(k), centers, fuzzifier, column);
            double sum = 0.0;
            for (std::size_t i = 0; i < c; ++i) {
                next(i, k) = column[i];
                sum += column[i];
                max_change = std::max(max_change, std::abs(column[i] - u(i, k)));
            }
            max_sum_error = std::max(max_sum_error, std::abs(sum - 1.0));
        }
        std::swap(u, next);

        result.objective_trace.push_back(fcm_objective(x, FuzzyPartition{u, fuzzifier}, Centroids{centers}));
        result.column_sum_error_trace.push_back(max_sum_error);
        if (max_change <= epsilon) {
            converged = true;
            break;
        }
    }

    result.partition = FuzzyPartition{std::move(u), fuzzifier};
    result.centroids = Centroids{std::move(centers)};
    result.run.labeling = defuzzify(result.partition);
    result.run.objective = result.objective_trace.back();
    result.run.iterations = iteration;
    result.run.converged = converged;
    return result;
}

} // namespace galclust
