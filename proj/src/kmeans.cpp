#include "galclust/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "galclust/rng.hpp"

namespace galclust {

namespace {

std::vector<std::size_t> sample_distinct_rows(std::size_t n, std::size_t k, Rng& rng)
{
    // Partial Fisher-Yates over row indices.
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) {
        pool[i] = i;
    }
    for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.uniform_index(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

std::vector<std::size_t> plus_plus_rows(const Matrix& x, std::size_t k, Rng& rng)
{
    const std::size_t n = x.rows();
    const auto trials = static_cast<std::size_t>(2 + std::floor(std::log(static_cast<double>(k))));
    std::vector<std::size_t> chosen;
    std::vector<bool> taken(n, false);
    chosen.push_back(static_cast<std::size_t>(rng.uniform_index(n)));
    taken[chosen[0]] = true;

    std::vector<double> closest(n);
    double potential = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        closest[i] = squared_distance(x.row(i), x.row(chosen[0]));
        potential += closest[i];
    }

    std::vector<double> trial_closest(n);
    std::vector<double> best_closest(n);
    while (chosen.size() < k) {
        if (potential <= 0.0) {
            // Every row coincides with a chosen centre: fall back to a uniform
            // draw among the rows not yet taken.
            std::size_t pick = static_cast<std::size_t>(rng.uniform_index(n - chosen.size()));
            for (std::size_t i = 0; i < n; ++i) {
                if (!taken[i] && pick-- == 0) {
                    chosen.push_back(i);
                    taken[i] = true;
                    break;
                }
            }
            continue;
        }
        std::size_t best_row = n;
        double best_potential = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < trials; ++t) {
            const double target = rng.uniform01() * potential;
            std::size_t cand = n;
            double cumulative = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (closest[i] <= 0.0) {
                    continue;
                }
                cumulative += closest[i];
                cand = i;
                if (cumulative > target) {
                    break;
                }
            }
            double trial_potential = 0.0;
            const auto centre = x.row(cand);
            for (std::size_t i = 0; i < n; ++i) {
                trial_closest[i] = std::min(closest[i], squared_distance(x.row(i), centre));
                trial_potential += trial_closest[i];
            }
            if (trial_potential < best_potential) {
                best_potential = trial_potential;
                best_row = cand;
                std::swap(best_closest, trial_closest);
            }
        }
        chosen.push_back(best_row);
        taken[best_row] = true;
        std::swap(closest, best_closest);
        potential = best_potential;
    }
    return chosen;
}

// Returns true when any label changed.
bool assign(const Matrix& x, const Matrix& centers, std::vector<int>& labels)
{
    bool changed = false;
    const std::size_t k = centers.rows();
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto point = x.row(i);
        int best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < k; ++j) {
            const double dist = squared_distance(point, centers.row(j));
            if (dist < best_dist) {
                best_dist = dist;
                best = static_cast<int>(j);
            }
        }
        if (labels[i] != best) {
            labels[i] = best;
            changed = true;
        }
    }
    return changed;
}

// Recomputes centres as cluster means. Empty clusters keep their previous
// centre; their indices are returned.
std::vector<std::size_t> update_centers(const Matrix& x, const std::vector<int>& labels, Matrix& centers,
                                        std::vector<std::size_t>& sizes)
{
    const std::size_t k = centers.rows();
    const std::size_t d = centers.cols();
    Matrix sums(k, d);
    sizes.assign(k, 0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++sizes[c];
        auto acc = sums.row(c);
        const auto point = x.row(i);
        for (std::size_t f = 0; f < d; ++f) {
            acc[f] += point[f];
        }
    }
    std::vector<std::size_t> empty;
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] == 0) {
            empty.push_back(c);
            continue;
        }
        const double inv = 1.0 / static_cast<double>(sizes[c]);
        auto center = centers.row(c);
        const auto acc = sums.row(c);
        for (std::size_t f = 0; f < d; ++f) {
            center[f] = acc[f] * inv;
        }
    }
    return empty;
}

// Moves each emptied centre onto the point farthest from its own centre,
// drawing only from clusters that keep at least one member.
void repair_empty(const Matrix& x, std::vector<int>& labels, Matrix& centers, std::vector<std::size_t>& sizes,
                  const std::vector<std::size_t>& empty)
{
    for (const std::size_t c : empty) {
        std::size_t far_row = 0;
        double far_dist = -1.0;
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const auto owner = static_cast<std::size_t>(labels[i]);
            if (sizes[owner] < 2) {
                continue;
            }
            const double dist = squared_distance(x.row(i), centers.row(owner));
            if (dist > far_dist) {
                far_dist = dist;
                far_row = i;
            }
        }
        --sizes[static_cast<std::size_t>(labels[far_row])];
        labels[far_row] = static_cast<int>(c);
        sizes[c] = 1;
        const auto point = x.row(far_row);
        std::copy(point.begin(), point.end(), centers.row(c).begin());
    }
}

} // namespace

double kmeans_objective(const Matrix& x, const HardLabeling& labeling, const Centroids& centroids)
{
    if (labeling.labels.size() != x.rows()) {
        throw std::invalid_argument("kmeans_objective: label count does not match row count");
    }
    if (centroids.centers.cols() != x.cols()) {
        throw std::invalid_argument("kmeans_objective: centroid dimension does not match data");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        const int label = labeling.labels[i];
        if (label < 0 || static_cast<std::size_t>(label) >= centroids.centers.rows()) {
            throw std::out_of_range("kmeans_objective: label " + std::to_string(label) + " out of range");
        }
        total += squared_distance(x.row(i), centroids.centers.row(static_cast<std::size_t>(label)));
    }
    return total;
}

std::vector<std::size_t> kmeans_initial_rows(const Matrix& x, int k, std::uint64_t seed, KMeansInit init)
{
    if (k <= 0 || static_cast<std::size_t>(k) > x.rows()) {
        throw std::invalid_argument("kmeans: k must lie in [1, n]");
    }
    Rng rng(seed);
    const auto kk = static_cast<std::size_t>(k);
    return init == KMeansInit::PlusPlus ? plus_plus_rows(x, kk, rng) : sample_distinct_rows(x.rows(), kk, rng);
}

KMeansResult kmeans(const Matrix& x, int k, std::uint64_t seed, int max_iter, KMeansInit init)
{
    const std::size_t n = x.rows();
    if (k <= 0) {
        throw std::invalid_argument("kmeans: k must be positive");
    }
    if (static_cast<std::size_t>(k) > n) {
        throw std::invalid_argument("kmeans: k exceeds the number of rows");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("kmeans: max_iter must be at least 1");
    }
    const auto kk = static_cast<std::size_t>(k);

    Matrix centers(kk, x.cols());
    const auto init_rows = kmeans_initial_rows(x, k, seed, init);
    for (std::size_t c = 0; c < kk; ++c) {
        const auto point = x.row(init_rows[c]);
        std::copy(point.begin(), point.end(), centers.row(c).begin());
    }

    KMeansResult result;
    std::vector<int> labels(n, -1);
    std::vector<std::size_t> sizes;
    assign(x, centers, labels);

    int iteration = 0;
    bool converged = false;
    while (iteration < max_iter) {
        ++iteration;
        const auto empty = update_centers(x, labels, centers, sizes);
        if (!empty.empty()) {
            repair_empty(x, labels, centers, sizes, empty);
        }
        result.objective_trace.push_back(kmeans_objective(x, HardLabeling{labels, k}, Centroids{centers}));
        // A repaired centre is not yet the mean of its cluster, so that round cannot end the run.
        if (!assign(x, centers, labels) && empty.empty()) {
            converged = true;
            break;
        }
    }

    if (!converged) {
        // Leave the centres consistent with the final labels.
        const auto empty = update_centers(x, labels, centers, sizes);
        if (!empty.empty()) {
            repair_empty(x, labels, centers, sizes, empty);
        }
    }

    result.run.labeling = HardLabeling{std::move(labels), k};
    result.centroids = Centroids{std::move(centers)};
    result.run.objective = kmeans_objective(x, result.run.labeling, result.centroids);
    result.run.iterations = iteration;
    result.run.converged = converged;
    return result;
}

} // namespace galclust
