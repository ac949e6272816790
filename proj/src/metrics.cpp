#include "galclust/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace galclust {

ClassMetrics per_class(const ConfusionMatrix& cm)
{
    const std::size_t k = cm.size();
    ClassMetrics out;
    out.classes.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::uint64_t row_sum = 0;
        std::uint64_t col_sum = 0;
        for (std::size_t j = 0; j < k; ++j) {
            row_sum += cm(i, j);
            col_sum += cm(j, i);
        }
        const auto tp = static_cast<double>(cm(i, i));
        ClassScore& s = out.classes[i];
        s.support = row_sum;
        if (col_sum == 0) {
            s.precision_undefined = true;
        } else {
            s.precision = tp / static_cast<double>(col_sum);
        }
        if (row_sum == 0) {
            s.recall_undefined = true;
        } else {
            s.recall = tp / static_cast<double>(row_sum);
        }
        if (s.precision + s.recall == 0.0) {
            s.f1_undefined = true;
        } else {
            s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
        }
    }
    return out;
}

WeightedMetrics weighted_average(const ClassMetrics& metrics)
{
    WeightedMetrics out;
    double p = 0.0;
    double r = 0.0;
    double f = 0.0;
    for (const auto& s : metrics.classes) {
        const auto w = static_cast<double>(s.support);
        p += w * s.precision;
        r += w * s.recall;
        f += w * s.f1;
        out.support += s.support;
    }
    if (out.support == 0) {
        throw std::invalid_argument("weighted_average: every class has zero support");
    }
    const auto total = static_cast<double>(out.support);
    out.precision = p / total;
    out.recall = r / total;
    out.f1 = f / total;
    return out;
}

std::uint64_t question_support(const std::vector<int>& true_labels) { return true_labels.size(); }

SummaryStat summarize(const std::vector<double>& values)
{
    SummaryStat out;
    if (values.empty()) {
        return out;
    }
    double sum = 0.0;
    for (const double v : values) {
        sum += v;
    }
    out.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double sq = 0.0;
        for (const double v : values) {
            sq += (v - out.mean) * (v - out.mean);
        }
        out.stddev = std::sqrt(sq / static_cast<double>(values.size() - 1));
    }
    return out;
}

} // namespace galclust
