#pragma once

#include <cmath>
#include <cstddef>

namespace massart {

// Mean and standard error of a Monte-Carlo estimate.
struct Estimate {
    double mean = 0.0;
    double std_err = 0.0;
};

// Welford accumulator.
class RunningStats {
public:
    void add(double x) {
        ++n_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(n_);
        m2_ += delta * (x - mean_);
    }

    std::size_t count() const { return n_; }
    double mean() const { return mean_; }
    double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double std_err() const {
        return n_ > 1 ? std::sqrt(variance() / static_cast<double>(n_)) : 0.0;
    }
    Estimate estimate() const { return {mean(), std_err()}; }

private:
    std::size_t n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace massart
