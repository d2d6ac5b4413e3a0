#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace osr {

// One round's input: a feature vector with ||x|| <= 1 and a label in [-1, 1].
struct LabeledExample {
    std::vector<double> x;
    double y = 0.0;
};

// Pull-based example source. Implementations own their random state, so a
// (seed, parameters) pair fully determines the emitted sequence.
class ExampleStream {
public:
    virtual ~ExampleStream() = default;
    virtual bool next(LabeledExample& out) = 0;  // false once exhausted
};

// Feature values restricted to an announced coordinate set. This is the only
// view of an example the learner ever receives; coordinates outside the set
// are simply not present.
class ProbedVector {
public:
    ProbedVector() = default;

    ProbedVector(std::vector<int> indices, std::vector<double> values)
        : indices_(std::move(indices)), values_(std::move(values)) {
        if (indices_.size() != values_.size())
            throw std::invalid_argument("ProbedVector: index/value size mismatch");
    }

    static ProbedVector from_dense(const std::vector<double>& x, const std::vector<int>& coords) {
        std::vector<int> idx = coords;
        std::sort(idx.begin(), idx.end());
        std::vector<double> vals;
        vals.reserve(idx.size());
        for (int i : idx) {
            if (i < 0 || i >= static_cast<int>(x.size()))
                throw std::out_of_range("ProbedVector: coordinate " + std::to_string(i) +
                                        " outside dimension " + std::to_string(x.size()));
            vals.push_back(x[static_cast<std::size_t>(i)]);
        }
        return ProbedVector(std::move(idx), std::move(vals));
    }

    bool has(int coord) const {
        return std::binary_search(indices_.begin(), indices_.end(), coord);
    }

    double at(int coord) const {
        auto it = std::lower_bound(indices_.begin(), indices_.end(), coord);
        if (it == indices_.end() || *it != coord)
            throw std::out_of_range("ProbedVector: coordinate " + std::to_string(coord) +
                                    " was not probed");
        return values_[static_cast<std::size_t>(it - indices_.begin())];
    }

    const std::vector<int>& indices() const { return indices_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return indices_.size(); }

private:
    std::vector<int> indices_;  // sorted ascending
    std::vector<double> values_;
};

inline double squared_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double e : v) s += e * e;
    return s;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace osr
