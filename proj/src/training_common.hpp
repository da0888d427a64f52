#pragma once

#include "csrkit/errors.hpp"
#include "csrkit/kernels.hpp"
#include "csrkit/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace csrkit::detail {

struct PreparedData {
    std::vector<FeatureVector> points;
    Eigen::VectorXd labels;  // +-1
    std::size_t positives = 0;
    std::size_t negatives = 0;
};

inline PreparedData prepare(const Dataset& data) {
    if (data.empty()) throw InputError("training set is empty");
    PreparedData out;
    out.points.reserve(data.size());
    out.labels.resize(static_cast<Eigen::Index>(data.size()));
    const std::size_t dim = data.front().x.size();
    for (std::size_t i = 0; i < data.size(); ++i) {
        require_dimension(data[i].x, dim);
        validate_features(data[i].x, "training sample");
        out.points.push_back(data[i].x);
        out.labels[static_cast<Eigen::Index>(i)] = to_double(data[i].y);
        (data[i].y == Label::Safe ? out.positives : out.negatives) += 1;
    }
    return out;
}

}  // namespace csrkit::detail
