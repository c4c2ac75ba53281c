#ifndef ICDKM_DATASET_HPP
#define ICDKM_DATASET_HPP

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "icdkm/matrix.hpp"

namespace icdkm {

/// n x d feature matrix with optional ground-truth class labels.
struct Dataset {
    Matrix features;
    std::optional<std::vector<std::size_t>> labels;
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
    std::string provenance;

    std::size_t size() const noexcept { return features.rows(); }
    std::size_t dims() const noexcept { return features.cols(); }
    bool has_labels() const noexcept { return labels.has_value(); }

    std::size_t num_classes() const {
        if (!labels || labels->empty()) return 0;
        return *std::max_element(labels->begin(), labels->end()) + 1;
    }

    std::vector<std::size_t> class_sizes() const {
        std::vector<std::size_t> sizes(num_classes(), 0);
        if (labels) {
            for (auto l : *labels) ++sizes[l];
        }
        return sizes;
    }

    /// Throws if any feature is non-finite or labels are inconsistent.
    void check() const {
        if (!features.all_finite()) {
            throw std::invalid_argument("dataset '" + provenance + "' contains non-finite values");
        }
        if (labels) {
            if (labels->size() != size()) {
                throw std::invalid_argument("label count does not match row count");
            }
            for (auto s : class_sizes()) {
                if (s == 0) throw std::invalid_argument("class indices are not contiguous");
            }
        }
    }
};

}  // namespace icdkm

#endif  // ICDKM_DATASET_HPP
