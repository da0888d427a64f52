#include "csrkit/types.hpp"

#include "csrkit/errors.hpp"

#include <cmath>
#include <string>

namespace csrkit {

Label label_from_int(int value) {
    if (value == 1) return Label::Safe;
    if (value == -1) return Label::Unsafe;
    throw InputError("label must be -1 or 1, got " + std::to_string(value));
}

void validate_features(std::span<const double> x, std::string_view what) {
    if (x.empty()) throw InputError(std::string(what) + " is empty");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!std::isfinite(x[i])) {
            throw InputError(std::string(what) + " has a non-finite coordinate at index " + std::to_string(i));
        }
    }
}

void require_dimension(std::span<const double> x, std::size_t expected) {
    if (x.size() != expected) {
        throw InputError("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                         std::to_string(x.size()));
    }
}

}  // namespace csrkit
