// SPDX-License-Identifier: Apache-2.0
#include "capsp/scalar_matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace capsp {

ScalarMatrix::ScalarMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), v_(rows * cols, fill) {
    if (std::isnan(fill)) throw std::invalid_argument("ScalarMatrix: NaN entries are not allowed");
}

void ScalarMatrix::set(std::size_t r, std::size_t c, double value) {
    if (std::isnan(value)) throw std::invalid_argument("ScalarMatrix: NaN entries are not allowed");
    v_[r * cols_ + c] = value;
}

ScalarMatrix transpose(const ScalarMatrix& m) {
    ScalarMatrix out(m.cols(), m.rows(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.set(c, r, m(r, c));
    return out;
}

WitnessMatrix transpose(const WitnessMatrix& m) {
    WitnessMatrix out(m.cols(), m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out.set(c, r, m.at(r, c));
    return out;
}

}  // namespace capsp
