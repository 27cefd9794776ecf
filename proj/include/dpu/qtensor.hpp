// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dpu {

/// NHWC extents. Convolution weights use (OC, K, K, IC); depth-wise
/// weights use (1, K, K, C).
struct TensorDims {
    int n = 1;
    int h = 1;
    int w = 1;
    int c = 1;

    std::size_t count() const {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(h) *
               static_cast<std::size_t>(w) * static_cast<std::size_t>(c);
    }
    bool operator==(const TensorDims&) const = default;
};

/// Immutable INT8 tensor with a power-of-two scale: value = q * 2^scale_exp.
class QTensor {
   public:
    QTensor() = default;
    QTensor(TensorDims dims, std::vector<std::int8_t> data, int scale_exp = 0);

    static QTensor zeros(TensorDims dims, int scale_exp = 0);

    const TensorDims& dims() const { return dims_; }
    int scale_exp() const { return scale_exp_; }
    std::span<const std::int8_t> data() const { return data_; }

    std::size_t index(int n, int h, int w, int c) const {
        return ((static_cast<std::size_t>(n) * dims_.h + h) * dims_.w + w) * dims_.c + c;
    }
    std::int8_t at(int n, int h, int w, int c) const { return data_[index(n, h, w, c)]; }

    bool operator==(const QTensor&) const = default;

   private:
    TensorDims dims_;
    std::vector<std::int8_t> data_;
    int scale_exp_ = 0;
};

}  // namespace dpu
