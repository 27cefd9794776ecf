// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The dpumodel Authors

#include "dpu/qtensor.hpp"

#include "dpu/error.hpp"

namespace dpu {

QTensor::QTensor(TensorDims dims, std::vector<std::int8_t> data, int scale_exp)
    : dims_(dims), data_(std::move(data)), scale_exp_(scale_exp) {
    if (dims_.n < 1 || dims_.h < 1 || dims_.w < 1 || dims_.c < 1)
        throw Error("tensor dims must be positive");
    if (data_.size() != dims_.count())
        throw Error("tensor payload has " + std::to_string(data_.size()) + " elements, dims need " +
                    std::to_string(dims_.count()));
}

QTensor QTensor::zeros(TensorDims dims, int scale_exp) {
    return QTensor(dims, std::vector<std::int8_t>(dims.count(), 0), scale_exp);
}

}  // namespace dpu
