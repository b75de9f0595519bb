#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <numeric>
#include <vector>

#include "dimwit/error.hpp"

namespace dimwit {

// Dense row-major real tensor of fixed rank. Scenarios here are tiny, so no
// sparsity or expression templates.
template <std::size_t Rank>
class DenseTensor {
public:
    using Shape = std::array<int, Rank>;

    DenseTensor() { shape_.fill(0); }

    explicit DenseTensor(Shape shape, double fill = 0.0) : shape_(shape) {
        for (int n : shape_) require(n >= 0, ErrorCode::Shape, "negative tensor extent");
        data_.assign(static_cast<std::size_t>(
                         std::accumulate(shape_.begin(), shape_.end(), 1L, std::multiplies<long>())),
                     fill);
    }

    const Shape& shape() const noexcept { return shape_; }
    int extent(std::size_t axis) const { return shape_[axis]; }
    std::size_t size() const noexcept { return data_.size(); }

    template <typename... I>
    double& operator()(I... idx) {
        static_assert(sizeof...(I) == Rank);
        return data_[offset({static_cast<int>(idx)...})];
    }

    template <typename... I>
    double operator()(I... idx) const {
        static_assert(sizeof...(I) == Rank);
        return data_[offset({static_cast<int>(idx)...})];
    }

    std::vector<double>& data() noexcept { return data_; }
    const std::vector<double>& data() const noexcept { return data_; }

    bool operator==(const DenseTensor&) const = default;

private:
    std::size_t offset(const std::array<int, Rank>& idx) const {
        std::size_t off = 0;
        for (std::size_t k = 0; k < Rank; ++k) {
            if (idx[k] < 0 || idx[k] >= shape_[k]) fail(ErrorCode::Shape, "tensor index out of range");
            off = off * static_cast<std::size_t>(shape_[k]) + static_cast<std::size_t>(idx[k]);
        }
        return off;
    }

    Shape shape_;
    std::vector<double> data_;
};

using Tensor3 = DenseTensor<3>;
using Tensor4 = DenseTensor<4>;

}  // namespace dimwit
