/*
 * Copyright 2026 The fogplace Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FOGPLACE_MATRIX_HPP
#define FOGPLACE_MATRIX_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace fogplace {

/// Dense row-major matrix with value semantics.
///
/// Rows are services throughout the library, so row-major storage of an
/// |S|x|F| placement is exactly the flattened particle position.
template <typename T>
class matrix
{
public:
    matrix() = default;

    matrix(std::size_t rows, std::size_t cols, T init = T{})
    : rows_(rows), cols_(cols), data_(rows * cols, init)
    {
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    T& at(std::size_t r, std::size_t c)
    {
        check(r, c);
        return data_[r * cols_ + c];
    }

    const T& at(std::size_t r, std::size_t c) const
    {
        check(r, c);
        return data_[r * cols_ + c];
    }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::vector<T>& data() noexcept { return data_; }
    const std::vector<T>& data() const noexcept { return data_; }

    void fill(T v)
    {
        for (auto& x : data_)
        {
            x = v;
        }
    }

    friend bool operator==(const matrix&, const matrix&) = default;

private:
    void check(std::size_t r, std::size_t c) const
    {
        if (r >= rows_ || c >= cols_)
        {
            throw std::out_of_range("matrix index out of range");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

} // namespace fogplace

#endif // FOGPLACE_MATRIX_HPP
