/* Copyright 2026 The latentgeo Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include "latentgeo/numerics.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace latentgeo::image {

/// rows x cols cells of equally sized grayscale images, pixel values
/// nominally in [0, 1], each cell stored row-major.
class ImageGrid {
public:
    ImageGrid(std::size_t rows, std::size_t cols, std::size_t cell_height, std::size_t cell_width);

    /// One matrix row per cell, in row-major cell order.
    static ImageGrid from_rows(const numerics::Matrix& cells, std::size_t grid_cols, std::size_t cell_height,
                               std::size_t cell_width);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t cell_height() const noexcept { return cell_h_; }
    std::size_t cell_width() const noexcept { return cell_w_; }

    void set_cell(std::size_t r, std::size_t c, std::span<const double> pixels);
    std::span<const double> cell(std::size_t r, std::size_t c) const;

    /// Tiled picture with 1 px separators: (rows*(h+1)-1) x (cols*(w+1)-1).
    std::vector<unsigned char> render(std::size_t& height, std::size_t& width) const;

private:
    std::size_t rows_, cols_, cell_h_, cell_w_;
    std::vector<double> pixels_;
};

inline constexpr unsigned char kSeparatorValue = 128;

/// Binary PGM (P5, maxval 255). Values are clamped to [0, 1] and rounded.
/// Comment lines, if any, go into the header after the magic.
void write_pgm_grid(const ImageGrid& grid, const std::filesystem::path& path,
                    std::span<const std::string> comments = {});

}  // namespace latentgeo::image
