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

#include "latentgeo/image.hpp"

#include "latentgeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace latentgeo::image {

ImageGrid::ImageGrid(std::size_t rows, std::size_t cols, std::size_t cell_height, std::size_t cell_width)
    : rows_(rows), cols_(cols), cell_h_(cell_height), cell_w_(cell_width),
      pixels_(rows * cols * cell_height * cell_width, 0.0) {
    require(rows > 0 && cols > 0 && cell_height > 0 && cell_width > 0, ErrorKind::InvalidInput,
            "image grid dimensions must be positive");
}

ImageGrid ImageGrid::from_rows(const numerics::Matrix& cells, std::size_t grid_cols, std::size_t cell_height,
                               std::size_t cell_width) {
    require(grid_cols > 0 && cells.rows() % grid_cols == 0, ErrorKind::Shape,
            "cell count is not a multiple of the grid width");
    ImageGrid g(cells.rows() / grid_cols, grid_cols, cell_height, cell_width);
    for (std::size_t i = 0; i < cells.rows(); ++i) g.set_cell(i / grid_cols, i % grid_cols, cells.row(i));
    return g;
}

void ImageGrid::set_cell(std::size_t r, std::size_t c, std::span<const double> pixels) {
    require(r < rows_ && c < cols_, ErrorKind::Shape, "grid cell out of range");
    require(pixels.size() == cell_h_ * cell_w_, ErrorKind::Shape,
            "cell has " + std::to_string(pixels.size()) + " pixels, expected " + std::to_string(cell_h_ * cell_w_));
    std::copy(pixels.begin(), pixels.end(), pixels_.begin() + static_cast<std::ptrdiff_t>((r * cols_ + c) * pixels.size()));
}

std::span<const double> ImageGrid::cell(std::size_t r, std::size_t c) const {
    require(r < rows_ && c < cols_, ErrorKind::Shape, "grid cell out of range");
    const std::size_t n = cell_h_ * cell_w_;
    return {pixels_.data() + (r * cols_ + c) * n, n};
}

std::vector<unsigned char> ImageGrid::render(std::size_t& height, std::size_t& width) const {
    height = rows_ * (cell_h_ + 1) - 1;
    width = cols_ * (cell_w_ + 1) - 1;
    std::vector<unsigned char> out(height * width, kSeparatorValue);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            const auto px = cell(r, c);
            for (std::size_t y = 0; y < cell_h_; ++y)
                for (std::size_t x = 0; x < cell_w_; ++x) {
                    double v = px[y * cell_w_ + x];
                    v = std::isnan(v) ? 0.0 : std::clamp(v, 0.0, 1.0);
                    out[(r * (cell_h_ + 1) + y) * width + c * (cell_w_ + 1) + x] =
                        static_cast<unsigned char>(std::lround(v * 255.0));
                }
        }
    return out;
}

void write_pgm_grid(const ImageGrid& grid, const std::filesystem::path& path, std::span<const std::string> comments) {
    std::size_t h = 0, w = 0;
    const auto bytes = grid.render(h, w);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write image: " + path.string());
    out << "P5\n";
    for (const std::string& c : comments) {
        require(c.find('\n') == std::string::npos, ErrorKind::InvalidInput, "PGM comment must be a single line");
        out << "# " << c << '\n';
    }
    out << w << ' ' << h << "\n255\n";
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    require(static_cast<bool>(out), ErrorKind::Io, "failed writing image: " + path.string());
}

}  // namespace latentgeo::image
