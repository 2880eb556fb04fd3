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

#include "latentgeo/numerics.hpp"

#include "latentgeo/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace latentgeo::numerics {

namespace {

std::string shape_str(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    require(data_.size() == rows_ * cols_, ErrorKind::Shape,
            "matrix data length " + std::to_string(data_.size()) + " does not match " +
                std::to_string(rows) + "x" + std::to_string(cols));
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, ErrorKind::Shape, "ragged matrix literal");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Vector Matrix::row_vector(std::size_t r) const {
    auto s = row(r);
    return Vector(s.begin(), s.end());
}

Vector Matrix::col_vector(std::size_t c) const {
    Vector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

bool Matrix::all_finite() const noexcept {
    return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) t(c, r) = a(r, c);
    return t;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.rows(), ErrorKind::Shape,
            "matmul shape mismatch " + shape_str(a) + " * " + shape_str(b));
    Matrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* ci = c.row(i).data();
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            const double* bk = b.row(k).data();
            for (std::size_t j = 0; j < n; ++j) ci[j] += aik * bk[j];
        }
    }
    return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(), ErrorKind::Shape,
            "matmul_bt shape mismatch " + shape_str(a) + " * " + shape_str(b) + "^T");
    return matmul(a, transpose(b));
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), ErrorKind::Shape,
            "matmul_at shape mismatch " + shape_str(a) + "^T * " + shape_str(b));
    Matrix c(a.cols(), b.cols());
    const std::size_t n = b.cols();
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* bk = b.row(k).data();
        for (std::size_t i = 0; i < a.cols(); ++i) {
            const double aki = a(k, i);
            if (aki == 0.0) continue;
            double* ci = c.row(i).data();
            for (std::size_t j = 0; j < n; ++j) ci[j] += aki * bk[j];
        }
    }
    return c;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), ErrorKind::Shape,
            "matvec shape mismatch " + shape_str(a) + " * " + std::to_string(x.size()));
    Vector y(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) y[r] = dot(a.row(r), x);
    return y;
}

Vector matvec_t(const Matrix& a, std::span<const double> x) {
    require(a.rows() == x.size(), ErrorKind::Shape,
            "matvec_t shape mismatch " + shape_str(a) + "^T * " + std::to_string(x.size()));
    Vector y(a.cols(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) axpy(x[r], a.row(r), y);
    return y;
}

Matrix add(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::Shape,
            "add shape mismatch " + shape_str(a) + " + " + shape_str(b));
    Matrix c = a;
    axpy(1.0, b.data(), c.data());
    return c;
}

Matrix sub(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorKind::Shape,
            "sub shape mismatch " + shape_str(a) + " - " + shape_str(b));
    Matrix c = a;
    axpy(-1.0, b.data(), c.data());
    return c;
}

Matrix scale(const Matrix& a, double s) {
    Matrix c = a;
    for (double& x : c.data()) x *= s;
    return c;
}

Matrix slice_rows(const Matrix& a, std::size_t begin, std::size_t end) {
    require(begin <= end && end <= a.rows(), ErrorKind::Shape, "row slice out of range");
    Matrix out(end - begin, a.cols());
    std::copy(a.data().begin() + begin * a.cols(), a.data().begin() + end * a.cols(),
              out.data().begin());
    return out;
}

Matrix gather_rows(const Matrix& a, std::span<const std::size_t> idx) {
    Matrix out(idx.size(), a.cols());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        require(idx[i] < a.rows(), ErrorKind::Shape, "row index out of range");
        std::copy_n(a.row(idx[i]).begin(), a.cols(), out.row(i).begin());
    }
    return out;
}

Matrix slice_cols(const Matrix& a, std::size_t begin, std::size_t end) {
    require(begin <= end && end <= a.cols(), ErrorKind::Shape, "column slice out of range");
    Matrix out(a.rows(), end - begin);
    for (std::size_t r = 0; r < a.rows(); ++r)
        std::copy(a.row(r).begin() + begin, a.row(r).begin() + end, out.row(r).begin());
    return out;
}

Matrix hconcat(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(), ErrorKind::Shape,
            "hconcat row mismatch " + shape_str(a) + " | " + shape_str(b));
    Matrix out(a.rows(), a.cols() + b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        std::copy(a.row(r).begin(), a.row(r).end(), out.row(r).begin());
        std::copy(b.row(r).begin(), b.row(r).end(), out.row(r).begin() + a.cols());
    }
    return out;
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    require(x.size() == y.size(), ErrorKind::Shape, "axpy length mismatch");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorKind::Shape, "dot length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> x) {
    // scaled accumulation keeps tiny and huge entries from under/overflowing
    double scale = 0.0, ssq = 1.0;
    for (double v : x) {
        if (v == 0.0) continue;
        const double a = std::abs(v);
        if (scale < a) {
            ssq = 1.0 + ssq * (scale / a) * (scale / a);
            scale = a;
        } else {
            ssq += (a / scale) * (a / scale);
        }
    }
    return scale * std::sqrt(ssq);
}

double distance(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), ErrorKind::Shape, "distance length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) { return norm2(a.data()); }

namespace {

// Columns of `cols` (n columns of length m, column-major) are rotated until
// mutually orthogonal; `v` accumulates the rotations (n x n, column-major).
void jacobi_orthogonalize(std::vector<double>& cols, std::vector<double>& v, std::size_t m,
                          std::size_t n) {
    constexpr double kEps = 1e-15;
    constexpr int kMaxSweeps = 80;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        bool rotated = false;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            double* cp = cols.data() + p * m;
            for (std::size_t q = p + 1; q < n; ++q) {
                double* cq = cols.data() + q * m;
                double alpha = 0.0, beta = 0.0, gamma = 0.0;
                for (std::size_t i = 0; i < m; ++i) {
                    alpha += cp[i] * cp[i];
                    beta += cq[i] * cq[i];
                    gamma += cp[i] * cq[i];
                }
                if (gamma == 0.0 || std::abs(gamma) <= kEps * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const double zeta = (beta - alpha) / (2.0 * gamma);
                const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = c * t;
                for (std::size_t i = 0; i < m; ++i) {
                    const double x = cp[i], y = cq[i];
                    cp[i] = c * x - s * y;
                    cq[i] = s * x + c * y;
                }
                double* vp = v.data() + p * n;
                double* vq = v.data() + q * n;
                for (std::size_t i = 0; i < n; ++i) {
                    const double x = vp[i], y = vq[i];
                    vp[i] = c * x - s * y;
                    vq[i] = s * x + c * y;
                }
            }
        }
        if (!rotated) return;
    }
}

// Replaces column `j` of an m x r column-major basis with a unit vector
// orthogonal to the columns listed in `fixed`.
void complete_column(std::vector<double>& u, std::size_t m, std::size_t j,
                     const std::vector<std::size_t>& fixed) {
    for (std::size_t e = 0; e < m; ++e) {
        std::vector<double> w(m, 0.0);
        w[e] = 1.0;
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t f : fixed) {
                const double* uf = u.data() + f * m;
                double proj = 0.0;
                for (std::size_t i = 0; i < m; ++i) proj += uf[i] * w[i];
                for (std::size_t i = 0; i < m; ++i) w[i] -= proj * uf[i];
            }
        }
        const double nrm = norm2(w);
        if (nrm > 0.5) {
            for (std::size_t i = 0; i < m; ++i) u[j * m + i] = w[i] / nrm;
            return;
        }
    }
}

SvdResult svd_tall(const Matrix& a) {
    const std::size_t m = a.rows(), n = a.cols();
    std::vector<double> cols(m * n);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c) cols[c * m + r] = a(r, c);
    std::vector<double> v(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;

    jacobi_orthogonalize(cols, v, m, n);

    std::vector<double> sv(n);
    for (std::size_t j = 0; j < n; ++j) sv[j] = norm2(std::span<const double>(cols.data() + j * m, m));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sv[x] > sv[y]; });

    std::vector<double> u(m * n, 0.0);
    std::vector<std::size_t> filled;
    std::vector<std::size_t> deficient;
    SvdResult out;
    out.singular_values.resize(n);
    out.vt = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t j = order[k];
        const double s = sv[j];
        out.singular_values[k] = s;
        for (std::size_t i = 0; i < n; ++i) out.vt(k, i) = v[j * n + i];
        if (s > 0.0) {
            for (std::size_t i = 0; i < m; ++i) u[k * m + i] = cols[j * m + i] / s;
            filled.push_back(k);
        } else {
            deficient.push_back(k);
        }
    }
    for (std::size_t k : deficient) {
        complete_column(u, m, k, filled);
        filled.push_back(k);
    }
    out.u = Matrix(m, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < m; ++i) out.u(i, k) = u[k * m + i];
    return out;
}

}  // namespace

SvdResult svd(const Matrix& a) {
    require(a.rows() >= 1 && a.cols() >= 1, ErrorKind::InvalidInput, "svd of an empty matrix");
    require(a.all_finite(), ErrorKind::InvalidInput, "svd input has non-finite entries");
    if (a.rows() >= a.cols()) return svd_tall(a);
    // A = U S Vt  <=>  At = V S Ut
    SvdResult t = svd_tall(transpose(a));
    SvdResult out;
    out.u = transpose(t.vt);
    out.singular_values = std::move(t.singular_values);
    out.vt = transpose(t.u);
    return out;
}

std::size_t numerical_rank(std::span<const double> s, double rel_tol) {
    if (s.empty() || s[0] <= 0.0) return 0;
    const double cut = rel_tol * s[0];
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [cut](double x) { return x > cut; }));
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) noexcept {
    std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

}  // namespace

SeededRng::SeededRng(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& s : s_) s = splitmix64(x);
}

std::uint64_t SeededRng::next_u64() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double SeededRng::uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

std::uint64_t SeededRng::below(std::uint64_t n) noexcept {
    // Lemire-style rejection keeps the draw unbiased
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
        const std::uint64_t x = next_u64();
        const unsigned __int128 prod = static_cast<unsigned __int128>(x) * n;
        if (static_cast<std::uint64_t>(prod) >= threshold) return static_cast<std::uint64_t>(prod >> 64);
    }
}

double SeededRng::normal() noexcept {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

SeededRng SeededRng::split() noexcept { return SeededRng(next_u64()); }

}  // namespace latentgeo::numerics
