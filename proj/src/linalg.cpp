#include "matargs/linalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <stdexcept>

namespace matargs {

SymMatrix::SymMatrix(int m, std::vector<double> entries) : m_(m) {
    if (m < 1) throw std::invalid_argument("SymMatrix: dimension must be >= 1");
    if (entries.size() != static_cast<std::size_t>(m) * m)
        throw std::invalid_argument("SymMatrix: entry count does not match dimension");
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double aij = entries[i * m + j], aji = entries[j * m + i];
            const double scale = std::max(1.0, std::abs(aij));
            if (std::abs(aij - aji) > 1e-12 * scale)
                throw std::invalid_argument("SymMatrix: input is not symmetric");
        }
    }
    e_ = std::move(entries);
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const double v = (e_[i * m + j] + e_[j * m + i]) / 2;
            e_[i * m + j] = e_[j * m + i] = v;
        }
    }
}

SymMatrix SymMatrix::identity(int m) {
    std::vector<double> e(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) e[i * m + i] = 1.0;
    return SymMatrix(m, std::move(e));
}

SymMatrix SymMatrix::diag(std::span<const double> d) {
    const int m = static_cast<int>(d.size());
    std::vector<double> e(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) e[i * m + i] = d[i];
    return SymMatrix(m, std::move(e));
}

double SymMatrix::trace() const {
    double t = 0;
    for (int i = 0; i < m_; ++i) t += e_[i * m_ + i];
    return t;
}

double SymMatrix::frobenius() const {
    double s = 0;
    for (double v : e_) s += v * v;
    return std::sqrt(s);
}

bool SymMatrix::is_identity() const {
    for (int i = 0; i < m_; ++i)
        for (int j = 0; j < m_; ++j)
            if (e_[i * m_ + j] != (i == j ? 1.0 : 0.0)) return false;
    return true;
}

SymMatrix operator-(const SymMatrix& a) {
    std::vector<double> e = a.entries();
    for (double& v : e) v = -v;
    return SymMatrix(a.dim(), std::move(e));
}

SymMatrix operator*(double s, const SymMatrix& a) {
    std::vector<double> e = a.entries();
    for (double& v : e) v *= s;
    return SymMatrix(a.dim(), std::move(e));
}

SymMatrix load_matrix_json(std::istream& in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("matrix JSON parse error: ") + e.what());
    }
    if (!j.is_object() || !j.contains("m") || !j.contains("data"))
        throw std::invalid_argument("matrix JSON must be {\"m\": ..., \"data\": [[...], ...]}");
    const int m = j.at("m").get<int>();
    const auto& data = j.at("data");
    if (!data.is_array() || static_cast<int>(data.size()) != m)
        throw std::invalid_argument("matrix JSON: \"data\" must hold m rows");
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(m) * m);
    for (const auto& row : data) {
        if (!row.is_array() || static_cast<int>(row.size()) != m)
            throw std::invalid_argument("matrix JSON: each row must hold m numbers");
        for (const auto& v : row) e.push_back(v.get<double>());
    }
    return SymMatrix(m, std::move(e));
}

SPDMatrix::SPDMatrix(SymMatrix a, std::vector<double> f)
    : a_(std::move(a)), f_(std::move(f)) {}

SPDMatrix SPDMatrix::from_upper_factor(int m, std::vector<double> upper) {
    if (m < 1) throw std::invalid_argument("SPDMatrix: dimension must be >= 1");
    if (upper.size() != static_cast<std::size_t>(m) * m)
        throw std::invalid_argument("SPDMatrix: factor size does not match dimension");
    for (int i = 0; i < m; ++i) {
        if (!(upper[i * m + i] > 0))
            throw std::invalid_argument("SPDMatrix: factor diagonal must be positive");
        for (int j = 0; j < i; ++j)
            if (upper[i * m + j] != 0)
                throw std::invalid_argument("SPDMatrix: factor must be upper-triangular");
    }
    // A = T'T: entry (i, j) = sum_r t_ri t_rj over r <= min(i, j).
    std::vector<double> e(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double s = 0;
            for (int r = 0; r <= i; ++r) s += upper[r * m + i] * upper[r * m + j];
            e[i * m + j] = e[j * m + i] = s;
        }
    }
    return SPDMatrix(SymMatrix(m, std::move(e)), std::move(upper));
}

double SPDMatrix::determinant() const {
    const int m = dim();
    double d = 1;
    for (int i = 0; i < m; ++i) d *= f_[i * m + i] * f_[i * m + i];
    return d;
}

SymMatrix SPDMatrix::inverse() const {
    const int m = dim();
    // W = T^{-1} by back substitution on the upper factor.
    std::vector<double> w(static_cast<std::size_t>(m) * m, 0.0);
    for (int j = m - 1; j >= 0; --j) {
        w[j * m + j] = 1.0 / f_[j * m + j];
        for (int i = j - 1; i >= 0; --i) {
            double s = 0;
            for (int r = i + 1; r <= j; ++r) s += f_[i * m + r] * w[r * m + j];
            w[i * m + j] = -s / f_[i * m + i];
        }
    }
    // A^{-1} = (T'T)^{-1} = W W'.
    std::vector<double> inv(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double s = 0;
            for (int r = std::max(i, j); r < m; ++r) s += w[i * m + r] * w[j * m + r];
            inv[i * m + j] = inv[j * m + i] = s;
        }
    }
    return SymMatrix(m, std::move(inv));
}

SPDMatrix cholesky(const SymMatrix& a) {
    const int m = a.dim();
    const double pivot_floor = 1e-12 * std::max(a.trace(), 0.0) / m;
    std::vector<double> u(static_cast<std::size_t>(m) * m, 0.0);
    for (int j = 0; j < m; ++j) {
        double s = a(j, j);
        for (int r = 0; r < j; ++r) s -= u[r * m + j] * u[r * m + j];
        if (!(s > 0) || !(std::sqrt(s) > pivot_floor))
            throw std::domain_error("cholesky: matrix is not positive definite");
        const double ujj = std::sqrt(s);
        u[j * m + j] = ujj;
        for (int c = j + 1; c < m; ++c) {
            double t = a(j, c);
            for (int r = 0; r < j; ++r) t -= u[r * m + j] * u[r * m + c];
            u[j * m + c] = t / ujj;
        }
    }
    return SPDMatrix(a, std::move(u));
}

namespace {

// One cyclic Jacobi pass structure shared by the value-only and full variants.
void jacobi_sweeps(std::vector<double>& a, int m, std::vector<double>* vecs) {
    const double scale = [&] {
        double s = 0;
        for (double v : a) s += v * v;
        return std::sqrt(s);
    }();
    if (scale == 0) return;
    const double tol = 1e-14 * scale;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0;
        for (int p = 0; p < m; ++p)
            for (int q = p + 1; q < m; ++q) off += 2 * a[p * m + q] * a[p * m + q];
        if (std::sqrt(off) <= tol) return;
        for (int p = 0; p < m; ++p) {
            for (int q = p + 1; q < m; ++q) {
                const double apq = a[p * m + q];
                if (apq == 0) continue;
                const double theta = (a[q * m + q] - a[p * m + p]) / (2 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1);
                const double s = t * c;
                for (int r = 0; r < m; ++r) {
                    const double arp = a[r * m + p], arq = a[r * m + q];
                    a[r * m + p] = c * arp - s * arq;
                    a[r * m + q] = s * arp + c * arq;
                }
                for (int r = 0; r < m; ++r) {
                    const double apr = a[p * m + r], aqr = a[q * m + r];
                    a[p * m + r] = c * apr - s * aqr;
                    a[q * m + r] = s * apr + c * aqr;
                }
                if (vecs) {
                    for (int r = 0; r < m; ++r) {
                        const double vrp = (*vecs)[r * m + p], vrq = (*vecs)[r * m + q];
                        (*vecs)[r * m + p] = c * vrp - s * vrq;
                        (*vecs)[r * m + q] = s * vrp + c * vrq;
                    }
                }
            }
        }
    }
    throw std::runtime_error("jacobi eigensolver failed to converge");
}

}  // namespace

std::vector<double> sym_eigs(const SymMatrix& a) {
    const int m = a.dim();
    std::vector<double> work = a.entries();
    jacobi_sweeps(work, m, nullptr);
    std::vector<double> eigs(m);
    for (int i = 0; i < m; ++i) eigs[i] = work[i * m + i];
    std::sort(eigs.begin(), eigs.end(), std::greater<>());
    return eigs;
}

EigenDecomposition sym_eigen(const SymMatrix& a) {
    const int m = a.dim();
    std::vector<double> work = a.entries();
    std::vector<double> vecs(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) vecs[i * m + i] = 1.0;
    jacobi_sweeps(work, m, &vecs);
    std::vector<int> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return work[x * m + x] > work[y * m + y];
    });
    EigenDecomposition d;
    d.values.resize(m);
    d.vectors.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int j = 0; j < m; ++j) {
        d.values[j] = work[order[j] * m + order[j]];
        for (int r = 0; r < m; ++r) d.vectors[r * m + j] = vecs[r * m + order[j]];
    }
    return d;
}

double elementary_symmetric(const SymMatrix& a, int j) {
    const int m = a.dim();
    if (j < 1 || j > m)
        throw std::invalid_argument("elementary_symmetric: j out of range");
    const auto eigs = sym_eigs(a);
    std::vector<double> e(static_cast<std::size_t>(j) + 1, 0.0);
    e[0] = 1;
    for (double x : eigs)
        for (int r = j; r >= 1; --r) e[r] += x * e[r - 1];
    return e[j];
}

double leading_principal_minor(const SymMatrix& a, int j) {
    const int m = a.dim();
    if (j < 1 || j > m)
        throw std::invalid_argument("leading_principal_minor: j out of range");
    // Gaussian elimination with partial pivoting on the leading block.
    std::vector<double> b(static_cast<std::size_t>(j) * j);
    for (int r = 0; r < j; ++r)
        for (int c = 0; c < j; ++c) b[r * j + c] = a(r, c);
    double det = 1;
    for (int col = 0; col < j; ++col) {
        int piv = col;
        for (int r = col + 1; r < j; ++r)
            if (std::abs(b[r * j + col]) > std::abs(b[piv * j + col])) piv = r;
        if (b[piv * j + col] == 0) return 0;
        if (piv != col) {
            for (int c = 0; c < j; ++c) std::swap(b[piv * j + c], b[col * j + c]);
            det = -det;
        }
        det *= b[col * j + col];
        for (int r = col + 1; r < j; ++r) {
            const double f = b[r * j + col] / b[col * j + col];
            for (int c = col; c < j; ++c) b[r * j + c] -= f * b[col * j + c];
        }
    }
    return det;
}

std::vector<double> product_eigs(const SPDMatrix& v, const SymMatrix& t) {
    const int m = v.dim();
    if (t.dim() != m)
        throw std::invalid_argument("product_eigs: dimension mismatch");
    if (t.is_identity()) return sym_eigs(v.matrix());
    const EigenDecomposition d = sym_eigen(v.matrix());
    // V^{1/2} = Q diag(sqrt(lambda)) Q'.
    std::vector<double> sq(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            double s = 0;
            for (int r = 0; r < m; ++r) {
                const double lr = std::sqrt(std::max(d.values[r], 0.0));
                s += d.vectors[i * m + r] * lr * d.vectors[j * m + r];
            }
            sq[i * m + j] = sq[j * m + i] = s;
        }
    }
    // B = V^{1/2} T V^{1/2}, symmetrized entry by entry.
    std::vector<double> st(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double s = 0;
            for (int r = 0; r < m; ++r) s += sq[i * m + r] * t(r, j);
            st[i * m + j] = s;
        }
    std::vector<double> b(static_cast<std::size_t>(m) * m, 0.0);
    for (int i = 0; i < m; ++i)
        for (int j = i; j < m; ++j) {
            double s = 0;
            for (int r = 0; r < m; ++r) s += st[i * m + r] * sq[r * m + j];
            b[i * m + j] = b[j * m + i] = s;
        }
    return sym_eigs(SymMatrix(m, std::move(b)));
}

}  // namespace matargs
