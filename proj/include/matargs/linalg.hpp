#pragma once

#include <iosfwd>
#include <span>
#include <vector>

namespace matargs {

// Dense symmetric matrix, row-major. Construction rejects inputs that are not
// symmetric to 1e-12 relative and stores the symmetrized (A + A')/2.
class SymMatrix {
public:
    SymMatrix(int m, std::vector<double> entries);
    static SymMatrix identity(int m);
    static SymMatrix diag(std::span<const double> d);

    int dim() const { return m_; }
    double operator()(int i, int j) const { return e_[i * m_ + j]; }
    const std::vector<double>& entries() const { return e_; }
    double trace() const;
    double frobenius() const;
    bool is_identity() const;  // exact entrywise comparison

private:
    int m_ = 0;
    std::vector<double> e_;
};

SymMatrix operator-(const SymMatrix& a);
SymMatrix operator*(double s, const SymMatrix& a);

// {"m": 2, "data": [[...], [...]]}; symmetry validated on load.
SymMatrix load_matrix_json(std::istream& in);

// Positive definite matrix bundled with its Cholesky factor: A = T'T with T
// upper-triangular, positive diagonal.
class SPDMatrix {
public:
    static SPDMatrix from_upper_factor(int m, std::vector<double> upper);

    int dim() const { return a_.dim(); }
    const SymMatrix& matrix() const { return a_; }
    double t(int i, int j) const { return f_[i * a_.dim() + j]; }
    const std::vector<double>& factor() const { return f_; }
    double determinant() const;  // prod t_ii^2
    SymMatrix inverse() const;

private:
    friend SPDMatrix cholesky(const SymMatrix& a);
    SPDMatrix(SymMatrix a, std::vector<double> f);
    SymMatrix a_;
    std::vector<double> f_;
};

// Fails with a domain error when a pivot drops below 1e-12 * trace / m.
SPDMatrix cholesky(const SymMatrix& a);

struct EigenDecomposition {
    std::vector<double> values;   // descending
    std::vector<double> vectors;  // row-major; column j pairs with values[j]
};

// Cyclic Jacobi; off-diagonal norm driven below 1e-14 * frobenius.
std::vector<double> sym_eigs(const SymMatrix& a);  // descending
EigenDecomposition sym_eigen(const SymMatrix& a);

// e_j of the eigenvalues, accumulated from the eigenvalue list.
double elementary_symmetric(const SymMatrix& a, int j);

// Determinant of the top-left j-by-j block.
double leading_principal_minor(const SymMatrix& a, int j);

// Eigenvalues of V*T, computed as sym_eigs(V^{1/2} T V^{1/2}); T = I short-
// circuits to sym_eigs(V) so the two paths agree bit-for-bit.
std::vector<double> product_eigs(const SPDMatrix& v, const SymMatrix& t);

}  // namespace matargs
