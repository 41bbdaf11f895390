#include "tauthresh/sym_matrix.hpp"

#include "tauthresh/errors.hpp"

#include <cmath>
#include <string>

namespace tauthresh {

SymMatrix::SymMatrix(int p) : p_(p) {
    if (p < 1) throw DimensionError("SymMatrix dimension must be >= 1");
    a_.assign(static_cast<std::size_t>(p) * p, 0.0);
}

SymMatrix SymMatrix::identity(int p) {
    SymMatrix m(p);
    for (int i = 0; i < p; ++i) m.set(i, i, 1.0);
    return m;
}

SymMatrix SymMatrix::from_rows(int p, std::vector<double> entries) {
    SymMatrix m(p);
    if (entries.size() != static_cast<std::size_t>(p) * p)
        throw DimensionError("entry count does not match p*p");
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < i; ++j) {
            if (entries[static_cast<std::size_t>(i) * p + j] !=
                entries[static_cast<std::size_t>(j) * p + i])
                throw DomainError("matrix is not symmetric at (" + std::to_string(i) + "," +
                                  std::to_string(j) + ")");
        }
    }
    m.a_ = std::move(entries);
    return m;
}

CorrelationMatrix CorrelationMatrix::identity(int p) {
    return CorrelationMatrix(SymMatrix::identity(p));
}

CorrelationMatrix CorrelationMatrix::from_sym(SymMatrix m) {
    const int p = m.dim();
    constexpr double slack = 1e-12;
    for (int i = 0; i < p; ++i) {
        if (m(i, i) != 1.0) throw DomainError("correlation matrix diagonal must be exactly 1");
        for (int j = 0; j < i; ++j) {
            double v = m(i, j);
            if (std::fabs(v) > 1.0 + slack)
                throw DomainError("correlation entry out of [-1,1]: " + std::to_string(v));
            if (v > 1.0) m.set(i, j, 1.0);
            if (v < -1.0) m.set(i, j, -1.0);
        }
    }
    return CorrelationMatrix(std::move(m));
}

void SparsityClassParams::validate() const {
    if (!(q >= 0.0 && q < 1.0)) throw DomainError("sparsity q must lie in [0,1)");
    if (!(c > 0.0)) throw DomainError("sparsity radius c must be positive");
    if (!(M > 0.0 && m > 0.0 && v > 0.0)) throw DomainError("constants M, m, v must be positive");
    if (!(eta_l > 1.0)) throw DomainError("eta_l must exceed 1");
    if (!(eta_u > 1.0)) throw DomainError("eta_u must exceed 1");
    if (q == 0.0 && (c != std::floor(c) || c < 1.0))
        throw DomainError("q = 0 requires the radius c to be a positive integer");
}

} // namespace tauthresh
