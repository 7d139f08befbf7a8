#include "opconvex/random.hpp"

#include <cmath>

#include "opconvex/errors.hpp"

namespace opconvex {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix_seed(mix_seed(master) ^ (index * 0xD1B54A32D192ED03ULL + 1));
}

ComplexMatrix complex_gaussian(Rng& rng, int rows, int cols) {
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix g(rows, cols);
    for (int j = 0; j < cols; ++j) {
        for (int i = 0; i < rows; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = Complex(re, im);
        }
    }
    return g;
}

ComplexMatrix haar_isometry(Rng& rng, int rows, int cols) {
    if (cols < 1 || rows < cols) {
        throw DimensionError("haar_isometry needs rows >= cols >= 1");
    }
    const ComplexMatrix g = complex_gaussian(rng, rows, cols);
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(rows, cols);
    const ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
    for (int j = 0; j < cols; ++j) {
        const Complex d = r(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) {
            q.col(j) *= d / mag;
        }
    }
    return q;
}

ComplexMatrix haar_unitary(Rng& rng, int dim) { return haar_isometry(rng, dim, dim); }

}  // namespace opconvex
