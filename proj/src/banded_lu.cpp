#include "besa/banded_lu.hpp"

namespace besa {

BandedLU::BandedLU(std::size_t n, std::size_t kl, std::size_t ku)
    : n_(n), kl_(kl), ku_(ku), ld_(2 * kl + ku + 1), data_(storage_size(n, kl, ku)), pivots_(n) {
    if (n == 0) {
        throw std::invalid_argument("BandedLU: empty matrix");
    }
}

void BandedLU::set(std::size_t i, std::size_t j, Complex v) {
    if (i >= n_ || j >= n_ || (i > j && i - j > kl_) || (j > i && j - i > ku_)) {
        throw std::out_of_range("BandedLU::set: entry outside the band");
    }
    at(i, j) = v;
}

void BandedLU::factorize() {
    if (factorized_) {
        return;
    }
    const std::size_t span_u = kl_ + ku_;  // upper bandwidth of U after pivoting
    for (std::size_t k = 0; k < n_; ++k) {
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        std::size_t p = k;
        double best = std::abs(at(k, k));
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            const double v = std::abs(at(i, k));
            if (v > best) {
                best = v;
                p = i;
            }
        }
        pivots_[k] = p;
        if (best == 0.0) {
            throw FactorizationError("BandedLU: zero pivot in column " + std::to_string(k));
        }
        const std::size_t last_col = std::min(n_ - 1, k + span_u);
        if (p != k) {
            for (std::size_t j = k; j <= last_col; ++j) {
                std::swap(at(k, j), at(p, j));
            }
        }
        const Complex inv = 1.0 / at(k, k);
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            at(i, k) *= inv;
        }
        for (std::size_t j = k + 1; j <= last_col; ++j) {
            const Complex ukj = at(k, j);
            if (ukj == Complex{}) {
                continue;
            }
            for (std::size_t i = k + 1; i <= last_row; ++i) {
                at(i, j) -= at(i, k) * ukj;
            }
        }
    }
    factorized_ = true;
}

void BandedLU::solve(std::span<Complex> b) const {
    if (!factorized_) {
        throw std::logic_error("BandedLU::solve: matrix not factorized");
    }
    if (b.size() != n_) {
        throw std::invalid_argument("BandedLU::solve: right-hand side has wrong length");
    }
    // L y = P b
    for (std::size_t k = 0; k < n_; ++k) {
        if (pivots_[k] != k) {
            std::swap(b[k], b[pivots_[k]]);
        }
        const std::size_t last_row = std::min(n_ - 1, k + kl_);
        const Complex bk = b[k];
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            b[i] -= at(i, k) * bk;
        }
    }
    // U x = y
    const std::size_t span_u = kl_ + ku_;
    for (std::size_t kk = n_; kk-- > 0;) {
        const std::size_t last_col = std::min(n_ - 1, kk + span_u);
        Complex s = b[kk];
        for (std::size_t j = kk + 1; j <= last_col; ++j) {
            s -= at(kk, j) * b[j];
        }
        b[kk] = s / at(kk, kk);
    }
}

}  // namespace besa
