#pragma once

#include "besa/core.hpp"

#include <span>
#include <stdexcept>
#include <vector>

namespace besa {

class FactorizationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// General complex band matrix with LU factorization by partial pivoting.
///
/// Storage follows the LAPACK gbtrf layout: column-major, each column j holds
/// rows j - (ku + kl) .. j + kl, the extra kl superdiagonals receiving fill-in
/// from row interchanges. Element (i, j) lives at data[j * ld + (i - j + kl + ku)].
class BandedLU {
public:
    BandedLU(std::size_t n, std::size_t kl, std::size_t ku);

    [[nodiscard]] std::size_t size() const { return n_; }
    [[nodiscard]] std::size_t lower() const { return kl_; }
    [[nodiscard]] std::size_t upper() const { return ku_; }

    /// Sets entry (i, j) of the original matrix; |i - j| must be within the band.
    void set(std::size_t i, std::size_t j, Complex v);

    /// Factorizes in place. Throws FactorizationError on an exactly zero pivot.
    void factorize();

    /// Solves A x = b with the factorization; b is overwritten by x.
    void solve(std::span<Complex> b) const;

    [[nodiscard]] bool factorized() const { return factorized_; }

    /// Complex entries needed to store an n x n band with the given widths.
    static std::size_t storage_size(std::size_t n, std::size_t kl, std::size_t ku) { return n * (2 * kl + ku + 1); }

private:
    Complex& at(std::size_t i, std::size_t j) { return data_[j * ld_ + (i + kl_ + ku_ - j)]; }
    [[nodiscard]] const Complex& at(std::size_t i, std::size_t j) const { return data_[j * ld_ + (i + kl_ + ku_ - j)]; }

    std::size_t n_;
    std::size_t kl_;
    std::size_t ku_;
    std::size_t ld_;
    std::vector<Complex> data_;
    std::vector<std::size_t> pivots_;
    bool factorized_ = false;
};

}  // namespace besa
