#ifndef HSCRAN_FFT_HPP
#define HSCRAN_FFT_HPP

#include <cmath>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <type_traits>

#include <fftw3.h>

#include "hscran/types.hpp"

namespace hscran {

/// Unitary (1/sqrt(N)) complex DFT of one fixed size, backed by FFTW.
/// Owns an aligned scratch buffer; not safe to share between threads.
class Dft {
public:
    explicit Dft(std::size_t n) : n_(n), scale_(1.0 / std::sqrt(static_cast<double>(n))) {
        if (n == 0) throw std::invalid_argument("DFT size must be positive");
        buf_.reset(static_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n)));
        if (!buf_) throw std::bad_alloc();
        auto* p = reinterpret_cast<fftw_complex*>(buf_.get());
        const int ni = static_cast<int>(n);
        fwd_.reset(fftw_plan_dft_1d(ni, p, p, FFTW_FORWARD, FFTW_ESTIMATE));
        inv_.reset(fftw_plan_dft_1d(ni, p, p, FFTW_BACKWARD, FFTW_ESTIMATE));
        if (!fwd_ || !inv_) throw std::runtime_error("fftw plan creation failed");
    }

    std::size_t size() const noexcept { return n_; }

    /// Working buffer; load input here, run forward()/inverse(), read output.
    std::span<cplx> buffer() noexcept { return {buf_.get(), n_}; }

    void forward() { run(fwd_.get()); }
    void inverse() { run(inv_.get()); }

private:
    struct FreeBuf {
        void operator()(cplx* p) const noexcept { fftw_free(p); }
    };
    struct FreePlan {
        void operator()(fftw_plan p) const noexcept { fftw_destroy_plan(p); }
    };
    using Plan = std::unique_ptr<std::remove_pointer_t<fftw_plan>, FreePlan>;

    void run(fftw_plan plan) {
        fftw_execute(plan);
        for (auto& v : buffer()) v *= scale_;
    }

    std::size_t n_;
    double scale_;
    std::unique_ptr<cplx, FreeBuf> buf_;
    Plan fwd_;
    Plan inv_;
};

} // namespace hscran

#endif // HSCRAN_FFT_HPP
