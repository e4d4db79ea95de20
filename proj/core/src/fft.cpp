#include "dloc/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace dloc {
namespace {

enum class Kind { c2c_fwd, c2c_bwd, r2c, c2r };

std::mutex plan_mutex;
std::map<std::pair<int, Kind>, fftw_plan>& plan_cache() {
    static std::map<std::pair<int, Kind>, fftw_plan> cache;
    return cache;
}

fftw_plan get_plan(int n, Kind kind) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    auto it = cache.find({n, kind});
    if (it != cache.end()) return it->second;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    const std::size_t nn = std::size_t(n) * n;
    fftw_plan p = nullptr;
    switch (kind) {
    case Kind::c2c_fwd:
    case Kind::c2c_bwd: {
        auto* buf = fftw_alloc_complex(nn);
        p = fftw_plan_dft_2d(n, n, buf, buf, kind == Kind::c2c_fwd ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        fftw_free(buf);
        break;
    }
    case Kind::r2c: {
        auto* in = fftw_alloc_real(nn);
        auto* out = fftw_alloc_complex(std::size_t(n) * (n / 2 + 1));
        p = fftw_plan_dft_r2c_2d(n, n, in, out, flags);
        fftw_free(in);
        fftw_free(out);
        break;
    }
    case Kind::c2r: {
        auto* in = fftw_alloc_complex(std::size_t(n) * (n / 2 + 1));
        auto* out = fftw_alloc_real(nn);
        p = fftw_plan_dft_c2r_2d(n, n, in, out, flags);
        fftw_free(in);
        fftw_free(out);
        break;
    }
    }
    if (!p) throw std::runtime_error("fftw: plan creation failed");
    cache[{n, kind}] = p;
    return p;
}

fftw_complex* as_fftw(cplx* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

void fft2d_forward(cplx* data, int n) {
    fftw_execute_dft(get_plan(n, Kind::c2c_fwd), as_fftw(data), as_fftw(data));
}

void fft2d_backward(cplx* data, int n) {
    fftw_execute_dft(get_plan(n, Kind::c2c_bwd), as_fftw(data), as_fftw(data));
}

std::vector<cplx> rfft2d(const std::vector<double>& in, int n) {
    if (in.size() != std::size_t(n) * n) throw std::invalid_argument("rfft2d: size mismatch");
    std::vector<cplx> out(std::size_t(n) * (n / 2 + 1));
    // r2c does not touch its input, the const_cast is only for the C signature
    fftw_execute_dft_r2c(get_plan(n, Kind::r2c), const_cast<double*>(in.data()), as_fftw(out.data()));
    return out;
}

std::vector<double> irfft2d(const std::vector<cplx>& half, int n) {
    if (half.size() != std::size_t(n) * (n / 2 + 1)) throw std::invalid_argument("irfft2d: size mismatch");
    std::vector<cplx> scratch = half;  // c2r overwrites its input
    std::vector<double> out(std::size_t(n) * n);
    fftw_execute_dft_c2r(get_plan(n, Kind::c2r), as_fftw(scratch.data()), out.data());
    return out;
}

std::vector<double> abs_spectrum(const std::vector<double>& f, int n) {
    const auto half = rfft2d(f, n);
    const int h = n / 2 + 1;
    std::vector<double> out(std::size_t(n) * n);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            if (b < h) {
                out[std::size_t(a) * n + b] = std::abs(half[std::size_t(a) * h + b]);
            } else {
                const int ar = (n - a) % n, br = n - b;
                out[std::size_t(a) * n + b] = std::abs(half[std::size_t(ar) * h + br]);
            }
        }
    }
    return out;
}

std::vector<double> circular_convolve(const std::vector<double>& a, const std::vector<cplx>& b_half, int n) {
    return circular_convolve_half(rfft2d(a, n), b_half, n);
}

std::vector<double> circular_convolve_half(const std::vector<cplx>& a_half, const std::vector<cplx>& b_half, int n) {
    if (a_half.size() != b_half.size() || a_half.size() != std::size_t(n) * (n / 2 + 1))
        throw std::invalid_argument("circular_convolve: size mismatch");
    std::vector<cplx> prod(a_half.size());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = a_half[i] * b_half[i];
    std::vector<double> out(std::size_t(n) * n);
    fftw_execute_dft_c2r(get_plan(n, Kind::c2r), as_fftw(prod.data()), out.data());
    const double scale = 1.0 / (double(n) * n * double(n) * n);
    for (auto& v : out) v *= scale;
    return out;
}

}  // namespace dloc
