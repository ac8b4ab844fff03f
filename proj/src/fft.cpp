#include "nsdecay/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace nsd {

namespace {

struct PlanKey {
    std::array<int, 3> dims;
    int n;
    int sign;
    bool operator<(const PlanKey& o) const {
        if (n != o.n) return n < o.n;
        if (dims != o.dims) return dims < o.dims;
        return sign < o.sign;
    }
};

fftw_plan get_plan(const GridSpec& g, int sign) {
    static std::map<PlanKey, fftw_plan> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    PlanKey key{g.dims, g.n, sign};
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // UNALIGNED + ESTIMATE: deterministic plans usable on arbitrary buffers.
    std::vector<cplx> buf(g.size());
    fftw_plan p = fftw_plan_dft(
        g.n, g.dims.data(), reinterpret_cast<fftw_complex*>(buf.data()),
        reinterpret_cast<fftw_complex*>(buf.data()), sign,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    cache[key] = p;
    return p;
}

}  // namespace

void fft_forward(const GridSpec& g, const cplx* in, cplx* out) {
    fftw_plan p = get_plan(g, FFTW_FORWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
    const double scale = 1.0 / double(g.size());
    const size_t nn = g.size();
    for (size_t i = 0; i < nn; ++i) out[i] *= scale;
}

void fft_backward(const GridSpec& g, const cplx* in, cplx* out) {
    fftw_plan p = get_plan(g, FFTW_BACKWARD);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

std::vector<cplx> fft_forward_real(const GridSpec& g, const std::vector<double>& phys) {
    std::vector<cplx> tmp(g.size()), out(g.size());
    for (size_t i = 0; i < g.size(); ++i) tmp[i] = phys[i];
    fft_forward(g, tmp.data(), out.data());
    return out;
}

std::vector<double> fft_backward_real(const GridSpec& g, const std::vector<cplx>& spec) {
    std::vector<cplx> tmp(g.size());
    fft_backward(g, spec.data(), tmp.data());
    std::vector<double> out(g.size());
    for (size_t i = 0; i < g.size(); ++i) out[i] = tmp[i].real();
    return out;
}

}  // namespace nsd
