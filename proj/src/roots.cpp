#include "giant/roots.hpp"

#include <cmath>
#include <sstream>

#include "giant/error.hpp"

namespace giant {

std::vector<Bracket> sign_change_brackets(const std::function<double(double)>& f, double lo, double hi,
                                          std::size_t samples) {
    std::vector<Bracket> out;
    if (samples < 2 || !(hi > lo)) return out;
    const double step = (hi - lo) / static_cast<double>(samples - 1);
    double xa = lo;
    double fa = f(xa);
    for (std::size_t i = 1; i < samples; ++i) {
        const double xb = (i + 1 == samples) ? hi : lo + step * static_cast<double>(i);
        const double fb = f(xb);
        if (fa == 0.0 || fa * fb < 0.0) out.push_back({xa, xb});
        xa = xb;
        fa = fb;
    }
    if (fa == 0.0) out.push_back({xa, xa});
    return out;
}

double bisect(const std::function<double(double)>& f, Bracket b, double tol, int max_iter) {
    double lo = b.lo, hi = b.hi;
    double flo = f(lo);
    if (flo == 0.0) return lo;
    const double fhi = f(hi);
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) {
        std::ostringstream msg;
        msg << "bisect: no sign change on [" << lo << ", " << hi << "] (f=" << flo << ", " << fhi << ")";
        throw NumericError(msg.str());
    }
    for (int it = 0; it < max_iter; ++it) {
        if (hi - lo <= tol) return 0.5 * (lo + hi);
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    std::ostringstream msg;
    msg << "bisect: no convergence after " << max_iter << " iterations, bracket [" << lo << ", " << hi << "]";
    throw NumericError(msg.str());
}

}  // namespace giant
