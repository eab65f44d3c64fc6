#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace giant {

struct Bracket {
    double lo;
    double hi;
};

// Sign-change brackets of f on a uniform grid over [lo, hi].
std::vector<Bracket> sign_change_brackets(const std::function<double(double)>& f, double lo, double hi,
                                          std::size_t samples);

// Bisection until the bracket is narrower than tol. Requires f(lo)*f(hi) <= 0.
double bisect(const std::function<double(double)>& f, Bracket b, double tol, int max_iter = 200);

}  // namespace giant
