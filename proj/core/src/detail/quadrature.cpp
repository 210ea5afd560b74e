#include "detail/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "slowlight/errors.hpp"

namespace slowlight::detail {

namespace {

// 15-point Kronrod extension of 7-point Gauss, abscissae on [-1, 1].
constexpr std::array<double, 8> xk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr std::array<double, 8> wk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss-7 weights, matching xk[1], xk[3], xk[5], xk[7].
constexpr std::array<double, 4> wg = {0.129484966168870, 0.279705391489277,
                                      0.381830050505119, 0.417959183673469};

struct Panel {
    double a, b;
    cplx integral;
    double error;
};

Panel evaluate(const std::function<cplx(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    cplx ik(0.0, 0.0), ig(0.0, 0.0);
    for (int j = 0; j < 8; ++j) {
        const double dx = half * xk[j];
        const cplx fv = (j == 7) ? f(mid) : f(mid - dx) + f(mid + dx);
        ik += wk[j] * fv;
        if (j % 2 == 1) ig += wg[j / 2] * fv;
    }
    ik *= half;
    ig *= half;
    return {a, b, ik, std::abs(ik - ig)};
}

} // namespace

cplx integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                  double rel_tol, double abs_tol, int max_intervals) {
    if (a == b) return {0.0, 0.0};

    auto cmp = [](const Panel& p, const Panel& q) { return p.error < q.error; };
    std::priority_queue<Panel, std::vector<Panel>, decltype(cmp)> queue(cmp);
    queue.push(evaluate(f, a, b));

    cplx total = queue.top().integral;
    double total_err = queue.top().error;

    int n = 1;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (n >= max_intervals) {
            const Panel& worst = queue.top();
            throw numerical_error(
                "integrate_gk: quadrature failed to converge; worst subinterval [" +
                std::to_string(worst.a) + ", " + std::to_string(worst.b) +
                "] error " + std::to_string(worst.error));
        }
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid == worst.a || mid == worst.b) {
            throw numerical_error(
                "integrate_gk: subinterval underflow near t = " + std::to_string(mid));
        }
        Panel left = evaluate(f, worst.a, mid);
        Panel right = evaluate(f, mid, worst.b);
        total += left.integral + right.integral - worst.integral;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++n;
    }
    return total;
}

} // namespace slowlight::detail
