#include "vmfkl/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <sstream>

#include "vmfkl/errors.hpp"

namespace vmfkl {
namespace {

// 21-point Kronrod abscissae on [-1, 1] (positive half, descending); odd
// indices are shared with the 10-point Gauss rule.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_21(const Integrand& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    double kronrod = kWgk[10] * fc;
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kXgk[j];
        const double pair = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * pair;
        if (j % 2 == 1) gauss += kWg[j / 2] * pair;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

QuadratureResult integrate_panels(const Integrand& f, const std::vector<double>& breaks,
                                  const QuadratureOptions& opts) {
    QuadratureResult out;
    if (breaks.size() < 2) return out;

    std::priority_queue<Segment> heap;
    double total = 0.0;
    double total_err = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i] == breaks[i + 1]) continue;
        Segment s = gauss_kronrod_21(f, breaks[i], breaks[i + 1]);
        out.nodes_used += 21;
        total += s.value;
        total_err += s.error;
        heap.push(s);
    }

    std::size_t intervals = heap.size();
    while (!heap.empty() &&
           total_err > std::max(opts.abs_tol, opts.rel_tol * std::abs(total))) {
        if (intervals >= opts.max_intervals) {
            std::ostringstream msg;
            msg << "adaptive quadrature did not converge: value " << total << ", error estimate "
                << total_err << " after " << intervals << " intervals";
            throw QuadratureError(msg.str());
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            throw QuadratureError("adaptive quadrature reached an interval below machine resolution");
        }
        Segment left = gauss_kronrod_21(f, worst.a, mid);
        Segment right = gauss_kronrod_21(f, mid, worst.b);
        out.nodes_used += 42;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++intervals;
    }

    // Recompute from the heap so the running sum's cancellation error does not leak out.
    total = 0.0;
    total_err = 0.0;
    while (!heap.empty()) {
        total += heap.top().value;
        total_err += heap.top().error;
        heap.pop();
    }
    out.value = total;
    out.abs_error_estimate = total_err;
    return out;
}

QuadratureResult integrate(const Integrand& f, double a, double b, const QuadratureOptions& opts) {
    return integrate_panels(f, {a, b}, opts);
}

QuadratureResult integrate_to_infinity(const Integrand& f, double a, const QuadratureOptions& opts) {
    auto mapped = [&f, a](double u) {
        const double t = a + (1.0 - u) / u;
        const double y = f(t);
        return y == 0.0 ? 0.0 : y / (u * u);
    };
    return integrate_panels(mapped, {0.0, 0.5, 1.0}, opts);
}

}  // namespace vmfkl
