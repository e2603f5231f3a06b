#include "fmr/interval.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace fmr
{

namespace
{

constexpr double inf = std::numeric_limits<double>::infinity();

double down(double x) noexcept
{
    return std::nextafter(x, -inf);
}

double up(double x) noexcept
{
    return std::nextafter(x, inf);
}

// Knuth two-sum: a + b == s + err exactly.
double sum_error(double a, double b, double s) noexcept
{
    const double bb = s - a;
    return (a - (s - bb)) + (b - bb);
}

// a * b == p + err exactly (barring underflow).
double product_error(double a, double b, double p) noexcept
{
#ifdef FP_FAST_FMA
    return std::fma(a, b, -p);
#else
    // Dekker/Veltkamp splitting.
    constexpr double split = 134217729.0; // 2^27 + 1
    const auto halves = [](double x) {
        const double c = split * x;
        const double hi = c - (c - x);
        return std::pair{hi, x - hi};
    };
    const auto [ah, al] = halves(a);
    const auto [bh, bl] = halves(b);
    return ((ah * bh - p) + ah * bl + al * bh) + al * bl;
#endif
}

double add_down(double a, double b) noexcept
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        return s;
    }
    return sum_error(a, b, s) < 0 ? down(s) : s;
}

double add_up(double a, double b) noexcept
{
    const double s = a + b;
    if (!std::isfinite(s)) {
        return s;
    }
    return sum_error(a, b, s) > 0 ? up(s) : s;
}

double mul_down(double a, double b) noexcept
{
    const double p = a * b;
    if (!std::isfinite(p)) {
        return p;
    }
    return product_error(a, b, p) < 0 ? down(p) : p;
}

double mul_up(double a, double b) noexcept
{
    const double p = a * b;
    if (!std::isfinite(p)) {
        return p;
    }
    return product_error(a, b, p) > 0 ? up(p) : p;
}

// Sign of (a / b - q), where q is the rounded quotient.
int quotient_error_sign(double a, double b, double q) noexcept
{
    const double p = q * b;
    const double r = (a - p) - product_error(q, b, p);
    if (r == 0) {
        return 0;
    }
    return ((r > 0) == (b > 0)) ? 1 : -1;
}

double div_down(double a, double b) noexcept
{
    const double q = a / b;
    if (!std::isfinite(q)) {
        return q;
    }
    return quotient_error_sign(a, b, q) < 0 ? down(q) : q;
}

double div_up(double a, double b) noexcept
{
    const double q = a / b;
    if (!std::isfinite(q)) {
        return q;
    }
    return quotient_error_sign(a, b, q) > 0 ? up(q) : q;
}

// Propagation of the special variants; returns true when r was set.
bool special(const Interval &a, const Interval &b, Interval &r) noexcept
{
    if (a.is_empty() || b.is_empty()) {
        r = Interval::empty();
        return true;
    }
    if (a.is_unbounded() || b.is_unbounded()) {
        r = Interval::unbounded();
        return true;
    }
    return false;
}

// True when some point offset + k * period may lie in [lo, hi]. Errs on the
// side of reporting a hit, which only widens the result.
bool may_hit(double lo, double hi, double offset, double period) noexcept
{
    constexpr double slack = 1e-12;
    const double klo = std::ceil((lo - offset) / period - slack);
    const double khi = std::floor((hi - offset) / period + slack);
    return klo <= khi;
}

// Outward enclosure of a libm trig value, clamped to [-1, 1].
std::pair<double, double> trig_point(double (*f)(double), double x) noexcept
{
    if (x == 0) {
        const double v = f(0.0); // sin(0) = 0 and cos(0) = 1 are exact
        return {v, v};
    }
    const double v = f(x);
    return {std::max(-1.0, down(down(v))), std::min(1.0, up(up(v)))};
}

Interval trig_range(const Interval &a, double (*f)(double), double max_at, double min_at) noexcept
{
    if (a.is_empty()) {
        return a;
    }
    constexpr double two_pi = 2 * std::numbers::pi;
    if (!a.is_bounded() || a.hi() - a.lo() >= two_pi || std::max(std::abs(a.lo()), std::abs(a.hi())) > 1e6) {
        return Interval::from_sorted(-1.0, 1.0);
    }
    const auto [l0, h0] = trig_point(f, a.lo());
    const auto [l1, h1] = trig_point(f, a.hi());
    double lo = std::min(l0, l1);
    double hi = std::max(h0, h1);
    if (may_hit(a.lo(), a.hi(), max_at, two_pi)) {
        hi = 1.0;
    }
    if (may_hit(a.lo(), a.hi(), min_at, two_pi)) {
        lo = -1.0;
    }
    return Interval::from_sorted(lo, hi);
}

} // namespace

Interval::Interval(double x) : lo_(x), hi_(x)
{
    if (std::isnan(x)) {
        throw std::invalid_argument("Interval: NaN endpoint");
    }
}

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi)
{
    if (std::isnan(lo) || std::isnan(hi)) {
        throw std::invalid_argument("Interval: NaN endpoint");
    }
    if (lo > hi) {
        throw std::invalid_argument("Interval: lower bound exceeds upper bound");
    }
}

Interval Interval::from_sorted(double lo, double hi) noexcept
{
    Interval r;
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
}

Interval Interval::empty() noexcept
{
    Interval r;
    r.lo_ = inf;
    r.hi_ = -inf;
    r.kind_ = kind::empty;
    return r;
}

Interval Interval::unbounded() noexcept
{
    Interval r;
    r.lo_ = -inf;
    r.hi_ = inf;
    r.kind_ = kind::unbounded;
    return r;
}

// std::numbers::pi rounds below the true value.
Interval Interval::pi() noexcept
{
    return from_sorted(std::numbers::pi, up(std::numbers::pi));
}

Interval Interval::two_pi() noexcept
{
    return from_sorted(2 * std::numbers::pi, 2 * up(std::numbers::pi));
}

Interval Interval::half_pi() noexcept
{
    return from_sorted(std::numbers::pi / 2, up(std::numbers::pi) / 2);
}

bool operator==(const Interval &a, const Interval &b) noexcept
{
    if (a.kind_ != b.kind_) {
        return false;
    }
    return !a.is_bounded() || (a.lo_ == b.lo_ && a.hi_ == b.hi_);
}

Interval operator+(const Interval &a, const Interval &b) noexcept
{
    Interval r;
    if (special(a, b, r)) {
        return r;
    }
    return Interval::from_sorted(add_down(a.lo(), b.lo()), add_up(a.hi(), b.hi()));
}

Interval operator-(const Interval &a, const Interval &b) noexcept
{
    Interval r;
    if (special(a, b, r)) {
        return r;
    }
    return Interval::from_sorted(add_down(a.lo(), -b.hi()), add_up(a.hi(), -b.lo()));
}

Interval operator-(const Interval &a) noexcept
{
    if (!a.is_bounded()) {
        return a;
    }
    return Interval::from_sorted(-a.hi(), -a.lo());
}

Interval operator*(const Interval &a, const Interval &b) noexcept
{
    Interval r;
    if (special(a, b, r)) {
        return r;
    }
    const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
    const double lo = std::min({mul_down(al, bl), mul_down(al, bh), mul_down(ah, bl), mul_down(ah, bh)});
    const double hi = std::max({mul_up(al, bl), mul_up(al, bh), mul_up(ah, bl), mul_up(ah, bh)});
    return Interval::from_sorted(lo, hi);
}

Interval operator/(const Interval &a, const Interval &b) noexcept
{
    Interval r;
    if (special(a, b, r)) {
        return r;
    }
    if (contains_zero(b)) {
        return Interval::unbounded();
    }
    const double al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
    const double lo = std::min({div_down(al, bl), div_down(al, bh), div_down(ah, bl), div_down(ah, bh)});
    const double hi = std::max({div_up(al, bl), div_up(al, bh), div_up(ah, bl), div_up(ah, bh)});
    return Interval::from_sorted(lo, hi);
}

Interval sqr(const Interval &a) noexcept
{
    if (!a.is_bounded()) {
        return a;
    }
    const double l = std::abs(a.lo());
    const double h = std::abs(a.hi());
    const double big = std::max(l, h);
    const double small = contains_zero(a) ? 0.0 : std::min(l, h);
    return Interval::from_sorted(mul_down(small, small), mul_up(big, big));
}

Interval pow(const Interval &a, unsigned n) noexcept
{
    if (n == 0) {
        return a.is_empty() ? a : Interval(1.0);
    }
    if (n == 1) {
        return a;
    }
    const Interval half = pow(a, n / 2);
    const Interval even = sqr(half);
    return (n % 2 == 0) ? even : even * a;
}

Interval sin(const Interval &a) noexcept
{
    constexpr double pi = std::numbers::pi;
    return trig_range(a, [](double x) { return std::sin(x); }, pi / 2, -pi / 2);
}

Interval cos(const Interval &a) noexcept
{
    constexpr double pi = std::numbers::pi;
    return trig_range(a, [](double x) { return std::cos(x); }, 0.0, pi);
}

Interval hull(const Interval &a, const Interval &b) noexcept
{
    if (a.is_empty()) {
        return b;
    }
    if (b.is_empty()) {
        return a;
    }
    if (a.is_unbounded() || b.is_unbounded()) {
        return Interval::unbounded();
    }
    return Interval::from_sorted(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval intersect(const Interval &a, const Interval &b) noexcept
{
    if (a.is_empty() || b.is_empty()) {
        return Interval::empty();
    }
    if (a.is_unbounded()) {
        return b;
    }
    if (b.is_unbounded()) {
        return a;
    }
    const double lo = std::max(a.lo(), b.lo());
    const double hi = std::min(a.hi(), b.hi());
    if (lo > hi) {
        return Interval::empty();
    }
    return Interval::from_sorted(lo, hi);
}

double width(const Interval &a) noexcept
{
    if (a.is_empty()) {
        return 0.0;
    }
    if (a.is_unbounded()) {
        return inf;
    }
    return add_up(a.hi(), -a.lo());
}

double midpoint(const Interval &a)
{
    if (!a.is_bounded()) {
        throw std::domain_error("midpoint of an empty or unbounded interval");
    }
    return a.lo() + (a.hi() - a.lo()) / 2;
}

std::pair<Interval, Interval> bisect(const Interval &a)
{
    if (!a.is_bounded() || a.is_point()) {
        throw std::domain_error("bisect requires a bounded interval of positive width");
    }
    const double m = midpoint(a);
    return {Interval::from_sorted(a.lo(), m), Interval::from_sorted(m, a.hi())};
}

bool contains(const Interval &a, double x) noexcept
{
    if (a.is_empty()) {
        return false;
    }
    if (a.is_unbounded()) {
        return true;
    }
    return a.lo() <= x && x <= a.hi();
}

bool contains_zero(const Interval &a) noexcept
{
    return contains(a, 0.0);
}

bool subset(const Interval &a, const Interval &b) noexcept
{
    if (a.is_empty()) {
        return true;
    }
    if (b.is_unbounded()) {
        return true;
    }
    if (a.is_unbounded() || b.is_empty()) {
        return false;
    }
    return b.lo() <= a.lo() && a.hi() <= b.hi();
}

bool overlaps(const Interval &a, const Interval &b) noexcept
{
    return !intersect(a, b).is_empty();
}

double mag(const Interval &a) noexcept
{
    if (a.is_empty()) {
        return 0.0;
    }
    if (a.is_unbounded()) {
        return inf;
    }
    return std::max(std::abs(a.lo()), std::abs(a.hi()));
}

std::ostream &operator<<(std::ostream &os, const Interval &a)
{
    if (a.is_empty()) {
        return os << "empty";
    }
    if (a.is_unbounded()) {
        return os << "unbounded";
    }
    return os << '[' << a.lo() << ", " << a.hi() << ']';
}

} // namespace fmr
