#include "fmr/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

namespace fmr::oracle
{

namespace
{

using vec3 = std::array<double, 3>;

constexpr double pi = std::numbers::pi;

double dot(const vec3 &a, const vec3 &b) noexcept
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double distance(const vec3 &a, const vec3 &b) noexcept
{
    return std::hypot(a[0] - b[0], a[1] - b[1], a[2] - b[2]);
}

vec3 normalized(const vec3 &v) noexcept
{
    const double n = std::hypot(v[0], v[1], v[2]);
    return {v[0] / n, v[1] / n, v[2] / n};
}

vec3 unit(double theta, double phi) noexcept
{
    return {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
}

double polar_angle(const vec3 &m) noexcept
{
    return std::atan2(std::hypot(m[0], m[1]), m[2]);
}

double wrap_phi(double phi) noexcept
{
    phi = std::fmod(phi, 2 * pi);
    if (phi < 0) {
        phi += 2 * pi;
    }
    return phi >= 2 * pi ? 0.0 : phi;
}

// Energy density on the unit sphere in Cartesian form:
//   E(m) = -M_s H (m . h) + a (mx^2 + my^2) + K_4 (mx^2 + my^2)^2
// with a = pi M_s^2 + K_u.
struct model {
    double ms = 0.0;
    double zeeman = 0.0; // M_s H
    double a = 0.0;
    double k4 = 0.0;
    vec3 hhat{};
    double phi_h = 0.0;
    bool axial = false;

    model(const FieldDirection &dir, const MaterialParams &p, double h)
    {
        ms = p.four_pi_ms / (4 * pi);
        zeeman = ms * h;
        a = p.k_u + (p.demag ? pi * ms * ms : 0.0);
        k4 = p.k_4;
        phi_h = dir.phi_h();
        axial = dir.axial();
        const double sh = midpoint(dir.sin_theta_h());
        const double ch = midpoint(dir.cos_theta_h());
        hhat = {sh * std::cos(phi_h), sh * std::sin(phi_h), ch};
    }

    [[nodiscard]] double energy(const vec3 &m) const noexcept
    {
        const double rho = m[0] * m[0] + m[1] * m[1];
        return -zeeman * dot(m, hhat) + a * rho + k4 * rho * rho;
    }

    [[nodiscard]] vec3 gradient(const vec3 &m) const noexcept
    {
        const double rho = m[0] * m[0] + m[1] * m[1];
        const double c = 2 * a + 4 * k4 * rho;
        return {-zeeman * hhat[0] + c * m[0], -zeeman * hhat[1] + c * m[1], -zeeman * hhat[2]};
    }

    // e^T (Hessian of E in R^3) f
    [[nodiscard]] double hessian(const vec3 &m, const vec3 &e, const vec3 &f) const noexcept
    {
        const double rho = m[0] * m[0] + m[1] * m[1];
        const double c = 2 * a + 4 * k4 * rho;
        const double me = m[0] * e[0] + m[1] * e[1];
        const double mf = m[0] * f[0] + m[1] * f[1];
        return c * (e[0] * f[0] + e[1] * f[1]) + 8 * k4 * me * mf;
    }

    // Keeps axial-mode points on the half meridian phi = phi_h (E is symmetric
    // under rotations about the axis, so this loses nothing).
    [[nodiscard]] vec3 project(const vec3 &m) const noexcept
    {
        return axial ? unit(polar_angle(m), phi_h) : m;
    }

    [[nodiscard]] double scale() const noexcept { return zeeman + 2 * std::abs(a) + 4 * std::abs(k4); }
};

struct frame {
    vec3 e1; // along increasing theta
    vec3 e2; // along increasing phi
};

frame frame_at(const model &md, const vec3 &m) noexcept
{
    const double theta = polar_angle(m);
    const double phi = md.axial ? md.phi_h : std::atan2(m[1], m[0]);
    const double ct = std::cos(theta), st = std::sin(theta);
    const double cp = std::cos(phi), sp = std::sin(phi);
    return {{ct * cp, ct * sp, -st}, {-sp, cp, 0.0}};
}

// Gradient and covariant Hessian of E restricted to the sphere, in the tangent frame.
struct curvature {
    double g1, g2;
    double h11, h12, h22;

    [[nodiscard]] double det() const noexcept { return h11 * h22 - h12 * h12; }
    [[nodiscard]] double min_eigenvalue() const noexcept
    {
        const double mean = (h11 + h22) / 2;
        return mean - std::hypot((h11 - h22) / 2, h12);
    }
};

curvature curvature_at(const model &md, const vec3 &m, const frame &f) noexcept
{
    const vec3 g = md.gradient(m);
    const double radial = dot(m, g);
    return {dot(f.e1, g), dot(f.e2, g), md.hessian(m, f.e1, f.e1) - radial, md.hessian(m, f.e1, f.e2),
            md.hessian(m, f.e2, f.e2) - radial};
}

vec3 moved(const model &md, const vec3 &m, const frame &f, double a, double b) noexcept
{
    return md.project(normalized({m[0] + a * f.e1[0] + b * f.e2[0], m[1] + a * f.e1[1] + b * f.e2[1],
                                  m[2] + a * f.e1[2] + b * f.e2[2]}));
}

bool stable(const model &md, const vec3 &m) noexcept
{
    const curvature c = curvature_at(md, m, frame_at(md, m));
    if (md.axial) {
        return c.h11 > 0;
    }
    return c.h11 > 0 && c.det() > 0;
}

double stiffness_ratio(const model &md, const vec3 &m) noexcept
{
    const curvature c = curvature_at(md, m, frame_at(md, m));
    const double lambda = md.axial ? c.h11 : c.min_eigenvalue();
    return lambda / md.scale();
}

double omega_sq(const model &md, const vec3 &m) noexcept
{
    const curvature c = curvature_at(md, m, frame_at(md, m));
    return c.det() / (md.ms * md.ms);
}

// Newton iteration on the tangential gradient. Returns false when the
// Hessian is not positive definite along the way or the iteration stalls.
bool newton(const model &md, vec3 &m)
{
    constexpr int max_iter = 40;
    constexpr double max_step = 0.1;
    for (int it = 0; it < max_iter; ++it) {
        const frame f = frame_at(md, m);
        const curvature c = curvature_at(md, m, f);
        double da = 0.0, db = 0.0;
        if (md.axial) {
            if (!(c.h11 > 0)) {
                return false;
            }
            da = -c.g1 / c.h11;
        } else {
            const double det = c.det();
            if (!(c.h11 > 0 && det > 0)) {
                return false;
            }
            da = -(c.h22 * c.g1 - c.h12 * c.g2) / det;
            db = -(c.h11 * c.g2 - c.h12 * c.g1) / det;
        }
        const double norm = std::hypot(da, db);
        if (norm > max_step) {
            da *= max_step / norm;
            db *= max_step / norm;
        }
        m = moved(md, m, f, da, db);
        if (norm < 1e-13) {
            return true;
        }
    }
    const curvature c = curvature_at(md, m, frame_at(md, m));
    return std::hypot(c.g1, c.g2) <= 1e-9 * md.scale();
}

// Pattern search along the tangent frame, halving the step down to 1e-10 rad.
void descend(const model &md, vec3 &m, double step)
{
    double e = md.energy(m);
    while (step >= 1e-10) {
        const frame f = frame_at(md, m);
        bool improved = false;
        for (int axis = 0; axis < (md.axial ? 1 : 2) && !improved; ++axis) {
            for (const double sign : {1.0, -1.0}) {
                const vec3 c = axis == 0 ? moved(md, m, f, sign * step, 0.0) : moved(md, m, f, 0.0, sign * step);
                const double ec = md.energy(c);
                if (ec < e) {
                    m = c;
                    e = ec;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) {
            step /= 2;
        }
    }
}

// Lexicographic (value, index) order breaks ties on flat plateaus.
bool less_node(double ea, long ia, double eb, long ib) noexcept
{
    return ea < eb || (ea == eb && ia < ib);
}

std::vector<vec3> grid_minima(const model &md)
{
    constexpr int nt = grid_theta;
    constexpr int np = grid_phi - 1; // the last column repeats the first
    const double dt = pi / (nt - 1);
    const double dp = 2 * pi / np;

    std::vector<vec3> out;
    if (md.axial) {
        std::vector<double> e(nt);
        for (int i = 0; i < nt; ++i) {
            e[i] = md.energy(unit(i * dt, md.phi_h));
        }
        for (int i = 0; i < nt; ++i) {
            const bool below = i == 0 || less_node(e[i], i, e[i - 1], i - 1);
            const bool above = i == nt - 1 || less_node(e[i], i, e[i + 1], i + 1);
            if (below && above) {
                out.push_back(unit(i * dt, md.phi_h));
            }
        }
        return out;
    }

    std::vector<double> cp(np), sp(np), st(nt), ct(nt);
    for (int j = 0; j < np; ++j) {
        cp[j] = std::cos(j * dp);
        sp[j] = std::sin(j * dp);
    }
    for (int i = 0; i < nt; ++i) {
        st[i] = std::sin(i * dt);
        ct[i] = std::cos(i * dt);
    }
    // Rows 1 .. nt-2 hold the interior; the poles are single nodes.
    const int rows = nt - 2;
    std::vector<double> e(static_cast<std::size_t>(rows) * np);
    for (int r = 0; r < rows; ++r) {
        const int i = r + 1;
        for (int j = 0; j < np; ++j) {
            e[static_cast<std::size_t>(r) * np + j] = md.energy({st[i] * cp[j], st[i] * sp[j], ct[i]});
        }
    }
    const double north = md.energy({0.0, 0.0, 1.0});
    const double south = md.energy({0.0, 0.0, -1.0});
    constexpr long north_id = -1;
    const long south_id = static_cast<long>(rows) * np;
    const auto at = [&](int r, int j) { return e[static_cast<std::size_t>(r) * np + ((j + np) % np)]; };
    const auto id = [&](int r, int j) { return static_cast<long>(r) * np + ((j + np) % np); };

    bool north_min = true, south_min = true;
    for (int j = 0; j < np; ++j) {
        north_min = north_min && less_node(north, north_id, at(0, j), id(0, j));
        south_min = south_min && less_node(south, south_id, at(rows - 1, j), id(rows - 1, j));
    }
    if (north_min) {
        out.push_back({0.0, 0.0, 1.0});
    }

    for (int r = 0; r < rows; ++r) {
        for (int j = 0; j < np; ++j) {
            const double v = at(r, j);
            const long vid = id(r, j);
            bool is_min = true;
            for (int dr = -1; dr <= 1 && is_min; ++dr) {
                const int rr = r + dr;
                for (int dj = -1; dj <= 1 && is_min; ++dj) {
                    if (dr == 0 && dj == 0) {
                        continue;
                    }
                    if (rr < 0) {
                        is_min = less_node(v, vid, north, north_id);
                    } else if (rr >= rows) {
                        is_min = less_node(v, vid, south, south_id);
                    } else {
                        is_min = less_node(v, vid, at(rr, j + dj), id(rr, j + dj));
                    }
                }
            }
            if (is_min) {
                out.push_back({st[r + 1] * cp[j], st[r + 1] * sp[j], ct[r + 1]});
            }
        }
    }
    if (south_min) {
        out.push_back({0.0, 0.0, -1.0});
    }
    return out;
}

std::vector<vec3> refined_minima(const model &md)
{
    std::vector<vec3> found;
    for (vec3 m : grid_minima(md)) {
        descend(md, m, pi / (grid_theta - 1));
        vec3 polished = m;
        if (newton(md, polished) && distance(polished, m) < 1e-6) {
            m = polished;
        }
        if (!stable(md, m)) {
            continue;
        }
        const bool duplicate
            = std::any_of(found.begin(), found.end(), [&](const vec3 &f) { return distance(f, m) < 1e-6; });
        if (!duplicate) {
            found.push_back(m);
        }
    }
    return found;
}

Equilibrium to_angles(const model &md, const vec3 &m) noexcept
{
    const double theta = polar_angle(m);
    if (md.axial || std::hypot(m[0], m[1]) == 0) {
        return {theta, md.phi_h};
    }
    return {theta, wrap_phi(std::atan2(m[1], m[0]))};
}

struct sample {
    double h;
    vec3 m;
    double w2; // (omega / gamma)^2
};

struct branch {
    int id = 0;
    std::vector<sample> samples;
    sample front, back; // extreme samples in H
    bool alive = true;
    // Fold ends: the branch vanishes within (h, h + width) above or (h - width, h) below.
    double fold_above = -1.0, fold_above_width = 0.0;
    double fold_below = -1.0, fold_below_width = 0.0;
};

class tracker
{
public:
    tracker(const FieldDirection &dir, const MaterialParams &p, const ScanOptions &opts)
        : dir_(dir), params_(p), opts_(opts)
    {
    }

    [[nodiscard]] model at(double h) const { return model(dir_, params_, h); }

    // Attempts the equilibrium at h starting from m. Returns false if the
    // iteration fails, lands on a non-minimum, or moves too far.
    bool follow(double h, vec3 &m) const
    {
        const model md = at(h);
        vec3 next = m;
        if (!newton(md, next) || !stable(md, next) || distance(next, m) > opts_.max_move) {
            return false;
        }
        m = next;
        return true;
    }

    sample make_sample(double h, const vec3 &m) const { return {h, m, omega_sq(at(h), m)}; }

    // Walks the branch edge (front or back) to target with adaptive sub-steps.
    // Returns false if the branch ended at a fold on the way.
    bool advance(branch &b, double target) const
    {
        const bool forward = target > b.back.h;
        sample cur = forward ? b.back : b.front;
        const double full = target - cur.h;
        double dh = full;
        while (cur.h != target) {
            const double nh = std::abs(target - cur.h) <= std::abs(dh) ? target : cur.h + dh;
            vec3 m = cur.m;
            if (follow(nh, m)) {
                cur = make_sample(nh, m);
                b.samples.push_back(cur);
                (forward ? b.back : b.front) = cur;
                dh = std::abs(dh * 2) < std::abs(full) ? dh * 2 : full;
                continue;
            }
            dh /= 2;
            if (std::abs(dh) < opts_.min_step / 2) {
                if (stiffness_ratio(at(cur.h), cur.m) < opts_.fold_ratio) {
                    if (forward) {
                        b.fold_above = cur.h;
                        b.fold_above_width = 2 * std::abs(dh);
                    } else {
                        b.fold_below = cur.h;
                        b.fold_below_width = 2 * std::abs(dh);
                    }
                    return false;
                }
                throw BranchJump(nh);
            }
        }
        return true;
    }

private:
    FieldDirection dir_;
    MaterialParams params_;
    ScanOptions opts_;
};

} // namespace

BranchJump::BranchJump(double h)
    : std::runtime_error("equilibrium branch lost near H = " + std::to_string(h) + " Oe"), h_(h)
{
}

std::vector<Equilibrium> equilibrium(const FieldDirection &dir, const MaterialParams &p, double h)
{
    if (!(h >= 0)) {
        throw std::invalid_argument("equilibrium: negative field");
    }
    const model md(dir, p, h);
    std::vector<Equilibrium> out;
    for (const vec3 &m : refined_minima(md)) {
        out.push_back(to_angles(md, m));
    }
    std::sort(out.begin(), out.end(), [](const Equilibrium &a, const Equilibrium &b) {
        return a.theta != b.theta ? a.theta < b.theta : a.phi < b.phi;
    });
    return out;
}

double omega_over_gamma_sq_at(const FieldDirection &dir, const MaterialParams &p, double h, const Equilibrium &eq)
{
    const model md(dir, p, h);
    return omega_sq(md, md.project(unit(eq.theta, eq.phi)));
}

std::vector<OracleRoot> scan_resonances(const FieldDirection &dir, const MaterialParams &p, double h_max, double step,
                                        const ScanOptions &opts)
{
    p.validate();
    if (!(step > 0) || !(h_max > 0)) {
        throw std::invalid_argument("scan_resonances: step and h_max must be positive");
    }
    const double gamma = p.g * gamma_per_g;
    const double target = (p.omega_exp / gamma) * (p.omega_exp / gamma);
    const tracker tr(dir, p, opts);

    std::vector<branch> branches;
    const auto rescan = [&](double h, double back_to) {
        for (const vec3 &m : refined_minima(tr.at(h))) {
            const bool known = std::any_of(branches.begin(), branches.end(), [&](const branch &b) {
                return b.alive && b.back.h == h && distance(b.back.m, m) < 1e-4;
            });
            if (known) {
                continue;
            }
            branch b;
            b.id = static_cast<int>(branches.size());
            b.front = b.back = tr.make_sample(h, m);
            b.samples.push_back(b.front);
            if (back_to < h) {
                tr.advance(b, back_to);
            }
            branches.push_back(std::move(b));
        }
    };

    const long count = static_cast<long>(std::floor(h_max / step + 1e-9));
    rescan(step, step);
    double next_scan = step + opts.rescan_interval;
    double last_scan = step;
    for (long k = 2; k <= count; ++k) {
        const double h = static_cast<double>(k) * step;
        for (auto &b : branches) {
            if (b.alive) {
                b.alive = tr.advance(b, h);
            }
        }
        // Two branches that meet are the same minimum from here on.
        for (std::size_t i = 0; i < branches.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j) {
                if (branches[i].alive && branches[j].alive && distance(branches[i].back.m, branches[j].back.m) < 1e-6) {
                    branches[i].alive = false;
                }
            }
        }
        if (h >= next_scan - 1e-9 || k == count) {
            rescan(h, last_scan);
            last_scan = h;
            next_scan += opts.rescan_interval;
        }
    }

    std::vector<OracleRoot> roots;
    const auto add_root = [&](const branch &b, double lo, double hi, const vec3 &seed) {
        OracleRoot r;
        r.branch = b.id;
        r.bracket_lo = lo;
        r.bracket_hi = hi;
        r.h_res = lo + (hi - lo) / 2;
        vec3 m = seed;
        tr.follow(r.h_res, m);
        const model md = tr.at(r.h_res);
        const Equilibrium eq = to_angles(md, m);
        r.theta_eq = eq.theta;
        r.phi_eq = eq.phi;
        r.omega_residual = gamma * std::sqrt(std::max(omega_sq(md, m), 0.0)) - p.omega_exp;
        roots.push_back(r);
    };

    for (auto &b : branches) {
        std::sort(b.samples.begin(), b.samples.end(), [](const sample &x, const sample &y) { return x.h < y.h; });
        b.samples.erase(std::unique(b.samples.begin(), b.samples.end(),
                                    [](const sample &x, const sample &y) { return x.h == y.h; }),
                        b.samples.end());
        for (std::size_t i = 0; i + 1 < b.samples.size(); ++i) {
            sample lo = b.samples[i];
            sample hi = b.samples[i + 1];
            if ((lo.w2 < target) == (hi.w2 < target)) {
                continue;
            }
            while (hi.h - lo.h > opts.refine_tol) {
                const double mid = lo.h + (hi.h - lo.h) / 2;
                vec3 m = lo.m;
                if (!tr.follow(mid, m)) {
                    throw BranchJump(mid);
                }
                const sample s = tr.make_sample(mid, m);
                ((s.w2 < target) == (lo.w2 < target) ? lo : hi) = s;
            }
            add_root(b, lo.h, hi.h, lo.m);
        }
        // omega falls to zero where a minimum vanishes; a branch that ends above
        // the target frequency crosses it inside the fold bracket.
        if (b.fold_above >= 0 && b.back.w2 > target) {
            add_root(b, b.back.h, b.back.h + b.fold_above_width, b.back.m);
        }
        if (b.fold_below >= 0 && b.front.w2 > target) {
            add_root(b, b.front.h - b.fold_below_width, b.front.h, b.front.m);
        }
    }
    std::sort(roots.begin(), roots.end(), [](const OracleRoot &a, const OracleRoot &b) {
        return a.h_res != b.h_res ? a.h_res < b.h_res : a.branch < b.branch;
    });
    return roots;
}

} // namespace fmr::oracle
