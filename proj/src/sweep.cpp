#include "fmr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace fmr
{

namespace
{

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

OrientationReport run_one(const SweepSpec &spec, double theta_deg)
{
    const auto t0 = clock_type::now();
    OrientationReport r;
    r.theta_ext_deg = theta_deg;
    const FieldDirection dir = FieldDirection::from_degrees(theta_deg, spec.phi_ext);
    r.results = solve_orientation(dir, spec.params, spec.cfg);
    if (spec.run_oracle) {
        try {
            r.oracle_roots = oracle::scan_resonances(dir, spec.params, spec.cfg.h_max, spec.oracle_step);
        } catch (const oracle::BranchJump &) {
            r.oracle_jump = true;
        }
    }
    r.seconds = seconds_since(t0);
    return r;
}

std::vector<std::string> split_fields(const std::string &line)
{
    std::vector<std::string> out;
    std::string::size_type start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) {
            return out;
        }
        start = comma + 1;
    }
}

double parse_number(const std::string &s, std::size_t line_no)
{
    double x = 0.0;
    const char *end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, x);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
    }
    return x;
}

std::size_t parse_count(const std::string &s, std::size_t line_no)
{
    std::size_t n = 0;
    const char *end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, n);
    if (ec != std::errc{} || ptr != end || s.empty()) {
        throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad integer '" + s + "'");
    }
    return n;
}

// 1, 2 or 5 times a power of ten, giving roughly `target` intervals over span.
double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (const double f : {1.0, 2.0, 5.0}) {
        if (f * mag >= raw) {
            return f * mag;
        }
    }
    return 10 * mag;
}

std::string fixed(double x, int digits = 2)
{
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << x;
    return os.str();
}

std::ofstream open_for_write(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    }
    return out;
}

} // namespace

void SweepSpec::validate() const
{
    if (!std::isfinite(theta_start) || !std::isfinite(theta_stop) || !std::isfinite(theta_step) ||
        !std::isfinite(phi_ext)) {
        throw std::invalid_argument("sweep: angles must be finite");
    }
    if (theta_step <= 0) {
        throw std::invalid_argument("sweep: theta step must be positive");
    }
    if (theta_start > theta_stop) {
        throw std::invalid_argument("sweep: theta start exceeds theta stop");
    }
    if (theta_start < 0 || theta_stop > 180) {
        throw std::invalid_argument("sweep: theta range must lie within [0, 180] degrees");
    }
    if (!(oracle_step > 0) || !std::isfinite(oracle_step)) {
        throw std::invalid_argument("sweep: oracle step must be positive");
    }
    params.validate();
    cfg.validate();
}

std::vector<double> SweepSpec::orientations() const
{
    std::vector<double> out;
    const double n = std::floor((theta_stop - theta_start) / theta_step + 1e-9);
    for (long i = 0; i <= static_cast<long>(n); ++i) {
        // start + i * step rather than accumulation, so 0, 2, 4 ... stay exact.
        out.push_back(std::min(theta_start + static_cast<double>(i) * theta_step, theta_stop));
    }
    return out;
}

std::size_t SweepReport::result_count() const noexcept
{
    std::size_t n = 0;
    for (const auto &o : orientations) {
        n += o.results.size();
    }
    return n;
}

SweepOverflow::SweepOverflow(double theta_ext_deg, std::size_t limit)
    : std::runtime_error("work list exceeded " + std::to_string(limit) + " boxes at theta_ext = " +
                         format_angle(theta_ext_deg) + " deg"),
      theta_(theta_ext_deg)
{
}

SweepReport run_sweep(const SweepSpec &spec)
{
    spec.validate();
    const auto t0 = clock_type::now();
    const std::vector<double> thetas = spec.orientations();

    SweepReport report;
    report.orientations.resize(thetas.size());
    std::vector<std::exception_ptr> errors(thetas.size());

    unsigned workers = spec.threads != 0 ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, thetas.size()));

    std::atomic<std::size_t> next{0};
    const auto work = [&] {
        for (std::size_t i = next++; i < thetas.size(); i = next++) {
            try {
                report.orientations[i] = run_one(spec, thetas[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    // Lowest orientation index wins so the reported failure does not depend on scheduling.
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (!errors[i]) {
            continue;
        }
        try {
            std::rethrow_exception(errors[i]);
        } catch (const ListOverflow &e) {
            throw SweepOverflow(thetas[i], e.limit());
        }
    }
    report.wall_seconds = seconds_since(t0);
    return report;
}

std::string format_double(double x)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_angle(double x)
{
    std::string s = format_double(x);
    if (std::isfinite(x) && s.find_first_of(".e") == std::string::npos) {
        s += ".0";
    }
    return s;
}

void write_csv(const SweepReport &report, std::ostream &out)
{
    out << csv_header << '\n';
    for (const auto &o : report.orientations) {
        const std::string theta = format_angle(o.theta_ext_deg);
        for (std::size_t i = 0; i < o.results.size(); ++i) {
            const ResonanceResult &r = o.results[i];
            out << theta << ',' << i << ',' << format_double(r.h_res.lo()) << ',' << format_double(r.h_res.hi())
                << ',' << to_string(r.status) << ',' << r.boxes_merged << '\n';
        }
    }
}

void emit_csv(const SweepReport &report, const std::filesystem::path &path)
{
    std::ofstream out = open_for_write(path);
    write_csv(report, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + path.string() + "' failed");
    }
}

SweepReport parse_csv(std::istream &in)
{
    SweepReport report;
    std::string line;
    if (!std::getline(in, line) || line != csv_header) {
        throw std::runtime_error("csv: missing or unexpected header");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 6) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": expected 6 fields");
        }
        const double theta = parse_number(f[0], line_no);
        const std::size_t branch = parse_count(f[1], line_no);
        ResonanceResult r;
        r.h_res = Interval(parse_number(f[2], line_no), parse_number(f[3], line_no));
        r.theta_hull = Interval::empty();
        r.phi_hull = Interval::empty();
        if (f[4] == "resonance") {
            r.status = ResonanceStatus::resonance;
        } else if (f[4] == "indeterminate") {
            r.status = ResonanceStatus::indeterminate;
        } else {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": bad status '" + f[4] + "'");
        }
        r.boxes_merged = parse_count(f[5], line_no);

        if (report.orientations.empty() || report.orientations.back().theta_ext_deg != theta) {
            report.orientations.push_back({});
            report.orientations.back().theta_ext_deg = theta;
        }
        auto &results = report.orientations.back().results;
        if (branch != results.size()) {
            throw std::runtime_error("csv line " + std::to_string(line_no) + ": branch index out of sequence");
        }
        results.push_back(r);
    }
    return report;
}

void write_svg(const SweepReport &report, std::ostream &out, int width, int height)
{
    const double left = 80, right = 30, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_lo = 0, x_hi = 180;
    if (!report.orientations.empty()) {
        x_lo = report.orientations.front().theta_ext_deg;
        x_hi = report.orientations.back().theta_ext_deg;
        for (const auto &o : report.orientations) {
            x_lo = std::min(x_lo, o.theta_ext_deg);
            x_hi = std::max(x_hi, o.theta_ext_deg);
        }
    }
    if (x_hi <= x_lo) {
        x_lo -= 1;
        x_hi += 1;
    }

    double y_hi = 0;
    for (const auto &o : report.orientations) {
        for (const auto &r : o.results) {
            y_hi = std::max(y_hi, r.h_res.hi());
        }
        for (const auto &root : o.oracle_roots) {
            y_hi = std::max(y_hi, root.h_res);
        }
    }
    const double y_lo = 0;
    const double y_step = nice_step(y_hi > 0 ? y_hi : 1000.0, 8);
    y_hi = y_hi > 0 ? std::ceil(y_hi / y_step) * y_step : 1000.0;
    if (y_hi <= 0) {
        y_hi = y_step;
    }
    const double x_step = nice_step(x_hi - x_lo, 6);

    const auto sx = [&](double x) { return left + (x - x_lo) / (x_hi - x_lo) * plot_w; };
    const auto sy = [&](double y) { return top + (1 - (y - y_lo) / (y_hi - y_lo)) * plot_h; };

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n"
        << "<rect x=\"" << fixed(left) << "\" y=\"" << fixed(top) << "\" width=\"" << fixed(plot_w)
        << "\" height=\"" << fixed(plot_h) << "\"/>\n"
        << "</g>\n";

    out << "<g class=\"ticks\" font-family=\"sans-serif\" font-size=\"12\">\n";
    for (double x = std::ceil(x_lo / x_step) * x_step; x <= x_hi + 1e-9; x += x_step) {
        out << "<line x1=\"" << fixed(sx(x)) << "\" y1=\"" << fixed(top + plot_h) << "\" x2=\"" << fixed(sx(x))
            << "\" y2=\"" << fixed(top + plot_h + 5) << "\" stroke=\"black\"/>"
            << "<text x=\"" << fixed(sx(x)) << "\" y=\"" << fixed(top + plot_h + 20)
            << "\" text-anchor=\"middle\">" << format_double(x) << "</text>\n";
    }
    for (double y = y_lo; y <= y_hi + 1e-9; y += y_step) {
        out << "<line x1=\"" << fixed(left - 5) << "\" y1=\"" << fixed(sy(y)) << "\" x2=\"" << fixed(left)
            << "\" y2=\"" << fixed(sy(y)) << "\" stroke=\"black\"/>"
            << "<text x=\"" << fixed(left - 8) << "\" y=\"" << fixed(sy(y) + 4) << "\" text-anchor=\"end\">"
            << format_double(y) << "</text>\n";
    }
    out << "<text x=\"" << fixed(left + plot_w / 2) << "\" y=\"" << fixed(height - 15.0)
        << "\" text-anchor=\"middle\">field angle (degrees)</text>\n"
        << "<text x=\"20\" y=\"" << fixed(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << fixed(top + plot_h / 2) << ")\">resonance field (Gs)</text>\n"
        << "</g>\n";

    // One group per CSV row: midpoint marker plus an error bar over the enclosure.
    out << "<g class=\"results\" stroke=\"#1f4e9c\" fill=\"#1f4e9c\">\n";
    for (const auto &o : report.orientations) {
        for (std::size_t i = 0; i < o.results.size(); ++i) {
            const ResonanceResult &r = o.results[i];
            const double x = sx(o.theta_ext_deg);
            const bool indet = r.status == ResonanceStatus::indeterminate;
            out << "<g class=\"result\" data-theta=\"" << format_angle(o.theta_ext_deg) << "\" data-branch=\"" << i
                << "\" data-status=\"" << to_string(r.status) << "\">"
                << "<line x1=\"" << fixed(x) << "\" y1=\"" << fixed(sy(r.h_res.lo())) << "\" x2=\"" << fixed(x)
                << "\" y2=\"" << fixed(sy(r.h_res.hi())) << "\"/>"
                << "<circle cx=\"" << fixed(x) << "\" cy=\"" << fixed(sy(midpoint(r.h_res))) << "\" r=\"2.5\""
                << (indet ? " fill=\"none\"" : "") << "/></g>\n";
        }
    }
    out << "</g>\n";

    bool any_oracle = false;
    for (const auto &o : report.orientations) {
        any_oracle = any_oracle || !o.oracle_roots.empty();
    }
    if (any_oracle) {
        out << "<g class=\"oracle\" stroke=\"#c0392b\" fill=\"none\">\n";
        for (const auto &o : report.orientations) {
            for (const auto &root : o.oracle_roots) {
                out << "<circle class=\"oracle-root\" cx=\"" << fixed(sx(o.theta_ext_deg)) << "\" cy=\""
                    << fixed(sy(root.h_res)) << "\" r=\"4\"/>\n";
            }
        }
        out << "</g>\n";
    }
    out << "</svg>\n";
}

void emit_svg(const SweepReport &report, const std::filesystem::path &path)
{
    std::ofstream out = open_for_write(path);
    write_svg(report, out);
    out.flush();
    if (!out) {
        throw std::runtime_error("write to '" + path.string() + "' failed");
    }
}

} // namespace fmr
