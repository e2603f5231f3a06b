#include "fmr/cli.hpp"

#include <ostream>

#include <CLI11.hpp>

#include "fmr/presets.hpp"

namespace fmr
{

namespace
{

struct raw_flags {
    double freq_ghz = 9.243;
    double g = 2.0;
    double ms4pi = 6400.0;
    double ku = 0.0;
    double k4 = 0.0;
    int preset = 0;
};

void report_oracle(const SweepReport &report, std::ostream &err)
{
    std::size_t agree = 0;
    for (const auto &o : report.orientations) {
        const std::string theta = format_angle(o.theta_ext_deg);
        if (o.oracle_jump) {
            err << "oracle: theta_ext=" << theta << " branch jump, no comparison\n";
            continue;
        }
        if (o.oracle_roots.size() == o.results.size()) {
            ++agree;
        } else {
            err << "oracle: theta_ext=" << theta << " solver " << o.results.size() << " oracle "
                << o.oracle_roots.size() << '\n';
        }
        for (const auto &root : o.oracle_roots) {
            bool inside = false;
            for (const auto &r : o.results) {
                inside = inside || overlaps(r.h_res, Interval(root.bracket_lo, root.bracket_hi));
            }
            if (!inside) {
                err << "oracle: theta_ext=" << theta << " root " << format_double(root.h_res)
                    << " Oe outside every enclosure\n";
            }
        }
    }
    err << "oracle: branch counts agree at " << agree << " of " << report.orientations.size()
        << " orientations\n";
}

} // namespace

CliOptions parse_args(int argc, const char *const *argv)
{
    CliOptions opts;
    SweepSpec &s = opts.spec;
    raw_flags f;
    std::string out;
    std::string plot;

    CLI::App app{"Resonance field versus field angle by interval branch-and-bound.", "fmr-sweep"};
    app.set_config("--config", "", "key=value file; flags on the command line take precedence");
    app.allow_config_extras(CLI::config_extras_mode::error);

    auto *freq_opt = app.add_option("--freq-ghz", f.freq_ghz, "microwave frequency, GHz")->capture_default_str();
    auto *g_opt = app.add_option("--g", f.g, "Lande factor")->capture_default_str();
    auto *ms_opt = app.add_option("--ms4pi", f.ms4pi, "4 pi M_s, Gs")->capture_default_str();
    auto *ku_opt = app.add_option("--ku", f.ku, "uniaxial anisotropy K_u, erg/cm^3")->capture_default_str();
    auto *k4_opt = app.add_option("--k4", f.k4, "fourth-order anisotropy K_4, erg/cm^3")->capture_default_str();
    app.add_option("--preset", f.preset, "shipped (K_u, K_4) set")->check(CLI::Range(1, 12));
    app.add_option("--theta-start", s.theta_start, "first field angle, degrees")->capture_default_str();
    app.add_option("--theta-stop", s.theta_stop, "last field angle, degrees")->capture_default_str();
    app.add_option("--theta-step", s.theta_step, "angle increment, degrees")->capture_default_str();
    app.add_option("--phi-ext", s.phi_ext, "azimuth of the field, degrees")->capture_default_str();
    app.add_option("--hmax", s.cfg.h_max, "upper end of the field search range, Oe")->capture_default_str();
    app.add_option("--tol-angle", s.cfg.tol_angle, "box width tolerance for angles, rad")->capture_default_str();
    app.add_option("--tol-field", s.cfg.tol_field, "box width tolerance for the field, Oe")->capture_default_str();
    app.add_option("--out", out, "CSV output path (default: stdout)");
    app.add_option("--plot", plot, "SVG output path");
    app.add_flag("--oracle", s.run_oracle, "also run the point-arithmetic reference scan");
    app.add_option("--seed", s.seed, "random seed (recorded; the sweep itself is deterministic)");
    app.add_option("--threads", s.threads, "worker threads, 0 = one per core")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &) {
        throw UsageError(app.help(), exit_ok);
    } catch (const CLI::ParseError &e) {
        throw UsageError(std::string(e.what()) + "\n\n" + app.help(), exit_usage);
    }

    if (f.preset != 0) {
        const Preset &p = preset(f.preset);
        if (freq_opt->count() == 0) {
            f.freq_ghz = p.freq_ghz;
        }
        if (g_opt->count() == 0) {
            f.g = p.g;
        }
        if (ms_opt->count() == 0) {
            f.ms4pi = p.four_pi_ms;
        }
        if (ku_opt->count() == 0) {
            f.ku = p.k_u;
        }
        if (k4_opt->count() == 0) {
            f.k4 = p.k_4;
        }
    }
    s.params = MaterialParams::from_frequency_ghz(f.freq_ghz, f.g, f.ms4pi, f.ku, f.k4);
    s.cfg.glue_gap = 2 * s.cfg.tol_field;
    opts.out = out;
    opts.plot = plot;

    try {
        s.validate();
    } catch (const std::invalid_argument &e) {
        throw UsageError(std::string(e.what()) + "\n\n" + app.help(), exit_usage);
    }
    return opts;
}

int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err)
{
    CliOptions opts;
    try {
        opts = parse_args(argc, argv);
    } catch (const UsageError &e) {
        (e.exit_code() == exit_ok ? out : err) << e.what();
        return e.exit_code();
    }

    try {
        const SweepReport report = run_sweep(opts.spec);
        if (opts.out.empty()) {
            write_csv(report, out);
        } else {
            emit_csv(report, opts.out);
        }
        if (!opts.plot.empty()) {
            emit_svg(report, opts.plot);
        }
        if (opts.spec.run_oracle) {
            report_oracle(report, err);
        }
        err << "swept " << report.orientations.size() << " orientations, " << report.result_count()
            << " resonances in " << format_double(report.wall_seconds) << " s\n";
    } catch (const std::exception &e) {
        err << "fmr-sweep: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_ok;
}

} // namespace fmr
