#include "zetasum/cli.hpp"

#include "zetasum/errors.hpp"
#include "zetasum/estimator.hpp"
#include "zetasum/quadrature.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>

namespace zetasum::cli {

using numeric::Ball;

namespace {

Ball two_pi() { return Ball::pi().ldexp(1); }

Ball parse_real(const std::string& text, const char* flag) {
    try {
        return Ball::from_decimal(text);
    } catch (const Error&) {
        throw ParseError("cli", "parse", std::string(flag) + ": not a number: '" + text + "'");
    }
}

std::string fixed(double v, const char* fmt) {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

void print_row(std::ostream& out, const std::string& label, const std::string& value) {
    out << label;
    for (std::size_t i = label.size(); i < 22; ++i) out << ' ';
    out << value << '\n';
}

void print_estimate(std::ostream& out, const est::SumEstimate& e, const std::string& phi_text) {
    print_row(out, "method", est::method_name(e.method));
    print_row(out, "phi", phi_text);
    print_row(out, "T", e.T_used.to_string());
    if (e.method != est::Method::lehman) print_row(out, "zeros used", std::to_string(e.n_zeros));
    print_row(out, "partial sum", e.partial_sum.to_string());
    print_row(out, "integral term", e.integral_term.to_string());
    if (e.method != est::Method::lehman) print_row(out, "boundary phi(T)Q(T)", e.boundary_term.to_string());
    print_row(out, "error bound", est::format_bound(e.error_bound, 4));
    print_row(out, "value", e.value.to_string());
}

struct Common {
    long precision = 0;
    bool fast = false;
    double refine_tol = 1e-9;
    double quad_factor = 1e-3;
    std::string zeros = "compute";
};

RunConfig config_from(const Common& c) {
    RunConfig cfg;
    cfg.precision_bits = c.precision;
    cfg.mode = c.fast ? zeros::Mode::fast : zeros::Mode::certified;
    cfg.refine_tol = c.refine_tol;
    cfg.quad_tol_factor = c.quad_factor;
    cfg.zero_source = c.zeros;
    return cfg;
}

void apply(const RunConfig& cfg) {
    if (cfg.precision_bits < 53 || cfg.precision_bits > 4096) {
        throw DomainError("cli", "configure", "precision must be between 53 and 4096 bits");
    }
    numeric::set_working_precision(cfg.precision_bits);
    est::set_quadrature_factor(cfg.quad_tol_factor);
}

// index n with T strictly between zeros n and n + 1
std::size_t index_below(const zeros::ZeroTable& table, const Ball& T) {
    const auto it = std::partition_point(table.ordinates.begin(), table.ordinates.end(),
                                         [&](const Ball& z) { return z.upper() < T.lower(); });
    if (it != table.ordinates.end() && it->overlaps(T)) {
        throw AmbiguityError("cli", "estimate", "T overlaps the zero " + it->to_string());
    }
    return static_cast<std::size_t>(it - table.ordinates.begin());
}

}  // namespace

long default_precision() {
    if (const char* env = std::getenv("ZETASUM_PRECISION_BITS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 53 || v > 4096) {
            throw DomainError("cli", "configure", std::string("ZETASUM_PRECISION_BITS must be 53..4096, got '") + env + "'");
        }
        return v;
    }
    return 128;
}

zeros::ZeroTable load_or_compute(const RunConfig& config) {
    if (config.zero_source != "compute") return zeros::import_zeros(config.zero_source);
    zeros::FindOptions opts;
    opts.mode = config.mode;
    opts.refine_tol = config.refine_tol;
    if (config.n_zeros) return zeros::find_zeros_by_count(*config.n_zeros + 1, opts);
    if (config.t_max) return zeros::find_zeros(*config.t_max, opts);
    throw DomainError("cli", "load_or_compute", "no extent given (--n or --t-max)");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Weighted sums over the ordinates of zeta zeros", "zetasum"};
    app.require_subcommand(1);
    Common common;
    long precision = 0;
    app.add_option("--precision", precision, "Working precision in bits (default: $ZETASUM_PRECISION_BITS or 128)");

    // zeros
    auto* zcmd = app.add_subcommand("zeros", "Find, import or inspect zero tables");
    zcmd->require_subcommand(1);
    auto* zfind = zcmd->add_subcommand("find", "Locate zeros on the critical line");
    std::optional<double> t_max;
    std::optional<std::size_t> n_find;
    std::string out_path, in_path;
    auto* tmax_opt = zfind->add_option("--t-max", t_max, "All zeros with ordinate <= t-max");
    zfind->add_option("--n", n_find, "The first n zeros")->excludes(tmax_opt);
    zfind->add_option("--out", out_path, "Write the table to this file");
    zfind->add_option("--tol", common.refine_tol, "Refinement tolerance (default 1e-9)");
    zfind->add_flag("--fast", common.fast, "Heuristic radii instead of certified ones");
    auto* zimport = zcmd->add_subcommand("import", "Validate a zero table file");
    zimport->add_option("--in", in_path, "Table file")->required();
    auto* zinfo = zcmd->add_subcommand("info", "Statistics of a zero table file");
    zinfo->add_option("--in", in_path, "Table file")->required();

    // estimate
    auto* ecmd = app.add_subcommand("estimate", "Estimate a sum over zeros");
    std::string phi_text, method = "theorem1", T_text, T2_text, T0_text;
    std::optional<std::size_t> n_use;
    ecmd->add_option("--phi", phi_text, "DSL expression or builtin:<name>[:<param>]")->required();
    ecmd->add_option("--zeros", common.zeros, "Zero table file, or 'compute'");
    auto* n_opt = ecmd->add_option("--n", n_use, "Cut between zeros n and n+1");
    ecmd->add_option("--T", T_text, "Cut height (rounded to the next midpoint between zeros for theorem1/theorem4)")
        ->excludes(n_opt);
    ecmd->add_option("--T2", T2_text, "Upper end for the lehman method (default: infinity)");
    ecmd->add_option("--method", method, "lehman | theorem1 | theorem4")
        ->check(CLI::IsMember({"lehman", "theorem1", "theorem4"}));
    ecmd->add_option("--T0", T0_text, "Lower limit of phi's domain (default 2 pi)");
    ecmd->add_option("--tol", common.refine_tol, "Zero refinement tolerance");
    ecmd->add_option("--quad-tol-factor", common.quad_factor, "Quadrature tolerance relative to the error bound");
    ecmd->add_flag("--fast", common.fast, "Heuristic zero radii");

    // constants
    auto* ccmd = app.add_subcommand("constants", "Constants c1, c2 or H");
    std::string which;
    std::size_t n_const = 1000;
    ccmd->add_option("name", which, "c1 | c2 | H")->required()->check(CLI::IsMember({"c1", "c2", "H"}));
    ccmd->add_option("--n", n_const, "Number of zeros (default 1000)");
    ccmd->add_option("--zeros", common.zeros, "Zero table file, or 'compute'");

    // table1
    auto* tcmd = app.add_subcommand("table1", "Naive and accelerated estimates of c2");
    std::size_t max_n = 10000;
    std::string csv_path;
    tcmd->add_option("--max-n", max_n, "Largest row (10, 100, ...)");
    tcmd->add_option("--zeros", common.zeros, "Zero table file, or 'compute'");
    tcmd->add_option("--csv", csv_path, "Also write the report as CSV");

    // compare-bounds
    auto* bcmd = app.add_subcommand("compare-bounds", "Lehman bound against the E2 bound");
    std::string bphi, bT, bT0;
    bcmd->add_option("--phi", bphi, "DSL expression or builtin")->required();
    bcmd->add_option("--T", bT, "Height")->required();
    bcmd->add_option("--T0", bT0, "Lower limit of phi's domain (default 2 pi)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    }

    try {
        common.precision = precision > 0 ? precision : default_precision();
        RunConfig cfg = config_from(common);
        apply(cfg);
        const Ball T0 = T0_text.empty() && bT0.empty() ? two_pi()
                                                         : parse_real(T0_text.empty() ? bT0 : T0_text, "--T0");

        if (zfind->parsed()) {
            if (!t_max && !n_find) throw ParseError("cli", "zeros find", "give --t-max or --n");
            zeros::FindOptions opts;
            opts.mode = cfg.mode;
            opts.refine_tol = cfg.refine_tol;
            const zeros::ZeroTable table =
                n_find ? zeros::find_zeros_by_count(*n_find, opts) : zeros::find_zeros(*t_max, opts);
            if (!out_path.empty()) {
                std::ofstream f(out_path);
                if (!f) throw FormatError("cli", "zeros find", "cannot write " + out_path);
                zeros::write_zeros(table, f);
            }
            out << table.size() << " zeros\n";
            out << "height_max " << fixed(table.height_max, "%.6f") << '\n';
            if (cfg.mode == zeros::Mode::fast) out << "mode fast (radii are heuristic)\n";
            return 0;
        }
        if (zimport->parsed() || zinfo->parsed()) {
            const zeros::ZeroTable table = zeros::import_zeros(in_path);
            out << table.size() << " zeros from " << in_path << '\n';
            print_row(out, "first", table.ordinates.front().to_string());
            print_row(out, "last", table.ordinates.back().to_string());
            print_row(out, "height_max", fixed(table.height_max, "%.6f"));
            if (zinfo->parsed()) {
                double max_rad = 0.0, min_gap = 1e300, max_gap = 0.0;
                for (std::size_t i = 0; i < table.size(); ++i) {
                    max_rad = std::max(max_rad, table.ordinates[i].rad());
                    if (i > 0) {
                        const double gap = table.ordinates[i].mid_double() - table.ordinates[i - 1].mid_double();
                        min_gap = std::min(min_gap, gap);
                        max_gap = std::max(max_gap, gap);
                    }
                }
                print_row(out, "max radius", fixed(max_rad, "%.3e"));
                if (table.size() > 1) {
                    print_row(out, "min gap", fixed(min_gap, "%.6f"));
                    print_row(out, "max gap", fixed(max_gap, "%.6f"));
                }
            }
            return 0;
        }
        if (ecmd->parsed()) {
            const phi::PhiSpec spec = phi::make_phi(phi_text, T0);
            if (method == "lehman") {
                if (T_text.empty()) throw ParseError("cli", "estimate", "the lehman method needs --T");
                const Ball T = parse_real(T_text, "--T");
                std::optional<Ball> T2;
                if (!T2_text.empty()) T2 = parse_real(T2_text, "--T2");
                zeros::ZeroTable table;
                if (T2 && cfg.zero_source != "compute") {
                    table = load_or_compute(cfg);
                } else if (T2) {
                    cfg.t_max = T2->mid_double();
                    table = load_or_compute(cfg);
                }
                print_estimate(out, est::lehman_estimate(table, spec, T, T2), phi_text);
                return 0;
            }
            zeros::ZeroTable table;
            std::size_t n;
            if (n_use) {
                n = *n_use;
                cfg.n_zeros = n;
                table = load_or_compute(cfg);
            } else {
                if (T_text.empty()) throw ParseError("cli", "estimate", "give --n or --T");
                const Ball T = parse_real(T_text, "--T");
                cfg.t_max = T.mid_double() + 20.0;  // room for the next zero
                table = load_or_compute(cfg);
                n = index_below(table, T);
            }
            const est::SumEstimate e = method == "theorem1" ? est::convergent_total(table, spec, n)
                                                            : est::divergent_limit(table, spec, n);
            print_estimate(out, e, phi_text);
            return 0;
        }
        if (ccmd->parsed()) {
            cfg.n_zeros = n_const;
            const zeros::ZeroTable table = load_or_compute(cfg);
            est::SumEstimate e;
            const char* reference = "";
            if (which == "c1") {
                e = est::convergent_total(table, phi::make_phi("builtin:inv_square", two_pi()), n_const);
                reference = "0.0231049931154189707889338104";
            } else if (which == "c2") {
                e = est::divergent_limit(table, est::c2_phi(), n_const, est::Anchor::antiderivative);
                reference = "-0.5276697875";
            } else {
                e = est::divergent_limit(table, phi::make_phi("builtin:inv_t", two_pi()), n_const);
                reference = "-0.0171594043070981495";
            }
            out << which << " = " << e.value.to_string() << '\n';
            print_row(out, "midpoint", e.value.mid_fixed(12));
            print_row(out, "zeros used", std::to_string(e.n_zeros));
            print_row(out, "T", e.T_used.to_string());
            print_row(out, "error bound", est::format_bound(e.error_bound, 4));
            print_row(out, "published value", reference);
            print_row(out, "contains published", e.value.contains_decimal(reference) ? "yes" : "no");
            return 0;
        }
        if (tcmd->parsed()) {
            cfg.n_zeros = max_n;
            const zeros::ZeroTable table = load_or_compute(cfg);
            const est::Table1Report report = est::table1_report(table, max_n);
            out << report.text();
            if (!csv_path.empty()) {
                std::ofstream f(csv_path);
                if (!f) throw FormatError("cli", "table1", "cannot write " + csv_path);
                f << report.csv();
            }
            return 0;
        }
        if (bcmd->parsed()) {
            const phi::PhiSpec spec = phi::make_phi(bphi, T0);
            const Ball T = parse_real(bT, "--T");
            const Ball lb = est::lehman_bound(spec, T, std::nullopt);
            const Ball eb = est::e2_bound(spec, T);
            print_row(out, "lehman bound", est::format_bound(lb, 4));
            print_row(out, "E2 bound", est::format_bound(eb, 4));
            print_row(out, "ratio", fixed((lb / eb).mid_double(), "%.1f"));
            return 0;
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}

}  // namespace zetasum::cli
