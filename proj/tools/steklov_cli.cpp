// Command-line surface for the weighted Steklov toolkit.
//
// Subcommands:
//   domains      list the weight catalog, or describe one weight
//   spectrum     compute a certified spectrum -> CSV (k,sigma,trusted)
//   weyl         counting-slope report vs. the mass/pi target -> JSON (+SVG)
//   orlicz-norm  L(log L)^a membership scan across caps -> JSON
//   indefinite   two-sided spectrum and slopes for sign-changing weights
//
// Exit codes: 0 success, 1 computation error (JSON diagnostic on stderr),
// 2 usage error (grammar printed).

#include <chrono>
#include <complex>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "steklov/steklov.hpp"

namespace {

using nlohmann::json;

struct usage_error {
    std::string message;
};

steklov::weight_ptr parse_weight_or_usage(const std::string& desc) {
    try {
        return steklov::parse_weight(desc);
    } catch (const steklov::error& e) {
        if (e.code() == steklov::errc::invalid_parameter)
            throw usage_error{e.what()};
        throw;  // I/O and range errors are computation errors
    }
}

steklov::weight_ptr resolve_weight(const std::string& desc, double cap) {
    auto w = parse_weight_or_usage(desc);
    if (cap > 0) w = std::make_shared<steklov::capped_weight>(std::move(w), cap);
    return w;
}

bool has_unbounded_singularity(const steklov::weight& w) {
    for (const auto& s : w.singularities())
        if (s.p < 0 || (s.p == 0 && s.q < 0)) return true;
    return false;
}

// Regularity gate for slope reports: weights that blow up somewhere must pass
// the L log L membership scan; a DIVERGENT verdict aborts the run.
void run_llogl_gate(const steklov::weight_ptr& w) {
    if (!has_unbounded_singularity(*w)) return;
    const auto scan =
        steklov::llog_membership_scan(w, 1.0, steklov::default_scan_caps());
    if (scan.verdict == steklov::scan_verdict::divergent)
        throw steklov::error(
            steklov::errc::divergent_weight,
            "weight '" + w->descriptor() +
                "' fails the L log L membership scan (capped norms keep growing); "
                "the counting slope is not certified — rerun with --cap to study "
                "a truncation");
}

void emit(const std::string& path, const std::string& content) {
    if (path.empty())
        std::cout << content;
    else
        steklov::atomic_write(path, content);
}

std::optional<std::pair<double, double>> parse_window(const std::string& text) {
    if (text.empty()) return std::nullopt;
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw usage_error{"--window expects two comma-separated numbers, got '" +
                          text + "'"};
    try {
        std::size_t p1 = 0, p2 = 0;
        const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
        const double lo = std::stod(a, &p1), hi = std::stod(b, &p2);
        if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument(text);
        return std::make_pair(lo, hi);
    } catch (const std::exception&) {
        throw usage_error{"--window expects two comma-separated numbers, got '" +
                          text + "'"};
    }
}

double elapsed_seconds(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

// ------------------------------- subcommands --------------------------------

int cmd_domains(const std::string& desc, double quad_tol) {
    if (desc.empty()) {
        std::cout << steklov::weight_grammar();
        return 0;
    }
    const auto w = parse_weight_or_usage(desc);
    const double mass = steklov::perimeter(*w, quad_tol);
    std::cout << "descriptor:    " << w->descriptor() << "\n";
    std::cout << "total mass:    " << steklov::format_sig17(mass)
              << "  (boundary length of the image domain)\n";
    std::cout << "target slope:  " << steklov::format_sig17(mass / std::numbers::pi)
              << "  (mass / pi)\n";
    std::cout << "L log L class: " << (w->in_llogl() ? "yes" : "no") << "\n";
    const auto& sings = w->singularities();
    std::cout << "singular angles: " << sings.size() << "\n";
    for (const auto& s : sings) {
        std::cout << "  angle=" << steklov::format_sig17(s.angle) << "  p=" << s.p
                  << "  q=" << s.q << (s.grade ? "  graded" : "") << "\n";
    }
    return 0;
}

int cmd_spectrum(const std::string& desc, int modes, double quad_tol, double cap,
                 const std::string& out_path) {
    const auto w = resolve_weight(desc, cap);
    const auto sr = steklov::certified_solve(*w, modes, quad_tol);
    emit(out_path, steklov::csv_spectrum(sr));
    return 0;
}

int cmd_weyl(const std::string& desc, int modes, double quad_tol, double cap,
             const std::string& window_text, const std::string& report_path,
             const std::string& plot_path) {
    const auto start = std::chrono::steady_clock::now();
    const auto window = parse_window(window_text);
    const auto w = resolve_weight(desc, cap);
    run_llogl_gate(w);
    const auto sr = steklov::certified_solve(*w, modes, quad_tol);
    const double perim = steklov::perimeter(*w, quad_tol);
    const auto fit = steklov::weyl_slope(sr, perim, window);

    json j;
    j["schema_version"] = 1;
    j["weight"] = w->descriptor();
    j["modes"] = modes;
    j["slope"] = fit.slope;
    j["target"] = fit.target;
    j["rel_error"] = fit.rel_error;
    j["window"] = {fit.window_lo, fit.window_hi};
    j["trusted_count"] = sr.trusted_count;
    j["perimeter"] = perim;
    j["runtime_seconds"] = elapsed_seconds(start);
    emit(report_path, j.dump(2) + "\n");

    if (!plot_path.empty()) {
        auto series = steklov::counting_plot_series(
            sr.sigmas, fit.target, fit.window_hi, "N(sigma)", "#1f77b4");
        steklov::atomic_write(
            plot_path, steklov::svg_plot(series, "sigma", "counting function"));
    }
    return 0;
}

int cmd_orlicz(const std::string& desc, double a, std::vector<double> caps,
               const std::string& report_path) {
    const auto start = std::chrono::steady_clock::now();
    const auto w = parse_weight_or_usage(desc);
    if (caps.empty()) caps = steklov::default_scan_caps();
    const auto scan = steklov::llog_membership_scan(w, a, caps);

    json j;
    j["schema_version"] = 1;
    j["weight"] = w->descriptor();
    j["a"] = a;
    j["caps"] = scan.caps;
    j["norms"] = scan.norms;
    j["verdict"] = steklov::to_string(scan.verdict);
    j["runtime_seconds"] = elapsed_seconds(start);
    emit(report_path, j.dump(2) + "\n");
    return 0;
}

int cmd_indefinite(const std::string& desc, int modes, double quad_tol,
                   const std::string& window_text, const std::string& report_path,
                   const std::string& csv_path, const std::string& plot_path) {
    const auto start = std::chrono::steady_clock::now();
    const auto window = parse_window(window_text);
    const auto w = parse_weight_or_usage(desc);

    auto fine = steklov::solve_indefinite(steklov::assemble(*w, modes, quad_tol));
    const auto check =
        steklov::solve_indefinite(steklov::assemble(*w, 2 * modes, quad_tol));
    fine.trusted_pos =
        steklov::stability(fine.sigmas_pos, check.sigmas_pos).trusted_count;
    fine.trusted_neg =
        steklov::stability(fine.sigmas_neg, check.sigmas_neg).trusted_count;

    const auto [mass_pos, mass_neg] = steklov::signed_mass(*w, quad_tol);

    // Branch fits reuse the one-sided machinery on |sigma|.
    steklov::spectral_result pos;
    pos.sigmas = fine.sigmas_pos;
    pos.trusted_count = fine.trusted_pos;
    steklov::spectral_result neg;
    neg.sigmas.reserve(fine.sigmas_neg.size());
    for (double s : fine.sigmas_neg) neg.sigmas.push_back(-s);
    neg.trusted_count = fine.trusted_neg;

    const auto fit_pos = steklov::weyl_slope(pos, mass_pos, window);
    const auto fit_neg = steklov::weyl_slope(neg, mass_neg, window);

    json j;
    j["schema_version"] = 1;
    j["weight"] = w->descriptor();
    j["modes"] = modes;
    j["slope_pos"] = fit_pos.slope;
    j["slope_neg"] = fit_neg.slope;
    j["target_pos"] = fit_pos.target;
    j["target_neg"] = fit_neg.target;
    j["rel_error_pos"] = fit_pos.rel_error;
    j["rel_error_neg"] = fit_neg.rel_error;
    j["window_pos"] = {fit_pos.window_lo, fit_pos.window_hi};
    j["window_neg"] = {fit_neg.window_lo, fit_neg.window_hi};
    j["trusted_pos"] = fine.trusted_pos;
    j["trusted_neg"] = fine.trusted_neg;
    j["mass_pos"] = mass_pos;
    j["mass_neg"] = mass_neg;
    j["kernel_modes"] = fine.kernel_modes;
    j["runtime_seconds"] = elapsed_seconds(start);
    emit(report_path, j.dump(2) + "\n");

    if (!csv_path.empty())
        steklov::atomic_write(csv_path, steklov::csv_signed_spectrum(fine));

    if (!plot_path.empty()) {
        auto sp = steklov::counting_plot_series(pos.sigmas, fit_pos.target,
                                                fit_pos.window_hi, "N+(sigma)",
                                                "#1f77b4");
        auto sn = steklov::counting_plot_series(neg.sigmas, fit_neg.target,
                                                fit_neg.window_hi, "N-(sigma)",
                                                "#d62728");
        sp.insert(sp.end(), sn.begin(), sn.end());
        steklov::atomic_write(plot_path,
                              steklov::svg_plot(sp, "sigma", "counting function"));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted Steklov spectra on the disk: certified eigenvalues, "
                 "counting-slope reports, and Orlicz regularity scans"};
    app.require_subcommand(1);
    std::uint64_t seed = 0;
    app.add_option("--seed", seed,
                   "random seed (reserved for randomized property suites)");

    std::string d_weight;
    double d_tol = 1e-10;
    auto* dom = app.add_subcommand(
        "domains", "List the weight catalog, or describe one weight");
    dom->add_option("--weight", d_weight, "weight descriptor to describe");
    dom->add_option("--quad-tol", d_tol, "quadrature tolerance")
        ->check(CLI::Range(1e-15, 1e-2));

    std::string s_weight, s_out;
    int s_modes = 0;
    double s_tol = 1e-10, s_cap = 0;
    auto* spec = app.add_subcommand("spectrum",
                                    "Certified spectrum -> CSV k,sigma,trusted");
    spec->add_option("--weight", s_weight, "weight descriptor")->required();
    spec->add_option("--modes", s_modes, "Fourier truncation order N")
        ->required()
        ->check(CLI::PositiveNumber);
    spec->add_option("--quad-tol", s_tol, "quadrature tolerance")
        ->check(CLI::Range(1e-15, 1e-2));
    spec->add_option("--cap", s_cap, "replace beta by min(beta, M)")
        ->check(CLI::PositiveNumber);
    spec->add_option("--out", s_out, "output CSV path (stdout if omitted)");

    std::string w_weight, w_window, w_report, w_plot;
    int w_modes = 0;
    double w_tol = 1e-10, w_cap = 0;
    auto* weyl = app.add_subcommand(
        "weyl", "Counting-slope report against the mass/pi target");
    weyl->add_option("--weight", w_weight, "weight descriptor")->required();
    weyl->add_option("--modes", w_modes, "Fourier truncation order N")
        ->required()
        ->check(CLI::PositiveNumber);
    weyl->add_option("--window", w_window, "fit window sigma_lo,sigma_hi");
    weyl->add_option("--quad-tol", w_tol, "quadrature tolerance")
        ->check(CLI::Range(1e-15, 1e-2));
    weyl->add_option("--cap", w_cap, "replace beta by min(beta, M)")
        ->check(CLI::PositiveNumber);
    weyl->add_option("--report", w_report, "output JSON path (stdout if omitted)");
    weyl->add_option("--plot", w_plot, "optional SVG plot path");

    std::string o_weight, o_report;
    double o_a = 1.0;
    std::vector<double> o_caps;
    auto* orl = app.add_subcommand("orlicz-norm",
                                   "L(log L)^a membership scan across caps");
    orl->add_option("--weight", o_weight, "weight descriptor")->required();
    orl->add_option("--a", o_a, "log exponent a >= 0")
        ->check(CLI::Range(0.0, 16.0));
    orl->add_option("--caps", o_caps, "comma-separated cap ladder")
        ->delimiter(',');
    orl->add_option("--report", o_report, "output JSON path (stdout if omitted)");

    std::string i_weight, i_window, i_report, i_out, i_plot;
    int i_modes = 0;
    double i_tol = 1e-10;
    auto* ind = app.add_subcommand(
        "indefinite", "Two-sided spectrum and slopes for sign-changing weights");
    ind->add_option("--weight", i_weight, "weight descriptor")->required();
    ind->add_option("--modes", i_modes, "Fourier truncation order N")
        ->required()
        ->check(CLI::PositiveNumber);
    ind->add_option("--window", i_window, "fit window sigma_lo,sigma_hi");
    ind->add_option("--quad-tol", i_tol, "quadrature tolerance")
        ->check(CLI::Range(1e-15, 1e-2));
    ind->add_option("--report", i_report, "output JSON path (stdout if omitted)");
    ind->add_option("--out", i_out, "optional CSV path (k,sigma,side,trusted)");
    ind->add_option("--plot", i_plot, "optional SVG plot path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n";
        std::cerr << app.help();
        return 2;
    }

    try {
        if (dom->parsed()) return cmd_domains(d_weight, d_tol);
        if (spec->parsed()) return cmd_spectrum(s_weight, s_modes, s_tol, s_cap, s_out);
        if (weyl->parsed())
            return cmd_weyl(w_weight, w_modes, w_tol, w_cap, w_window, w_report,
                            w_plot);
        if (orl->parsed()) return cmd_orlicz(o_weight, o_a, o_caps, o_report);
        if (ind->parsed())
            return cmd_indefinite(i_weight, i_modes, i_tol, i_window, i_report,
                                  i_out, i_plot);
        std::cerr << app.help();
        return 2;
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.message << "\n\n" << steklov::weight_grammar();
        return 2;
    } catch (const steklov::error& e) {
        json j;
        j["error"]["code"] = e.code_name();
        j["error"]["message"] = e.what();
        if (e.angle()) j["error"]["angle"] = *e.angle();
        std::cerr << j.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        json j;
        j["error"]["code"] = "INTERNAL";
        j["error"]["message"] = e.what();
        std::cerr << j.dump() << "\n";
        return 1;
    }
}
