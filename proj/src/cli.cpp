#include "sdmt/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "sdmt/acceptance.hpp"
#include "sdmt/bounds.hpp"
#include "sdmt/channel_model.hpp"
#include "sdmt/diversity.hpp"
#include "sdmt/errors.hpp"
#include "sdmt/gaussian_approx.hpp"
#include "sdmt/monte_carlo.hpp"

namespace sdmt {

namespace {

namespace fs = std::filesystem;

double db_to_linear(double db) {
    const double eta = std::pow(10.0, db / 10.0);
    if (!(eta > 0.0 && std::isfinite(eta))) throw ValidationError(fmt::format("SNR {} dB is out of range", db));
    return eta;
}

double parse_number(const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(value))
        throw ValidationError("not a number: '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream in(text);
    while (std::getline(in, part, sep)) parts.push_back(part);
    if (!text.empty() && text.back() == sep) parts.emplace_back();
    return parts;
}

WiretapConfig parse_config(const std::string& text) {
    const auto parts = split(text, ',');
    if (parts.size() != 3) throw ValidationError("--config expects Nt,Nm,Ne");
    int counts[3];
    for (int i = 0; i < 3; ++i) {
        const double v = parse_number(parts[i]);
        if (v != std::floor(v)) throw ValidationError("--config counts must be integers");
        counts[i] = static_cast<int>(v);
    }
    return make_config(counts[0], counts[1], counts[2]);
}

enum class AllocMode { optimized, equal, asymptotic };

struct RunSpec {
    std::string config;
    std::string rs;
    std::string snr_db;
    std::uint64_t trials = 1'000'000;
    std::uint64_t seed = 1;
    std::string alloc = "optimized";
    std::string out_dir = ".";
    std::string moments = "quadrature";
    std::uint64_t gain_trials = kReferenceGainTrials;
    std::string manifest;
    unsigned workers = 0;
};

AllocMode parse_alloc(const std::string& text) {
    if (text == "optimized") return AllocMode::optimized;
    if (text == "equal") return AllocMode::equal;
    if (text == "asymptotic") return AllocMode::asymptotic;
    throw ValidationError("--alloc must be optimized, equal or asymptotic");
}

MomentMethod parse_moments(const std::string& text) {
    if (text == "quadrature") return MomentMethod::quadrature;
    if (text == "mc") return MomentMethod::monte_carlo;
    throw ValidationError("--moments must be quadrature or mc");
}

std::vector<double> parse_rates(const std::string& text, const WiretapConfig& cfg) {
    auto rates = parse_grid(text);
    for (double r : rates)
        if (!(r >= 0.0 && r <= cfg.m() + 1e-12))
            throw ValidationError(fmt::format("--rs values must lie in [0, {}]", cfg.m()));
    for (double& r : rates) r = std::min(r, static_cast<double>(cfg.m()));
    return rates;
}

void check_trials(std::uint64_t trials) {
    if (trials < 1000) throw ValidationError("--trials must be >= 1000");
}

// g from --manifest when given, otherwise a fresh estimate.
RunManifest resolve_gain(const WiretapConfig& cfg, const RunSpec& spec) {
    if (!spec.manifest.empty()) {
        std::ifstream in(spec.manifest);
        if (!in) throw ValidationError("cannot read manifest " + spec.manifest);
        const auto manifest = read_manifest(in);
        if (!(manifest.config() == cfg))
            throw ValidationError("manifest " + spec.manifest + " is for " + manifest.config().label());
        return manifest;
    }
    return RunManifest::from(cfg, estimate_array_gain(cfg, spec.gain_trials, spec.seed, spec.workers));
}

std::string format_value(double v) { return fmt::format("{:.17g}", v); }

// Rows of one CSV file, header comments first.
class CsvSink {
public:
    CsvSink(const RunManifest& manifest, const RunSpec& spec, std::string_view kind) {
        buffer_ << "# " << kind << "\n";
        buffer_ << fmt::format("# config = {},{},{}\n", manifest.n_t, manifest.n_m, manifest.n_e);
        buffer_ << "# g = " << format_value(manifest.g) << "\n";
        buffer_ << "# g_std_err = " << format_value(manifest.g_std_err) << "\n";
        buffer_ << "# g_trials = " << manifest.g_trials << "\n";
        buffer_ << "# g_seed = " << manifest.seed << "\n";
        buffer_ << "# seed = " << spec.seed << "\n";
        buffer_ << "# trials = " << spec.trials << "\n";
        buffer_ << "# alloc = " << spec.alloc << "\n";
        buffer_ << "# moments = " << spec.moments << "\n";
        buffer_ << "eta_db,r_s,series,value,std_err\n";
    }

    void row(double eta_db, double r_s, std::string_view series, double value,
             std::optional<double> std_err = std::nullopt) {
        buffer_ << format_value(eta_db) << ',' << format_value(r_s) << ',' << series << ','
                << format_value(value) << ',';
        if (std_err) buffer_ << format_value(*std_err);
        buffer_ << '\n';
    }

    void save(const fs::path& path) const { write_text(path, buffer_.str()); }

    static void write_text(const fs::path& path, const std::string& text) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ValidationError("cannot write " + path.string());
        out << text;
    }

private:
    std::ostringstream buffer_;
};

void save_manifest(const fs::path& dir, const RunManifest& manifest) {
    std::ostringstream text;
    write_manifest(text, manifest);
    CsvSink::write_text(dir / "manifest.txt", text.str());
}

fs::path prepare_dir(const std::string& dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec) throw ValidationError("cannot create " + dir + ": " + ec.message());
    return path;
}

std::string quoted_list(const std::vector<double>& values) {
    std::string out;
    for (double v : values) out += (out.empty() ? "" : " ") + fmt::format("{}", v);
    return out;
}

std::string plot_script(const std::string& csv, const std::vector<double>& rates,
                        const std::string& series, const std::string& ylabel, bool log_y,
                        bool x_is_rate) {
    std::string s;
    s += "# gnuplot script; run with: gnuplot -p " + csv.substr(0, csv.size() - 4) + ".gp\n";
    s += "set datafile separator ','\n";
    s += "set key outside right\n";
    s += "set grid\n";
    if (log_y) s += "set logscale y\nset format y '10^{%L}'\n";
    s += x_is_rate ? "set xlabel 'secrecy multiplexing gain r_s'\n" : "set xlabel 'SNR (dB)'\n";
    s += "set ylabel '" + ylabel + "'\n";
    s += "series = \"" + series + "\"\n";
    if (x_is_rate) {
        s += "plot for [s in series] '" + csv +
             "' using 2:(stringcolumn(3) eq s ? $4 : 1/0) with linespoints title s\n";
    } else {
        s += "rates = \"" + quoted_list(rates) + "\"\n";
        s += "plot for [r in rates] for [s in series] '" + csv +
             "' using 1:((stringcolumn(3) eq s && abs($2 - (r + 0)) < 1e-9) ? $4 : 1/0) "
             "with linespoints title sprintf('%s, r_s = %s', s, r)\n";
    }
    return s;
}

struct BoundPair {
    BoundValue upper;
    BoundValue lower;
};

BoundPair bounds_for(const WiretapConfig& cfg, const RateSchedule& sched, double eta, AllocMode mode) {
    const double r = sched.r_s;
    auto equal = [&](AllocationKind kind) { return equal_split(cfg, r, kind); };
    switch (mode) {
        case AllocMode::equal:
            return {outage_upper_bound(cfg, sched, eta, equal(AllocationKind::upper)),
                    outage_lower_bound(cfg, sched, eta, equal(AllocationKind::lower))};
        case AllocMode::asymptotic: {
            // The closed form exists for the upper bound only.
            const auto b = r == 0.0 ? equal(AllocationKind::upper)
                           : r < 1.0 ? high_snr_allocation(cfg, r, HighSnrRegime::below_one)
                                     : high_snr_allocation(cfg, r, HighSnrRegime::above_one);
            return {outage_upper_bound(cfg, sched, eta, b), optimize_lower_bound(cfg, sched, eta)};
        }
        case AllocMode::optimized:
            break;
    }
    return {optimize_upper_bound(cfg, sched, eta), optimize_lower_bound(cfg, sched, eta)};
}

void add_run_options(CLI::App& cmd, RunSpec& spec, bool rates, bool snr, bool mc) {
    cmd.add_option("--config", spec.config, "antenna triple Nt,Nm,Ne")->required();
    if (rates) cmd.add_option("--rs", spec.rs, "multiplexing gains: a,b,c or start:step:stop");
    if (snr) cmd.add_option("--snr-db", spec.snr_db, "SNR grid in dB: value, list or start:step:stop");
    if (mc) {
        cmd.add_option("--trials", spec.trials, "Monte-Carlo trials");
        cmd.add_option("--alloc", spec.alloc, "optimized | equal | asymptotic");
        cmd.add_option("--moments", spec.moments, "quadrature | mc");
    }
    cmd.add_option("--seed", spec.seed, "random seed");
    cmd.add_option("--out", spec.out_dir, "output directory");
    cmd.add_option("--gain-trials", spec.gain_trials, "trials for the array-gain estimate");
    cmd.add_option("--manifest", spec.manifest, "reuse g from an existing run manifest");
    cmd.add_option("--workers", spec.workers, "worker threads (0 = all cores)");
}

int cmd_gain(const RunSpec& spec, std::ostream& out) {
    const auto cfg = parse_config(spec.config);
    cfg.require_feasible("gain");
    if (spec.trials < 10'000) throw ValidationError("--trials must be >= 10000 for the array gain");
    const auto est = estimate_array_gain(cfg, spec.trials, spec.seed, spec.workers);
    out << "config = " << cfg.label() << "\n";
    out << "g = " << format_value(est.g) << "\n";
    out << "std_err = " << format_value(est.std_err) << "\n";
    out << "trials = " << est.trials << "\n";
    out << "seed = " << est.seed << "\n";
    if (!spec.out_dir.empty() && spec.out_dir != ".") {
        const auto dir = prepare_dir(spec.out_dir);
        save_manifest(dir, RunManifest::from(cfg, est));
        out << "wrote " << (dir / "manifest.txt").string() << "\n";
    }
    return kExitOk;
}

int cmd_outage(const RunSpec& spec, std::ostream& out) {
    const auto cfg = parse_config(spec.config);
    cfg.require_feasible("outage-curve");
    check_trials(spec.trials);
    const auto rates = parse_rates(spec.rs.empty() ? "0.5,1" : spec.rs, cfg);
    const auto snr = parse_grid(spec.snr_db.empty() ? "0:5:30" : spec.snr_db);
    const auto mode = parse_alloc(spec.alloc);
    const auto method = parse_moments(spec.moments);
    const auto dir = prepare_dir(spec.out_dir);
    const auto manifest = resolve_gain(cfg, spec);
    const double g = manifest.g;

    std::vector<OutageQuery> queries;
    std::vector<double> etas;
    for (double db : snr) etas.push_back(db_to_linear(db));
    for (double r : rates)
        for (double eta : etas) queries.push_back({eta, secrecy_rate(make_schedule(cfg, r, g), eta)});
    const auto counts = count_outages(cfg, queries, spec.trials, spec.seed, spec.workers);

    std::vector<MomentPair> moments;
    if (method == MomentMethod::monte_carlo) {
        moments = monte_carlo_moments(cfg, etas, {spec.trials, spec.seed, spec.workers});
    } else {
        for (double eta : etas) moments.push_back(mutual_info_moments(cfg, eta));
    }

    CsvSink csv(manifest, spec, "secrecy outage probability versus SNR");
    std::size_t q = 0;
    for (double r : rates) {
        const auto sched = make_schedule(cfg, r, g);
        for (std::size_t i = 0; i < etas.size(); ++i) {
            const double eta = etas[i];
            const auto mc = make_outage_estimate(counts[q++], spec.trials, spec.seed, eta, r);
            const auto b = bounds_for(cfg, sched, eta, mode);
            csv.row(snr[i], r, "mc", mc.probability, mc.std_err);
            csv.row(snr[i], r, "upper", b.upper.probability);
            csv.row(snr[i], r, "lower", b.lower.probability);
            csv.row(snr[i], r, "naive", naive_upper_bound(cfg, sched, eta));
            csv.row(snr[i], r, "gauss", outage_gaussian_approx(moments[i], secrecy_rate(sched, eta)));
        }
    }
    csv.save(dir / "outage.csv");
    save_manifest(dir, manifest);
    CsvSink::write_text(dir / "outage.gp", plot_script("outage.csv", rates, "mc upper lower naive gauss",
                                                       "secrecy outage probability", true, false));
    out << "g = " << format_value(g) << "\n";
    out << "wrote " << (dir / "outage.csv").string() << ", manifest.txt, outage.gp\n";
    return kExitOk;
}

int cmd_dmt(const RunSpec& spec, std::ostream& out, std::ostream& err) {
    const auto cfg = parse_config(spec.config);
    cfg.require_feasible("dmt-curve");
    check_trials(spec.trials);
    const auto rates = parse_rates(spec.rs.empty() ? fmt::format("0:0.05:{}", cfg.m()) : spec.rs, cfg);
    const auto snr = parse_grid(spec.snr_db.empty() ? "5" : spec.snr_db);
    const auto mode = parse_alloc(spec.alloc);
    const auto dir = prepare_dir(spec.out_dir);
    const auto manifest = resolve_gain(cfg, spec);
    const double g = manifest.g;

    CsvSink csv(manifest, spec, "secrecy diversity versus multiplexing gain");
    std::size_t skipped = 0;
    for (double db : snr) {
        const double eta = db_to_linear(db);
        const auto empirical =
            empirical_diversity_rates(cfg, g, rates, eta, spec.trials, spec.seed, kDefaultSlopeStep, spec.workers);
        for (std::size_t i = 0; i < rates.size(); ++i) {
            const double r = rates[i];
            const auto sched = make_schedule(cfg, r, g);
            const auto b = bounds_for(cfg, sched, eta, mode);
            csv.row(db, r, "d_upper", diversity_upper_estimate(cfg, sched, eta, b.upper.allocation).value);
            csv.row(db, r, "d_lower", diversity_lower_estimate(cfg, sched, eta, b.lower.allocation).value);
            csv.row(db, r, "d_gauss", diversity_gaussian_estimate(cfg, sched, eta).value);
            if (empirical[i])
                csv.row(db, r, "d_empirical", empirical[i]->value, empirical[i]->std_err);
            else
                ++skipped;
            csv.row(db, r, "d_asymptotic", asymptotic_dmt(cfg, r));
            csv.row(db, r, "d_highsnr_upper", high_snr_upper_dmt(cfg, r));
        }
    }
    csv.save(dir / "dmt.csv");
    save_manifest(dir, manifest);
    CsvSink::write_text(dir / "dmt.gp",
                        plot_script("dmt.csv", rates,
                                    "d_upper d_lower d_gauss d_empirical d_asymptotic d_highsnr_upper",
                                    "secrecy diversity gain", false, true));
    if (skipped > 0)
        err << "note: " << skipped << " d_empirical point(s) omitted: fewer than " << kMinSlopeFailures
            << " outages at an endpoint; raise --trials\n";
    out << "g = " << format_value(g) << "\n";
    out << "wrote " << (dir / "dmt.csv").string() << ", manifest.txt, dmt.gp\n";
    return kExitOk;
}

int cmd_asymptote(const RunSpec& spec, std::ostream& out) {
    const auto cfg = parse_config(spec.config);
    cfg.require_feasible("asymptote");
    const auto rates = parse_rates(spec.rs.empty() ? fmt::format("0:0.25:{}", cfg.m()) : spec.rs, cfg);

    out << "config " << cfg.label() << ", m = " << cfg.m() << ", k = " << cfg.k() << "\n";
    out << fmt::format("{:>8} {:>14} {:>16} {:>16}\n", "r_s", "asymptotic", "high_snr_upper", "components");
    for (double r : rates) {
        const std::string parts =
            r < 1.0 ? fmt::format("{:16.6f}", high_snr_upper_dmt_components(cfg, r)) : fmt::format("{:>16}", "-");
        out << fmt::format("{:8.4f} {:14.6f} {:16.6f} ", r, asymptotic_dmt(cfg, r), high_snr_upper_dmt(cfg, r))
            << parts << "\n";
    }
    const double anchor_upper = cfg.m() * cfg.k() * (1.0 - (cfg.m() - 1.0) / (2.0 * cfg.k()));
    out << fmt::format("low-rate maxima as eta -> inf: upper {:.6f}, lower {}\n", anchor_upper,
                       cfg.m() * cfg.k());

    if (spec.snr_db.empty()) return kExitOk;
    const auto manifest = resolve_gain(cfg, spec);
    const auto snr = parse_grid(spec.snr_db);
    out << fmt::format("low-rate maxima at finite SNR (g = {:.6f}):\n", manifest.g);
    out << fmt::format("{:>8} {:>14} {:>14}\n", "eta_db", "upper_max", "lower_max");
    for (double db : snr) {
        const auto sched = make_schedule(cfg, 0.0, manifest.g);
        const auto limits = max_diversity_estimates(cfg, sched, db_to_linear(db));
        out << fmt::format("{:8.2f} {:14.6f} {:14.6f}\n", db, limits.upper, limits.lower);
    }
    return kExitOk;
}

int cmd_check(const RunSpec& spec, std::ostream& out) {
    AcceptanceOptions opts;
    opts.trials = spec.trials;
    opts.gain_trials = spec.gain_trials;
    opts.seed = spec.seed;
    opts.workers = spec.workers;
    const auto results = run_acceptance(opts, out);
    const auto failed = std::count_if(results.begin(), results.end(), [](const auto& r) { return !r.passed; });
    out << fmt::format("{} of {} criteria passed\n", results.size() - failed, results.size());
    return failed == 0 ? kExitOk : kExitCheckFailed;
}

}  // namespace

std::vector<double> parse_grid(const std::string& text) {
    if (text.empty()) throw ValidationError("empty grid");
    if (text.find(':') != std::string::npos) {
        const auto parts = split(text, ':');
        if (parts.size() != 3) throw ValidationError("grid '" + text + "' must be start:step:stop");
        const double start = parse_number(parts[0]);
        const double step = parse_number(parts[1]);
        const double stop = parse_number(parts[2]);
        if (!(step > 0.0)) throw ValidationError("grid step must be > 0");
        if (stop < start) throw ValidationError("grid stop must be >= start");
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        if (count > 100'000) throw ValidationError("grid '" + text + "' has too many points");
        std::vector<double> out;
        for (long i = 0; i < count; ++i) {
            // Snap to a short decimal so 0.1-style steps print cleanly.
            const double v = start + static_cast<double>(i) * step;
            out.push_back(std::round(v * 1e12) / 1e12);
        }
        return out;
    }
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(parse_number(part));
    return out;
}

int report_failure(std::exception_ptr failure, std::ostream& err) {
    try {
        std::rethrow_exception(failure);
    } catch (const InfeasibleError& e) {
        err << "sdmt: infeasible configuration: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const ValidationError& e) {
        err << "sdmt: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "sdmt: " << e.what() << "\n";
        return kExitUsage;
    } catch (const OptimizerError& e) {
        err << "sdmt: bounds optimizer failed: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const QuadratureError& e) {
        err << "sdmt: gaussian-approx quadrature failed: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const Error& e) {
        err << "sdmt: numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-SNR secrecy diversity-multiplexing tradeoff of zero-forcing transmission"};
    app.name("sdmt");
    app.require_subcommand(1);

    RunSpec gain_spec, outage_spec, dmt_spec, asym_spec, check_spec;
    auto* gain = app.add_subcommand("gain", "estimate the array gain g and optionally write a manifest");
    gain->add_option("--config", gain_spec.config, "antenna triple Nt,Nm,Ne")->required();
    gain->add_option("--trials", gain_spec.trials, "Monte-Carlo trials");
    gain->add_option("--seed", gain_spec.seed, "random seed");
    gain->add_option("--out", gain_spec.out_dir, "directory for manifest.txt");
    gain->add_option("--workers", gain_spec.workers, "worker threads (0 = all cores)");

    auto* outage = app.add_subcommand("outage-curve", "outage probability versus SNR");
    add_run_options(*outage, outage_spec, true, true, true);
    auto* dmt = app.add_subcommand("dmt-curve", "diversity versus multiplexing gain");
    add_run_options(*dmt, dmt_spec, true, true, true);
    auto* asym = app.add_subcommand("asymptote", "high-SNR tradeoff tables");
    add_run_options(*asym, asym_spec, true, true, false);

    auto* check = app.add_subcommand("check", "run the acceptance suite");
    check->add_option("--trials", check_spec.trials, "Monte-Carlo trials");
    check->add_option("--gain-trials", check_spec.gain_trials, "trials for each array-gain estimate");
    check->add_option("--seed", check_spec.seed, "random seed");
    check->add_option("--workers", check_spec.workers, "worker threads (0 = all cores)");
    check_spec.seed = AcceptanceOptions{}.seed;

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "sdmt: " << e.what() << "\n";
        if (app.get_subcommands().empty()) err << app.help();
        return kExitUsage;
    }

    try {
        if (gain->parsed()) return cmd_gain(gain_spec, out);
        if (outage->parsed()) return cmd_outage(outage_spec, out);
        if (dmt->parsed()) return cmd_dmt(dmt_spec, out, err);
        if (asym->parsed()) return cmd_asymptote(asym_spec, out);
        if (check->parsed()) return cmd_check(check_spec, out);
    } catch (...) {
        return report_failure(std::current_exception(), err);
    }
    return kExitUsage;
}

}  // namespace sdmt
