#include "vmfkl/cli.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "vmfkl/divergence.hpp"
#include "vmfkl/errors.hpp"
#include "vmfkl/oracle.hpp"
#include "vmfkl/serialization.hpp"
#include "vmfkl/special_functions.hpp"

namespace vmfkl::cli {
namespace {

using OrderedJson = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An ordered list of named scalar values, rendered as one CSV row, a JSON
// object, or aligned "name  value" lines.
using Record = std::vector<std::pair<std::string, OrderedJson>>;

std::string cell(const OrderedJson& v) {
    if (v.is_null()) return {};
    if (v.is_number_float()) return io::format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

std::string render(const Record& rec, OutputFormat fmt) {
    std::ostringstream os;
    switch (fmt) {
        case OutputFormat::csv:
            for (std::size_t i = 0; i < rec.size(); ++i) os << (i ? "," : "") << rec[i].first;
            os << '\n';
            for (std::size_t i = 0; i < rec.size(); ++i) os << (i ? "," : "") << cell(rec[i].second);
            os << '\n';
            break;
        case OutputFormat::json: {
            OrderedJson j = OrderedJson::object();
            for (const auto& [k, v] : rec) j[k] = v;
            os << j.dump(2) << '\n';
            break;
        }
        case OutputFormat::pretty:
            for (const auto& [k, v] : rec) {
                const std::string c = cell(v);
                os << std::left << std::setw(20) << k << (c.empty() ? "-" : c) << '\n';
            }
            break;
    }
    return os.str();
}

template <class T>
OrderedJson opt(const std::optional<T>& v) {
    return v ? OrderedJson(*v) : OrderedJson(nullptr);
}

std::string join(const std::vector<std::string>& xs, char sep) {
    std::string out;
    for (const auto& x : xs) {
        if (!out.empty()) out += sep;
        out += x;
    }
    return out;
}

Record report_record(const KlReport& r) {
    Record rec = {
        {"d", r.d},
        {"kappa_q", r.kappa_q},
        {"kappa_p", r.kappa_p},
        {"cos_theta", r.cos_theta},
        {"exact", r.exact},
        {"bound", opt(r.theorem1_bound)},
        {"corollary", opt(r.corollary_value)},
        {"exact_to_uniform", opt(r.exact_to_uniform)},
        {"mc", opt(r.mc_estimate)},
        {"mc_stderr", opt(r.mc_stderr)},
        {"padded_dim", opt(r.padded_dim)},
        {"flags", join(r.flags, ';')},
    };
    return rec;
}

std::string render_report(const KlReport& r, OutputFormat fmt) {
    std::ostringstream os;
    switch (fmt) {
        case OutputFormat::csv:
            io::write_report_csv_header(os);
            io::write_report_csv_row(os, r);
            break;
        case OutputFormat::json: os << io::report_to_json(r).dump(2) << '\n'; break;
        case OutputFormat::pretty: os << render(report_record(r), fmt); break;
    }
    return os.str();
}

void emit(const CliConfig& cfg, const std::string& payload, std::ostream& out) {
    if (!cfg.output_path) {
        out << payload;
        return;
    }
    std::ofstream file(*cfg.output_path, std::ios::binary);
    if (!file) throw UsageError("cannot open output file '" + *cfg.output_path + "'");
    file << payload;
    if (!file) throw UsageError("failed writing '" + *cfg.output_path + "'");
}

std::ostream& summary_stream(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    return cfg.output_path ? out : err;
}

int run_special(const CliConfig& cfg, std::ostream& out) {
    Record rec{{"fn", cfg.fn}};
    if (cfg.fn == "log_gamma") {
        rec.emplace_back("x", cfg.x);
        rec.emplace_back("value", log_gamma(cfg.x));
    } else if (cfg.fn == "upper_incomplete_gamma") {
        rec.emplace_back("s", cfg.s);
        rec.emplace_back("z", cfg.z);
        rec.emplace_back("value", upper_incomplete_gamma_int(cfg.s, cfg.z));
    } else if (cfg.fn == "log_bessel_i") {
        const LogBesselResult r = log_bessel_i(cfg.alpha, cfg.z);
        rec.emplace_back("alpha", cfg.alpha);
        rec.emplace_back("z", cfg.z);
        rec.emplace_back("value", std::isinf(r.value) ? OrderedJson("-inf") : OrderedJson(r.value));
        rec.emplace_back("branch", std::string(to_string(r.branch)));
    } else if (cfg.fn == "exp_integral_e") {
        const double a = cfg.alpha;
        if (a != std::round(a)) throw UsageError("exp_integral_e needs an integer --alpha");
        rec.emplace_back("alpha", static_cast<int>(a));
        rec.emplace_back("z", cfg.z);
        rec.emplace_back("value", exp_integral_E(static_cast<int>(a), cfg.z));
    } else {  // identity_audit
        const IdentityAudit a = audit_exponential_integral_identity(cfg.d_real, cfg.kappa_real);
        rec.emplace_back("d", cfg.d_real);
        rec.emplace_back("kappa", cfg.kappa_real);
        rec.emplace_back("lhs", a.lhs);
        rec.emplace_back("rhs", a.rhs);
        rec.emplace_back("abs_diff", a.abs_diff);
        rec.emplace_back("rel_diff", a.rel_diff);
    }
    emit(cfg, render(rec, cfg.output_format), out);
    return kExitOk;
}

int run_kl(const CliConfig& cfg, std::ostream& out) {
    const auto [q, p] = grid_pair(cfg.d, cfg.kappa_q, cfg.kappa_p, cfg.cos_theta);
    const KlReport r = make_report(q, p, cfg.n_mc, cfg.seed);
    emit(cfg, render_report(r, cfg.output_format), out);
    return kExitOk;
}

int run_bound(const CliConfig& cfg, std::ostream& out) {
    const auto [q, p] = grid_pair(cfg.d, cfg.kappa_q, cfg.kappa_p, cfg.cos_theta);
    const Theorem1Bound b = kl_bound_theorem1(q, p);
    Record rec = {{"d", cfg.d},
                  {"kappa_q", cfg.kappa_q},
                  {"kappa_p", cfg.kappa_p},
                  {"cos_theta", cfg.cos_theta},
                  {"bound", b.bound},
                  {"padded_dim", opt(b.padded_dim)}};
    emit(cfg, render(rec, cfg.output_format), out);
    return kExitOk;
}

std::string summary_line(const std::string& label, const BatchSummary& s) {
    std::ostringstream os;
    os << label << "n=" << s.n << " mean=[";
    for (std::size_t i = 0; i < s.mean.size(); ++i) os << (i ? "," : "") << io::format_double(s.mean[i]);
    os << "] resultant_length=" << io::format_double(s.resultant_length)
       << " mean_cosine=" << io::format_double(s.mean_cosine)
       << " circular_std=" << io::format_double(s.circular_std) << '\n';
    return os.str();
}

int run_sample(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<double> mu = cfg.mu;
    if (mu.empty()) {
        mu.assign(static_cast<std::size_t>(std::max(cfg.d, 0)), 0.0);
        if (!mu.empty()) mu[0] = 1.0;
    } else if (static_cast<int>(mu.size()) != cfg.d) {
        throw UsageError("--mu has " + std::to_string(mu.size()) + " coordinates but --d is " +
                         std::to_string(cfg.d));
    }
    if (cfg.d < 2) throw DomainError("dimension must be at least 2");
    const VmfDistribution dist(UnitVector(std::move(mu)), cfg.kappa);
    const SampleBatch batch = sample(dist, cfg.n, cfg.seed);

    std::ostringstream os;
    if (cfg.output_format == OutputFormat::json) {
        os << io::batch_to_json(batch).dump(2) << '\n';
    } else {
        io::write_batch_csv(os, batch);
    }
    emit(cfg, os.str(), out);
    summary_stream(cfg, out, err) << summary_line("", summarize(batch.points, dist.mu()));
    return kExitOk;
}

int run_figure(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto directions = figure_directions();
    std::vector<SampleBatch> clouds;
    for (std::size_t k = 0; k < kFigureKappas.size(); ++k) {
        const VmfDistribution dist(directions[k], kFigureKappas[k]);
        clouds.push_back(sample(dist, kFigurePoints, derive_seed(cfg.seed, k)));
    }

    std::ostringstream os;
    if (cfg.output_format == OutputFormat::json) {
        nlohmann::json j = {{"dim", 3}, {"n_per_cloud", kFigurePoints}, {"seed", cfg.seed}};
        j["clouds"] = nlohmann::json::array();
        for (const auto& c : clouds) j["clouds"].push_back(io::batch_to_json(c));
        os << j.dump(2) << '\n';
    } else {
        os << "kappa,mu1,mu2,mu3,x1,x2,x3\n";
        for (const auto& c : clouds) {
            const auto mu = c.params.mu().coords();
            std::string prefix = io::format_double(c.params.kappa());
            for (double m : mu) prefix += "," + io::format_double(m);
            for (const auto& p : c.points) {
                os << prefix;
                for (double x : p.coords()) os << ',' << io::format_double(x);
                os << '\n';
            }
        }
    }
    emit(cfg, os.str(), out);

    std::ostream& summary = summary_stream(cfg, out, err);
    for (const auto& c : clouds) {
        summary << summary_line("kappa=" + io::format_double(c.params.kappa()) + " ",
                                summarize(c.points, c.params.mu()));
    }
    return kExitOk;
}

int run_audit(const CliConfig& cfg, std::ostream& out, std::ostream& err) {
    std::ifstream spec_file(cfg.grid_spec);
    if (!spec_file) throw UsageError("cannot read grid spec '" + cfg.grid_spec + "'");
    nlohmann::json spec;
    try {
        spec = nlohmann::json::parse(spec_file);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("grid spec is not valid JSON: ") + e.what());
    }
    const AuditGrid grid = io::grid_from_json(spec);
    const unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    const std::vector<KlReport> rows = audit_grid(grid, threads);

    std::optional<oracle::Certification> cert;
    if (cfg.certify) cert = oracle::certify(rows);

    std::size_t below = 0, mismatch = 0, errors = 0;
    for (const auto& r : rows) {
        below += r.has_flag(flags::kBoundBelowExact);
        mismatch += r.has_flag(flags::kCorollaryMismatch);
        errors += r.has_flag(flags::kError);
    }
    Record summary = {{"rows", rows.size()},
                      {"bound_below_exact", below},
                      {"corollary_mismatch", mismatch},
                      {"errors", errors}};
    if (cert) {
        summary.emplace_back("certified", cert->passed());
        summary.emplace_back("kl_checked", cert->kl_checked);
        summary.emplace_back("kl_worst_abs_diff", cert->kl_worst_abs_diff);
        summary.emplace_back("norm_checked", cert->norm_checked);
        summary.emplace_back("norm_worst_abs_diff", cert->norm_worst_abs_diff);
    }

    std::ostringstream os;
    switch (cfg.output_format) {
        case OutputFormat::csv:
            io::write_report_csv_header(os);
            for (const auto& r : rows) io::write_report_csv_row(os, r);
            break;
        case OutputFormat::json: {
            OrderedJson j = OrderedJson::object();
            OrderedJson s = OrderedJson::object();
            for (const auto& [k, v] : summary) s[k] = v;
            j["summary"] = s;
            j["rows"] = OrderedJson::array();
            for (const auto& r : rows) j["rows"].push_back(OrderedJson::parse(io::report_to_json(r).dump()));
            os << j.dump(2) << '\n';
            break;
        }
        case OutputFormat::pretty:
            for (const auto& r : rows) {
                os << render(report_record(r), OutputFormat::pretty);
                if (!r.error.empty()) os << std::left << std::setw(20) << "error" << r.error << '\n';
                os << '\n';
            }
            break;
    }
    emit(cfg, os.str(), out);
    if (cfg.output_format != OutputFormat::json) {
        summary_stream(cfg, out, err) << render(summary, OutputFormat::pretty);
    }

    if (cert && !cert->passed()) {
        err << "error: oracle certification failed (" << cert->kl_failed << " KL, "
            << cert->norm_failed << " normalization mismatches)\n";
        return kExitNumeric;
    }
    return kExitOk;
}

OutputFormat resolve_format(const std::string& name, const std::optional<std::string>& path) {
    if (name == "csv") return OutputFormat::csv;
    if (name == "json") return OutputFormat::json;
    if (name == "pretty") return OutputFormat::pretty;
    if (path) {
        auto ends_with = [&](const std::string& suffix) {
            return path->size() >= suffix.size() &&
                   path->compare(path->size() - suffix.size(), suffix.size(), suffix) == 0;
        };
        if (ends_with(".json")) return OutputFormat::json;
        if (ends_with(".csv")) return OutputFormat::csv;
    }
    return OutputFormat::pretty;
}

}  // namespace

std::array<UnitVector, 3> figure_directions() {
    const double polar = std::numbers::pi / 3.0;
    auto at = [polar](double azimuth) {
        return UnitVector({std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
                           std::cos(polar)});
    };
    return {at(0.0), at(2.0 * std::numbers::pi / 3.0), at(4.0 * std::numbers::pi / 3.0)};
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"von Mises-Fisher distributions and their KL divergence", "vmfkl"};
    app.require_subcommand(1, 1);

    CliConfig cfg;
    std::string format_name;
    std::string out_path;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--format", format_name, "csv, json or pretty (default from --out suffix)")
            ->check(CLI::IsMember({"csv", "json", "pretty"}));
        sub->add_option("--out", out_path, "write the artifact here instead of stdout");
        sub->add_option("--seed", cfg.seed, "random seed");
    };

    CLI::App* special = app.add_subcommand("special", "evaluate a special function");
    add_common(special);
    special->add_option("--fn", cfg.fn)
        ->check(CLI::IsMember(
            {"log_gamma", "upper_incomplete_gamma", "log_bessel_i", "exp_integral_e", "identity_audit"}));
    special->add_option("--x", cfg.x, "log_gamma argument");
    special->add_option("--s", cfg.s, "incomplete gamma shape");
    special->add_option("--alpha", cfg.alpha, "Bessel / exponential integral order");
    special->add_option("--z", cfg.z, "argument");
    special->add_option("--d", cfg.d_real, "identity exponent");
    special->add_option("--kappa", cfg.kappa_real, "identity concentration");

    auto add_pair = [&](CLI::App* sub) {
        sub->add_option("--d", cfg.d, "dimension")->required();
        sub->add_option("--kq", cfg.kappa_q, "posterior concentration")->required();
        sub->add_option("--kp", cfg.kappa_p, "prior concentration")->required();
        sub->add_option("--cos", cfg.cos_theta, "cosine between the mean directions")->required();
    };
    CLI::App* kl = app.add_subcommand("kl", "KL divergence report for one pair");
    add_common(kl);
    add_pair(kl);
    kl->add_option("--mc", cfg.n_mc, "Monte Carlo sample size (0 to skip)");

    CLI::App* bound = app.add_subcommand("bound", "closed-form upper bound for one pair");
    add_common(bound);
    add_pair(bound);

    CLI::App* sample_cmd = app.add_subcommand("sample", "draw points from a VMF distribution");
    add_common(sample_cmd);
    sample_cmd->add_option("--d", cfg.d, "dimension")->required();
    sample_cmd->add_option("--kappa", cfg.kappa, "concentration")->required();
    sample_cmd->add_option("--n", cfg.n, "number of points")->required()->check(CLI::PositiveNumber);
    sample_cmd->add_option("--mu", cfg.mu, "mean direction, comma separated (default e_1)")
        ->delimiter(',');

    CLI::App* figure = app.add_subcommand("figure", "three d=3 point clouds, kappa = 1, 10, 100");
    add_common(figure);

    CLI::App* audit = app.add_subcommand("audit", "evaluate a grid of KL reports");
    add_common(audit);
    audit->add_option("--grid-spec", cfg.grid_spec, "JSON grid specification")->required();
    audit->add_flag("--certify", cfg.certify, "check rows against the quadrature oracle");
    audit->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");

    std::vector<const char*> raw;
    raw.reserve(argv.size());
    for (const auto& a : argv) raw.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    if (!out_path.empty()) cfg.output_path = out_path;
    cfg.output_format = resolve_format(format_name, cfg.output_path);

    try {
        if (special->parsed()) {
            cfg.subcommand = Subcommand::special;
            return run_special(cfg, out);
        }
        if (kl->parsed()) {
            cfg.subcommand = Subcommand::kl;
            return run_kl(cfg, out);
        }
        if (bound->parsed()) {
            cfg.subcommand = Subcommand::bound;
            return run_bound(cfg, out);
        }
        if (sample_cmd->parsed()) {
            cfg.subcommand = Subcommand::sample;
            return run_sample(cfg, out, err);
        }
        if (figure->parsed()) {
            cfg.subcommand = Subcommand::figure;
            return run_figure(cfg, out, err);
        }
        cfg.subcommand = Subcommand::audit;
        return run_audit(cfg, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "numerical domain error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const QuadratureError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumeric;
    } catch (const SamplerError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumeric;
    }
}

}  // namespace vmfkl::cli
