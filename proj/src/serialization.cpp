#include "vmfkl/serialization.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vmfkl::io {
namespace {

template <class T>
std::string optional_cell(const std::optional<T>& v) {
    if (!v) return {};
    if constexpr (std::is_floating_point_v<T>) {
        return format_double(*v);
    } else {
        return std::to_string(*v);
    }
}

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string join_flags(const std::vector<std::string>& flags) {
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out += ';';
        out += f;
    }
    return out;
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_batch_csv(std::ostream& os, const SampleBatch& batch) {
    const int d = batch.params.dim();
    for (int j = 1; j <= d; ++j) os << (j > 1 ? "," : "") << 'x' << j;
    os << '\n';
    for (const auto& p : batch.points) {
        const auto c = p.coords();
        for (std::size_t j = 0; j < c.size(); ++j) os << (j > 0 ? "," : "") << format_double(c[j]);
        os << '\n';
    }
}

nlohmann::json batch_to_json(const SampleBatch& batch) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : batch.points) {
        points.push_back(std::vector<double>(p.coords().begin(), p.coords().end()));
    }
    const auto mu = batch.params.mu().coords();
    return {{"seed", batch.seed},
            {"kappa", batch.params.kappa()},
            {"mu", std::vector<double>(mu.begin(), mu.end())},
            {"points", std::move(points)}};
}

std::vector<UnitVector> read_points_csv(std::istream& is) {
    std::vector<UnitVector> out;
    std::string line;
    if (!std::getline(is, line)) return out;  // header
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> coords;
        std::istringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc()) throw std::invalid_argument("bad CSV number: " + cell);
            coords.push_back(v);
        }
        out.emplace_back(std::move(coords));
    }
    return out;
}

const std::vector<std::string> kReportColumns = {
    "d",     "kappa_q", "kappa_p",   "cos_theta",  "exact", "bound",
    "corollary", "mc",  "mc_stderr", "padded_dim", "flags"};

void write_report_csv_header(std::ostream& os) {
    for (std::size_t i = 0; i < kReportColumns.size(); ++i) {
        os << (i > 0 ? "," : "") << kReportColumns[i];
    }
    os << '\n';
}

void write_report_csv_row(std::ostream& os, const KlReport& r) {
    const bool ok = r.error.empty();
    os << r.d << ',' << format_double(r.kappa_q) << ',' << format_double(r.kappa_p) << ','
       << format_double(r.cos_theta) << ',' << (ok ? format_double(r.exact) : std::string()) << ','
       << optional_cell(r.theorem1_bound) << ',' << optional_cell(r.corollary_value) << ','
       << optional_cell(r.mc_estimate) << ',' << optional_cell(r.mc_stderr) << ','
       << optional_cell(r.padded_dim) << ',' << join_flags(r.flags) << '\n';
}

nlohmann::json report_to_json(const KlReport& r) {
    nlohmann::json j = {
        {"d", r.d},
        {"kappa_q", r.kappa_q},
        {"kappa_p", r.kappa_p},
        {"cos_theta", r.cos_theta},
        {"exact", r.error.empty() ? nlohmann::json(r.exact) : nlohmann::json(nullptr)},
        {"bound", optional_json(r.theorem1_bound)},
        {"corollary", optional_json(r.corollary_value)},
        {"exact_to_uniform", optional_json(r.exact_to_uniform)},
        {"mc", optional_json(r.mc_estimate)},
        {"mc_stderr", optional_json(r.mc_stderr)},
        {"padded_dim", optional_json(r.padded_dim)},
        {"flags", r.flags},
    };
    if (r.corollary_value && r.exact_to_uniform) {
        j["corollary_deviation"] = *r.corollary_value - *r.exact_to_uniform;
    }
    if (r.q && r.p) {
        const auto mq = r.q->mu().coords();
        const auto mp = r.p->mu().coords();
        j["mu_q"] = std::vector<double>(mq.begin(), mq.end());
        j["mu_p"] = std::vector<double>(mp.begin(), mp.end());
    }
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

AuditGrid grid_from_json(const nlohmann::json& spec) {
    if (!spec.is_object()) throw std::invalid_argument("grid spec must be a JSON object");
    AuditGrid g;
    try {
        g.dims = spec.at("dims").get<std::vector<int>>();
        g.kappas_q = spec.at("kappas_q").get<std::vector<double>>();
        g.kappas_p = spec.at("kappas_p").get<std::vector<double>>();
        g.cosines = spec.at("cosines").get<std::vector<double>>();
        g.n_mc = spec.value("n_mc", std::size_t{0});
        g.seed = spec.value("seed", std::uint64_t{0});
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("grid spec: ") + e.what());
    }
    return g;
}

}  // namespace vmfkl::io
