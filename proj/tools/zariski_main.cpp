// zariski: JSON job specs in, tables / CSV / JSON out.
//
//   zariski [--input FILE] [--tol X] [--format table|json|csv] [--jobs N]
//
// The job document is {"command": ..., "payload": {...}, "tol": ..., "output":
// ...}; flags override the optional job fields.  Exit codes: 0 success, 2
// malformed input, 3 domain outcome (no decomposition / nothing nef below /
// no sections — the body explains), 4 numerical tolerance not met.

#include <CLI11.hpp>

#include "zariskilab/json_io.hpp"
#include "zariskilab/sections_lab.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using nlohmann::json;
using zar::cli::MalformedInput;

// ---------------------------------------------------------------------------
// Rendering

// Canonical JSON document plus tabular views of the same result.
struct RenderDoc {
    json doc;
    std::vector<std::string> columns;               // empty = scalar-only result
    std::vector<std::vector<std::string>> rows;
    std::vector<std::pair<std::string, std::string>> scalars;
};

std::string fmt(double v) { return zar::cli::format_double(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt(long long v) { return std::to_string(v); }
std::string fmt(int v) { return std::to_string(v); }

void emit(const RenderDoc& r, const std::string& format, std::ostream& out) {
    if (format == "json") {
        out << zar::cli::dump_deterministic(r.doc) << "\n";
        return;
    }
    if (format == "csv") {
        if (!r.columns.empty()) {
            for (std::size_t i = 0; i < r.columns.size(); ++i) {
                out << (i ? "," : "") << r.columns[i];
            }
            out << "\n";
            for (const auto& row : r.rows) {
                for (std::size_t i = 0; i < row.size(); ++i) {
                    out << (i ? "," : "") << row[i];
                }
                out << "\n";
            }
        } else {
            out << "key,value\n";
            for (const auto& [k, v] : r.scalars) out << k << "," << v << "\n";
        }
        return;
    }
    // table
    for (const auto& [k, v] : r.scalars) out << k << " = " << v << "\n";
    if (!r.columns.empty()) {
        if (!r.scalars.empty()) out << "\n";
        std::vector<std::size_t> w(r.columns.size());
        for (std::size_t i = 0; i < r.columns.size(); ++i) w[i] = r.columns[i].size();
        for (const auto& row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                w[i] = std::max(w[i], row[i].size());
            }
        }
        auto line = [&](const std::vector<std::string>& cells) {
            std::string s;
            for (std::size_t i = 0; i < cells.size(); ++i) {
                if (i) s += "  ";
                s += cells[i];
                if (i + 1 < cells.size()) s.append(w[i] - cells[i].size(), ' ');
            }
            out << s << "\n";
        };
        line(r.columns);
        for (const auto& row : r.rows) line(row);
    }
}

// ---------------------------------------------------------------------------
// Small helpers

[[noreturn]] void fail(const std::string& what) { throw MalformedInput(what); }

void check_payload_keys(const json& payload, const std::set<std::string>& allowed) {
    for (auto it = payload.begin(); it != payload.end(); ++it) {
        if (!allowed.count(it.key())) fail("payload: unknown key '" + it.key() + "'");
    }
}

// The divisor either sits under "divisor" or the payload itself is the divisor
// object; `extra` lists the command's own keys.
zar::p1::ModelDivisor payload_divisor(const json& payload,
                                      const std::set<std::string>& extra) {
    if (!payload.is_object()) fail("payload: expected a JSON object");
    if (payload.contains("divisor")) {
        std::set<std::string> allowed = extra;
        allowed.insert("divisor");
        check_payload_keys(payload, allowed);
        return zar::cli::divisor_from_json(payload.at("divisor"));
    }
    return zar::cli::divisor_from_json(payload, extra);
}

std::vector<int> int_list(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) fail(std::string(what) + ": expected a non-empty array");
    std::vector<int> out;
    for (const auto& v : j) {
        long long x = zar::cli::integer_number(v, what);
        if (x < -(1ll << 31) || x > (1ll << 31)) fail(std::string(what) + ": out of range");
        out.push_back(static_cast<int>(x));
    }
    return out;
}

std::vector<double> double_list(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) fail(std::string(what) + ": expected a non-empty array");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(zar::cli::finite_number(v, what));
    return out;
}

// Index-ordered map with a shared work queue; the first failure (in index
// order) is rethrown after all workers drain, so output and errors do not
// depend on scheduling.
template <class R>
std::vector<R> parallel_map(std::size_t count, int jobs,
                            const std::function<R(std::size_t)>& fn) {
    std::vector<std::optional<R>> tmp(count);
    std::vector<std::exception_ptr> errs(count);
    auto one = [&](std::size_t i) {
        try {
            tmp[i] = fn(i);
        } catch (...) {
            errs[i] = std::current_exception();
        }
    };
    if (jobs > 1 && count > 1) {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                one(i);
            }
        };
        std::vector<std::thread> threads;
        std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(jobs), count);
        for (std::size_t t = 0; t < nt; ++t) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    } else {
        for (std::size_t i = 0; i < count; ++i) one(i);
    }
    for (std::size_t i = 0; i < count; ++i) {
        if (errs[i]) std::rethrow_exception(errs[i]);
    }
    std::vector<R> out;
    out.reserve(count);
    for (auto& v : tmp) out.push_back(std::move(*v));
    return out;
}

// ---------------------------------------------------------------------------
// Command handlers

RenderDoc cmd_solve(const json& payload) {
    check_payload_keys(payload, {"q", "x", "labels"});
    zar::core::ZariskiSystem sys = zar::cli::system_from_json(payload);
    if (!payload.contains("x")) fail("payload: missing key 'x'");
    zar::RatVec x = zar::cli::ratvec_from_json(payload.at("x"), sys.size(), "x");
    zar::core::Decomposition dec =
        zar::core::solve_decomposition(sys, zar::core::to_basis_vector(sys, x));
    zar::RatVec y = zar::core::align(sys, dec.positive);
    zar::RatVec z = zar::core::align(sys, dec.negative);

    RenderDoc r;
    json support = json::array();
    std::string support_str;
    for (const auto& label : dec.support) {
        std::size_t idx = sys.index_of(label);
        support.push_back(idx);
        if (!support_str.empty()) support_str += " ";
        support_str += std::to_string(idx);
    }
    json yj = json::array(), zj = json::array();
    for (std::size_t i = 0; i < sys.size(); ++i) {
        yj.push_back(zar::rat_to_string(y[i]));
        zj.push_back(zar::rat_to_string(z[i]));
    }
    r.doc = json{{"support", support}, {"y", yj}, {"z", zj}};
    r.scalars = {{"support", support_str.empty() ? "-" : support_str}};
    r.columns = {"label", "y", "z"};
    for (std::size_t i = 0; i < sys.size(); ++i) {
        r.rows.push_back({sys.labels[i], zar::rat_to_string(y[i]), zar::rat_to_string(z[i])});
    }
    return r;
}

RenderDoc cmd_certify(const json& payload) {
    check_payload_keys(payload, {"q", "labels", "support"});
    zar::core::ZariskiSystem sys = zar::cli::system_from_json(payload);
    if (!payload.contains("support")) fail("payload: missing key 'support'");
    const json& sj = payload.at("support");
    if (!sj.is_array()) fail("support: expected an array");
    std::vector<std::string> support;
    for (const auto& cell : sj) {
        if (cell.is_string()) {
            support.push_back(cell.get<std::string>());
        } else {
            long long idx = zar::cli::integer_number(cell, "support");
            if (idx < 0 || std::size_t(idx) >= sys.size()) fail("support: index out of range");
            support.push_back(sys.labels[std::size_t(idx)]);
        }
    }
    zar::core::NegativityCertificate cert =
        zar::core::certify_negative_part(sys, support);

    RenderDoc r;
    json supp = json::array();
    for (const auto& label : cert.support) supp.push_back(sys.index_of(label));
    auto mat_json = [](const zar::RatMat& m) {
        json out = json::array();
        for (const auto& row : m) {
            json rj = json::array();
            for (const auto& v : row) rj.push_back(zar::rat_to_string(v));
            out.push_back(std::move(rj));
        }
        return out;
    };
    r.doc = json{{"support", supp},
                 {"lower", mat_json(cert.lower)},
                 {"upper", mat_json(cert.upper)},
                 {"det_sign_ok", cert.det_sign_ok}};
    r.doc["symmetric_negdef"] =
        cert.symmetric_negdef ? json(*cert.symmetric_negdef) : json(nullptr);
    r.scalars = {{"det_sign_ok", fmt(cert.det_sign_ok)},
                 {"symmetric_negdef", cert.symmetric_negdef
                                          ? fmt(*cert.symmetric_negdef)
                                          : std::string("n/a")},
                 {"support_size", fmt(static_cast<long long>(cert.support.size()))}};
    return r;
}

RenderDoc cmd_p1_decompose(const json& payload) {
    zar::p1::ModelDivisor d = payload_divisor(payload, {});
    zar::p1::DecompositionP1 dec = zar::p1::zariski_decompose_p1(d);
    RenderDoc r;
    r.doc = json{{"outcome", "decomposed"},
                 {"positive", zar::cli::divisor_to_json(dec.positive)},
                 {"negative_c0", dec.negative_c0},
                 {"negative_cinf", dec.negative_cinf}};
    r.scalars = {{"outcome", "decomposed"},
                 {"negative_c0", fmt(dec.negative_c0)},
                 {"negative_cinf", fmt(dec.negative_cinf)}};
    if (dec.theta) {
        r.doc["theta"] = *dec.theta;
        r.scalars.push_back({"theta", fmt(*dec.theta)});
    }
    if (dec.theta_p) {
        r.doc["theta_p"] = *dec.theta_p;
        r.scalars.push_back({"theta_p", fmt(*dec.theta_p)});
    }
    r.scalars.push_back(
        {"positive", zar::cli::dump_deterministic(r.doc["positive"])});
    return r;
}

RenderDoc cmd_p1_degree(const json& payload, int jobs) {
    zar::p1::ModelDivisor d = payload_divisor(payload, {"curve", "curves"});
    std::vector<zar::p1::HorizontalCurve> curves;
    bool has_one = payload.contains("curve"), has_many = payload.contains("curves");
    if (has_one == has_many) fail("p1-degree: give exactly one of 'curve' or 'curves'");
    if (has_one) {
        curves.push_back(zar::cli::curve_from_json(payload.at("curve")));
    } else {
        const json& cj = payload.at("curves");
        if (!cj.is_array() || cj.empty()) fail("curves: expected a non-empty array");
        for (const auto& c : cj) curves.push_back(zar::cli::curve_from_json(c));
    }
    std::vector<double> degs = parallel_map<double>(
        curves.size(), jobs,
        [&](std::size_t i) { return zar::p1::degree_on_curve(d, curves[i]); });

    RenderDoc r;
    json rows = json::array();
    r.columns = {"curve", "degree"};
    for (std::size_t i = 0; i < curves.size(); ++i) {
        std::string name = zar::cli::curve_to_string(curves[i]);
        rows.push_back(json{{"curve", name}, {"degree", degs[i]}});
        r.rows.push_back({name, fmt(degs[i])});
    }
    r.doc = json{{"rows", rows}};
    return r;
}

RenderDoc cmd_p1_pair(const json& payload, double tol) {
    check_payload_keys(payload, {"d1", "d2"});
    if (!payload.contains("d1") || !payload.contains("d2")) {
        fail("p1-pair: payload needs 'd1' and 'd2'");
    }
    zar::p1::ModelDivisor d1 = zar::cli::divisor_from_json(payload.at("d1"));
    zar::p1::ModelDivisor d2 = zar::cli::divisor_from_json(payload.at("d2"));
    double v = zar::p1::pairing(d1, d2, tol);
    RenderDoc r;
    r.doc = json{{"pairing", v}};
    r.scalars = {{"pairing", fmt(v)}};
    return r;
}

RenderDoc cmd_p1_vol(const json& payload, double tol) {
    zar::p1::ModelDivisor d = payload_divisor(payload, {});
    double v = zar::p1::volume_p1(d, tol);
    RenderDoc r;
    r.doc = json{{"volume", v}};
    r.scalars = {{"volume", fmt(v)}};
    return r;
}

RenderDoc cmd_sections_count(const json& payload, double tol, int jobs) {
    zar::p1::ModelDivisor d = payload_divisor(payload, {"n", "ns", "exact"});
    std::vector<int> ns;
    bool has_one = payload.contains("n"), has_many = payload.contains("ns");
    if (has_one == has_many) fail("sections-count: give exactly one of 'n' or 'ns'");
    if (has_one) {
        ns.push_back(static_cast<int>(
            zar::cli::integer_number(payload.at("n"), "n")));
    } else {
        ns = int_list(payload.at("ns"), "ns");
    }
    std::optional<bool> exact;
    if (payload.contains("exact")) {
        if (!payload.at("exact").is_boolean()) fail("exact: expected a boolean");
        exact = payload.at("exact").get<bool>();
    }

    struct Row {
        int n;
        std::optional<zar::sec::CountResult> exact_count;
        zar::sec::CountBounds bounds;
    };
    std::vector<Row> rows = parallel_map<Row>(ns.size(), jobs, [&](std::size_t i) {
        Row row;
        row.n = ns[i];
        zar::sec::SectionSpace space = zar::sec::make_section_space(d, ns[i]);
        row.bounds = zar::sec::hhat0_bounds(space);
        if (!exact.has_value()) {
            try {
                row.exact_count = zar::sec::hhat0_exact(space, tol);
            } catch (const zar::sec::BoxTooLarge&) {
                // auto mode: fall back to bounds silently
            }
        } else if (*exact) {
            row.exact_count = zar::sec::hhat0_exact(space, tol);
        }
        return row;
    });

    RenderDoc r;
    json jrows = json::array();
    r.columns = {"n", "count", "log_count", "log_lower", "log_upper"};
    for (const auto& row : rows) {
        json jr{{"n", row.n},
                {"log_lower", row.bounds.log_lower},
                {"log_upper", row.bounds.log_upper}};
        std::string count_cell, log_count_cell;
        if (row.exact_count) {
            jr["count"] = row.exact_count->count;
            jr["log_count"] = row.exact_count->log_count;
            count_cell = fmt(row.exact_count->count);
            log_count_cell = fmt(row.exact_count->log_count);
        }
        jrows.push_back(std::move(jr));
        r.rows.push_back({fmt(row.n), count_cell, log_count_cell,
                          fmt(row.bounds.log_lower), fmt(row.bounds.log_upper)});
    }
    r.doc = json{{"rows", jrows}};
    return r;
}

RenderDoc cmd_sections_sigma(const json& payload, double tol) {
    zar::p1::ModelDivisor d = payload_divisor(payload, {"n", "curve", "n_max"});
    bool mult_mode = payload.contains("curve") || payload.contains("n_max");
    RenderDoc r;
    if (mult_mode) {
        if (!payload.contains("curve") || !payload.contains("n_max")) {
            fail("sections-sigma: multiplicity mode needs both 'curve' and 'n_max'");
        }
        zar::p1::HorizontalCurve c = zar::cli::curve_from_json(payload.at("curve"));
        int n_max = static_cast<int>(
            zar::cli::integer_number(payload.at("n_max"), "n_max"));
        zar::sec::MultiplicityReport rep = zar::sec::asymptotic_multiplicity(d, c, n_max);
        json seq = json::array();
        r.columns = {"n", "value"};
        for (const auto& [n, v] : rep.sequence) {
            seq.push_back(json{{"n", n}, {"value", v}});
            r.rows.push_back({fmt(n), fmt(v)});
        }
        r.doc = json{{"mu", rep.mu}, {"sequence", seq}};
        r.scalars = {{"mu", fmt(rep.mu)}};
        return r;
    }
    if (!payload.contains("n")) fail("sections-sigma: missing key 'n'");
    int n = static_cast<int>(zar::cli::integer_number(payload.at("n"), "n"));
    zar::sec::SigmaDecomposition sd = zar::sec::sigma_decomposition(d, n, tol);
    r.doc = json{{"f_c0", sd.f_c0},
                 {"f_cinf", sd.f_cinf},
                 {"m_c0", sd.m_c0},
                 {"m_cinf", sd.m_cinf},
                 {"i_min_ball", sd.i_min_ball},
                 {"i_max_ball", sd.i_max_ball},
                 {"grid_log_r", sd.grid_log_r},
                 {"green_m", sd.green_m}};
    r.scalars = {{"f_c0", fmt(sd.f_c0)},
                 {"f_cinf", fmt(sd.f_cinf)},
                 {"m_c0", fmt(sd.m_c0)},
                 {"m_cinf", fmt(sd.m_cinf)},
                 {"i_min_ball", fmt(sd.i_min_ball)},
                 {"i_max_ball", fmt(sd.i_max_ball)}};
    r.columns = {"log_r", "green_m"};
    for (std::size_t i = 0; i < sd.grid_log_r.size(); ++i) {
        r.rows.push_back({fmt(sd.grid_log_r[i]), fmt(sd.green_m[i])});
    }
    return r;
}

RenderDoc cmd_probe_dist(const json& payload, double tol) {
    zar::p1::ModelDivisor d =
        payload_divisor(payload, {"n", "log_radii", "exponents", "n_max"});
    RenderDoc r;
    if (payload.contains("n_max")) {
        int n_max = static_cast<int>(
            zar::cli::integer_number(payload.at("n_max"), "n_max"));
        zar::sec::DistGrowthReport rep = zar::sec::dist_growth_probe(d, n_max, tol);
        r.doc = json{{"ns", rep.ns},
                     {"log_dn", rep.log_dn},
                     {"c_fit", rep.c_fit},
                     {"c_chain", rep.c_chain},
                     {"c", rep.c},
                     {"chain_ok", rep.chain_ok},
                     {"growth_exponent", rep.growth_exponent}};
        r.scalars = {{"c", fmt(rep.c)},
                     {"c_fit", fmt(rep.c_fit)},
                     {"c_chain", fmt(rep.c_chain)},
                     {"chain_ok", fmt(rep.chain_ok)},
                     {"growth_exponent", fmt(rep.growth_exponent)}};
        r.columns = {"n", "log_dn"};
        for (std::size_t i = 0; i < rep.ns.size(); ++i) {
            r.rows.push_back({fmt(rep.ns[i]), fmt(rep.log_dn[i])});
        }
        return r;
    }
    if (!payload.contains("n") || !payload.contains("log_radii")) {
        fail("probe-dist: give 'n_max' (growth mode) or 'n' + 'log_radii' (table mode)");
    }
    int n = static_cast<int>(zar::cli::integer_number(payload.at("n"), "n"));
    std::vector<double> radii = double_list(payload.at("log_radii"), "log_radii");
    zar::sec::SectionSpace space = zar::sec::make_section_space(d, n);
    std::vector<long long> sub;
    if (payload.contains("exponents")) {
        for (int v : int_list(payload.at("exponents"), "exponents")) sub.push_back(v);
    } else {
        for (std::size_t i = 0; i < space.exponents.size(); ++i) {
            if (space.log_norms[i] <= 1e-12) sub.push_back(space.exponents[i]);
        }
    }
    zar::sec::DistortionTable table = zar::sec::distortion(space, sub, radii, tol);
    r.doc = json{{"log_r", table.log_r}, {"log_dist", table.log_dist}};
    r.columns = {"log_r", "log_dist"};
    for (std::size_t i = 0; i < table.log_r.size(); ++i) {
        r.rows.push_back({fmt(table.log_r[i]), fmt(table.log_dist[i])});
    }
    return r;
}

RenderDoc cmd_probe_gromov(const json& payload, double tol) {
    check_payload_keys(payload, {"divisors", "samples"});
    if (!payload.contains("divisors")) fail("probe-gromov: missing key 'divisors'");
    const json& dj = payload.at("divisors");
    if (!dj.is_array() || dj.empty()) fail("divisors: expected a non-empty array");
    std::vector<zar::p1::ModelDivisor> ds;
    for (const auto& cell : dj) ds.push_back(zar::cli::divisor_from_json(cell));
    int samples = 64;
    if (payload.contains("samples")) {
        samples = static_cast<int>(
            zar::cli::integer_number(payload.at("samples"), "samples"));
    }
    zar::sec::GromovReport rep = zar::sec::gromov_probe(ds, samples, tol);
    RenderDoc r;
    r.doc = json{{"constant", rep.constant},
                 {"constant_half", rep.constant_half},
                 {"constant_doubled", rep.constant_doubled},
                 {"stable", rep.stable},
                 {"doubling_bounded", rep.doubling_bounded},
                 {"samples", rep.samples}};
    r.scalars = {{"constant", fmt(rep.constant)},
                 {"constant_half", fmt(rep.constant_half)},
                 {"constant_doubled", fmt(rep.constant_doubled)},
                 {"stable", fmt(rep.stable)},
                 {"doubling_bounded", fmt(rep.doubling_bounded)},
                 {"samples", fmt(rep.samples)}};
    return r;
}

RenderDoc cmd_probe_orth(const json& payload) {
    zar::p1::ModelDivisor d = payload_divisor(payload, {"ns", "limit_tol"});
    std::vector<int> ns = {4, 8, 16, 32};
    if (payload.contains("ns")) ns = int_list(payload.at("ns"), "ns");
    double limit_tol = 0.05;
    if (payload.contains("limit_tol")) {
        limit_tol = zar::cli::finite_number(payload.at("limit_tol"), "limit_tol");
        if (limit_tol <= 0.0) fail("limit_tol: must be positive");
    }
    zar::sec::OrthogonalityReport rep = zar::sec::orthogonality_probe(d, ns, limit_tol);
    RenderDoc r;
    r.doc = json{{"ns", rep.ns},
                 {"values", rep.values},
                 {"extrapolated_limit", rep.extrapolated_limit},
                 {"nonnegative", rep.nonnegative},
                 {"decreasing", rep.decreasing},
                 {"limit_within_tol", rep.limit_within_tol},
                 {"eval_consistent", rep.eval_consistent}};
    r.scalars = {{"extrapolated_limit", fmt(rep.extrapolated_limit)},
                 {"nonnegative", fmt(rep.nonnegative)},
                 {"decreasing", fmt(rep.decreasing)},
                 {"limit_within_tol", fmt(rep.limit_within_tol)},
                 {"eval_consistent", fmt(rep.eval_consistent)}};
    r.columns = {"n", "value"};
    for (std::size_t i = 0; i < rep.ns.size(); ++i) {
        r.rows.push_back({fmt(rep.ns[i]), fmt(rep.values[i])});
    }
    return r;
}

// ---------------------------------------------------------------------------
// Job runner

int run_job(const json& job, std::optional<double> tol_flag,
            std::optional<std::string> format_flag, int jobs, std::ostream& out,
            std::ostream& err) {
    if (!job.is_object()) fail("job: expected a JSON object");
    for (auto it = job.begin(); it != job.end(); ++it) {
        if (it.key() != "command" && it.key() != "payload" && it.key() != "tol" &&
            it.key() != "output") {
            fail("job: unknown key '" + it.key() + "'");
        }
    }
    if (!job.contains("command") || !job.at("command").is_string()) {
        fail("job: missing string key 'command'");
    }
    if (!job.contains("payload") || !job.at("payload").is_object()) {
        fail("job: missing object key 'payload'");
    }
    std::string command = job.at("command").get<std::string>();
    const json& payload = job.at("payload");

    double tol = 1e-10;
    if (job.contains("tol")) tol = zar::cli::finite_number(job.at("tol"), "tol");
    if (tol_flag) tol = *tol_flag;
    if (!(tol > 0.0)) fail("tol: must be positive");

    std::string format = "json";
    if (job.contains("output")) {
        if (!job.at("output").is_string()) fail("output: expected a string");
        format = job.at("output").get<std::string>();
    }
    if (format_flag) format = *format_flag;
    if (format != "table" && format != "json" && format != "csv") {
        fail("output: expected one of table|json|csv");
    }

    RenderDoc result;
    try {
        if (command == "solve") {
            result = cmd_solve(payload);
        } else if (command == "certify") {
            result = cmd_certify(payload);
        } else if (command == "p1-decompose") {
            result = cmd_p1_decompose(payload);
        } else if (command == "p1-degree") {
            result = cmd_p1_degree(payload, jobs);
        } else if (command == "p1-pair") {
            result = cmd_p1_pair(payload, tol);
        } else if (command == "p1-vol") {
            result = cmd_p1_vol(payload, tol);
        } else if (command == "sections-count") {
            result = cmd_sections_count(payload, tol, jobs);
        } else if (command == "sections-sigma") {
            result = cmd_sections_sigma(payload, tol);
        } else if (command == "probe-dist") {
            result = cmd_probe_dist(payload, tol);
        } else if (command == "probe-gromov") {
            result = cmd_probe_gromov(payload, tol);
        } else if (command == "probe-orth") {
            result = cmd_probe_orth(payload);
        } else {
            fail("unknown command '" + command + "'");
        }
    } catch (const zar::core::NoNefBelow& e) {
        RenderDoc r;
        r.doc = json{{"outcome", "no-nef-below"}, {"detail", e.what()}};
        r.scalars = {{"outcome", "no-nef-below"}, {"detail", e.what()}};
        emit(r, format, out);
        return 3;
    } catch (const zar::p1::NoDecomposition& e) {
        RenderDoc r;
        r.doc = json{{"outcome", "no-decomposition"},
                     {"witness", json{{"log_t0", e.witness.log_t0},
                                      {"epsilon", e.witness.epsilon},
                                      {"check_log_alpha", e.witness.check_log_alpha},
                                      {"check_log_beta", e.witness.check_log_beta}}}};
        r.scalars = {{"outcome", "no-decomposition"},
                     {"witness_log_t0", fmt(e.witness.log_t0)},
                     {"witness_epsilon", fmt(e.witness.epsilon)},
                     {"witness_check_log_alpha", fmt(e.witness.check_log_alpha)},
                     {"witness_check_log_beta", fmt(e.witness.check_log_beta)}};
        emit(r, format, out);
        return 3;
    } catch (const zar::p1::NotComputed& e) {
        RenderDoc r;
        r.doc = json{{"outcome", "not-computed"}, {"reason", e.reason}};
        r.scalars = {{"outcome", "not-computed"}, {"reason", e.reason}};
        emit(r, format, out);
        return 3;
    } catch (const zar::sec::EmptySections& e) {
        RenderDoc r;
        r.doc = json{{"outcome", "empty-sections"}, {"detail", e.what()}};
        r.scalars = {{"outcome", "empty-sections"}, {"detail", e.what()}};
        emit(r, format, out);
        return 3;
    }
    emit(result, format, out);
    (void)err;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Zariski decompositions, an arithmetic divisor "
                 "calculator on the projective line over Z, and "
                 "section-lattice probes"};
    std::string input = "-";
    double tol_value = 0.0;
    std::string format_value;
    int jobs = 1;
    app.add_option("--input", input, "Job file path, or '-' for stdin")
        ->capture_default_str();
    auto* tol_opt = app.add_option("--tol", tol_value, "Numerical tolerance (> 0)");
    auto* fmt_opt = app.add_option("--format", format_value, "Output format")
                        ->check(CLI::IsMember({"table", "json", "csv"}));
    app.add_option("--jobs", jobs, "Worker threads for sweep payloads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (jobs < 1) {
        std::cerr << "error: --jobs must be at least 1\n";
        return 2;
    }
    std::optional<double> tol_flag;
    if (tol_opt->count() > 0) tol_flag = tol_value;
    std::optional<std::string> format_flag;
    if (fmt_opt->count() > 0) format_flag = format_value;

    std::string text;
    if (input == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        text = ss.str();
    } else {
        std::ifstream f(input, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot open input file '" << input << "'\n";
            return 2;
        }
        std::ostringstream ss;
        ss << f.rdbuf();
        text = ss.str();
    }

    try {
        json job = json::parse(text);
        return run_job(job, tol_flag, format_flag, jobs, std::cout, std::cerr);
    } catch (const json::parse_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MalformedInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zar::core::OffDiagonalNegative& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zar::core::LabelMismatch& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zar::core::NonNegativeDiagonal& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zar::core::SingularReduction& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zar::p1::InvalidDivisor& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zar::p1::InvalidCurve& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zar::p1::UnsupportedFamily& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zar::p1::UnsupportedConfiguration& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const zar::p1::QuadratureDivergence& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const zar::sec::BoxTooLarge& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const zar::sec::AmbiguousBoundary& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
