#include "zariskilab/json_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace zar::cli {

namespace {

[[noreturn]] void fail(const std::string& what) { throw MalformedInput(what); }

const json& require_key(const json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string(ctx) + ": missing key '" + key + "'");
    return *it;
}

void require_object(const json& j, const char* ctx) {
    if (!j.is_object()) fail(std::string(ctx) + ": expected a JSON object");
}

// Rejects divisor keys outside `allowed`, so typos do not silently default.
void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::set<std::string>& extra_ok, const char* ctx) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()) && !extra_ok.count(it.key())) {
            fail(std::string(ctx) + ": unknown key '" + it.key() + "'");
        }
    }
}

double number_field(const json& j, const char* key, double fallback,
                    bool required, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (required) fail(std::string(ctx) + ": missing key '" + key + "'");
        return fallback;
    }
    return finite_number(*it, key);
}

// One-kink radii accept both the type spelling (log_a/log_b) and the
// job-spec spelling (log_alpha/log_beta).
double aliased_number(const json& j, const char* primary, const char* alias,
                      const char* ctx) {
    bool has_p = j.contains(primary), has_a = j.contains(alias);
    if (has_p && has_a) {
        fail(std::string(ctx) + ": keys '" + primary + "' and '" + alias +
             "' are aliases; give only one");
    }
    if (!has_p && !has_a) return 0.0;
    return finite_number(j.at(has_p ? primary : alias), primary);
}

void dump_impl(const json& j, std::string& out) {
    switch (j.type()) {
        case json::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += json(it.key()).dump();
                out += ':';
                dump_impl(it.value(), out);
            }
            out += '}';
            break;
        }
        case json::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                dump_impl(v, out);
            }
            out += ']';
            break;
        }
        case json::value_t::string:
            out += j.dump();  // nlohmann escaping
            break;
        case json::value_t::boolean:
            out += j.get<bool>() ? "true" : "false";
            break;
        case json::value_t::number_integer:
            out += std::to_string(j.get<std::int64_t>());
            break;
        case json::value_t::number_unsigned:
            out += std::to_string(j.get<std::uint64_t>());
            break;
        case json::value_t::number_float:
            out += format_double(j.get<double>());
            break;
        default:
            out += "null";
            break;
    }
}

}  // namespace

std::string format_double(double v) {
    if (v == 0.0) return "0";  // normalize -0
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string dump_deterministic(const json& j) {
    std::string out;
    dump_impl(j, out);
    return out;
}

Rat rat_from_json(const json& j) {
    if (j.is_string()) {
        try {
            return rat_from_string(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            fail(std::string("bad rational '") + j.get<std::string>() + "': " + e.what());
        }
    }
    if (j.is_number_integer()) return Rat(j.get<std::int64_t>());
    if (j.is_number_unsigned()) return Rat(std::int64_t(j.get<std::uint64_t>()));
    if (j.is_number_float()) {
        fail("floating-point numbers are not accepted where exact rationals "
             "are required; write \"p/q\" strings or integers");
    }
    fail("expected a rational (\"p/q\" string or integer), got " +
         std::string(j.type_name()));
}

json rat_to_json(const Rat& r) { return json(rat_to_string(r)); }

std::vector<Rat> ratvec_from_json(const json& j, std::size_t expect,
                                  const char* what) {
    if (!j.is_array()) fail(std::string(what) + ": expected an array");
    if (expect != 0 && j.size() != expect) {
        fail(std::string(what) + ": expected " + std::to_string(expect) +
             " entries, got " + std::to_string(j.size()));
    }
    std::vector<Rat> out;
    out.reserve(j.size());
    for (const auto& cell : j) out.push_back(rat_from_json(cell));
    return out;
}

core::ZariskiSystem system_from_json(const json& payload) {
    require_object(payload, "payload");
    const json& qj = require_key(payload, "q", "payload");
    if (!qj.is_array() || qj.empty()) fail("q: expected a non-empty matrix");
    RatMat q;
    for (const auto& row : qj) {
        q.push_back(ratvec_from_json(row, qj.size(), "q row"));
    }
    std::vector<std::string> labels;
    if (payload.contains("labels")) {
        const json& lj = payload.at("labels");
        if (!lj.is_array()) fail("labels: expected an array of strings");
        for (const auto& l : lj) {
            if (!l.is_string()) fail("labels: expected an array of strings");
            labels.push_back(l.get<std::string>());
        }
    }
    return core::validate_system(q, std::move(labels));
}

double finite_number(const json& j, const char* what) {
    if (!j.is_number()) {
        fail(std::string(what) + ": expected a number, got " + j.type_name());
    }
    double v = j.get<double>();
    if (!std::isfinite(v)) fail(std::string(what) + ": must be finite");
    return v;
}

long long integer_number(const json& j, const char* what) {
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_unsigned()) {
        auto u = j.get<std::uint64_t>();
        if (u > std::uint64_t(std::numeric_limits<std::int64_t>::max())) {
            fail(std::string(what) + ": integer out of range");
        }
        return static_cast<long long>(u);
    }
    fail(std::string(what) + ": expected an integer, got " + j.type_name());
}

p1::ModelDivisor divisor_from_json(const json& j,
                                   const std::set<std::string>& extra_ok) {
    require_object(j, "divisor");
    const json& fam = require_key(j, "family", "divisor");
    if (!fam.is_string()) fail("divisor: 'family' must be a string");
    std::string family = fam.get<std::string>();
    const std::set<std::string> wrappers = {"family", "scale", "shift"};

    auto build = [&]() -> p1::ModelDivisor {
        if (family == "one-kink") {
            std::set<std::string> keys = wrappers;
            keys.insert({"lambda", "log_a", "log_alpha", "log_b", "log_beta"});
            check_keys(j, keys, extra_ok, "one-kink");
            double lambda = number_field(j, "lambda", 1.0, false, "one-kink");
            double la = aliased_number(j, "log_a", "log_alpha", "one-kink");
            double lb = aliased_number(j, "log_b", "log_beta", "one-kink");
            return p1::ModelDivisor::one_kink(lambda, la, lb);
        }
        if (family == "two-kink") {
            std::set<std::string> keys = wrappers;
            keys.insert({"log_alpha", "log_alpha_p", "log_beta", "log_beta_p"});
            check_keys(j, keys, extra_ok, "two-kink");
            double la = number_field(j, "log_alpha", 0.0, true, "two-kink");
            double lap = number_field(j, "log_alpha_p", 0.0, true, "two-kink");
            double lb = number_field(j, "log_beta", 0.0, true, "two-kink");
            double lbp = number_field(j, "log_beta_p", 0.0, true, "two-kink");
            // Family invariant: the first kink sits left of the second,
            // beta/alpha <= alpha'/beta'.
            if (lb - la > lap - lbp) {
                throw p1::InvalidDivisor(
                    "two-kink ordering violated: log(beta/alpha) > log(alpha'/beta')");
            }
            return p1::ModelDivisor::two_kink(la, lap, lb, lbp);
        }
        if (family == "admissible") {
            std::set<std::string> keys = wrappers;
            keys.insert("lambda");
            check_keys(j, keys, extra_ok, "admissible");
            return p1::ModelDivisor::admissible(
                number_field(j, "lambda", 1.0, false, "admissible"));
        }
        if (family == "principal-shift") {
            std::set<std::string> keys = wrappers;
            keys.insert({"k", "base"});
            check_keys(j, keys, extra_ok, "principal-shift");
            return p1::ModelDivisor::principal_shift(
                divisor_from_json(require_key(j, "base", "principal-shift")),
                number_field(j, "k", 0.0, true, "principal-shift"));
        }
        if (family == "scaled") {
            std::set<std::string> keys = wrappers;
            keys.insert({"t", "base"});
            check_keys(j, keys, extra_ok, "scaled");
            return p1::ModelDivisor::scaled(
                divisor_from_json(require_key(j, "base", "scaled")),
                number_field(j, "t", 0.0, true, "scaled"));
        }
        if (family == "kinked") {
            std::set<std::string> keys = wrappers;
            keys.insert({"c0", "a0", "kinks"});
            check_keys(j, keys, extra_ok, "kinked");
            const json& kj = require_key(j, "kinks", "kinked");
            if (!kj.is_array()) fail("kinked: 'kinks' must be an array");
            std::vector<p1::KinkPoint> kinks;
            for (const auto& k : kj) {
                require_object(k, "kink");
                check_keys(k, {"t", "mass"}, {}, "kink");
                kinks.push_back({number_field(k, "t", 0.0, true, "kink"),
                                 number_field(k, "mass", 0.0, true, "kink")});
            }
            return p1::ModelDivisor::kinked(
                number_field(j, "c0", 0.0, true, "kinked"),
                number_field(j, "a0", 0.0, true, "kinked"), std::move(kinks));
        }
        if (family == "zero") {
            check_keys(j, wrappers, extra_ok, "zero");
            return p1::ModelDivisor::zero();
        }
        throw p1::UnsupportedFamily("unknown divisor family '" + family + "'");
    };

    p1::ModelDivisor d = build();
    if (j.contains("shift")) {
        d = p1::ModelDivisor::principal_shift(
            std::move(d), finite_number(j.at("shift"), "shift"));
    }
    if (j.contains("scale")) {
        d = p1::ModelDivisor::scaled(std::move(d),
                                     finite_number(j.at("scale"), "scale"));
    }
    return d;
}

json divisor_to_json(const p1::ModelDivisor& d) {
    using Family = p1::ModelDivisor::Family;
    json out;
    switch (d.family()) {
        case Family::OneKink: {
            const auto& q = d.one_kink_params();
            out["family"] = "one-kink";
            out["lambda"] = q.lambda;
            out["log_alpha"] = q.log_a;
            out["log_beta"] = q.log_b;
            break;
        }
        case Family::TwoKink: {
            const auto& q = d.two_kink_params();
            out["family"] = "two-kink";
            out["log_alpha"] = q.log_alpha;
            out["log_alpha_p"] = q.log_alpha_p;
            out["log_beta"] = q.log_beta;
            out["log_beta_p"] = q.log_beta_p;
            break;
        }
        case Family::Admissible:
            out["family"] = "admissible";
            out["lambda"] = d.admissible_params().lambda;
            break;
        case Family::PrincipalShift:
            out["family"] = "principal-shift";
            out["k"] = d.wrap_param();
            out["base"] = divisor_to_json(d.base());
            break;
        case Family::Scaled:
            out["family"] = "scaled";
            out["t"] = d.wrap_param();
            out["base"] = divisor_to_json(d.base());
            break;
        case Family::Kinked: {
            const auto& q = d.kinked_params();
            out["family"] = "kinked";
            out["c0"] = q.c0;
            out["a0"] = q.a0;
            json kinks = json::array();
            for (const auto& k : q.kinks) {
                kinks.push_back(json{{"t", k.t}, {"mass", k.mass}});
            }
            out["kinks"] = std::move(kinks);
            break;
        }
    }
    return out;
}

p1::HorizontalCurve curve_from_json(const json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "C0") return p1::HorizontalCurve::c0();
        if (s == "Cinf") return p1::HorizontalCurve::cinf();
        fail("unknown curve '" + s + "' (use \"C0\", \"Cinf\", or {\"m\":..,\"n\":..})");
    }
    require_object(j, "curve");
    check_keys(j, {"m", "n"}, {}, "curve");
    long long m = integer_number(require_key(j, "m", "curve"), "curve m");
    long long n = integer_number(require_key(j, "n", "curve"), "curve n");
    return p1::HorizontalCurve::rational_point(m, n);
}

std::string curve_to_string(const p1::HorizontalCurve& c) {
    switch (c.kind()) {
        case p1::HorizontalCurve::Kind::C0:
            return "C0";
        case p1::HorizontalCurve::Kind::CInf:
            return "Cinf";
        case p1::HorizontalCurve::Kind::Rational:
            return std::to_string(c.m()) + "/" + std::to_string(c.n());
    }
    return "?";
}

}  // namespace zar::cli
