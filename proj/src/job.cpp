#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "twoterm/errors.hpp"
#include "twoterm/report.hpp"

namespace twoterm {

using json = nlohmann::json;

namespace {

const char* const kTopKeys[] = {"f", "phi1", "phi2", "domain", "T_reference", "numerics", "flags", "power_scale"};
const char* const kNumericsKeys[] = {"limit_tol",  "quad_tol",  "mesh_ratio",  "mesh_count", "divergence_threshold",
                                     "wynn_depth", "grid_size", "period_hint", "strategy"};

template <std::size_t N>
void reject_unknown(const json& obj, const char* const (&keys)[N], const std::string& where) {
    for (const auto& [k, v] : obj.items()) {
        (void)v;
        if (std::find_if(std::begin(keys), std::end(keys), [&](const char* s) { return k == s; }) == std::end(keys))
            throw ConfigError("unknown key '" + k + "' in " + where);
    }
}

/// A number, or DSL text for a constant such as "pi" or "2*pi".
double constant_value(const json& v, const std::string& key) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            const Expr e = parse(v.get<std::string>());
            if (e.depends_on_x()) throw ConfigError(key + " must not depend on x");
            return eval(e, 0.0);
        } catch (const ParseError& err) {
            throw ConfigError(key + ": " + err.what());
        } catch (const EvalError& err) {
            throw ConfigError(key + ": " + err.what());
        }
    }
    throw ConfigError(key + " must be a number or a constant expression");
}

std::string expr_text(const json& j, const char* key) {
    if (!j.contains(key)) throw ConfigError(std::string("missing key '") + key + "'");
    if (!j.at(key).is_string()) throw ConfigError(std::string(key) + " must be a string");
    const std::string s = j.at(key).get<std::string>();
    try {
        (void)parse(s);
    } catch (const ParseError& e) {
        throw ConfigError(std::string(key) + " does not parse at offset " + std::to_string(e.offset()) + ": " + e.what());
    }
    return s;
}

Domain parse_domain(const json& d) {
    if (!d.is_object()) throw ConfigError("domain must be an object");
    Domain out;
    if (!d.contains("T")) throw ConfigError("domain.T is required");
    out.T = constant_value(d.at("T"), "domain.T");
    if (d.contains("x0")) {
        const json& x0 = d.at("x0");
        out.x0 = x0.is_string() && (x0 == "inf" || x0 == "+inf") ? std::numeric_limits<double>::infinity()
                                                                  : constant_value(x0, "domain.x0");
    }
    if (d.contains("approach")) {
        const std::string a = d.at("approach").get<std::string>();
        if (a == "from_below")
            out.approach = Approach::FromBelow;
        else if (a == "from_above")
            out.approach = Approach::FromAbove;
        else
            throw ConfigError("domain.approach must be from_below or from_above");
    }
    for (const auto& [k, v] : d.items()) {
        (void)v;
        if (k != "T" && k != "x0" && k != "approach") throw ConfigError("unknown key '" + k + "' in domain");
    }
    try {
        out.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("domain: ") + e.what());
    }
    return out;
}

NumericsConfig parse_numerics(const json& n) {
    if (!n.is_object()) throw ConfigError("numerics must be an object");
    reject_unknown(n, kNumericsKeys, "numerics");
    NumericsConfig c;
    auto positive = [&](const char* key, double& slot) {
        if (!n.contains(key)) return;
        slot = constant_value(n.at(key), std::string("numerics.") + key);
        if (!(slot > 0.0) || !std::isfinite(slot)) throw ConfigError(std::string("numerics.") + key + " must be positive");
    };
    auto count = [&](const char* key, int& slot, int lo) {
        if (!n.contains(key)) return;
        if (!n.at(key).is_number_integer() || n.at(key).get<int>() < lo)
            throw ConfigError(std::string("numerics.") + key + " must be an integer >= " + std::to_string(lo));
        slot = n.at(key).get<int>();
    };
    positive("limit_tol", c.limit_tol);
    positive("quad_tol", c.quad_tol);
    positive("mesh_ratio", c.mesh_ratio);
    positive("divergence_threshold", c.divergence_threshold);
    if (c.mesh_ratio <= 1.0) throw ConfigError("numerics.mesh_ratio must exceed 1");
    count("mesh_count", c.mesh_count, 8);
    count("wynn_depth", c.wynn_depth, 2);
    count("grid_size", c.grid_size, 4);
    if (n.contains("period_hint") && !n.at("period_hint").is_null()) {
        const double p = constant_value(n.at("period_hint"), "numerics.period_hint");
        if (!(p > 0.0) || !std::isfinite(p)) throw ConfigError("numerics.period_hint must be positive");
        c.period_hint = p;
    }
    if (n.contains("strategy")) {
        const std::string s = n.at("strategy").get<std::string>();
        if (s == "auto")
            c.strategy = Strategy::Auto;
        else if (s == "wynn")
            c.strategy = Strategy::Wynn;
        else if (s == "richardson")
            c.strategy = Strategy::Richardson;
        else
            throw ConfigError("numerics.strategy must be auto, wynn or richardson");
    }
    return c;
}

PowerScale parse_power_scale(const json& p) {
    if (!p.is_object()) throw ConfigError("power_scale must be an object");
    PowerScale ps;
    if (!p.contains("alpha1") || !p.contains("alpha2")) throw ConfigError("power_scale needs alpha1 and alpha2");
    ps.alpha1 = constant_value(p.at("alpha1"), "power_scale.alpha1");
    ps.alpha2 = constant_value(p.at("alpha2"), "power_scale.alpha2");
    if (p.contains("direction")) {
        const std::string d = p.at("direction").get<std::string>();
        if (d == "infinity")
            ps.direction = PowerDirection::ToInfinity;
        else if (d == "zero")
            ps.direction = PowerDirection::ToZero;
        else
            throw ConfigError("power_scale.direction must be infinity or zero");
    }
    try {
        ps.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("power_scale: ") + e.what());
    }
    return ps;
}

ScaleContext make_context(const JobConfig& c) {
    if (c.power_scale) return power_context(*c.power_scale, c.numerics);
    return validate_scale(parse(c.phi1), parse(c.phi2), c.domain, c.numerics, c.T_reference);
}

}  // namespace

JobConfig parse_job_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("job document must be a JSON object");
    try {
        reject_unknown(j, kTopKeys, "job");
        JobConfig c;
        c.f = expr_text(j, "f");
        if (j.contains("power_scale")) {
            if (j.contains("phi1") || j.contains("phi2"))
                throw ConfigError("phi1/phi2 must be omitted when power_scale is set");
            if (j.contains("T_reference")) throw ConfigError("T_reference is fixed at 1 for power scales");
            c.power_scale = parse_power_scale(j.at("power_scale"));
            c.domain = c.power_scale->domain();
            if (j.contains("domain")) {
                const Domain d = parse_domain(j.at("domain"));
                if (d.T != c.domain.T || d.x0 != c.domain.x0 || d.approach != c.domain.approach)
                    throw ConfigError("domain conflicts with the power scale direction");
            }
        } else {
            c.phi1 = expr_text(j, "phi1");
            c.phi2 = expr_text(j, "phi2");
            if (!j.contains("domain")) throw ConfigError("missing key 'domain'");
            c.domain = parse_domain(j.at("domain"));
            if (j.contains("T_reference")) {
                c.T_reference = constant_value(j.at("T_reference"), "T_reference");
                if (!c.domain.contains(*c.T_reference)) throw ConfigError("T_reference lies outside the domain");
            }
        }
        if (j.contains("numerics")) c.numerics = parse_numerics(j.at("numerics"));
        if (j.contains("flags")) {
            const json& fl = j.at("flags");
            if (!fl.is_object()) throw ConfigError("flags must be an object");
            for (const auto& [k, v] : fl.items()) {
                if (!v.is_boolean()) throw ConfigError("flags." + k + " must be true or false");
                if (k == "convexity")
                    c.flags.convexity = v.get<bool>();
                else if (k == "tauberian")
                    c.flags.tauberian = v.get<bool>();
                else
                    throw ConfigError("unknown key '" + k + "' in flags");
            }
        }
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed job: ") + e.what());
    }
}

JobConfig load_job_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path.string());
    return parse_job_config(ss.str());
}

JobResult run_job(const JobConfig& cfg) {
    JobResult out;
    out.config = cfg;
    std::optional<ScaleContext> ctx;
    try {
        ctx = make_context(cfg);
    } catch (const ScaleInvalid& e) {
        out.exit_code = kExitScaleInvalid;
        out.error = e.what();
        out.invalid_clause = e.clause();
        out.invalid_witness = e.witness();
        return out;
    } catch (const std::invalid_argument& e) {
        out.exit_code = kExitConfig;
        out.error = e.what();
        return out;
    }
    Expr f;
    try {
        f = parse(cfg.f);
    } catch (const ParseError& e) {
        out.exit_code = kExitConfig;
        out.error = std::string("f: ") + e.what();
        return out;
    }
    try {
        out.report = analyze(*ctx, f, cfg.flags);
        std::optional<PowerScale> ps = cfg.power_scale;
        if (!ps) ps = detect_power_scale(ctx->phi1, ctx->phi2, ctx->domain);
        if (ps) out.powers = analyze_powers(*ps, f, cfg.numerics);
        out.exit_code = out.report->classification.tag == ClassTag::Indeterminate ? kExitIndeterminate : kExitDefinite;
    } catch (const std::exception& e) {
        out.exit_code = kExitIndeterminate;
        out.error = std::string("analysis failed: ") + e.what();
    }
    return out;
}

JobResult run_job_file(const std::filesystem::path& path) {
    try {
        return run_job(load_job_config(path));
    } catch (const IoError& e) {
        JobResult r;
        r.exit_code = kExitIo;
        r.error = e.what();
        return r;
    } catch (const ConfigError& e) {
        JobResult r;
        r.exit_code = kExitConfig;
        r.error = path.filename().string() + ": " + e.what();
        return r;
    }
}

std::vector<std::filesystem::path> batch_jobs(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    std::error_code ec;
    for (std::filesystem::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec))
        if (it->is_regular_file() && it->path().extension() == ".json") out.push_back(it->path());
    if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<JobResult> run_batch(const std::vector<std::filesystem::path>& paths) {
    std::vector<JobResult> results(paths.size());
    std::atomic<std::size_t> next{0};
    const unsigned workers =
        std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), static_cast<unsigned>(paths.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < paths.size(); i = next++) results[i] = run_job_file(paths[i]);
        });
    for (std::thread& t : pool) t.join();
    return results;
}

std::string dump_grid(const JobConfig& cfg, const ExpansionReport& r) {
    const ScaleContext ctx = make_context(cfg);
    const Expr f = parse(cfg.f);
    const Subject s = split_subject(ctx, f);
    const bool coeffs = r.a1.is_finite() && r.a2.is_finite();
    auto cell = [](auto&& fn) {
        try {
            const double v = fn();
            if (!std::isfinite(v)) return std::string("nan");
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return std::string(buf);
        } catch (const EvalError&) {
            return std::string("nan");
        }
    };
    std::ostringstream o;
    o << "x,f1_star,f2_star,F_star,R\n";
    for (double x : ctx.grid) {
        o << cell([&] { return x; }) << ',' << cell([&] { return f1_star(ctx, s, x); }) << ','
          << cell([&] { return f2_star(ctx, s, x); }) << ',' << cell([&] { return F_star(ctx, s, x); }) << ','
          << cell([&] { return coeffs ? remainder(ctx, s, r.a1.value, r.a2.value, x) : NAN; }) << '\n';
    }
    return o.str();
}

}  // namespace twoterm
