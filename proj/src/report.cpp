#include "twoterm/report.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "json.hpp"

namespace twoterm {

using json = nlohmann::ordered_json;

namespace {

// ------------------------------------------------------------ to json

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double get_num(const json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string_view limit_tag_name(LimitVerdict::Tag t) {
    switch (t) {
        case LimitVerdict::Tag::Finite: return "Finite";
        case LimitVerdict::Tag::PlusInfinity: return "PlusInfinity";
        case LimitVerdict::Tag::MinusInfinity: return "MinusInfinity";
        case LimitVerdict::Tag::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

std::string_view integral_tag_name(IntegralVerdict::Tag t) {
    switch (t) {
        case IntegralVerdict::Tag::Convergent: return "Convergent";
        case IntegralVerdict::Tag::Divergent: return "Divergent";
        case IntegralVerdict::Tag::Indeterminate: return "Indeterminate";
    }
    return "Indeterminate";
}

std::string_view bound_kind_name(RemainderBound::Kind k) {
    switch (k) {
        case RemainderBound::Kind::Finite: return "Finite";
        case RemainderBound::Kind::Infinite: return "Infinite";
        case RemainderBound::Kind::Unavailable: return "Unavailable";
    }
    return "Unavailable";
}

/// Inverse of a name function over an enum with `count` values.
template <class E, class F>
E from_name(const std::string& s, F name, int count) {
    for (int i = 0; i < count; ++i)
        if (name(static_cast<E>(i)) == s) return static_cast<E>(i);
    throw ConfigError("unknown tag '" + s + "'");
}

json to_j(const LimitVerdict& v) {
    return {{"tag", limit_tag_name(v.tag)}, {"value", num(v.value)}, {"err", num(v.err)},
            {"reach", num(v.reach)}, {"diagnostic", v.diagnostic}};
}

json to_j(const IntegralVerdict& v) {
    return {{"tag", integral_tag_name(v.tag)}, {"value", num(v.value)}, {"err", num(v.err)}, {"sign", v.sign},
            {"reach", num(v.reach)}, {"diagnostic", v.diagnostic}};
}

json to_j(const RemainderBound& b) { return {{"kind", bound_kind_name(b.kind)}, {"value", num(b.value)}}; }

json to_j(const RemainderRow& row) {
    return {{"x", num(row.x)},
            {"R", num(row.R)},
            {"sup_f2_star", to_j(row.b_f2star)},
            {"sup_F_star", to_j(row.b_Fstar)},
            {"integral_phi1", to_j(row.b_phi1_integral)},
            {"integral_Phi", to_j(row.b_Phi_integral)},
            {"xi_found", row.xi_found},
            {"xi", num(row.xi)}};
}

LimitVerdict limit_from(const json& j) {
    LimitVerdict v;
    v.tag = from_name<LimitVerdict::Tag>(j.at("tag").get<std::string>(), limit_tag_name, 4);
    v.value = get_num(j.at("value"));
    v.err = get_num(j.at("err"));
    v.reach = get_num(j.at("reach"));
    v.diagnostic = j.at("diagnostic").get<std::string>();
    return v;
}

IntegralVerdict integral_from(const json& j) {
    IntegralVerdict v;
    v.tag = from_name<IntegralVerdict::Tag>(j.at("tag").get<std::string>(), integral_tag_name, 3);
    v.value = get_num(j.at("value"));
    v.err = get_num(j.at("err"));
    v.sign = j.at("sign").get<int>();
    v.reach = get_num(j.at("reach"));
    v.diagnostic = j.at("diagnostic").get<std::string>();
    return v;
}

RemainderBound bound_from(const json& j) {
    return {from_name<RemainderBound::Kind>(j.at("kind").get<std::string>(), bound_kind_name, 3),
            get_num(j.at("value"))};
}

Tri tri_from(const json& j) { return from_name<Tri>(j.get<std::string>(), tri_name, 3); }
Growth growth_from(const json& j) { return from_name<Growth>(j.get<std::string>(), growth_name, 4); }

json report_json(const ExpansionReport& r) {
    json j;
    j["classification"] = {{"tag", class_tag_name(r.classification.tag)},
                           {"blocking", r.classification.blocking},
                           {"summary", r.classification.summary}};
    j["a1"] = to_j(r.a1);
    j["a2"] = to_j(r.a2);
    j["a1_quotient"] = to_j(r.a1_detail.quotient);
    j["a1_contact"] = to_j(r.a1_detail.contact);
    j["a1_combined"] = to_j(r.a1_detail.combined);
    j["a2_naive"] = to_j(r.a2_detail.naive);
    j["a2_geometric"] = to_j(r.a2_detail.geometric);
    j["gamma"] = to_j(r.gamma);
    if (r.gamma_residual)
        j["gamma_identity"] = {{"residual", num(r.gamma_residual->first)},
                               {"bar", num(r.gamma_residual->second)},
                               {"holds", r.gamma_identity}};
    else
        j["gamma_identity"] = nullptr;
    j["asymptotic_mean"] = to_j(r.asymptotic_mean);
    j["indicatrix_mean"] = to_j(r.indicatrix_mean);
    j["criteria"] = {{"first_coefficient", to_j(r.criteria.first_coefficient)},
                     {"iterated_inner", to_j(r.criteria.iterated.inner)},
                     {"iterated_outer", to_j(r.criteria.iterated.outer)},
                     {"second_coefficient", to_j(r.criteria.second_coefficient)},
                     {"indicatrix", to_j(r.criteria.indicatrix)}};
    json rows = json::array();
    for (const RemainderRow& row : r.remainder_table) rows.push_back(to_j(row));
    j["remainder_table"] = rows;
    const ConvexityReport& c = r.convexity;
    j["convexity"] = {{"convex", tri_name(c.convex)},
                      {"reason", c.reason},
                      {"f2_star_nondecreasing", tri_name(c.f2star_nondecreasing)},
                      {"first_order_inference", tri_name(c.first_order_inference)},
                      {"naive_quotient_bounded", tri_name(c.naive_quotient_bounded)},
                      {"upgraded", c.upgraded}};
    const TauberianReport& t = r.tauberian;
    json tj = {{"ratio_cubic", growth_name(t.ratio_cubic)},
               {"ratio_mixed", growth_name(t.ratio_mixed)},
               {"comparable_first", tri_name(t.comparable_first)},
               {"comparable_second", tri_name(t.comparable_second)},
               {"index1", to_j(t.index1)},
               {"index2", to_j(t.index2)},
               {"log_slope", to_j(t.log_slope)},
               {"power_ratio", nullptr},
               {"derivative_ratio", to_j(t.derivative_ratio)},
               {"standard_derivative", t.standard_derivative},
               {"standard_derivative_limit", to_j(t.standard_derivative_limit)},
               {"note", t.note}};
    if (t.power_ratio) {
        const PowerRatioCheck& p = *t.power_ratio;
        tj["power_ratio"] = {{"expected", num(p.expected)},
                             {"derivative_mean", num(p.derivative_mean)},
                             {"derivative_spread", num(p.derivative_spread)},
                             {"log_slope_mean", num(p.log_slope_mean)},
                             {"log_slope_spread", num(p.log_slope_spread)}};
    }
    j["tauberian"] = tj;
    return j;
}

ExpansionReport report_from(const json& j) {
    ExpansionReport r;
    const json& cl = j.at("classification");
    r.classification.tag = from_name<ClassTag>(cl.at("tag").get<std::string>(), class_tag_name, 5);
    r.classification.blocking = cl.at("blocking").get<std::string>();
    r.classification.summary = cl.at("summary").get<std::string>();
    r.a1 = limit_from(j.at("a1"));
    r.a2 = limit_from(j.at("a2"));
    r.a1_detail.quotient = limit_from(j.at("a1_quotient"));
    r.a1_detail.contact = limit_from(j.at("a1_contact"));
    r.a1_detail.combined = limit_from(j.at("a1_combined"));
    r.a2_detail.naive = limit_from(j.at("a2_naive"));
    r.a2_detail.geometric = limit_from(j.at("a2_geometric"));
    r.gamma = limit_from(j.at("gamma"));
    if (const json& g = j.at("gamma_identity"); !g.is_null()) {
        r.gamma_residual = std::make_pair(get_num(g.at("residual")), get_num(g.at("bar")));
        r.gamma_identity = g.at("holds").get<bool>();
    }
    r.asymptotic_mean = limit_from(j.at("asymptotic_mean"));
    r.indicatrix_mean = limit_from(j.at("indicatrix_mean"));
    const json& cr = j.at("criteria");
    r.criteria.first_coefficient = integral_from(cr.at("first_coefficient"));
    r.criteria.iterated.inner = integral_from(cr.at("iterated_inner"));
    r.criteria.iterated.outer = integral_from(cr.at("iterated_outer"));
    r.criteria.second_coefficient = integral_from(cr.at("second_coefficient"));
    r.criteria.indicatrix = integral_from(cr.at("indicatrix"));
    for (const json& row : j.at("remainder_table")) {
        RemainderRow out;
        out.x = get_num(row.at("x"));
        out.R = get_num(row.at("R"));
        out.b_f2star = bound_from(row.at("sup_f2_star"));
        out.b_Fstar = bound_from(row.at("sup_F_star"));
        out.b_phi1_integral = bound_from(row.at("integral_phi1"));
        out.b_Phi_integral = bound_from(row.at("integral_Phi"));
        out.xi_found = row.at("xi_found").get<bool>();
        out.xi = get_num(row.at("xi"));
        r.remainder_table.push_back(out);
    }
    const json& c = j.at("convexity");
    r.convexity.convex = tri_from(c.at("convex"));
    r.convexity.reason = c.at("reason").get<std::string>();
    r.convexity.f2star_nondecreasing = tri_from(c.at("f2_star_nondecreasing"));
    r.convexity.first_order_inference = tri_from(c.at("first_order_inference"));
    r.convexity.naive_quotient_bounded = tri_from(c.at("naive_quotient_bounded"));
    r.convexity.upgraded = c.at("upgraded").get<bool>();
    const json& t = j.at("tauberian");
    TauberianReport& tr = r.tauberian;
    tr.ratio_cubic = growth_from(t.at("ratio_cubic"));
    tr.ratio_mixed = growth_from(t.at("ratio_mixed"));
    tr.comparable_first = tri_from(t.at("comparable_first"));
    tr.comparable_second = tri_from(t.at("comparable_second"));
    tr.index1 = limit_from(t.at("index1"));
    tr.index2 = limit_from(t.at("index2"));
    tr.log_slope = limit_from(t.at("log_slope"));
    if (const json& p = t.at("power_ratio"); !p.is_null()) {
        tr.power_ratio = PowerRatioCheck{get_num(p.at("expected")), get_num(p.at("derivative_mean")),
                                         get_num(p.at("derivative_spread")), get_num(p.at("log_slope_mean")),
                                         get_num(p.at("log_slope_spread"))};
    }
    tr.derivative_ratio = limit_from(t.at("derivative_ratio"));
    tr.standard_derivative = t.at("standard_derivative").get<std::string>();
    tr.standard_derivative_limit = limit_from(t.at("standard_derivative_limit"));
    tr.note = t.at("note").get<std::string>();
    return r;
}

json config_json(const JobConfig& c) {
    json j;
    j["f"] = c.f;
    if (c.power_scale) {
        j["power_scale"] = {{"alpha1", c.power_scale->alpha1},
                            {"alpha2", c.power_scale->alpha2},
                            {"direction", c.power_scale->direction == PowerDirection::ToInfinity ? "infinity" : "zero"}};
    } else {
        j["phi1"] = c.phi1;
        j["phi2"] = c.phi2;
    }
    j["domain"] = {{"T", num(c.domain.T)},
                   {"x0", c.domain.infinite() ? json("inf") : num(c.domain.x0)},
                   {"approach", c.domain.approach == Approach::FromBelow ? "from_below" : "from_above"}};
    j["T_reference"] = c.T_reference ? num(*c.T_reference) : num(c.domain.T);
    const NumericsConfig& n = c.numerics;
    j["numerics"] = {{"limit_tol", n.limit_tol},
                     {"quad_tol", n.quad_tol},
                     {"mesh_ratio", n.mesh_ratio},
                     {"mesh_count", n.mesh_count},
                     {"divergence_threshold", n.divergence_threshold},
                     {"wynn_depth", n.wynn_depth},
                     {"grid_size", n.grid_size},
                     {"period_hint", n.period_hint ? num(*n.period_hint) : json(nullptr)},
                     {"strategy", n.strategy == Strategy::Auto ? "auto" : n.strategy == Strategy::Wynn ? "wynn" : "richardson"}};
    j["flags"] = {{"convexity", c.flags.convexity}, {"tauberian", c.flags.tauberian}};
    return j;
}

json powers_json(const PowerAnalysis& p) {
    return {{"a1_formula", to_j(p.coeffs.a1)},
            {"a2_formula", to_j(p.coeffs.a2)},
            {"a1_direct", to_j(p.a1_direct)},
            {"a2_direct", to_j(p.a2_direct)},
            {"dominant_integral", to_j(p.coeffs.dominant_integral)},
            {"subdominant_integral", to_j(p.coeffs.subdominant_integral)},
            {"tangent_criterion", to_j(p.tangent_criterion)},
            {"asymptote_inner", to_j(p.asymptote_criterion.inner)},
            {"asymptote_outer", to_j(p.asymptote_criterion.outer)},
            {"first_derivative", to_j(p.first_derivative)},
            {"derivative_pair", to_j(p.derivative_pair)},
            {"pivot_alpha1_type", factor_kind_name(p.pivot_alpha1_type)},
            {"pivot_alpha2_type", factor_kind_name(p.pivot_alpha2_type)}};
}

// ------------------------------------------------------------- text

std::string g(double v, int digits = 10) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

std::string limit_text(const LimitVerdict& v) {
    switch (v.tag) {
        case LimitVerdict::Tag::Finite: return g(v.value) + " +- " + g(v.err, 2);
        case LimitVerdict::Tag::PlusInfinity: return "+inf";
        case LimitVerdict::Tag::MinusInfinity: return "-inf";
        case LimitVerdict::Tag::Indeterminate: return "indeterminate (" + v.diagnostic + ")";
    }
    return "";
}

std::string integral_text(const IntegralVerdict& v) {
    switch (v.tag) {
        case IntegralVerdict::Tag::Convergent: return "Convergent " + g(v.value) + " +- " + g(v.err, 2);
        case IntegralVerdict::Tag::Divergent:
            return v.sign > 0 ? "Divergent to +inf" : v.sign < 0 ? "Divergent to -inf" : "Divergent (unbounded oscillation)";
        case IntegralVerdict::Tag::Indeterminate: return "Indeterminate (" + v.diagnostic + ")";
    }
    return "";
}

std::string bound_text(const RemainderBound& b) {
    switch (b.kind) {
        case RemainderBound::Kind::Finite: return g(b.value, 4);
        case RemainderBound::Kind::Infinite: return "inf";
        case RemainderBound::Kind::Unavailable: return "n/a";
    }
    return "";
}

std::string pad(std::string s, std::size_t w) {
    if (s.size() < w) s.append(w - s.size(), ' ');
    return s;
}

}  // namespace

std::string render_machine(const ExpansionReport& r) { return report_json(r).dump(2); }

ExpansionReport parse_machine(std::string_view doc) {
    json j;
    try {
        j = json::parse(doc);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("machine report does not parse: ") + e.what());
    }
    try {
        return report_from(j.contains("report") ? j.at("report") : j);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("machine report is incomplete: ") + e.what());
    }
}

std::string render_text(const ExpansionReport& r) {
    std::ostringstream o;
    o << "classification: " << class_tag_name(r.classification.tag) << "\n";
    o << "  " << r.classification.summary << "\n";
    o << "  deciding verdict: " << r.classification.blocking << "\n";

    o << "coefficients\n";
    o << "  a1 = " << limit_text(r.a1) << "\n";
    o << "    quotient f/phi1        " << limit_text(r.a1_detail.quotient) << "\n";
    o << "    contact limit of f1*   " << limit_text(r.a1_detail.contact) << "\n";
    o << "  a2 = " << limit_text(r.a2) << "\n";
    o << "    geometric limit of f2* " << limit_text(r.a2_detail.geometric) << "\n";
    o << "    naive (f-a1 phi1)/phi2 " << limit_text(r.a2_detail.naive) << "\n";
    o << "  gamma = limit of F* = " << limit_text(r.gamma) << "\n";
    if (r.gamma_residual)
        o << "  gamma identity: gamma - phi1(T) a1 - phi2(T) a2 = " << g(r.gamma_residual->first, 3) << " (bar "
          << g(r.gamma_residual->second, 3) << "): " << (r.gamma_identity ? "holds" : "fails") << "\n";
    else
        o << "  gamma identity: not checked (a1, a2 or gamma not finite)\n";
    o << "  asymptotic mean = " << limit_text(r.asymptotic_mean) << "\n";
    o << "  indicatrix mean = " << limit_text(r.indicatrix_mean) << "\n";

    o << "criteria\n";
    o << "  [f1* criterion]      int phi2 L[f]/W                  " << integral_text(r.criteria.first_coefficient) << "\n";
    o << "  [iterated criterion] inner tail of phi2 L[f]/W        " << integral_text(r.criteria.iterated.inner) << "\n";
    o << "  [iterated criterion] outer int (phi1/phi2)' x tail    " << integral_text(r.criteria.iterated.outer) << "\n";
    o << "  [f2* criterion]      int phi1 L[f]/W                  " << integral_text(r.criteria.second_coefficient) << "\n";
    o << "  [F* criterion]       int Phi L[f]/W                   " << integral_text(r.criteria.indicatrix) << "\n";

    o << "remainder table (sup columns are approximate: sampled tail sup x 1.05)\n";
    if (r.remainder_table.empty()) {
        o << "  (not tabulated)\n";
    } else {
        o << "  " << pad("x", 12) << pad("R(x)", 12) << pad("sup f2*", 12) << pad("sup F*", 12) << pad("int phi1", 12)
          << pad("int Phi", 12) << "xi\n";
        for (const RemainderRow& row : r.remainder_table)
            o << "  " << pad(g(row.x, 5), 12) << pad(g(row.R, 4), 12) << pad(bound_text(row.b_f2star), 12)
              << pad(bound_text(row.b_Fstar), 12) << pad(bound_text(row.b_phi1_integral), 12)
              << pad(bound_text(row.b_Phi_integral), 12) << (row.xi_found ? g(row.xi, 5) : "not found") << "\n";
    }

    const ConvexityReport& c = r.convexity;
    o << "convexity\n";
    o << "  convex: " << tri_name(c.convex) << (c.reason.empty() ? "" : " (" + c.reason + ")") << "\n";
    if (c.convex == Tri::Yes) {
        o << "  f2* nondecreasing on grid: " << tri_name(c.f2star_nondecreasing) << "\n";
        o << "  first-order inference: " << tri_name(c.first_order_inference) << "\n";
        o << "  (f - a1 phi1)/phi2 bounded: " << tri_name(c.naive_quotient_bounded) << "\n";
        if (c.upgraded) o << "  classification upgraded by convexity\n";
    }

    const TauberianReport& t = r.tauberian;
    o << "tauberian\n";
    o << "  L[f] phi1^3/W^2: " << growth_name(t.ratio_cubic) << "\n";
    o << "  L[f] phi1^2 phi2/W^2: " << growth_name(t.ratio_mixed) << "\n";
    o << "  comparability: first " << tri_name(t.comparable_first) << ", second " << tri_name(t.comparable_second)
      << "\n";
    o << "  index of phi1: " << limit_text(t.index1) << "\n";
    o << "  index of phi2: " << limit_text(t.index2) << "\n";
    o << "  log slope of phi2/phi1: " << limit_text(t.log_slope) << "\n";
    if (t.power_ratio)
        o << "  power ratio: expected " << g(t.power_ratio->expected) << ", derivative mean "
          << g(t.power_ratio->derivative_mean, 15) << " spread " << g(t.power_ratio->derivative_spread, 3)
          << ", log slope mean " << g(t.power_ratio->log_slope_mean, 15) << " spread "
          << g(t.power_ratio->log_slope_spread, 3) << "\n";
    o << "  phi2'/phi1' limit: " << limit_text(t.derivative_ratio) << "\n";
    o << "  standard derivative: " << t.standard_derivative << "\n";
    if (!t.note.empty()) o << "  note: " << t.note << "\n";
    return o.str();
}

std::string render_report(const JobResult& job, ReportFormat format) {
    if (format == ReportFormat::Machine) {
        json j;
        j["format"] = "report_v1";
        j["exit_code"] = job.exit_code;
        j["error"] = job.error.empty() ? json(nullptr) : json(job.error);
        j["seed"] = job.seed ? json(*job.seed) : json(nullptr);
        j["job"] = job.config ? config_json(*job.config) : json(nullptr);
        if (job.invalid_clause)
            j["scale_invalid"] = {{"clause", clause_name(*job.invalid_clause)}, {"witness", num(job.invalid_witness)}};
        else
            j["scale_invalid"] = nullptr;
        j["report"] = job.report ? report_json(*job.report) : json(nullptr);
        j["powers"] = job.powers ? powers_json(*job.powers) : json(nullptr);
        return j.dump(2) + "\n";
    }

    std::ostringstream o;
    if (job.config) {
        const JobConfig& c = *job.config;
        o << "f = " << c.f << "\n";
        if (c.power_scale)
            o << "scale = (x^" << g(c.power_scale->alpha1) << ", x^" << g(c.power_scale->alpha2) << ") toward "
              << (c.power_scale->direction == PowerDirection::ToInfinity ? "+inf" : "0+") << "\n";
        else
            o << "scale = (" << c.phi1 << ", " << c.phi2 << ")\n";
        const Domain& d = c.domain;
        o << "domain: T = " << g(d.T) << ", x0 = " << (d.infinite() ? std::string("+inf") : g(d.x0))
          << (d.approach == Approach::FromBelow ? ", from below" : ", from above") << "; reference line T = "
          << g(c.T_reference.value_or(d.T)) << "\n";
    }
    if (!job.error.empty()) o << "error: " << job.error << "\n";
    if (job.report) o << render_text(*job.report);
    if (job.powers) {
        const PowerAnalysis& p = *job.powers;
        o << "power scale\n";
        o << "  a1 by integral formula: " << limit_text(p.coeffs.a1) << "\n";
        o << "  a2 by integral formula: " << limit_text(p.coeffs.a2) << "\n";
        o << "  a1 direct: " << limit_text(p.a1_direct) << "\n";
        o << "  a2 direct: " << limit_text(p.a2_direct) << "\n";
        o << "  [tangent criterion]   " << integral_text(p.tangent_criterion) << "\n";
        o << "  [asymptote criterion] inner " << integral_text(p.asymptote_criterion.inner) << "\n";
        o << "  [asymptote criterion] outer " << integral_text(p.asymptote_criterion.outer) << "\n";
        o << "  first derivative limit: " << limit_text(p.first_derivative) << "\n";
        o << "  derivative pair limit: " << limit_text(p.derivative_pair) << "\n";
        o << "  factorization with pivot x^alpha1: " << factor_kind_name(p.pivot_alpha1_type) << "\n";
        o << "  factorization with pivot x^alpha2: " << factor_kind_name(p.pivot_alpha2_type) << "\n";
    }
    o << "exit code: " << job.exit_code << "\n";
    return o.str();
}

}  // namespace twoterm
