#include "fmglab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "fmglab/error.hpp"
#include "json.hpp"

namespace fmg {

namespace {

using nlohmann::json;

/// JSON number with 9 significant digits; non-finite values become null. Written by
/// hand because the library printer does not always pick the shortest form.
std::string jnum(double v) { return std::isfinite(v) ? format_real(v) : "null"; }

std::string jarray(const std::vector<double>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + jnum(xs[i]);
    return out + "]";
}

double number(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw Error(ErrorCode::InvalidSpec, std::string("missing key '") + key + "'");
    if (!it->is_number()) throw Error(ErrorCode::InvalidSpec, std::string("key '") + key + "' must be a number");
    return it->get<double>();
}

json parse(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::InvalidSpec, std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

ModelSpec parse_model(std::string_view text) {
    const json j = parse(text);
    if (!j.is_object()) throw Error(ErrorCode::InvalidSpec, "config must be a JSON object");
    static const std::set<std::string> known{"p", "q", "r", "alpha", "variant", "d", "k"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw Error(ErrorCode::InvalidSpec, "unknown key '" + key + "'");

    std::string variant = j.contains("d") ? "two_term" : "one_term";
    if (j.contains("variant")) {
        if (!j["variant"].is_string()) throw Error(ErrorCode::InvalidSpec, "variant must be a string");
        variant = j["variant"].get<std::string>();
    }
    const double k = j.contains("k") ? number(j, "k") : 0.0;
    const double p = number(j, "p"), q = number(j, "q"), r = number(j, "r"), alpha = number(j, "alpha");
    if (variant == "one_term") {
        if (j.contains("d")) throw Error(ErrorCode::InvalidSpec, "d given for a one_term model");
        return ModelSpec::one_term(p, q, r, alpha, k);
    }
    if (variant == "two_term") return ModelSpec::two_term(p, q, r, alpha, number(j, "d"), k);
    throw Error(ErrorCode::InvalidSpec, "variant must be one_term or two_term");
}

ModelSpec load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidSpec, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str());
}

std::string model_to_json(const ModelSpec& spec) {
    std::string out = "{\"p\":" + jnum(spec.p()) + ",\"q\":" + jnum(spec.q()) + ",\"r\":" + jnum(spec.r()) +
                      ",\"alpha\":" + jnum(spec.alpha()) + ",\"variant\":\"" +
                      (spec.is_two_term() ? "two_term" : "one_term") + "\"";
    if (spec.is_two_term()) out += ",\"d\":" + jnum(spec.d());
    return out + ",\"k\":" + jnum(spec.k()) + "}";
}

std::string verdict_to_json(const StabilityVerdict& v, std::optional<double> x_star) {
    std::string out = "{";
    if (x_star) out += "\"x_star\":" + jnum(*x_star) + ",";
    out += "\"tag\":\"" + std::string(to_string(v.tag)) + "\"";
    if (v.tag == VerdictTag::SingleStableRegion) out += ",\"tau_star\":" + jnum(v.tau_star);
    if (v.tag == VerdictTag::StabilitySwitch || v.tag == VerdictTag::InstabilitySwitch)
        out += ",\"s1\":" + jarray(v.s1) + ",\"s2\":" + jarray(v.s2);
    return out + "}";
}

StabilityVerdict verdict_from_json(std::string_view text) {
    const json j = parse(text);
    StabilityVerdict v;
    try {
        v.tag = verdict_tag_from_string(j.at("tag").get<std::string>());
        if (j.contains("tau_star")) v.tau_star = j["tau_star"].get<double>();
        if (j.contains("s1")) v.s1 = j["s1"].get<std::vector<double>>();
        if (j.contains("s2")) v.s2 = j["s2"].get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidSpec, std::string("bad verdict JSON: ") + e.what());
    }
    return v;
}

std::string roots_to_json(const RootReport& rep) {
    std::string out = "[";
    for (std::size_t i = 0; i < rep.roots.size(); ++i) {
        const auto& r = rep.roots[i];
        out += std::string(i ? "," : "") + "{\"re\":" + jnum(r.lambda.real()) + ",\"im\":" + jnum(r.lambda.imag()) +
               ",\"residual\":" + jnum(r.residual) + "}";
    }
    return out + "]";
}

void write_trajectory_header(std::ostream& os, bool two_term) { os << (two_term ? "t,x,y\n" : "t,x\n"); }

void write_trajectory_csv(std::ostream& os, const Trajectory& tr, std::size_t stride) {
    stride = std::max<std::size_t>(stride, 1);
    const bool two = !tr.y.empty();
    write_trajectory_header(os, two);
    for (std::size_t i = 0; i < tr.size(); i += stride) {
        os << format_real(tr.time(i)) << ',' << format_real(tr.x[i]);
        if (two) os << ',' << format_real(tr.y[i]);
        os << '\n';
    }
}

void write_region_csv(std::ostream& os, const std::vector<RegionRow>& rows) {
    os << "a1,c,verdict,tau_star,first_s1,first_s2\n";
    for (const auto& r : rows) {
        const auto& v = r.verdict;
        os << format_real(r.a1) << ',' << format_real(r.c) << ',';
        if (r.error) {
            os << to_string(*r.error) << ",,,\n";
            continue;
        }
        os << short_label(v.tag) << ',';
        if (v.tag == VerdictTag::SingleStableRegion) os << format_real(v.tau_star);
        os << ',';
        if (!v.s1.empty()) os << format_real(v.s1.front());
        os << ',';
        if (!v.s2.empty()) os << format_real(v.s2.front());
        os << '\n';
    }
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
    os << "tau,tag,value\n";
    for (const auto& r : rows) {
        if (r.diverged) {
            os << format_real(r.tau) << ",Diverged,\n";
            continue;
        }
        const auto tag = r.result.label();
        if (r.result.kind == AsymptoteKind::ConvergesTo) {
            os << format_real(r.tau) << ',' << tag << ',' << format_real(r.result.x_star) << '\n';
            continue;
        }
        for (double p : r.result.peaks) os << format_real(r.tau) << ',' << tag << ',' << format_real(p) << '\n';
    }
}

}  // namespace fmg
