#include "chargebounds/render.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace chargebounds {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string approx_str(const Rational& q) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", q.get_d());
    return buf;
}

const char* route_name(WitnessRoute r) {
    switch (r) {
    case WitnessRoute::Donation: return "donation";
    case WitnessRoute::Product: return "product";
    case WitnessRoute::DifferenceOfProducts: return "difference-of-products";
    case WitnessRoute::DualMeasure: return "dual-measure";
    }
    return "unknown";
}

ordered_json certificate_json(const UpperBound& ub, const ConstraintFamily& family) {
    ordered_json cert;
    cert["objective"] = rational_to_string(ub.value);
    cert["verified"] = ub.solution.certificate_ok;
    ordered_json alpha = ordered_json::array();
    std::size_t var = 0;
    for (std::int64_t m : family.moduli) {
        for (std::int64_t j = 0; j < m; ++j, ++var) {
            if (ub.solution.primal[var] != 0) {
                ordered_json entry;
                entry["modulus"] = m;
                entry["residue"] = j;
                entry["value"] = rational_to_string(ub.solution.primal[var]);
                alpha.push_back(std::move(entry));
            }
        }
    }
    cert["alpha"] = std::move(alpha);
    ordered_json dual = ordered_json::array();
    for (std::size_t s = 0; s < ub.solution.dual.size(); ++s) {
        if (ub.solution.dual[s] != 0) {
            ordered_json entry;
            entry["shift"] = s;
            entry["value"] = rational_to_string(ub.solution.dual[s]);
            dual.push_back(std::move(entry));
        }
    }
    cert["dual"] = std::move(dual);
    return cert;
}

ordered_json witness_json(const LowerBound& lo) {
    ordered_json w;
    w["route"] = route_name(lo.route);
    w["count"] = lo.count;
    ordered_json paths = ordered_json::array();
    if (!lo.witness.counts.empty()) {
        const Level& level = lo.witness.level;
        for (std::int64_t s = 0; s < level.primorial; ++s) {
            const std::int32_t c = lo.witness.counts[static_cast<std::size_t>(s)];
            if (c == 0) continue;
            ordered_json entry = ordered_json::array();
            entry.push_back(crt_invert(level, s));
            entry.push_back(c);
            paths.push_back(std::move(entry));
        }
    }
    w["paths"] = std::move(paths);
    return w;
}

std::string rational_or_dash(const std::optional<Rational>& q) {
    return q ? rational_to_string(*q) : "-";
}

std::string render_text(const BoundsReport& report, const RenderOptions& options) {
    std::ostringstream out;
    out << "expression: " << report.expression << "\n";
    out << "family: ";
    if (report.family_moduli.empty()) {
        out << "pr";
    } else {
        for (std::size_t i = 0; i < report.family_moduli.size(); ++i) {
            if (i) out << ",";
            out << report.family_moduli[i];
        }
    }
    out << "\n\n";
    out << "level  primorial  upper_sup  lower_sup  lower_inf  upper_inf\n";
    for (const LevelBounds& lb : report.levels) {
        char line[256];
        std::snprintf(line, sizeof(line), "%-6d %-10" PRId64 " %-10s %-10s %-10s %-10s", lb.level,
                      lb.primorial, rational_or_dash(lb.upper_sup).c_str(),
                      rational_or_dash(lb.lower_sup).c_str(),
                      rational_or_dash(lb.lower_inf).c_str(),
                      rational_or_dash(lb.upper_inf).c_str());
        out << line;
        if (options.approx && lb.upper_sup && lb.lower_sup) {
            out << "  (~" << approx_str(*lb.lower_sup) << " .. ~" << approx_str(*lb.upper_sup)
                << ", non-authoritative)";
        }
        if (!lb.family_applies) out << "  [family does not embed at this level]";
        else if (!lb.lp_computed) out << "  [witness-only: LP row cap]";
        out << "\n";
        if (options.witnesses && lb.lower_detail) {
            out << "       witness route: " << route_name(lb.lower_detail->route)
                << ", count " << lb.lower_detail->count << "\n";
        }
        if (options.certificates && lb.upper_detail) {
            out << "       certificate verified: "
                << (lb.upper_detail->solution.certificate_ok ? "yes" : "no") << "\n";
        }
    }
    return out.str();
}

std::string render_csv(const BoundsReport& report, const RenderOptions& options) {
    std::ostringstream out;
    out << "level,primorial,upper_sup,lower_sup,lower_inf,upper_inf";
    if (options.approx) {
        out << ",approx_upper_sup,approx_lower_sup,approx_lower_inf,approx_upper_inf";
    }
    out << "\n";
    auto cell = [](const std::optional<Rational>& q) { return q ? rational_to_string(*q) : ""; };
    auto acell = [](const std::optional<Rational>& q) { return q ? approx_str(*q) : ""; };
    for (const LevelBounds& lb : report.levels) {
        if (!lb.family_applies) continue;
        out << lb.level << "," << lb.primorial << "," << cell(lb.upper_sup) << ","
            << cell(lb.lower_sup) << "," << cell(lb.lower_inf) << "," << cell(lb.upper_inf);
        if (options.approx) {
            out << "," << acell(lb.upper_sup) << "," << acell(lb.lower_sup) << ","
                << acell(lb.lower_inf) << "," << acell(lb.upper_inf);
        }
        out << "\n";
    }
    return out.str();
}

std::string render_json(const BoundsReport& report, const RenderOptions& options) {
    ordered_json doc;
    doc["expression"] = report.expression;
    if (report.family_moduli.empty()) {
        doc["family"] = "pr";
    } else {
        doc["family"] = report.family_moduli;
    }
    ordered_json levels = ordered_json::array();
    for (const LevelBounds& lb : report.levels) {
        ordered_json jl;
        jl["level"] = lb.level;
        jl["primorial"] = lb.primorial;
        jl["family_applies"] = lb.family_applies;
        jl["lp_computed"] = lb.lp_computed;
        auto put = [&](const char* key, const std::optional<Rational>& q) {
            if (q) {
                jl[key] = rational_to_string(*q);
            } else {
                jl[key] = nullptr;
            }
        };
        put("upper_sup", lb.upper_sup);
        put("lower_sup", lb.lower_sup);
        put("lower_inf", lb.lower_inf);
        put("upper_inf", lb.upper_inf);
        if (options.approx) {
            auto puta = [&](const char* key, const std::optional<Rational>& q) {
                if (q) jl[key] = approx_str(*q);
            };
            puta("approx_upper_sup", lb.upper_sup);
            puta("approx_lower_sup", lb.lower_sup);
            puta("approx_lower_inf", lb.lower_inf);
            puta("approx_upper_inf", lb.upper_inf);
            if (lb.upper_sup) jl["approx_note"] = "non-authoritative";
        }
        if (options.certificates && lb.upper_detail) {
            ConstraintFamily family;
            if (report.family_moduli.empty()) {
                family = pr_family(make_level(lb.level));
            } else {
                family = custom_family(report.family_moduli);
            }
            ordered_json certs;
            certs["sup"] = certificate_json(*lb.upper_detail, family);
            if (lb.upper_detail_complement) {
                certs["complement_sup"] = certificate_json(*lb.upper_detail_complement, family);
            }
            jl["certificates"] = std::move(certs);
        }
        if (options.witnesses && lb.lower_detail) {
            ordered_json ws;
            ws["sup"] = witness_json(*lb.lower_detail);
            if (lb.lower_detail_complement) {
                ws["complement_sup"] = witness_json(*lb.lower_detail_complement);
            }
            jl["witnesses"] = std::move(ws);
        }
        levels.push_back(std::move(jl));
    }
    doc["levels"] = std::move(levels);
    return doc.dump(2) + "\n";
}

} // namespace

std::string render_report(const BoundsReport& report, const RenderOptions& options) {
    switch (options.format) {
    case ReportFormat::Text: return render_text(report, options);
    case ReportFormat::Csv: return render_csv(report, options);
    case ReportFormat::Json: return render_json(report, options);
    }
    return {};
}

} // namespace chargebounds
