#include "chargebounds.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <string>

#include "chargebounds/bounds.hpp"
#include "chargebounds/errors.hpp"
#include "chargebounds/render.hpp"

using namespace chargebounds;

struct cb_report {
    BoundsReport report;
    RenderOptions render;
};

namespace {

thread_local std::string g_last_error;

cb_status fail(cb_status status, const std::string& message) {
    g_last_error = message;
    return status;
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

cb_status run_guarded(const cb_config* config, cb_report** out) {
    if (!config || !config->expression || !out) {
        return fail(CB_ERROR_INVALID, "null configuration");
    }
    *out = nullptr;
    BoundsOptions options;
    options.max_level = config->max_level > 0 ? config->max_level : 4;
    if (config->lp_row_cap > 0) options.lp_row_cap = config->lp_row_cap;
    if (config->level_cap > 0) options.level_cap = config->level_cap;
    if (config->family && std::strcmp(config->family, "pr") != 0 && config->family[0] != '\0') {
        std::vector<std::int64_t> moduli;
        const char* p = config->family;
        while (*p) {
            char* end = nullptr;
            const long long v = std::strtoll(p, &end, 10);
            if (end == p || v < 1) {
                return fail(CB_ERROR_PARSE, "family must be 'pr' or a comma-separated modulus list");
            }
            moduli.push_back(v);
            p = end;
            if (*p == ',') ++p;
            else if (*p != '\0') {
                return fail(CB_ERROR_PARSE, "family must be 'pr' or a comma-separated modulus list");
            }
        }
        options.family = std::move(moduli);
    }
    const SetExprPtr expr = parse(config->expression);
    auto handle = std::make_unique<cb_report>();
    handle->report = bounds_report(*expr, options);
    handle->render.approx = config->approx != 0;
    handle->render.certificates = config->emit_certificates != 0;
    handle->render.witnesses = config->emit_witnesses != 0;
    *out = handle.release();
    return CB_OK;
}

} // namespace

extern "C" {

cb_status cb_report_run(const cb_config* config, cb_report** out) {
    try {
        return run_guarded(config, out);
    } catch (const ParseError& e) {
        return fail(CB_ERROR_PARSE, e.what());
    } catch (const ResourceError& e) {
        return fail(CB_ERROR_RESOURCE, e.what());
    } catch (const InvalidArgument& e) {
        return fail(CB_ERROR_PARSE, e.what());
    } catch (const std::exception& e) {
        return fail(CB_ERROR_INTERNAL, e.what());
    }
}

cb_status cb_report_render(const cb_report* report, cb_format format, char** out) {
    if (!report || !out) return fail(CB_ERROR_INVALID, "null report or output");
    try {
        RenderOptions options = report->render;
        switch (format) {
        case CB_FORMAT_TEXT: options.format = ReportFormat::Text; break;
        case CB_FORMAT_JSON: options.format = ReportFormat::Json; break;
        case CB_FORMAT_CSV: options.format = ReportFormat::Csv; break;
        default: return fail(CB_ERROR_INVALID, "unknown format");
        }
        *out = dup_string(render_report(report->report, options));
        return *out ? CB_OK : fail(CB_ERROR_INTERNAL, "allocation failed");
    } catch (const std::exception& e) {
        return fail(CB_ERROR_INTERNAL, e.what());
    }
}

int cb_report_level_count(const cb_report* report) {
    return report ? static_cast<int>(report->report.levels.size()) : 0;
}

int cb_report_level(const cb_report* report, int index) {
    if (!report || index < 0 || index >= cb_report_level_count(report)) return -1;
    return report->report.levels[static_cast<std::size_t>(index)].level;
}

long cb_report_primorial(const cb_report* report, int index) {
    if (!report || index < 0 || index >= cb_report_level_count(report)) return -1;
    return static_cast<long>(report->report.levels[static_cast<std::size_t>(index)].primorial);
}

cb_status cb_report_value(const cb_report* report, int index, const char* field, char** out) {
    if (!report || !field || !out) return fail(CB_ERROR_INVALID, "null argument");
    if (index < 0 || index >= cb_report_level_count(report)) {
        return fail(CB_ERROR_INVALID, "level index out of range");
    }
    const LevelBounds& lb = report->report.levels[static_cast<std::size_t>(index)];
    const std::optional<Rational>* value = nullptr;
    if (std::strcmp(field, "upper_sup") == 0) value = &lb.upper_sup;
    else if (std::strcmp(field, "lower_sup") == 0) value = &lb.lower_sup;
    else if (std::strcmp(field, "lower_inf") == 0) value = &lb.lower_inf;
    else if (std::strcmp(field, "upper_inf") == 0) value = &lb.upper_inf;
    else return fail(CB_ERROR_INVALID, std::string("unknown field: ") + field);
    *out = value->has_value() ? dup_string(rational_to_string(**value)) : nullptr;
    return CB_OK;
}

const char* cb_last_error(void) { return g_last_error.c_str(); }

void cb_report_free(cb_report* report) { delete report; }

void cb_string_free(char* str) { std::free(str); }

const char* cb_version(void) { return "0.1.0"; }

} // extern "C"
