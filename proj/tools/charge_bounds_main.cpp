// charge-bounds: certified sup/inf brackets for the probability of an
// integer set under charges uniform on prime residue classes.
//
// Talks to the library through the C API only.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "chargebounds.h"

int main(int argc, char** argv) {
    CLI::App app{"Certified probability bounds for integer sets under prime-residue uniform charges"};
    app.footer("Exit codes: 0 success, 2 expression/configuration error, 3 resource cap exceeded.");

    std::string expression;
    int max_level = 4;
    std::string family = "pr";
    std::string format = "text";
    bool certificates = false;
    bool witnesses = false;
    bool approx = false;
    long cap_rows = 0;

    app.add_option("expression", expression,
                   "set expression, e.g. \"primes\", \"class(1,6)\", \"!(class(0,2) | {7})\"")
        ->required();
    app.add_option("--max-level", max_level, "compute levels 1..N (default 4)")
        ->check(CLI::Range(1, 64));
    app.add_option("--family", family, "pr (default) or comma-separated moduli, e.g. 1,2,3,6");
    app.add_option("--format", format, "text | json | csv")
        ->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_flag("--certificates", certificates, "attach LP certificates to the report");
    app.add_flag("--witnesses", witnesses, "attach path-multiset witnesses to the report");
    app.add_flag("--approx", approx, "add non-authoritative decimal columns");
    app.add_option("--cap-rows", cap_rows, "LP row cap; levels with a larger primorial run witness-only");

    CLI11_PARSE(app, argc, argv);

    cb_config config{};
    config.expression = expression.c_str();
    config.max_level = max_level;
    config.family = family.c_str();
    config.emit_certificates = certificates;
    config.emit_witnesses = witnesses;
    config.approx = approx;
    config.lp_row_cap = cap_rows;

    cb_report* report = nullptr;
    cb_status status = cb_report_run(&config, &report);
    if (status != CB_OK) {
        std::fprintf(stderr, "charge-bounds: %s\n", cb_last_error());
        return status == CB_ERROR_RESOURCE ? 3 : 2;
    }

    cb_format fmt = CB_FORMAT_TEXT;
    if (format == "json") fmt = CB_FORMAT_JSON;
    if (format == "csv") fmt = CB_FORMAT_CSV;
    char* rendered = nullptr;
    status = cb_report_render(report, fmt, &rendered);
    if (status != CB_OK) {
        std::fprintf(stderr, "charge-bounds: %s\n", cb_last_error());
        cb_report_free(report);
        return status == CB_ERROR_RESOURCE ? 3 : 2;
    }
    std::fputs(rendered, stdout);
    cb_string_free(rendered);
    cb_report_free(report);
    return 0;
}
