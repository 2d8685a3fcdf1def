#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mip/document.hpp"

namespace {

using mip::Int;
using mip::document::Json;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitSearchExhausted = 3;
constexpr int kExitPreconditionVerdict = 4;

uint64_t default_scan_bound() {
    if (const char* env = std::getenv("MIP_SCAN_BOUND")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw std::domain_error("MIP_SCAN_BOUND must be an unsigned integer");
        }
    }
    return mip::certifier::kDefaultWitnessScanBound;
}

std::vector<Int> parse_coeff_list(const std::string& list) {
    std::vector<Int> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw std::domain_error("empty coefficient in list");
        out.push_back(mip::int_from_decimal(item));
    }
    if (out.empty()) throw std::domain_error("no coefficients given");
    return out;
}

std::vector<Int> coefficients_from_file(const std::string& path) {
    Json j;
    if (path == "-") {
        std::cin >> j;
    } else {
        std::ifstream in(path);
        if (!in) throw std::domain_error("cannot open " + path);
        in >> j;
    }
    const Json& arr = j.is_array() ? j : j.at("coefficients");
    std::vector<Int> out;
    for (const auto& v : arr) out.push_back(mip::document::int_from_json(v));
    return out;
}

struct OutputOptions {
    bool no_timestamp = false;
    std::string output_path;
};

void emit(const Json& doc, const OutputOptions& opts) {
    if (opts.output_path.empty() || opts.output_path == "-") {
        std::cout << doc.dump(2) << "\n";
    } else {
        std::ofstream out(opts.output_path);
        if (!out) throw std::domain_error("cannot write " + opts.output_path);
        out << doc.dump(2) << "\n";
    }
}

Json family_inputs(const std::vector<Int>& coeffs) {
    Json inputs;
    Json arr = Json::array();
    for (const Int& c : coeffs) arr.push_back(mip::document::int_json(c));
    inputs["coefficients"] = std::move(arr);
    return inputs;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"construct and certify minimally intersective products of quadratics"};
    app.require_subcommand(1);
    app.fallthrough();

    OutputOptions out_opts;
    app.add_flag("--no-timestamp", out_opts.no_timestamp, "omit the provenance timestamp");
    app.add_option("-o,--output", out_opts.output_path, "write the document to a file instead of stdout");

    // construct
    auto* cmd_construct = app.add_subcommand("construct", "run the seeded construction");
    uint32_t n = 4;
    std::string p1 = "3", p2 = "5", policy = "smallest";
    uint64_t search_cap = 1000000;
    cmd_construct->add_option("--n", n, "number of quadratic factors (>= 4)")->required();
    cmd_construct->add_option("--p1", p1, "first seed prime (odd)");
    cmd_construct->add_option("--p2", p2, "second seed prime (odd)");
    cmd_construct->add_option("--policy", policy, "smallest | offset:k");
    cmd_construct->add_option("--search-cap", search_cap, "max candidates scanned per step");

    // certify
    auto* cmd_certify = app.add_subcommand("certify", "decide intersectivity with a certificate");
    std::string coeffs_arg, file_arg;
    cmd_certify->add_option("--coeffs", coeffs_arg, "comma-separated members");
    cmd_certify->add_option("--file", file_arg, "JSON array of members ('-' = stdin)");

    // minimal
    auto* cmd_minimal = app.add_subcommand("minimal", "decide minimal intersectivity");
    std::string m_coeffs, m_file;
    uint64_t scan_bound_flag = 0;
    cmd_minimal->add_option("--coeffs", m_coeffs, "comma-separated members");
    cmd_minimal->add_option("--file", m_file, "JSON array of members ('-' = stdin)");
    cmd_minimal->add_option("--scan-bound", scan_bound_flag, "witness prime scan bound");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "search for roots modulo every m");
    std::string s_coeffs;
    uint64_t max_m = 10000;
    bool naive = false;
    cmd_sweep->add_option("--coeffs", s_coeffs, "comma-separated members")->required();
    cmd_sweep->add_option("--max-m", max_m, "largest modulus checked")->required();
    cmd_sweep->add_flag("--naive", naive, "check every modulus directly (no prime-power shortcut)");

    // density
    auto* cmd_density = app.add_subcommand("density", "square-free density in a progression");
    std::string d_modulus, d_residue;
    uint64_t d_lower = 0, d_limit = 0;
    cmd_density->add_option("--modulus", d_modulus)->required();
    cmd_density->add_option("--residue", d_residue)->required();
    cmd_density->add_option("--lower-bound", d_lower);
    cmd_density->add_option("--limit", d_limit)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInvalid;
    }

    mip::document::Provenance prov;
    prov.with_timestamp = !out_opts.no_timestamp;

    try {
        if (*cmd_construct) {
            mip::constructor::ConstructionParams params;
            params.n = n;
            params.p1 = mip::int_from_decimal(p1);
            params.p2 = mip::int_from_decimal(p2);
            params.search_cap = search_cap;
            params.witness_scan_bound = default_scan_bound();
            if (policy == "smallest") {
                params.offset = 0;
            } else if (policy.rfind("offset:", 0) == 0) {
                std::string k = policy.substr(7);
                if (k.empty() || k.find_first_not_of("0123456789") != std::string::npos)
                    throw std::domain_error("policy must be 'smallest' or 'offset:k'");
                params.offset = static_cast<uint32_t>(std::stoul(k));
            } else {
                throw std::domain_error("policy must be 'smallest' or 'offset:k'");
            }
            auto result = mip::constructor::construct(params);
            Json inputs;
            inputs["n"] = params.n;
            inputs["p1"] = mip::document::int_json(params.p1);
            inputs["p2"] = mip::document::int_json(params.p2);
            inputs["search_cap"] = params.search_cap;
            Json res;
            res["family"] = Json::array();
            for (const Int& v : result.family.values())
                res["family"].push_back(mip::document::int_json(v));
            res["trace"] = mip::document::trace_json(result.trace);
            res["minimality"] = mip::document::report_json(result.report);
            res["retries"] = result.retries;
            prov.policy = policy;
            prov.witness_scan_bound = params.witness_scan_bound;
            emit(mip::document::make_document("construct", std::move(inputs), std::move(res), prov),
                 out_opts);
            return kExitOk;
        }

        if (*cmd_certify) {
            if (coeffs_arg.empty() == file_arg.empty())
                throw std::domain_error("certify needs exactly one of --coeffs or --file");
            std::vector<Int> coeffs =
                coeffs_arg.empty() ? coefficients_from_file(file_arg) : parse_coeff_list(coeffs_arg);
            auto family = mip::QuadraticFamily::validate(coeffs);
            uint64_t bound = default_scan_bound();
            auto cert = mip::certifier::certify_intersective(family, bound);
            prov.witness_scan_bound = bound;
            emit(mip::document::make_document("certify", family_inputs(coeffs),
                                              mip::document::certificate_json(cert), prov),
                 out_opts);
            return kExitOk;
        }

        if (*cmd_minimal) {
            if (m_coeffs.empty() == m_file.empty())
                throw std::domain_error("minimal needs exactly one of --coeffs or --file");
            std::vector<Int> coeffs =
                m_coeffs.empty() ? coefficients_from_file(m_file) : parse_coeff_list(m_coeffs);
            if (coeffs.size() < 4)
                throw std::domain_error("minimal needs at least 4 members");
            auto family = mip::QuadraticFamily::validate(coeffs);
            uint64_t bound = scan_bound_flag != 0 ? scan_bound_flag : default_scan_bound();
            prov.witness_scan_bound = bound;
            try {
                auto report = mip::minimality::certify_minimal(family, bound);
                emit(mip::document::make_document("minimal", family_inputs(coeffs),
                                                  mip::document::report_json(report), prov),
                     out_opts);
                return kExitOk;
            } catch (const mip::minimality::base_not_intersective_error& e) {
                Json res;
                res["error"] = "NOT_INTERSECTIVE_BASE";
                res["base"] = mip::document::certificate_json(e.base);
                emit(mip::document::make_document("minimal", family_inputs(coeffs), std::move(res), prov),
                     out_opts);
                return kExitPreconditionVerdict;
            }
        }

        if (*cmd_sweep) {
            std::vector<Int> coeffs = parse_coeff_list(s_coeffs);
            auto family = mip::QuadraticFamily::validate(coeffs);
            auto result = naive ? mip::oracle::sweep_naive(family.values(), max_m)
                                : mip::oracle::sweep(family.values(), max_m);
            Json inputs = family_inputs(coeffs);
            inputs["max_m"] = max_m;
            inputs["naive"] = naive;
            emit(mip::document::make_document("sweep", std::move(inputs),
                                              mip::document::sweep_json(result), prov),
                 out_opts);
            return kExitOk;
        }

        if (*cmd_density) {
            mip::ntheory::ResidueClass cls{mip::int_from_decimal(d_residue),
                                           mip::int_from_decimal(d_modulus)};
            auto est = mip::oracle::density_scan(cls, d_lower, d_limit);
            Json inputs;
            inputs["modulus"] = mip::document::int_json(cls.modulus);
            inputs["residue"] = mip::document::int_json(cls.residue);
            inputs["lower_bound"] = mip::document::int_json(Int(static_cast<unsigned long>(d_lower)));
            inputs["limit"] = mip::document::int_json(Int(static_cast<unsigned long>(d_limit)));
            emit(mip::document::make_document("density", std::move(inputs),
                                              mip::document::density_json(est), prov),
                 out_opts);
            return kExitOk;
        }
    } catch (const mip::constructor::search_exhausted_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSearchExhausted;
    } catch (const mip::family_error& e) {
        std::cerr << "error [" << mip::to_string(e.code()) << "]: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitInvalid;
}
