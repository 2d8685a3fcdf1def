#include "mip/document.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>

namespace mip::document {

namespace {

const Json& field(const Json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end()) throw schema_error(std::string("missing field '") + name + "'");
    return *it;
}

uint64_t u64_field(const Json& j, const char* name) {
    const Json& f = field(j, name);
    if (f.is_number_unsigned()) return f.get<uint64_t>();
    if (f.is_string()) return to_u64(int_from_json(f));
    throw schema_error(std::string("field '") + name + "' must be an unsigned count");
}

std::string timestamp_utc() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

std::vector<Int> values_from_json(const Json& arr) {
    if (!arr.is_array()) throw schema_error("family must be an array");
    std::vector<Int> out;
    for (const auto& v : arr) out.push_back(int_from_json(v));
    return out;
}

Json values_json(const std::vector<Int>& values) {
    Json arr = Json::array();
    for (const Int& v : values) arr.push_back(int_json(v));
    return arr;
}

const char* verdict_name(certifier::Verdict v) {
    return v == certifier::Verdict::intersective ? "INTERSECTIVE" : "NOT_INTERSECTIVE";
}

const char* failure_name(certifier::FailureKind k) {
    switch (k) {
        case certifier::FailureKind::no_odd_square_subset: return "NO_ODD_SQUARE_SUBSET";
        case certifier::FailureKind::legendre_gap: return "LEGENDRE_GAP";
        case certifier::FailureKind::no_mod8_member: return "NO_MOD8_MEMBER";
    }
    return "UNKNOWN";
}

}  // namespace

Json int_json(const Int& v) { return Json(to_decimal(v)); }

Int int_from_json(const Json& j) {
    if (j.is_string()) {
        try {
            return int_from_decimal(j.get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw schema_error(e.what());
        }
    }
    if (j.is_number_integer() || j.is_number_unsigned())
        return int_from_decimal(j.dump());
    throw schema_error("expected integer (decimal string)");
}

Json certificate_json(const certifier::IntersectivityCertificate& cert) {
    Json j;
    j["verdict"] = verdict_name(cert.verdict);
    j["family"] = values_json(cert.family);
    if (cert.subset_T) {
        Json t = Json::array();
        for (uint32_t i : cert.subset_T->indices) t.push_back(i);
        j["subset_T"] = std::move(t);
    } else {
        j["subset_T"] = nullptr;
    }
    Json lw = Json::array();
    for (const auto& w : cert.legendre_witnesses) {
        Json e;
        e["j"] = w.j;
        e["p"] = int_json(w.prime);
        e["i"] = w.i;
        e["symbol"] = w.symbol;
        lw.push_back(std::move(e));
    }
    j["legendre_witnesses"] = std::move(lw);
    j["mod8_index"] = cert.mod8_index ? Json(*cert.mod8_index) : Json(nullptr);
    if (cert.failure) {
        Json f;
        f["kind"] = failure_name(cert.failure->kind);
        if (cert.failure->kind == certifier::FailureKind::legendre_gap) {
            f["j"] = cert.failure->j;
            f["p"] = int_json(cert.failure->prime);
        }
        j["failure"] = std::move(f);
    } else {
        j["failure"] = nullptr;
    }
    if (cert.witness_modulus) {
        Json w;
        w["prime"] = int_json(cert.witness_modulus->prime);
        w["exponent"] = cert.witness_modulus->exponent;
        w["modulus"] = int_json(cert.witness_modulus->modulus);
        w["verified_by_scan"] = cert.witness_modulus->verified_by_scan;
        j["witness_modulus"] = std::move(w);
    } else {
        j["witness_modulus"] = nullptr;
    }
    j["prop1_only"] = cert.prop1_only;
    return j;
}

certifier::IntersectivityCertificate certificate_from_json(const Json& j) {
    certifier::IntersectivityCertificate cert;
    const std::string verdict = field(j, "verdict").get<std::string>();
    if (verdict == "INTERSECTIVE")
        cert.verdict = certifier::Verdict::intersective;
    else if (verdict == "NOT_INTERSECTIVE")
        cert.verdict = certifier::Verdict::not_intersective;
    else
        throw schema_error("unknown verdict '" + verdict + "'");
    cert.family = values_from_json(field(j, "family"));

    const Json& t = field(j, "subset_T");
    if (!t.is_null()) {
        gf2::SubsetWitness w;
        for (const auto& e : t) w.indices.push_back(e.get<uint32_t>());
        cert.subset_T = std::move(w);
    }
    for (const auto& e : field(j, "legendre_witnesses")) {
        certifier::LegendreWitness w;
        w.j = u64_field(e, "j") & 0xffffffffu;
        w.prime = int_from_json(field(e, "p"));
        w.i = u64_field(e, "i") & 0xffffffffu;
        w.symbol = field(e, "symbol").get<int>();
        cert.legendre_witnesses.push_back(std::move(w));
    }
    const Json& m8 = field(j, "mod8_index");
    if (!m8.is_null()) cert.mod8_index = m8.get<uint32_t>();
    const Json& f = field(j, "failure");
    if (!f.is_null()) {
        certifier::Failure fail;
        const std::string kind = field(f, "kind").get<std::string>();
        if (kind == "NO_ODD_SQUARE_SUBSET")
            fail.kind = certifier::FailureKind::no_odd_square_subset;
        else if (kind == "LEGENDRE_GAP") {
            fail.kind = certifier::FailureKind::legendre_gap;
            fail.j = field(f, "j").get<uint32_t>();
            fail.prime = int_from_json(field(f, "p"));
        } else if (kind == "NO_MOD8_MEMBER")
            fail.kind = certifier::FailureKind::no_mod8_member;
        else
            throw schema_error("unknown failure kind '" + kind + "'");
        cert.failure = std::move(fail);
    }
    const Json& wm = field(j, "witness_modulus");
    if (!wm.is_null()) {
        certifier::WitnessModulus w;
        w.prime = int_from_json(field(wm, "prime"));
        w.exponent = field(wm, "exponent").get<unsigned>();
        w.modulus = int_from_json(field(wm, "modulus"));
        w.verified_by_scan = field(wm, "verified_by_scan").get<bool>();
        cert.witness_modulus = std::move(w);
    }
    cert.prop1_only = field(j, "prop1_only").get<bool>();
    return cert;
}

Json report_json(const minimality::MinimalityReport& report) {
    Json j;
    j["verdict"] = report.verdict == minimality::MinimalVerdict::minimal ? "MINIMAL" : "NOT_MINIMAL";
    Json off = Json::array();
    for (uint32_t i : report.offending) off.push_back(i);
    j["offending_indices"] = std::move(off);
    j["base"] = certificate_json(report.base);
    Json divisors = Json::array();
    for (const auto& d : report.divisors) {
        Json e;
        e["dropped_index"] = d.dropped_index;
        e["certificate"] = certificate_json(d.certificate);
        divisors.push_back(std::move(e));
    }
    j["divisors"] = std::move(divisors);
    return j;
}

minimality::MinimalityReport report_from_json(const Json& j) {
    minimality::MinimalityReport report;
    const std::string verdict = field(j, "verdict").get<std::string>();
    if (verdict == "MINIMAL")
        report.verdict = minimality::MinimalVerdict::minimal;
    else if (verdict == "NOT_MINIMAL")
        report.verdict = minimality::MinimalVerdict::not_minimal;
    else
        throw schema_error("unknown minimality verdict '" + verdict + "'");
    for (const auto& e : field(j, "offending_indices")) report.offending.push_back(e.get<uint32_t>());
    report.base = certificate_from_json(field(j, "base"));
    for (const auto& e : field(j, "divisors")) {
        minimality::DivisorReport d;
        d.dropped_index = field(e, "dropped_index").get<uint32_t>();
        d.certificate = certificate_from_json(field(e, "certificate"));
        report.divisors.push_back(std::move(d));
    }
    return report;
}

Json trace_json(const constructor::ConstructionTrace& trace) {
    Json steps = Json::array();
    for (const auto& st : trace.steps) {
        Json e;
        e["index"] = st.index;
        e["method"] = st.method;
        Json targets = Json::array();
        for (const auto& t : st.targets) {
            Json c;
            c["residue"] = int_json(t.residue);
            c["modulus"] = int_json(t.modulus);
            targets.push_back(std::move(c));
        }
        e["targets"] = std::move(targets);
        e["lower_bound"] = int_json(st.lower_bound);
        if (st.combined) {
            Json c;
            c["residue"] = int_json(st.combined->residue);
            c["modulus"] = int_json(st.combined->modulus);
            e["combined"] = std::move(c);
        } else {
            e["combined"] = nullptr;
        }
        e["candidates_examined"] = st.candidates_examined;
        e["chosen"] = int_json(st.chosen);
        steps.push_back(std::move(e));
    }
    Json j;
    j["steps"] = std::move(steps);
    return j;
}

Json sweep_json(const oracle::SweepResult& result) {
    Json j;
    j["max_checked"] = int_json(Int(static_cast<unsigned long>(result.max_checked)));
    j["first_failure"] = result.first_failure
                             ? int_json(Int(static_cast<unsigned long>(*result.first_failure)))
                             : Json(nullptr);
    Json samples;
    for (const auto& [m, root] : result.roots_sample)
        samples[to_decimal(Int(static_cast<unsigned long>(m)))] =
            int_json(Int(static_cast<unsigned long>(root)));
    j["roots_sample"] = std::move(samples);
    return j;
}

Json density_json(const oracle::DensityEstimate& est) {
    Json j;
    j["qualifying_count"] = int_json(Int(static_cast<unsigned long>(est.qualifying_count)));
    j["scan_limit"] = int_json(Int(static_cast<unsigned long>(est.scan_limit)));
    j["empirical"] = est.empirical;
    j["formula_value"] = est.formula_value;
    j["relative_gap"] = est.relative_gap;
    return j;
}

Json make_document(const std::string& command, Json inputs, Json result, const Provenance& prov) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["command"] = command;
    doc["inputs"] = std::move(inputs);
    doc["result"] = std::move(result);
    Json p;
    p["tool"] = kToolName;
    p["version"] = kToolVersion;
    if (!prov.policy.empty()) p["policy"] = prov.policy;
    if (prov.witness_scan_bound != 0)
        p["witness_scan_bound"] = int_json(Int(static_cast<unsigned long>(prov.witness_scan_bound)));
    Json prim;
    prim["deterministic_below"] = ntheory::kDeterministicPrimalityBound;
    prim["fixed_witnesses_above"] = true;
    p["primality"] = std::move(prim);
    if (prov.with_timestamp) p["timestamp"] = timestamp_utc();
    doc["provenance"] = std::move(p);
    return doc;
}

bool verify_document(const Json& doc) {
    const std::string version = field(doc, "schema_version").get<std::string>();
    if (version != kSchemaVersion) throw schema_error("unsupported schema_version '" + version + "'");
    const std::string command = field(doc, "command").get<std::string>();
    const Json& result = field(doc, "result");

    if (command == "certify") {
        return oracle::verify_certificate(certificate_from_json(result));
    }
    if (command == "minimal") {
        return oracle::verify_report(report_from_json(result));
    }
    if (command == "construct") {
        auto report = report_from_json(field(result, "minimality"));
        std::vector<Int> family = values_from_json(field(result, "family"));
        if (family != report.base.family) return false;
        const Json& steps = field(field(result, "trace"), "steps");
        if (steps.size() != family.size()) return false;
        for (size_t i = 0; i < family.size(); ++i)
            if (int_from_json(field(steps[i], "chosen")) != family[i]) return false;
        return oracle::verify_report(report);
    }
    if (command == "sweep") {
        std::vector<Int> family = values_from_json(field(field(doc, "inputs"), "coefficients"));
        const Json& ff = field(result, "first_failure");
        if (!ff.is_null()) {
            uint64_t m = to_u64(int_from_json(ff));
            if (oracle::has_root_mod(family, m)) return false;
        }
        for (const auto& [key, root] : field(result, "roots_sample").items()) {
            uint64_t m = to_u64(int_from_decimal(key));
            uint64_t x = to_u64(int_from_json(root));
            std::vector<uint64_t> roots = oracle::roots_mod(family, m);
            if (std::find(roots.begin(), roots.end(), x) == roots.end()) return false;
        }
        return true;
    }
    if (command == "density") {
        const Json& inputs = field(doc, "inputs");
        ntheory::ResidueClass cls{int_from_json(field(inputs, "residue")),
                                  int_from_json(field(inputs, "modulus"))};
        uint64_t lower = to_u64(int_from_json(field(inputs, "lower_bound")));
        uint64_t limit = to_u64(int_from_json(field(inputs, "limit")));
        oracle::DensityEstimate est = oracle::density_scan(cls, lower, limit);
        return est.qualifying_count == to_u64(int_from_json(field(result, "qualifying_count")));
    }
    throw schema_error("unknown command '" + command + "'");
}

}  // namespace mip::document
