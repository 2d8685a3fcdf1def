#include "mip/minimality.hpp"

namespace mip::minimality {

QuadraticFamily drop_one(const QuadraticFamily& family, uint32_t r) {
    if (r < 1 || r > family.size()) throw std::domain_error("drop_one: index out of range");
    if (family.size() < 4) throw unsupported_divisor_size_error();
    std::vector<SquarefreeInt> rest;
    rest.reserve(family.size() - 1);
    for (uint32_t i = 1; i <= family.size(); ++i)
        if (i != r) rest.push_back(family.member(i));
    return QuadraticFamily::from_members(std::move(rest));
}

MinimalityReport certify_minimal(const QuadraticFamily& family, uint64_t witness_scan_bound) {
    if (family.size() < 4) throw unsupported_divisor_size_error();
    MinimalityReport report;
    report.base = certifier::certify_intersective(family, witness_scan_bound);
    if (report.base.verdict != certifier::Verdict::intersective)
        throw base_not_intersective_error(report.base);
    for (uint32_t r = 1; r <= family.size(); ++r) {
        QuadraticFamily divisor = drop_one(family, r);
        auto cert = certifier::certify_intersective(divisor, witness_scan_bound);
        if (cert.verdict == certifier::Verdict::intersective) report.offending.push_back(r);
        report.divisors.push_back({r, std::move(cert)});
    }
    report.verdict = report.offending.empty() ? MinimalVerdict::minimal : MinimalVerdict::not_minimal;
    return report;
}

}  // namespace mip::minimality
