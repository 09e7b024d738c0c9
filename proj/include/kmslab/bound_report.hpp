#ifndef KMSLAB_BOUND_REPORT_HPP
#define KMSLAB_BOUND_REPORT_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace kmslab {

// One checked inequality. slack is recorded exactly as rhs - lhs; a negative
// slack is the failure signal. Rows whose name ends in ".info" are
// informational and never counted as failures by the suite runner.
struct BoundReport {
    std::string name;
    int dim = 0;
    std::string indices;  // human-readable index/parameter tag, e.g. "p=2;q=2"
    double lhs = 0.0;
    double rhs = 0.0;
    double slack = 0.0;
    std::uint64_t seed = 0;
};

inline BoundReport make_report(std::string name, int dim, std::string indices,
                               double lhs, double rhs, std::uint64_t seed = 0) {
    return BoundReport{std::move(name), dim, std::move(indices), lhs, rhs, rhs - lhs, seed};
}

inline bool is_informational(const BoundReport& r) {
    return r.name.size() >= 5 && r.name.compare(r.name.size() - 5, 5, ".info") == 0;
}

// shared CSV schema: name,dim,indices,lhs,rhs,slack,seed
void write_csv(std::ostream& os, const std::vector<BoundReport>& rows);

std::string format_double(double x);  // shortest round-trip-exact form

}  // namespace kmslab

#endif
