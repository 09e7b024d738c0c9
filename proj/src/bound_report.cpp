#include "kmslab/bound_report.hpp"

#include <cstdio>
#include <ostream>

namespace kmslab {

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<BoundReport>& rows) {
    os << "name,dim,indices,lhs,rhs,slack,seed\n";
    for (const auto& r : rows) {
        os << r.name << ',' << r.dim << ',' << r.indices << ','
           << format_double(r.lhs) << ',' << format_double(r.rhs) << ','
           << format_double(r.slack) << ',' << r.seed << '\n';
    }
}

}  // namespace kmslab
