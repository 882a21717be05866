#include "vacancy/io.hpp"

#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace vacancy {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "model,d,lambda,n,statistic,value,stderr,replicates,seed,depth_cap\n";
    for (const SweepRow& r : rows) {
        out << r.model << ',' << r.d << ',' << format_g17(r.lambda) << ',' << r.n
            << ',' << r.statistic << ',' << format_g17(r.value) << ','
            << format_g17(r.stderr_) << ',' << r.replicates << ',' << r.seed
            << ',' << r.depth_cap << '\n';
    }
}

void write_json(std::ostream& out, const std::vector<SweepRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const SweepRow& r : rows) {
        arr.push_back({{"model", r.model},
                       {"d", r.d},
                       {"lambda", r.lambda},
                       {"n", r.n},
                       {"statistic", r.statistic},
                       {"value", r.value},
                       {"stderr", r.stderr_},
                       {"replicates", r.replicates},
                       {"seed", r.seed},
                       {"depth_cap", r.depth_cap}});
    }
    out << arr.dump(2) << '\n';
}

} // namespace vacancy
