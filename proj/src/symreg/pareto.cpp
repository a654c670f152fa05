#include "lmx/symreg/pareto.hpp"

#include <algorithm>
#include <sstream>

#include "lmx/core/io.hpp"

namespace lmx::symreg {

bool dominates(const ParetoPoint& a, const ParetoPoint& b) noexcept
{
    return a.r2_train >= b.r2_train && a.size <= b.size && (a.r2_train > b.r2_train || a.size < b.size);
}

std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points)
{
    std::vector<ParetoPoint> front;
    for (std::size_t i = 0; i < points.size(); ++i) {
        bool keep = true;
        for (std::size_t j = 0; j < points.size() && keep; ++j) {
            if (j == i) {
                continue;
            }
            if (dominates(points[j], points[i])) {
                keep = false;
            } else if (j < i && points[j].r2_train == points[i].r2_train && points[j].size == points[i].size) {
                keep = false;
            }
        }
        if (keep) {
            front.push_back(points[i]);
        }
    }
    std::stable_sort(front.begin(), front.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
        if (a.size != b.size) {
            return a.size < b.size;
        }
        return a.r2_train > b.r2_train;
    });
    return front;
}

std::string pareto_csv(const std::vector<ParetoPoint>& front)
{
    std::ostringstream out;
    out << "r2_train,r2_test,size,expression\n";
    for (const auto& p : front) {
        out << core::format_double(p.r2_train) << ',' << core::format_double(p.r2_test) << ',' << p.size << ','
            << core::csv_field(p.expression) << '\n';
    }
    return out.str();
}

} // namespace lmx::symreg
