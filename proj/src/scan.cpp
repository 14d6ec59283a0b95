#include "steerqkd/scan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "steerqkd/errors.hpp"
#include "steerqkd/families.hpp"
#include "steerqkd/qber.hpp"
#include "steerqkd/steering.hpp"

namespace steerqkd {

namespace {

constexpr double kBisectWidth = 1e-3;
constexpr double kDomainSlack = 1e-9;

using Point = std::vector<double>;
using RowFn = std::function<std::optional<Point>(const Point &)>;

struct FamilyPlan {
    std::vector<std::string> axes;
    std::vector<std::string> verdicts;
    RowFn row;
};

double flag(bool b) { return b ? 1.0 : 0.0; }

// Clamps grid values that overshoot a domain end through rounding.
double snap(double v, double lo, double hi) {
    if (v < lo && v > lo - kDomainSlack) {
        return lo;
    }
    if (v > hi && v < hi + kDomainSlack) {
        return hi;
    }
    return v;
}

Point verdict_columns(const DensityMatrix &rho) {
    const TensorSpectrum spec = tensor_spectrum(rho);
    const SteeringVerdict s = steering_verdict(spec);
    const UsefulnessVerdict u = classify_usefulness(spec);
    return {flag(s.steerable), flag(u.useful), flag(s.chsh_violating),
            u.q_min, s.f3_bound, s.chsh_bound};
}

const std::vector<std::string> kVerdictHeader{
    "steerable", "useful", "chsh_violating", "q_min", "f3_bound", "chsh_bound"};

FamilyPlan plan_for(const std::string &family) {
    if (family == "werner") {
        return {{"omega"}, kVerdictHeader, [](const Point &p) -> std::optional<Point> {
                    const double omega = snap(p.at(0), 0.0, 1.0);
                    Point row{omega};
                    const Point v = verdict_columns(make_werner({omega}));
                    row.insert(row.end(), v.begin(), v.end());
                    return row;
                }};
    }
    if (family == "gamma") {
        return {{"q", "alpha"}, kVerdictHeader,
                [](const Point &p) -> std::optional<Point> {
                    const GammaParams g{snap(p.at(0), 0.0, 1.0),
                                        snap(p.at(1), 0.0, std::numbers::pi / 4.0)};
                    Point row{g.q, g.alpha};
                    const Point v = verdict_columns(make_gamma(g));
                    row.insert(row.end(), v.begin(), v.end());
                    return row;
                }};
    }
    if (family == "bell_diagonal") {
        auto header = kVerdictHeader;
        header.push_back("absolutely_local");
        return {{"w1", "w2", "w3"}, header,
                [](const Point &p) -> std::optional<Point> {
                    BellDiagonalParams w{snap(p.at(0), 0.0, 1.0),
                                         snap(p.at(1), 0.0, 1.0),
                                         snap(p.at(2), 0.0, 1.0), 0.0};
                    const double rest = 1.0 - w.w1 - w.w2 - w.w3;
                    if (rest < -kDomainSlack) {
                        return std::nullopt;
                    }
                    w.w4 = std::max(0.0, rest);
                    Point row{w.w1, w.w2, w.w3, w.w4};
                    const Point v = verdict_columns(make_bell_diagonal(w));
                    row.insert(row.end(), v.begin(), v.end());
                    row.push_back(flag(belldiag_absolutely_chsh_local(w)));
                    return row;
                }};
    }
    throw BadRange("unknown family '" + family +
                   "' (expected bell_diagonal, werner or gamma)");
}

struct Domain {
    double lo;
    double hi;
};

Domain domain_of(const std::string &axis) {
    if (axis == "alpha") {
        return {0.0, std::numbers::pi / 4.0};
    }
    return {0.0, 1.0};
}

// Maps declared ranges onto the family's axes and returns the grid points
// in declared nesting order, each expressed in the family's axis order.
std::vector<Point> grid_points(const FamilyPlan &plan,
                               const std::vector<ScanRange> &ranges) {
    std::map<std::string, std::size_t> slot;
    for (std::size_t i = 0; i < plan.axes.size(); ++i) {
        slot[plan.axes[i]] = i;
    }
    std::vector<std::size_t> target;
    std::vector<std::vector<double>> values;
    for (const auto &r : ranges) {
        const auto it = slot.find(r.name);
        if (it == slot.end()) {
            throw BadRange("range '" + r.name + "' does not apply to this family");
        }
        if (std::find(target.begin(), target.end(), it->second) != target.end()) {
            throw BadRange("range '" + r.name + "' given twice");
        }
        const Domain d = domain_of(r.name);
        if (r.lo < d.lo - kDomainSlack || r.hi > d.hi + kDomainSlack) {
            std::ostringstream msg;
            msg << "range '" << r.name << "' must stay within [" << d.lo << ", "
                << d.hi << "]";
            throw BadRange(msg.str());
        }
        target.push_back(it->second);
        values.push_back(r.values());
    }
    if (target.size() != plan.axes.size()) {
        std::string names;
        for (const auto &a : plan.axes) {
            names += (names.empty() ? "" : ", ") + a;
        }
        throw BadRange("this family needs ranges for: " + names);
    }

    std::vector<Point> points;
    Point current(plan.axes.size(), 0.0);
    std::function<void(std::size_t)> walk = [&](std::size_t depth) {
        if (depth == values.size()) {
            points.push_back(current);
            return;
        }
        for (double v : values[depth]) {
            current[target[depth]] = v;
            walk(depth + 1);
        }
    };
    walk(0);
    return points;
}

ScanResult make_result(const FamilyPlan &plan) {
    ScanResult res;
    res.header = plan.axes;
    if (plan.axes.size() == 3) {
        res.header.push_back("w4");
    }
    res.header.insert(res.header.end(), plan.verdicts.begin(), plan.verdicts.end());
    return res;
}

// Largest-q end of the grid walk, then bisection: returns the infimum of
// the interval [q*, 1] on which pred holds.
double interval_start(const std::function<bool(double)> &pred, double q_step) {
    if (!pred(1.0)) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const auto n = static_cast<std::int64_t>(std::floor(1.0 / q_step + 1e-9));
    double good = 1.0;
    double bad = -1.0;
    for (std::int64_t k = 1; k <= n; ++k) {
        const double q = std::max(0.0, 1.0 - static_cast<double>(k) * q_step);
        if (!pred(q)) {
            bad = q;
            break;
        }
        good = q;
    }
    if (bad < 0.0) {
        if (good > 0.0 && !pred(0.0)) {
            bad = 0.0;
        } else {
            return 0.0;
        }
    }
    while (good - bad > kBisectWidth) {
        const double mid = 0.5 * (good + bad);
        (pred(mid) ? good : bad) = mid;
    }
    return good;
}

} // namespace

std::vector<double> ScanRange::values() const {
    const auto n = static_cast<std::int64_t>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (std::int64_t i = 0; i <= n; ++i) {
        out.push_back(lo + static_cast<double>(i) * step);
    }
    return out;
}

ScanRange parse_range(const std::string &text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw BadRange("expected name=lo:hi:step, got '" + text + "'");
    }
    ScanRange r;
    r.name = text.substr(0, eq);
    std::array<double, 3> parts{};
    std::size_t pos = eq + 1;
    for (int i = 0; i < 3; ++i) {
        const auto end = i < 2 ? text.find(':', pos) : text.size();
        if (end == std::string::npos) {
            throw BadRange("expected name=lo:hi:step, got '" + text + "'");
        }
        const std::string field = text.substr(pos, end - pos);
        std::size_t used = 0;
        try {
            parts[i] = std::stod(field, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != field.size() || !std::isfinite(parts[i])) {
            throw BadRange("bad number '" + field + "' in range '" + text + "'");
        }
        pos = end + 1;
    }
    r.lo = parts[0];
    r.hi = parts[1];
    r.step = parts[2];
    if (r.lo > r.hi) {
        throw BadRange("range '" + text + "' has lo > hi");
    }
    if (!(r.step > 0.0)) {
        throw BadRange("range '" + text + "' needs a positive step");
    }
    return r;
}

std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", value == 0.0 ? 0.0 : value);
    return buf;
}

void write_csv(const ScanResult &result, std::ostream &out) {
    for (std::size_t i = 0; i < result.header.size(); ++i) {
        out << (i ? "," : "") << result.header[i];
    }
    out << '\n';
    for (const auto &row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << format_number(row[i]);
        }
        out << '\n';
    }
}

ScanResult serial::scan_family(const std::string &family,
                               const std::vector<ScanRange> &ranges) {
    const FamilyPlan plan = plan_for(family);
    const auto points = grid_points(plan, ranges);
    ScanResult res = make_result(plan);
    for (const auto &p : points) {
        if (auto row = plan.row(p)) {
            res.rows.push_back(std::move(*row));
        }
    }
    return res;
}

ScanResult scan_family(const std::string &family,
                       const std::vector<ScanRange> &ranges) {
    const FamilyPlan plan = plan_for(family);
    const auto points = grid_points(plan, ranges);
    const auto n = static_cast<std::int64_t>(points.size());
    std::vector<std::optional<Point>> rows(points.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
        rows[static_cast<std::size_t>(i)] = plan.row(points[static_cast<std::size_t>(i)]);
    }
    ScanResult res = make_result(plan);
    for (auto &row : rows) {
        if (row) {
            res.rows.push_back(std::move(*row));
        }
    }
    return res;
}

std::vector<BellDiagonalParams> absolutely_local_useful_points(double step) {
    const ScanResult res = scan_family(
        "bell_diagonal", {{"w1", 0.0, 1.0, step}, {"w2", 0.0, 1.0, step},
                          {"w3", 0.0, 1.0, step}});
    const auto col = [&](const std::string &name) {
        return static_cast<std::size_t>(
            std::find(res.header.begin(), res.header.end(), name) -
            res.header.begin());
    };
    const std::size_t useful = col("useful");
    const std::size_t local = col("absolutely_local");
    std::vector<BellDiagonalParams> out;
    for (const auto &row : res.rows) {
        if (row[useful] != 0.0 && row[local] != 0.0) {
            out.push_back({row[0], row[1], row[2], row[3]});
        }
    }
    return out;
}

std::vector<Table1Row> table1(const FilterPair &filter,
                              const std::vector<double> &alphas, double q_step) {
    if (!(q_step > 0.0 && q_step <= 0.5)) {
        throw BadRange("q step must lie in (0, 0.5]");
    }
    validate(filter);
    for (double a : alphas) {
        if (!(a >= 0.0 && a <= std::numbers::pi / 4.0)) {
            std::ostringstream msg;
            msg << "alpha " << a << " outside [0, pi/4]";
            throw BadRange(msg.str());
        }
    }
    const auto n = static_cast<std::int64_t>(alphas.size());
    std::vector<Table1Row> rows(alphas.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) {
        const double alpha = alphas[static_cast<std::size_t>(i)];
        Table1Row row;
        row.alpha = alpha;
        row.q_start = interval_start(
            [&](double q) {
                try {
                    return modified_protocol_useful(make_gamma({q, alpha}), filter);
                } catch (const FilterAnnihilates &) {
                    return false;
                }
            },
            q_step);
        row.unfiltered_steerable_from = interval_start(
            [&](double q) { return gamma_predicates({q, alpha}).steerable; },
            q_step);
        rows[static_cast<std::size_t>(i)] = row;
    }
    return rows;
}

ScanResult table1_result(const std::vector<Table1Row> &rows) {
    ScanResult res;
    res.header = {"alpha", "q_start", "unfiltered_steerable_from"};
    for (const auto &r : rows) {
        res.rows.push_back({r.alpha, r.q_start, r.unfiltered_steerable_from});
    }
    return res;
}

} // namespace steerqkd
