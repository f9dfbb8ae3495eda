#include "dilemma/schelling.hpp"

#include <stdexcept>

namespace dilemma {

namespace {

int column_of(const GameSpec& spec, Strategy s) {
    for (int a = 0; a < spec.action_count(); ++a)
        if (spec.strategy_at(a) == s) return a;
    throw std::invalid_argument(std::string("strategy ") + strategy_name(s) +
                                " is not in the variant's action set");
}

}  // namespace

SchellingCurveSet schelling_curves(const GameSpec& spec, Strategy focal_a,
                                   Strategy focal_b,
                                   const std::map<Strategy, int>& fixed) {
    spec.validate();
    const int col_a = column_of(spec, focal_a);
    const int col_b = column_of(spec, focal_b);
    if (col_a == col_b)
        throw std::invalid_argument("focal strategies must differ");

    int fixed_total = 0;
    for (const auto& [s, count] : fixed) {
        const int col = column_of(spec, s);
        if (col == col_a || col == col_b)
            throw std::invalid_argument("fixed counts may not include a focal strategy");
        if (count < 0) throw std::invalid_argument("fixed counts must be nonnegative");
        fixed_total += count;
    }
    if (fixed_total > spec.n - 1)
        throw std::invalid_argument("fixed counts leave no free agents");

    const int free_others = spec.n - 1 - fixed_total;
    SchellingCurveSet out;
    out.focal_a = focal_a;
    out.focal_b = focal_b;
    out.fixed = fixed;
    out.payoff_a = Eigen::VectorXd(free_others + 1);
    out.payoff_b = Eigen::VectorXd(free_others + 1);

    for (int m = 0; m <= free_others; ++m) {
        out.others_on_a.push_back(m);
        OutcomeCounts counts;
        counts.counts = Eigen::VectorXi::Zero(spec.action_count());
        for (const auto& [s, count] : fixed) counts.counts[column_of(spec, s)] = count;
        counts.counts[col_a] += m;
        counts.counts[col_b] += free_others - m;

        OutcomeCounts focal_on_a = counts;
        focal_on_a.counts[col_a] += 1;
        out.payoff_a[m] = strategy_rewards(spec, focal_on_a)[col_a];

        OutcomeCounts focal_on_b = counts;
        focal_on_b.counts[col_b] += 1;
        out.payoff_b[m] = strategy_rewards(spec, focal_on_b)[col_b];
    }
    return out;
}

}  // namespace dilemma
