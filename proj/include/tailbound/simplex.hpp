#pragma once

#include <optional>
#include <vector>

#include "tailbound/rational.hpp"

namespace tailbound {

// Dense exact-rational LP:  minimize c.x  subject to  A x <= b,  Aeq x = beq.
// Variables are free (internally split into positive parts). Bland's rule,
// two phases; intended for the small Farkas systems of the RSM synthesis.
struct lp_problem {
    int nvars = 0;
    std::vector<rational> objective;            // size nvars
    std::vector<std::vector<rational>> a;       // inequality rows
    std::vector<rational> b;
    std::vector<std::vector<rational>> aeq;     // equality rows
    std::vector<rational> beq;

    void add_le(std::vector<rational> row, rational rhs) {
        a.push_back(std::move(row));
        b.push_back(std::move(rhs));
    }
    void add_eq(std::vector<rational> row, rational rhs) {
        aeq.push_back(std::move(row));
        beq.push_back(std::move(rhs));
    }
};

struct lp_solution {
    bool feasible = false;
    bool bounded = true;
    std::vector<rational> x;
    rational objective_value;
};

lp_solution solve_lp(const lp_problem& p);

} // namespace tailbound
