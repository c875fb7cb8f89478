#include "tailbound/prr/spec.hpp"

#include <algorithm>
#include <map>

namespace tailbound::prr {

rational recursion_shape::halfsplit_weight() const {
    switch (kind) {
    case shape_kind::UNIFORM: return 0;
    case shape_kind::HALFSPLIT: return 1;
    case shape_kind::MIXED: return gamma;
    case shape_kind::TWOCALL_SPLIT: break;
    }
    raise(errc::unsupported_shape, "twocall_split has no gamma blend");
}

namespace {

void validate(const prr_spec& s) {
    // toll(n) >= 0 for n >= 1: with the restricted basis it suffices to have
    // no negative coefficient except CONST, and toll(1) >= 0.
    if (s.toll.coef(basis::N) < 0 || s.toll.coef(basis::LN_N) < 0 ||
        s.toll.coef(basis::N_LN_N) < 0)
        raise(errc::invariant_violation, "toll has a negative non-constant coefficient");
    if (eval_linlog(s.toll, 1.0) < 0)
        raise(errc::invariant_violation, "toll(1) < 0");
    if (!s.f.is_zero()) leading_term(s.f);       // positive leading coefficient
    if (!s.kappa.is_zero()) leading_term(s.kappa);
    if (s.f.coef(basis::N) < 0 || s.f.coef(basis::LN_N) < 0 || s.f.coef(basis::N_LN_N) < 0 ||
        eval_linlog(s.f, 1.0) < 0)
        raise(errc::invariant_violation, "f must be nonnegative on n >= 1");
    if (!s.symbolic_nstar()) {
        if (s.nstar < 1) raise(errc::invariant_violation, "nstar must be >= 1");
        double fv = eval_linlog(s.f, double(s.nstar));
        double kv = eval_linlog(s.kappa, double(s.nstar));
        if (kv < fv - 1e-9)
            raise(errc::invariant_violation, "kappa(nstar) < f(nstar)");
    }
    if (s.shape.kind == shape_kind::MIXED && (s.shape.gamma < 0 || s.shape.gamma > 1))
        raise(errc::invariant_violation, "gamma outside [0,1]");
    if (s.partition_count < 0 || s.partition_count > 4096)
        raise(errc::invariant_violation, "B outside [0, 4096]");
}

} // namespace

prr_spec parse_prr_spec(const toml::document& doc) {
    const toml::table* t = doc.find("prr");
    if (!t) raise(errc::syntax_error, "missing [prr] section");
    prr_spec s;
    s.name = t->get_string_or("name", "unnamed");
    s.toll = parse_linlog(t->get_string("toll"));
    std::string shape = t->get_string("shape");
    if (shape == "uniform") {
        s.shape.kind = shape_kind::UNIFORM;
    } else if (shape == "halfsplit") {
        s.shape.kind = shape_kind::HALFSPLIT;
    } else if (shape == "mixed") {
        s.shape.kind = shape_kind::MIXED;
        if (!t->has("gamma")) raise(errc::syntax_error, "mixed shape requires gamma");
        s.shape.gamma = parse_rational(t->get_string("gamma"));
    } else if (shape == "twocall_split") {
        s.shape.kind = shape_kind::TWOCALL_SPLIT;
    } else {
        raise(errc::syntax_error, "unknown shape '" + shape + "'");
    }
    s.f = parse_linlog(t->get_string("f"));
    s.kappa = parse_linlog(t->get_string("kappa"));
    std::string nstar = t->get_string_or("nstar", "symbolic");
    if (nstar == "symbolic")
        s.nstar = kSymbolicNStar;
    else
        s.nstar = t->get_int("nstar", kSymbolicNStar);
    s.partition_count = static_cast<int>(t->get_int("B", 0));
    validate(s);
    return s;
}

prr_spec parse_prr_spec(const std::string& file_bytes) {
    return parse_prr_spec(toml::parse(file_bytes));
}

std::vector<child_outcome> child_distribution(const recursion_shape& shape, long long n) {
    if (n < 2) raise(errc::domain_error, "child_distribution needs n >= 2");
    std::vector<child_outcome> out;
    rational unit(1, n);
    switch (shape.kind) {
    case shape_kind::TWOCALL_SPLIT: {
        for (long long i = 0; i < n; ++i)
            out.push_back({{i, n - 1 - i}, unit});
        return out;
    }
    case shape_kind::UNIFORM: {
        for (long long i = 0; i < n; ++i)
            out.push_back({{i}, unit});
        return out;
    }
    case shape_kind::HALFSPLIT:
    case shape_kind::MIXED: {
        rational g = shape.halfsplit_weight();
        std::map<long long, rational> mass;
        if (g != 0) {
            long long lo1 = (n + 1) / 2; // ceil(n/2)
            long long lo2 = n / 2;       // floor(n/2)
            for (long long i = lo1; i <= n - 1; ++i) mass[i] += g * unit;
            for (long long i = lo2; i <= n - 1; ++i) mass[i] += g * unit;
        }
        if (g != 1) {
            rational u = (1 - g) * unit;
            for (long long i = 0; i < n; ++i) mass[i] += u;
        }
        for (const auto& [size, p] : mass) out.push_back({{size}, p});
        return out;
    }
    }
    raise(errc::unsupported_shape, "unreachable");
}

} // namespace tailbound::prr
