#include "conjugax/bellman.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "conjugax/coupling.hpp"
#include "conjugax/parallel.hpp"

namespace conjugax {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        acc += a[k] * b[k];
    }
    return acc;
}

std::size_t rv_count(std::size_t grid_size, std::size_t scenarios, std::size_t budget) {
    std::size_t n = 1;
    for (std::size_t w = 0; w < scenarios; ++w) {
        if (n > budget / grid_size) {
            throw std::length_error("dual enumeration too large");
        }
        n *= grid_size;
    }
    if (n > budget) {
        throw std::length_error("dual enumeration too large");
    }
    return n;
}

// V^* on the dual grid, through the bilinear coupling.
ValueTable grid_conjugate(const SdpInstance& inst, const ValueTable& v) {
    return conjugate(v, Coupling::bilinear(inst.state_grid, inst.dual_grid));
}

// E[V(X(w))] for a state random variable.
ExtReal expected_value(const ValueTable& v, const RandomVariable& rv, std::span<const double> p) {
    std::vector<ExtReal> vals(rv.size());
    for (std::size_t w = 0; w < rv.size(); ++w) {
        vals[w] = v[rv[w]];
    }
    return expectation(vals, p);
}

// E[<X, X#>].
ExtReal pairing(const SdpInstance& inst, const RandomVariable& x, const RandomVariable& s,
                std::span<const double> p) {
    std::vector<ExtReal> vals(x.size());
    for (std::size_t w = 0; w < x.size(); ++w) {
        vals[w] = dot(inst.state_grid->point(x[w]), inst.dual_grid->point(s[w]));
    }
    return expectation(vals, p);
}

void add_row(CheckReport& rep, std::vector<std::size_t> index, ExtReal lhs, ExtReal rhs) {
    const ExtReal slack = margin(lhs, rhs);
    rep.margins.push_back(slack);
    rep.rows.push_back({std::move(index), lhs, rhs, slack});
}

}  // namespace

std::size_t SdpInstance::next_state(std::size_t t, std::size_t x, std::size_t u,
                                    std::size_t w) const {
    const Stage& s = stages.at(t);
    return s.dynamics[(x * control_grid->size() + u) * s.scenarios.size() + w];
}

ExtReal SdpInstance::cost(std::size_t t, std::size_t x, std::size_t u, std::size_t w) const {
    const Stage& s = stages.at(t);
    return s.costs[(x * control_grid->size() + u) * s.scenarios.size() + w];
}

std::vector<double> SdpInstance::probabilities(std::size_t t) const {
    std::vector<double> p;
    for (const auto& sc : stages.at(t).scenarios) {
        p.push_back(sc.prob);
    }
    return p;
}

void SdpInstance::validate() const {
    if (!state_grid || !control_grid || !dual_grid) {
        throw std::invalid_argument("state, control and dual grids are required");
    }
    if (stages.empty()) {
        throw std::invalid_argument("horizon must be positive");
    }
    if (!state_grid->has_coordinates() || state_grid->dim() != dual_grid->dim()) {
        throw std::invalid_argument("state and dual grids need coordinates of one dimension");
    }
    if (!same_set(final_cost.set(), state_grid)) {
        throw std::invalid_argument("final cost must live on the state grid");
    }
    for (auto v : final_cost.values()) {
        if (v < ExtReal(0.0)) {
            throw std::invalid_argument("final cost must be nonnegative");
        }
    }
    const std::size_t nx = state_grid->size();
    const std::size_t nu = control_grid->size();
    for (std::size_t t = 0; t < stages.size(); ++t) {
        const Stage& s = stages[t];
        const std::string where = "stage " + std::to_string(t) + ": ";
        if (s.scenarios.empty()) {
            throw std::invalid_argument(where + "needs at least one scenario");
        }
        double total = 0.0;
        for (const auto& sc : s.scenarios) {
            if (!(sc.prob > 0.0)) {
                throw std::invalid_argument(where + "probabilities must be positive");
            }
            total += sc.prob;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw std::invalid_argument(where + "probabilities must sum to 1");
        }
        const std::size_t cells = nx * nu * s.scenarios.size();
        if (s.dynamics.size() != cells || s.costs.size() != cells) {
            throw std::invalid_argument(where + "dynamics and costs need |X| x |U| x |W| entries");
        }
        for (auto idx : s.dynamics) {
            if (idx >= nx) {
                throw std::invalid_argument(where + "dynamics index " + std::to_string(idx) +
                                            " not on state grid");
            }
        }
        for (auto v : s.costs) {
            if (v < ExtReal(0.0)) {
                throw std::invalid_argument(where + "costs must be nonnegative");
            }
        }
    }
}

ExtReal expectation(std::span<const ExtReal> values, std::span<const double> probs) {
    if (values.size() != probs.size()) {
        throw std::invalid_argument("expectation: values and probabilities differ in length");
    }
    bool pos = false;
    bool negi = false;
    for (auto v : values) {
        pos = pos || v.is_pos_inf();
        negi = negi || v.is_neg_inf();
    }
    if (pos && negi) {
        throw std::invalid_argument("non-integrable mixture");
    }
    if (pos) {
        return ExtReal::pos_inf();
    }
    if (negi) {
        return ExtReal::neg_inf();
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        acc += probs[i] * values[i].value();
    }
    return acc;
}

std::vector<ValueTable> backward_induction(const SdpInstance& inst) {
    inst.validate();
    const std::size_t T = inst.horizon();
    const std::size_t nx = inst.state_grid->size();
    const std::size_t nu = inst.control_grid->size();
    std::vector<ValueTable> v(T + 1, inst.final_cost);
    for (std::size_t t = T; t-- > 0;) {
        const std::vector<double> p = inst.probabilities(t);
        const std::size_t nw = p.size();
        std::vector<ExtReal> out(nx);
        parallel_for(nx, nu * nw, [&](std::size_t x) {
            ExtReal best = ExtReal::pos_inf();
            std::vector<ExtReal> terms(nw);
            for (std::size_t u = 0; u < nu; ++u) {
                for (std::size_t w = 0; w < nw; ++w) {
                    terms[w] = upp_add(inst.cost(t, x, u, w), v[t + 1][inst.next_state(t, x, u, w)]);
                }
                const ExtReal e = expectation(terms, p);
                if (e < best) {
                    best = e;
                }
            }
            out[x] = best;
        });
        v[t] = ValueTable(inst.state_grid, std::move(out));
    }
    return v;
}

ExtReal hamiltonian(const SdpInstance& inst, std::size_t t, std::size_t x, std::size_t u,
                    const RandomVariable& dual) {
    const std::vector<double> p = inst.probabilities(t);
    if (dual.size() != p.size()) {
        throw std::invalid_argument("dual random variable has the wrong number of scenarios");
    }
    std::vector<ExtReal> terms(p.size());
    for (std::size_t w = 0; w < p.size(); ++w) {
        const std::size_t y = inst.next_state(t, x, u, w);
        terms[w] = upp_add(inst.cost(t, x, u, w),
                           ExtReal(dot(inst.state_grid->point(y), inst.dual_grid->point(dual.at(w)))));
    }
    return expectation(terms, p);
}

RandomVariable random_variable(std::size_t code, std::size_t grid_size, std::size_t scenarios) {
    RandomVariable rv(scenarios);
    for (std::size_t w = scenarios; w-- > 0;) {
        rv[w] = code % grid_size;
        code /= grid_size;
    }
    return rv;
}

CheckReport hamiltonian_form_check(const SdpInstance& inst, double tol, std::size_t budget) {
    const std::vector<ValueTable> v = backward_induction(inst);
    CheckReport rep;
    rep.check = "hamiltonian-form";
    rep.index_names = {"t", "x"};
    const std::size_t nx = inst.state_grid->size();
    const std::size_t nu = inst.control_grid->size();
    const std::size_t ns = inst.dual_grid->size();
    bool all_ok = true;
    for (std::size_t t = 0; t < inst.horizon(); ++t) {
        const std::vector<double> p = inst.probabilities(t);
        const std::size_t nw = p.size();
        const std::size_t n_primal = rv_count(nx, nw, budget);
        const std::size_t n_dual = rv_count(ns, nw, budget);
        std::vector<RandomVariable> primal(n_primal);
        std::vector<RandomVariable> dual(n_dual);
        for (std::size_t r = 0; r < n_primal; ++r) primal[r] = random_variable(r, nx, nw);
        for (std::size_t r = 0; r < n_dual; ++r) dual[r] = random_variable(r, ns, nw);
        // -E[<X, X#>] for every pair
        ExtMatrix minus_pair(n_primal, n_dual);
        for (std::size_t i = 0; i < n_primal; ++i) {
            for (std::size_t j = 0; j < n_dual; ++j) {
                minus_pair(i, j) = neg(pairing(inst, primal[i], dual[j], p));
            }
        }
        std::vector<ExtReal> ev(n_primal);
        for (std::size_t i = 0; i < n_primal; ++i) {
            ev[i] = expected_value(v[t + 1], primal[i], p);
        }
        std::vector<ExtReal> rhs(nx);
        parallel_for(nx, nu * n_dual * n_primal, [&](std::size_t x) {
            std::vector<ExtReal> h(n_dual);
            ExtReal best = ExtReal::pos_inf();
            std::vector<ExtReal> inner(n_primal, ExtReal::pos_inf());
            for (std::size_t u = 0; u < nu; ++u) {
                for (std::size_t j = 0; j < n_dual; ++j) {
                    h[j] = hamiltonian(inst, t, x, u, dual[j]);
                }
                for (std::size_t i = 0; i < n_primal; ++i) {
                    ExtReal s = ExtReal::neg_inf();
                    for (std::size_t j = 0; j < n_dual; ++j) {
                        s = std::max(s, low_add(minus_pair(i, j), h[j]));
                    }
                    inner[i] = std::min(inner[i], s);
                }
            }
            for (std::size_t i = 0; i < n_primal; ++i) {
                best = std::min(best, upp_add(inner[i], ev[i]));
            }
            rhs[x] = best;
        });
        for (std::size_t x = 0; x < nx; ++x) {
            add_row(rep, {t, x}, v[t][x], rhs[x]);
            if (!approx_eq(v[t][x], rhs[x], tol)) {
                all_ok = false;
                rep.violations.push_back({{t, x}, v[t][x], rhs[x]});
            }
        }
    }
    rep.conclusion_holds = all_ok;
    return rep;
}

CheckReport conjugate_bellman_check(const SdpInstance& inst, double tol, std::size_t budget) {
    const std::vector<ValueTable> v = backward_induction(inst);
    CheckReport rep;
    rep.check = "conjugate-bellman";
    rep.index_names = {"t", "x#"};
    const std::size_t nx = inst.state_grid->size();
    const std::size_t nu = inst.control_grid->size();
    const std::size_t ns = inst.dual_grid->size();
    bool all_ok = true;
    ExtReal min_slack = ExtReal::pos_inf();
    for (std::size_t t = 0; t < inst.horizon(); ++t) {
        const std::vector<double> p = inst.probabilities(t);
        const std::size_t nw = p.size();
        const std::size_t n_dual = rv_count(ns, nw, budget);
        const ValueTable vt_star = grid_conjugate(inst, v[t]);
        const ValueTable vn_star = grid_conjugate(inst, v[t + 1]);

        // H(x, u, X#) for every state, control and dual random variable.
        std::vector<ExtReal> h(nx * nu * n_dual);
        std::vector<ExtReal> ev(n_dual);
        for (std::size_t j = 0; j < n_dual; ++j) {
            const RandomVariable rv = random_variable(j, ns, nw);
            for (std::size_t x = 0; x < nx; ++x) {
                for (std::size_t u = 0; u < nu; ++u) {
                    h[(x * nu + u) * n_dual + j] = hamiltonian(inst, t, x, u, rv);
                }
            }
            ev[j] = expected_value(vn_star, rv, p);
        }
        for (std::size_t a = 0; a < ns; ++a) {
            ExtReal best = ExtReal::pos_inf();
            for (std::size_t j = 0; j < n_dual; ++j) {
                ExtReal s = ExtReal::neg_inf();
                for (std::size_t u = 0; u < nu; ++u) {
                    for (std::size_t x = 0; x < nx; ++x) {
                        const ExtReal xa =
                            dot(inst.state_grid->point(x), inst.dual_grid->point(a));
                        s = std::max(s, low_add(xa, neg(h[(x * nu + u) * n_dual + j])));
                    }
                }
                best = std::min(best, upp_add(s, ev[j]));
            }
            add_row(rep, {t, a}, vt_star[a], best);
            min_slack = std::min(min_slack, rep.margins.back());
            if (!approx_le(vt_star[a], best, tol)) {
                all_ok = false;
                rep.violations.push_back({{t, a}, vt_star[a], best});
            }
        }
    }
    rep.notes.push_back("minimum slack " + to_text(min_slack));
    rep.conclusion_holds = all_ok;
    return rep;
}

CheckReport expectation_conjugate_check(const SdpInstance& inst, std::size_t t, double tol,
                                        std::size_t budget) {
    if (t >= inst.horizon()) {
        throw std::out_of_range("index out of range");
    }
    const std::vector<ValueTable> v = backward_induction(inst);
    CheckReport rep;
    rep.check = "expectation-conjugate";
    rep.index_names = {"t", "dual-rv"};
    const std::size_t nx = inst.state_grid->size();
    const std::size_t ns = inst.dual_grid->size();
    const std::vector<double> p = inst.probabilities(t);
    const std::size_t nw = p.size();
    const std::size_t n_primal = rv_count(nx, nw, budget);
    const std::size_t n_dual = rv_count(ns, nw, budget);
    const ValueTable vn_star = grid_conjugate(inst, v[t + 1]);
    std::vector<RandomVariable> primal(n_primal);
    std::vector<ExtReal> minus_ev(n_primal);
    for (std::size_t i = 0; i < n_primal; ++i) {
        primal[i] = random_variable(i, nx, nw);
        minus_ev[i] = neg(expected_value(v[t + 1], primal[i], p));
    }
    bool all_ok = true;
    std::size_t equal = 0;
    for (std::size_t j = 0; j < n_dual; ++j) {
        const RandomVariable dual = random_variable(j, ns, nw);
        ExtReal lhs = ExtReal::neg_inf();
        for (std::size_t i = 0; i < n_primal; ++i) {
            lhs = std::max(lhs, low_add(pairing(inst, primal[i], dual, p), minus_ev[i]));
        }
        const ExtReal rhs = expected_value(vn_star, dual, p);
        add_row(rep, {t, j}, lhs, rhs);
        if (approx_eq(lhs, rhs, tol)) {
            ++equal;
        }
        if (!approx_le(lhs, rhs, tol)) {
            all_ok = false;
            rep.violations.push_back({{t, j}, lhs, rhs});
        }
    }
    rep.notes.push_back("equality at " + std::to_string(equal) + " of " + std::to_string(n_dual) +
                        " dual random variables");
    rep.conclusion_holds = all_ok;
    return rep;
}

namespace {

bool grid_convex(const ValueTable& v, const SetRef& grid, double tol) {
    if (grid->dim() != 1) {
        return true;
    }
    const std::vector<double> xs = grid->coordinates_1d();
    std::vector<std::size_t> order(xs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    // finite entries must form one contiguous run, with nondecreasing slopes
    std::vector<std::size_t> fin;
    for (std::size_t k = 0; k < order.size(); ++k) {
        if (v[order[k]].is_neg_inf()) {
            return false;
        }
        if (v[order[k]].is_finite()) {
            if (!fin.empty() && fin.back() + 1 != k) {
                return false;
            }
            fin.push_back(k);
        }
    }
    for (std::size_t k = 1; k + 1 < fin.size(); ++k) {
        const std::size_t i0 = order[fin[k - 1]];
        const std::size_t i1 = order[fin[k]];
        const std::size_t i2 = order[fin[k + 1]];
        const double left = (v[i1].value() - v[i0].value()) / (xs[i1] - xs[i0]);
        const double right = (v[i2].value() - v[i1].value()) / (xs[i2] - xs[i1]);
        if (left > right + tol) {
            return false;
        }
    }
    return true;
}

}  // namespace

SandwichResult sandwich_bounds(const SdpInstance& inst, std::size_t iterations, double tol) {
    const std::vector<ValueTable> v = backward_induction(inst);
    SandwichResult res;
    CheckReport& rep = res.report;
    rep.check = "sandwich";
    rep.index_names = {"t", "x"};
    const SetRef& xg = inst.state_grid;
    const SetRef& sg = inst.dual_grid;
    const std::size_t nx = xg->size();
    const std::size_t ns = sg->size();
    const Coupling c = Coupling::bilinear(xg, sg);
    bool all_ok = true;

    for (std::size_t t = 0; t <= inst.horizon(); ++t) {
        SandwichStage st;
        const ValueTable vs = conjugate(v[t], c);
        const ValueTable vss = conjugate(vs, Coupling::transpose(c));
        bool bic = true;
        for (std::size_t x = 0; x < nx; ++x) {
            bic = bic && approx_eq(vss[x], v[t][x], tol);
        }
        st.premise_holds = bic && grid_convex(v[t], xg, tol);
        if (!st.premise_holds) {
            rep.notes.push_back("sandwich premise failed at t=" + std::to_string(t));
        }

        std::vector<ExtReal> lower(nx, ExtReal(0.0));
        std::vector<ExtReal> dual_lower(ns, ExtReal::neg_inf());
        st.lower.emplace_back(xg, lower);
        st.upper.push_back(ValueTable::constant(xg, ExtReal::pos_inf()));
        for (std::size_t k = 1; k <= iterations; ++k) {
            const std::size_t j = (k - 1) % ns;
            const std::size_t i = (k - 1) % nx;
            st.primal_cuts.push_back({j, neg(vs[j])});
            st.dual_cuts.push_back({i, neg(v[t][i])});
            for (std::size_t x = 0; x < nx; ++x) {
                const ExtReal cut = low_add(c(x, j), neg(vs[j]));
                lower[x] = std::max(lower[x], cut);
            }
            for (std::size_t s = 0; s < ns; ++s) {
                const ExtReal cut = low_add(c(i, s), neg(v[t][i]));
                dual_lower[s] = std::max(dual_lower[s], cut);
            }
            st.lower.emplace_back(xg, lower);
            st.upper.push_back(conjugate(ValueTable(sg, dual_lower), Coupling::transpose(c)));

            const ValueTable& lo0 = st.lower[k - 1];
            const ValueTable& lo1 = st.lower[k];
            const ValueTable& up0 = st.upper[k - 1];
            const ValueTable& up1 = st.upper[k];
            for (std::size_t x = 0; x < nx; ++x) {
                auto fail = [&](std::size_t code, ExtReal a, ExtReal b) {
                    all_ok = false;
                    rep.violations.push_back({{t, k, x, code}, a, b});
                };
                if (!approx_le(lo0[x], lo1[x], tol)) fail(0, lo0[x], lo1[x]);
                if (!approx_le(lo1[x], v[t][x], tol)) fail(1, lo1[x], v[t][x]);
                if (st.premise_holds) {
                    if (!approx_le(v[t][x], up1[x], tol)) fail(2, v[t][x], up1[x]);
                    if (!approx_le(up1[x], up0[x], tol)) fail(3, up1[x], up0[x]);
                }
            }
        }
        const ValueTable& last_lo = st.lower.back();
        const ValueTable& last_up = st.upper.back();
        bool tight = true;
        for (std::size_t x = 0; x < nx; ++x) {
            rep.rows.push_back({{t, x}, last_lo[x], last_up[x], margin(last_lo[x], last_up[x])});
            rep.margins.push_back(margin(last_lo[x], v[t][x]));
            tight = tight && approx_eq(last_lo[x], v[t][x], tol);
        }
        if (iterations == 0) {
            rep.notes.push_back("t=" + std::to_string(t) + ": no cuts, upper bound vacuous");
        } else if (tight) {
            rep.notes.push_back("t=" + std::to_string(t) + ": lower bound tight after " +
                                std::to_string(iterations) + " iteration(s)");
        }
        res.stages.push_back(std::move(st));
    }
    rep.conclusion_holds = all_ok;
    return res;
}

SetRef default_dual_grid(const SdpInstance& inst, std::size_t points) {
    if (!inst.state_grid || inst.state_grid->dim() != 1) {
        throw std::invalid_argument("default dual grid needs a 1-D state grid");
    }
    if (points < 2) {
        throw std::invalid_argument("default dual grid needs at least 2 points");
    }
    const std::vector<double> xs = inst.state_grid->coordinates_1d();
    const auto [xmin, xmax] = std::minmax_element(xs.begin(), xs.end());
    double lo = 0.0;
    double hi = 0.0;
    bool any = false;
    auto visit = [&](ExtReal v) {
        if (v.is_finite()) {
            lo = any ? std::min(lo, v.value()) : v.value();
            hi = any ? std::max(hi, v.value()) : v.value();
            any = true;
        }
    };
    for (const auto& st : inst.stages) {
        for (auto v : st.costs) visit(v);
    }
    for (auto v : inst.final_cost.values()) visit(v);
    const double span = *xmax - *xmin;
    double s = (span > 0.0 && hi > lo) ? (hi - lo) / span : 1.0;
    return make_uniform_grid("dual", -s, s, points);
}

}  // namespace conjugax
