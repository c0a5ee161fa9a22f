#include "conjugax/io.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace conjugax {

namespace {

std::string escape_token(const std::string& key) {
    std::string out;
    for (char ch : key) {
        if (ch == '~') {
            out += "~0";
        } else if (ch == '/') {
            out += "~1";
        } else {
            out += ch;
        }
    }
    return out;
}

std::string at(const std::string& ptr, const std::string& key) { return ptr + "/" + escape_token(key); }
std::string at(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const Json& member(const Json& j, const std::string& ptr, const std::string& key) {
    if (!j.is_object()) {
        throw LoadError(ptr, "expected an object");
    }
    auto it = j.find(key);
    if (it == j.end()) {
        throw LoadError(ptr, "missing field \"" + key + "\"");
    }
    return *it;
}

const Json& as_array(const Json& j, const std::string& ptr) {
    if (!j.is_array()) {
        throw LoadError(ptr, "expected an array");
    }
    return j;
}

std::string as_string(const Json& j, const std::string& ptr) {
    if (!j.is_string()) {
        throw LoadError(ptr, "expected a string");
    }
    return j.get<std::string>();
}

double as_real(const Json& j, const std::string& ptr) {
    if (!j.is_number()) {
        throw LoadError(ptr, "expected a number");
    }
    return j.get<double>();
}

std::size_t as_index(const Json& j, const std::string& ptr) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<long long>() < 0)) {
        throw LoadError(ptr, "expected a nonnegative integer");
    }
    return j.get<std::size_t>();
}

std::vector<ExtReal> ext_array(const Json& j, const std::string& ptr, std::size_t expected) {
    as_array(j, ptr);
    if (j.size() != expected) {
        throw LoadError(ptr, "expected " + std::to_string(expected) + " values, got " + std::to_string(j.size()));
    }
    std::vector<ExtReal> out;
    out.reserve(expected);
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(ext_from_json(j[i], at(ptr, i)));
    return out;
}

ExtMatrix ext_matrix(const Json& j, const std::string& ptr, std::size_t rows, std::size_t cols) {
    as_array(j, ptr);
    if (j.size() != rows) {
        throw LoadError(ptr, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    }
    ExtMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const auto row = ext_array(j[i], at(ptr, i), cols);
        for (std::size_t k = 0; k < cols; ++k) m(i, k) = row[k];
    }
    return m;
}

// {"points": [[...], ...]} or {"points": [numbers]} or {"size": n}; a bare
// array stands for its "points".
SetRef parse_set(const std::string& id, const Json& j, const std::string& ptr) {
    const Json* pts = nullptr;
    std::string pptr = ptr;
    if (j.is_array()) {
        pts = &j;
    } else if (j.is_object() && j.contains("points")) {
        pts = &j["points"];
        pptr = at(ptr, "points");
    } else if (j.is_object() && j.contains("size")) {
        const std::size_t n = as_index(j["size"], at(ptr, "size"));
        if (n == 0) {
            throw LoadError(at(ptr, "size"), "set must be nonempty");
        }
        return make_abstract_set(id, n);
    } else {
        throw LoadError(ptr, "set needs \"points\" or \"size\"");
    }
    as_array(*pts, pptr);
    if (pts->empty()) {
        throw LoadError(pptr, "set must be nonempty");
    }
    std::vector<std::vector<double>> points;
    for (std::size_t i = 0; i < pts->size(); ++i) {
        const Json& p = (*pts)[i];
        const std::string ip = at(pptr, i);
        if (p.is_array()) {
            std::vector<double> coords;
            for (std::size_t k = 0; k < p.size(); ++k) coords.push_back(as_real(p[k], at(ip, k)));
            if (!points.empty() && coords.size() != points.front().size()) {
                throw LoadError(ip, "points must share one dimension");
            }
            points.push_back(std::move(coords));
        } else {
            if (!points.empty() && points.front().size() != 1) {
                throw LoadError(ip, "points must share one dimension");
            }
            points.push_back({as_real(p, ip)});
        }
    }
    try {
        return make_set(id, points);
    } catch (const std::invalid_argument& e) {
        throw LoadError(pptr, e.what());
    }
}

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& id, const char* what) {
    auto it = m.find(id);
    if (it == m.end()) {
        throw std::invalid_argument(std::string("unknown ") + what + " \"" + id + "\"");
    }
    return it->second;
}

const SetRef& set_ref(const Instance& inst, const Json& j, const std::string& ptr) {
    const std::string id = as_string(j, ptr);
    auto it = inst.sets.find(id);
    if (it == inst.sets.end()) {
        throw LoadError(ptr, "unknown set \"" + id + "\"");
    }
    return it->second;
}

}  // namespace

Json to_json(ExtReal v) {
    if (v.is_pos_inf()) {
        return "+inf";
    }
    if (v.is_neg_inf()) {
        return "-inf";
    }
    return v.value();
}

ExtReal ext_from_json(const Json& j, const std::string& pointer) {
    if (j.is_string()) {
        const auto& s = j.get_ref<const std::string&>();
        if (s == "+inf") {
            return ExtReal::pos_inf();
        }
        if (s == "-inf") {
            return ExtReal::neg_inf();
        }
        throw LoadError(pointer, "expected a number, \"+inf\" or \"-inf\", got \"" + s + "\"");
    }
    if (!j.is_number()) {
        throw LoadError(pointer, "expected a number, \"+inf\" or \"-inf\"");
    }
    return ExtReal(j.get<double>());
}

Json to_json(const ValueTable& t) {
    Json values = Json::array();
    for (ExtReal v : t.values()) values.push_back(to_json(v));
    return Json{{"set", t.set()->id()}, {"values", std::move(values)}};
}

Json to_json(const CheckReport& r) {
    Json j;
    j["check"] = r.check;
    j["hypothesis_holds"] = r.hypothesis_holds;
    j["conclusion_holds"] = r.conclusion_holds ? Json(*r.conclusion_holds) : Json(nullptr);
    Json viol = Json::array();
    for (const auto& v : r.violations) {
        viol.push_back({{"index", v.index}, {"lhs", to_json(v.lhs)}, {"rhs", to_json(v.rhs)}});
    }
    j["violations"] = std::move(viol);
    Json margins = Json::array();
    for (ExtReal m : r.margins) margins.push_back(to_json(m));
    j["margins"] = std::move(margins);
    j["unmet"] = r.unmet;
    j["notes"] = r.notes;
    if (!r.rows.empty()) {
        j["index_names"] = r.index_names;
        Json rows = Json::array();
        for (const auto& row : r.rows) {
            rows.push_back({{"index", row.index},
                            {"lhs", to_json(row.lhs)},
                            {"rhs", to_json(row.rhs)},
                            {"slack", to_json(row.slack)}});
        }
        j["rows"] = std::move(rows);
    }
    return j;
}

CheckReport report_from_json(const Json& j) {
    CheckReport r;
    r.check = as_string(member(j, "", "check"), "/check");
    const Json& hyp = member(j, "", "hypothesis_holds");
    if (!hyp.is_boolean()) {
        throw LoadError("/hypothesis_holds", "expected a boolean");
    }
    r.hypothesis_holds = hyp.get<bool>();
    const Json& concl = member(j, "", "conclusion_holds");
    if (concl.is_boolean()) {
        r.conclusion_holds = concl.get<bool>();
    } else if (!concl.is_null()) {
        throw LoadError("/conclusion_holds", "expected a boolean or null");
    }
    const auto& viol = as_array(member(j, "", "violations"), "/violations");
    for (std::size_t i = 0; i < viol.size(); ++i) {
        const std::string p = at("/violations", i);
        Violation v;
        const auto& idx = as_array(member(viol[i], p, "index"), at(p, "index"));
        for (std::size_t k = 0; k < idx.size(); ++k) v.index.push_back(as_index(idx[k], at(at(p, "index"), k)));
        v.lhs = ext_from_json(member(viol[i], p, "lhs"), at(p, "lhs"));
        v.rhs = ext_from_json(member(viol[i], p, "rhs"), at(p, "rhs"));
        r.violations.push_back(std::move(v));
    }
    const auto& margins = as_array(member(j, "", "margins"), "/margins");
    for (std::size_t i = 0; i < margins.size(); ++i) r.margins.push_back(ext_from_json(margins[i], at("/margins", i)));
    if (j.contains("unmet")) {
        const auto& un = as_array(j["unmet"], "/unmet");
        for (std::size_t i = 0; i < un.size(); ++i) {
            std::vector<std::size_t> idx;
            const auto& u = as_array(un[i], at("/unmet", i));
            for (std::size_t k = 0; k < u.size(); ++k) idx.push_back(as_index(u[k], at(at("/unmet", i), k)));
            r.unmet.push_back(std::move(idx));
        }
    }
    if (j.contains("notes")) {
        const auto& notes = as_array(j["notes"], "/notes");
        for (std::size_t i = 0; i < notes.size(); ++i) r.notes.push_back(as_string(notes[i], at("/notes", i)));
    }
    if (j.contains("rows")) {
        const auto& names = as_array(member(j, "", "index_names"), "/index_names");
        for (std::size_t i = 0; i < names.size(); ++i) r.index_names.push_back(as_string(names[i], at("/index_names", i)));
        const auto& rows = as_array(j["rows"], "/rows");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string p = at("/rows", i);
            ReportRow row;
            const auto& idx = as_array(member(rows[i], p, "index"), at(p, "index"));
            for (std::size_t k = 0; k < idx.size(); ++k) row.index.push_back(as_index(idx[k], at(at(p, "index"), k)));
            row.lhs = ext_from_json(member(rows[i], p, "lhs"), at(p, "lhs"));
            row.rhs = ext_from_json(member(rows[i], p, "rhs"), at(p, "rhs"));
            row.slack = ext_from_json(member(rows[i], p, "slack"), at(p, "slack"));
            r.rows.push_back(std::move(row));
        }
    }
    return r;
}

std::string to_csv(const CheckReport& r) {
    std::ostringstream out;
    if (!r.rows.empty()) {
        out << "check";
        for (const auto& n : r.index_names) out << ',' << n;
        out << ",lhs,rhs,slack\n";
        for (const auto& row : r.rows) {
            out << r.check;
            for (std::size_t k : row.index) out << ',' << k;
            out << ',' << to_text(row.lhs) << ',' << to_text(row.rhs) << ',' << to_text(row.slack) << '\n';
        }
        return out.str();
    }
    out << "check,index,lhs,rhs\n";
    for (const auto& v : r.violations) {
        out << r.check << ',';
        for (std::size_t k = 0; k < v.index.size(); ++k) out << (k ? ";" : "") << v.index[k];
        out << ',' << to_text(v.lhs) << ',' << to_text(v.rhs) << '\n';
    }
    return out.str();
}

std::string to_csv(const ValueTable& t) {
    std::ostringstream out;
    out << "index,value\n";
    for (std::size_t i = 0; i < t.size(); ++i) out << i << ',' << to_text(t[i]) << '\n';
    return out.str();
}

std::string Instance::resolve(const std::string& role) const {
    auto it = roles.find(role);
    return it == roles.end() ? role : it->second;
}

const SetRef& Instance::set(const std::string& role) const { return lookup(sets, resolve(role), "set"); }
const Coupling& Instance::coupling(const std::string& role) const {
    return lookup(couplings, resolve(role), "coupling");
}
const ValueTable& Instance::function(const std::string& role) const {
    return lookup(functions, resolve(role), "function");
}
const Kernel& Instance::kernel(const std::string& role) const { return lookup(kernels, resolve(role), "kernel"); }
const Convoluter& Instance::convoluter(const std::string& role) const {
    return lookup(convoluters, resolve(role), "convoluter");
}
bool Instance::has_function(const std::string& role) const { return functions.count(resolve(role)) > 0; }

Instance load_instance(const Json& j) {
    if (!j.is_object()) {
        throw LoadError("", "instance must be an object");
    }
    Instance inst;
    if (j.contains("sets")) {
        const Json& sets = j["sets"];
        if (!sets.is_object()) {
            throw LoadError("/sets", "expected an object");
        }
        for (const auto& [id, def] : sets.items()) inst.sets.emplace(id, parse_set(id, def, at("/sets", id)));
    }

    if (j.contains("couplings")) {
        const Json& defs = j["couplings"];
        if (!defs.is_object()) {
            throw LoadError("/couplings", "expected an object");
        }
        std::set<std::string> in_progress;
        std::function<const Coupling&(const std::string&, const std::string&)> build;
        build = [&](const std::string& id, const std::string& from) -> const Coupling& {
            if (auto it = inst.couplings.find(id); it != inst.couplings.end()) {
                return it->second;
            }
            if (!defs.contains(id)) {
                throw LoadError(from, "unknown coupling \"" + id + "\"");
            }
            const std::string ptr = at("/couplings", id);
            if (!in_progress.insert(id).second) {
                throw LoadError(ptr, "cyclic coupling definition");
            }
            const Json& def = defs[id];
            const std::string kind = as_string(member(def, ptr, "kind"), at(ptr, "kind"));
            auto sub = [&](const char* key) -> const Coupling& {
                return build(as_string(member(def, ptr, key), at(ptr, key)), at(ptr, key));
            };
            Coupling c = [&]() -> Coupling {
                if (kind == "table") {
                    const SetRef& p = set_ref(inst, member(def, ptr, "primal"), at(ptr, "primal"));
                    const SetRef& d = set_ref(inst, member(def, ptr, "dual"), at(ptr, "dual"));
                    return Coupling::table(p, d, ext_matrix(member(def, ptr, "values"), at(ptr, "values"),
                                                            p->size(), d->size()));
                }
                if (kind == "bilinear") {
                    const SetRef& p = set_ref(inst, member(def, ptr, "primal"), at(ptr, "primal"));
                    const SetRef& d = set_ref(inst, member(def, ptr, "dual"), at(ptr, "dual"));
                    int sign = 1;
                    if (def.contains("sign")) {
                        const Json& s = def["sign"];
                        if (!s.is_number_integer() || (s.get<long long>() != 1 && s.get<long long>() != -1)) {
                            throw LoadError(at(ptr, "sign"), "sign must be 1 or -1");
                        }
                        sign = s.get<int>();
                    }
                    try {
                        return Coupling::bilinear(p, d, sign);
                    } catch (const std::invalid_argument& e) {
                        throw LoadError(ptr, e.what());
                    }
                }
                if (kind == "sum") {
                    return Coupling::sum(sub("left"), sub("right"));
                }
                if (kind == "opposite") {
                    return Coupling::opposite(sub("of"));
                }
                if (kind == "transpose") {
                    return Coupling::transpose(sub("of"));
                }
                throw LoadError(at(ptr, "kind"), "unknown coupling kind \"" + kind + "\"");
            }();
            in_progress.erase(id);
            return inst.couplings.emplace(id, std::move(c)).first->second;
        };
        for (const auto& [id, def] : defs.items()) build(id, "/couplings");
    }

    if (j.contains("functions")) {
        const Json& fs = j["functions"];
        if (!fs.is_object()) {
            throw LoadError("/functions", "expected an object");
        }
        for (const auto& [id, def] : fs.items()) {
            const std::string ptr = at("/functions", id);
            const SetRef& s = set_ref(inst, member(def, ptr, "set"), at(ptr, "set"));
            inst.functions.emplace(id, ValueTable(s, ext_array(member(def, ptr, "values"), at(ptr, "values"), s->size())));
        }
    }

    if (j.contains("kernels")) {
        const Json& ks = j["kernels"];
        if (!ks.is_object()) {
            throw LoadError("/kernels", "expected an object");
        }
        for (const auto& [id, def] : ks.items()) {
            const std::string ptr = at("/kernels", id);
            const SetRef& r = set_ref(inst, member(def, ptr, "rows"), at(ptr, "rows"));
            const SetRef& c = set_ref(inst, member(def, ptr, "cols"), at(ptr, "cols"));
            if (def.contains("role")) {
                const std::string role = as_string(def["role"], at(ptr, "role"));
                if (role != "kernel" && role != "exchange") {
                    throw LoadError(at(ptr, "role"), "role must be \"kernel\" or \"exchange\"");
                }
            }
            inst.kernels.emplace(id, Kernel(r, c, ext_matrix(member(def, ptr, "values"), at(ptr, "values"),
                                                            r->size(), c->size())));
        }
    }

    if (j.contains("convoluters")) {
        const Json& gs = j["convoluters"];
        if (!gs.is_object()) {
            throw LoadError("/convoluters", "expected an object");
        }
        for (const auto& [id, def] : gs.items()) {
            const std::string ptr = at("/convoluters", id);
            const std::string kind = as_string(member(def, ptr, "kind"), at(ptr, "kind"));
            const std::string aptr = at(ptr, "axes");
            const Json& axes = as_array(member(def, ptr, "axes"), aptr);
            if (axes.size() != 3) {
                throw LoadError(aptr, "axes must name three sets [Y1, X, Y2]");
            }
            const SetRef& y1 = set_ref(inst, axes[0], at(aptr, 0));
            const SetRef& x = set_ref(inst, axes[1], at(aptr, 1));
            const SetRef& y2 = set_ref(inst, axes[2], at(aptr, 2));
            if (kind == "classical-delta") {
                bool closure = true;
                if (def.contains("require_closure")) {
                    if (!def["require_closure"].is_boolean()) {
                        throw LoadError(at(ptr, "require_closure"), "expected a boolean");
                    }
                    closure = def["require_closure"].get<bool>();
                }
                try {
                    inst.convoluters.emplace(id, Convoluter::classical_delta(y1, x, y2, closure));
                } catch (const std::invalid_argument& e) {
                    throw LoadError(ptr, e.what());
                }
            } else if (kind == "table") {
                const std::string vptr = at(ptr, "values");
                const Json& vals = as_array(member(def, ptr, "values"), vptr);
                if (vals.size() != y1->size()) {
                    throw LoadError(vptr, "expected " + std::to_string(y1->size()) + " slices");
                }
                std::vector<ExtReal> flat;
                flat.reserve(y1->size() * x->size() * y2->size());
                for (std::size_t a = 0; a < y1->size(); ++a) {
                    const ExtMatrix m = ext_matrix(vals[a], at(vptr, a), x->size(), y2->size());
                    flat.insert(flat.end(), m.data().begin(), m.data().end());
                }
                inst.convoluters.emplace(id, Convoluter(y1, x, y2, std::move(flat)));
            } else {
                throw LoadError(at(ptr, "kind"), "unknown convoluter kind \"" + kind + "\"");
            }
        }
    }

    if (j.contains("roles")) {
        const Json& roles = j["roles"];
        if (!roles.is_object()) {
            throw LoadError("/roles", "expected an object");
        }
        for (const auto& [role, id] : roles.items()) inst.roles[role] = as_string(id, at("/roles", role));
    }
    return inst;
}

SdpInstance load_sdp_instance(const Json& j) {
    if (!j.is_object()) {
        throw LoadError("", "instance must be an object");
    }
    SdpInstance inst;
    inst.state_grid = parse_set("X", member(j, "", "state_grid"), "/state_grid");
    inst.control_grid = parse_set("U", member(j, "", "control_grid"), "/control_grid");
    const std::size_t nx = inst.state_grid->size();
    const std::size_t nu = inst.control_grid->size();

    const Json& stages = as_array(member(j, "", "stages"), "/stages");
    if (stages.empty()) {
        throw LoadError("/stages", "horizon must be positive");
    }
    for (std::size_t t = 0; t < stages.size(); ++t) {
        const std::string sp = at("/stages", t);
        const Json& js = stages[t];
        Stage st;
        const std::string wp = at(sp, "scenarios");
        const Json& sc = as_array(member(js, sp, "scenarios"), wp);
        if (sc.empty()) {
            throw LoadError(wp, "at least one scenario required");
        }
        double total = 0.0;
        for (std::size_t w = 0; w < sc.size(); ++w) {
            const std::string p = at(wp, w);
            Scenario s;
            if (sc[w].contains("point")) {
                const Json& pt = sc[w]["point"];
                if (pt.is_array()) {
                    for (std::size_t k = 0; k < pt.size(); ++k) s.point.push_back(as_real(pt[k], at(at(p, "point"), k)));
                } else {
                    s.point.push_back(as_real(pt, at(p, "point")));
                }
            }
            s.prob = as_real(member(sc[w], p, "prob"), at(p, "prob"));
            if (!(s.prob > 0.0)) {
                throw LoadError(at(p, "prob"), "probabilities must be positive");
            }
            total += s.prob;
            st.scenarios.push_back(std::move(s));
        }
        if (std::abs(total - 1.0) > 1e-12) {
            throw LoadError(wp, "probabilities must sum to 1");
        }
        const std::size_t nw = st.scenarios.size();

        const std::string dp = at(sp, "dynamics");
        const std::string cp = at(sp, "costs");
        const Json& dyn = as_array(member(js, sp, "dynamics"), dp);
        const Json& cst = as_array(member(js, sp, "costs"), cp);
        if (dyn.size() != nx) {
            throw LoadError(dp, "expected " + std::to_string(nx) + " states");
        }
        if (cst.size() != nx) {
            throw LoadError(cp, "expected " + std::to_string(nx) + " states");
        }
        for (std::size_t x = 0; x < nx; ++x) {
            const Json& dx = as_array(dyn[x], at(dp, x));
            const Json& cx = as_array(cst[x], at(cp, x));
            if (dx.size() != nu) {
                throw LoadError(at(dp, x), "expected " + std::to_string(nu) + " controls");
            }
            if (cx.size() != nu) {
                throw LoadError(at(cp, x), "expected " + std::to_string(nu) + " controls");
            }
            for (std::size_t u = 0; u < nu; ++u) {
                const std::string dxu = at(at(dp, x), u);
                const std::string cxu = at(at(cp, x), u);
                const Json& dw = as_array(dx[u], dxu);
                const auto costs = ext_array(cx[u], cxu, nw);
                if (dw.size() != nw) {
                    throw LoadError(dxu, "expected " + std::to_string(nw) + " scenarios");
                }
                for (std::size_t w = 0; w < nw; ++w) {
                    const std::size_t y = as_index(dw[w], at(dxu, w));
                    if (y >= nx) {
                        throw LoadError(at(dxu, w), "dynamics index " + std::to_string(y) + " not on state grid");
                    }
                    if (costs[w] < ExtReal(0.0)) {
                        throw LoadError(at(cxu, w), "costs must be nonnegative");
                    }
                    st.dynamics.push_back(y);
                    st.costs.push_back(costs[w]);
                }
            }
        }
        inst.stages.push_back(std::move(st));
    }

    const auto fin = ext_array(member(j, "", "final_cost"), "/final_cost", nx);
    for (std::size_t x = 0; x < nx; ++x) {
        if (fin[x] < ExtReal(0.0)) {
            throw LoadError(at("/final_cost", x), "final cost must be nonnegative");
        }
    }
    inst.final_cost = ValueTable(inst.state_grid, fin);

    if (j.contains("dual_grid")) {
        inst.dual_grid = parse_set("Xs", j["dual_grid"], "/dual_grid");
    } else {
        try {
            inst.dual_grid = default_dual_grid(inst, 21);
        } catch (const std::invalid_argument& e) {
            throw LoadError("/dual_grid", e.what());
        }
    }
    try {
        inst.validate();
    } catch (const std::invalid_argument& e) {
        throw LoadError("", e.what());
    }
    return inst;
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument(path + ": parse error: " + e.what());
    }
}

}  // namespace conjugax
