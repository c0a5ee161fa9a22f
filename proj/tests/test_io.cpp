#include <doctest.h>

#include <string>

#include "conjugax/duality.hpp"
#include "conjugax/io.hpp"
#include "test_util.hpp"

using namespace conjugax;
using oracle::kInf;

namespace {

const char* kReference = R"({
  "sets": {"X": {"points": [[0], [1]]}, "Xs": {"points": [[0], [1]]},
           "Y": {"points": [[0], [1]]}, "Ys": {"points": [[0], [1]]}},
  "couplings": {"c": {"kind": "bilinear", "primal": "X", "dual": "Xs"},
                "d": {"kind": "bilinear", "primal": "Y", "dual": "Ys"},
                "cd": {"kind": "sum", "left": "c", "right": "d"},
                "ct": {"kind": "transpose", "of": "c"},
                "mc": {"kind": "opposite", "of": "c"},
                "tab": {"kind": "table", "primal": "X", "dual": "Ys", "values": [[1, "+inf"], ["-inf", 0.5]]}},
  "functions": {"f": {"set": "X", "values": [0, 1]}, "g": {"set": "Y", "values": [0, 0]}},
  "kernels": {"K": {"rows": "X", "cols": "Y", "values": [[0, 1], [1, 0]]}}
})";

std::string load_error(const std::string& text) {
    try {
        (void)load_instance(Json::parse(text));
    } catch (const LoadError& e) {
        return e.what();
    }
    return "";
}

std::string sdp_error(const Json& j) {
    try {
        (void)load_sdp_instance(j);
    } catch (const LoadError& e) {
        return e.what();
    }
    return "";
}

Json minimal_sdp() {
    return Json::parse(R"({
      "state_grid": {"points": [[0]]}, "control_grid": {"size": 1}, "dual_grid": [-1, 1],
      "stages": [{"scenarios": [{"point": [0], "prob": 1}], "dynamics": [[[0]]], "costs": [[[1]]]}],
      "final_cost": [0]
    })");
}

}  // namespace

TEST_CASE("extended reals in JSON") {
    CHECK(to_json(ExtReal::pos_inf()) == Json("+inf"));
    CHECK(to_json(ExtReal::neg_inf()) == Json("-inf"));
    CHECK(to_json(ExtReal(2.5)) == Json(2.5));
    CHECK(ext_from_json(Json("-inf"), "/v") == ExtReal::neg_inf());
    CHECK(ext_from_json(Json(0.1), "/v") == ExtReal(0.1));
    CHECK_THROWS_WITH_AS((void)ext_from_json(Json("+Inf"), "/v"), doctest::Contains("/v: "), LoadError);
    CHECK_THROWS_AS((void)ext_from_json(Json(true), "/v"), LoadError);
}

TEST_CASE("the reference instance loads and resolves") {
    const Instance inst = load_instance(Json::parse(kReference));
    CHECK(inst.sets.size() == 4);
    CHECK(inst.couplings.size() == 6);
    CHECK(testutil::same(inst.function("f"), {0, 1}));
    CHECK(inst.coupling("cd").primal()->size() == 4);
    CHECK(inst.coupling("ct").primal()->id() == "Xs");
    CHECK(inst.coupling("mc").eval(1, 1) == ExtReal(-1.0));
    CHECK(inst.coupling("tab").eval(0, 1) == ExtReal::pos_inf());

    DualityInstance d{inst.coupling("c"), inst.coupling("d"), inst.kernel("K"), inst.function("f"),
                      inst.function("g")};
    CHECK(testutil::same(rhs_envelope(d), {0, 1}));
    const CheckReport r = check_theorem_main(d, 1e-9);
    CHECK(r.conclusion_holds == true);

    Instance bound = inst;
    bound.roles["f"] = "g";
    CHECK(bound.resolve("f") == "g");
    CHECK_THROWS_WITH_AS((void)bound.kernel("nope"), "unknown kernel \"nope\"", std::invalid_argument);
}

TEST_CASE("loader errors carry JSON pointers") {
    CHECK(load_error(R"({"sets": {"X": {"points": []}}})") == "/sets/X/points: set must be nonempty");
    CHECK(load_error(R"({"sets": {"X": {"size": 2}}, "functions": {"f": {"set": "X", "values": [1]}}})") ==
          "/functions/f/values: expected 2 values, got 1");
    CHECK(load_error(R"({"sets": {"X": {"size": 1}}, "functions": {"f": {"set": "Z", "values": [1]}}})") ==
          "/functions/f/set: unknown set \"Z\"");
    CHECK(load_error(R"({"sets": {"X": {"size": 1}}, "functions": {"f": {"set": "X", "values": ["inf"]}}})") ==
          "/functions/f/values/0: expected a number, \"+inf\" or \"-inf\", got \"inf\"");
    CHECK(load_error(R"({"couplings": {"a": {"kind": "opposite", "of": "b"}, "b": {"kind": "transpose", "of": "a"}}})")
              .find("cyclic coupling definition") != std::string::npos);
    CHECK(load_error(R"({"couplings": {"a": {"kind": "mystery"}}})") ==
          "/couplings/a/kind: unknown coupling kind \"mystery\"");
    CHECK(load_error(R"({"sets": {"X": {"size": 2}}, "couplings": {"a": {"kind": "bilinear", "primal": "X", "dual": "X"}}})")
              .rfind("/couplings/a: ", 0) == 0);
}

TEST_CASE("convoluters and exchange kernels load") {
    const Instance inst = load_instance(Json::parse(R"({
      "sets": {"Y": {"points": [0, 1]}, "X": {"points": [0, 1, 2]}, "A": {"size": 1}},
      "convoluters": {"delta": {"kind": "classical-delta", "axes": ["Y", "X", "Y"]},
                      "t": {"kind": "table", "axes": ["A", "A", "Y"], "values": [[[0, "+inf"]]]}},
      "kernels": {"E": {"rows": "X", "cols": "Y", "role": "exchange", "values": [[0, 0], [1, 1], [2, 2]]}}
    })"));
    CHECK(inst.convoluter("delta")(1, 2, 1) == ExtReal(0.0));
    CHECK(inst.convoluter("delta")(1, 0, 1) == ExtReal::pos_inf());
    CHECK(inst.convoluter("t")(0, 0, 1) == ExtReal::pos_inf());
    CHECK(inst.kernel("E")(2, 1) == ExtReal(2.0));
    CHECK(load_error(R"({"sets": {"Y": {"points": [0, 1]}},
      "convoluters": {"d": {"kind": "classical-delta", "axes": ["Y", "Y", "Y"]}}})")
              .rfind("/convoluters/d: ", 0) == 0);
}

TEST_CASE("stochastic instance loader") {
    const SdpInstance one = load_sdp_instance(minimal_sdp());
    CHECK(one.horizon() == 1);
    CHECK(one.dual_grid->size() == 2);

    Json neg = minimal_sdp();
    neg["stages"][0]["costs"][0][0][0] = "-inf";
    CHECK(sdp_error(neg) == "/stages/0/costs/0/0/0: costs must be nonnegative");

    Json prob = minimal_sdp();
    prob["stages"][0]["scenarios"][0]["prob"] = 0.999;
    CHECK(sdp_error(prob) == "/stages/0/scenarios: probabilities must sum to 1");

    Json off = minimal_sdp();
    off["stages"][0]["dynamics"][0][0][0] = 7;
    CHECK(sdp_error(off) == "/stages/0/dynamics/0/0/0: dynamics index 7 not on state grid");

    Json fin = minimal_sdp();
    fin["final_cost"] = Json::array({-1});
    CHECK(sdp_error(fin) == "/final_cost/0: final cost must be nonnegative");

    Json nogrid = minimal_sdp();
    nogrid.erase("dual_grid");
    CHECK(load_sdp_instance(nogrid).dual_grid->size() == 21);
}

TEST_CASE("reports round-trip through JSON") {
    CheckReport r;
    r.check = "demo";
    r.hypothesis_holds = true;
    r.conclusion_holds = false;
    r.violations.push_back({{1, 2}, ExtReal::pos_inf(), ExtReal(0.1)});
    r.margins = {ExtReal(0.0), ExtReal::neg_inf()};
    r.unmet = {{3}};
    r.notes = {"a note"};
    r.index_names = {"t", "x#"};
    r.rows.push_back({{0, 4}, ExtReal(1.0), ExtReal(1.5), ExtReal(0.5)});
    const Json j = to_json(r);
    CHECK(j.dump() == to_json(report_from_json(Json::parse(j.dump()))).dump());
    const CheckReport back = report_from_json(j);
    CHECK(back.conclusion_holds == false);
    CHECK(back.violations.front().lhs == ExtReal::pos_inf());

    CheckReport open;
    open.check = "open";
    CHECK(to_json(open)["conclusion_holds"].is_null());
    CHECK_FALSE(report_from_json(to_json(open)).conclusion_holds.has_value());
}

TEST_CASE("CSV encodings") {
    CheckReport r;
    r.check = "demo";
    r.index_names = {"t", "x#"};
    r.rows.push_back({{0, 4}, ExtReal(1.0), ExtReal::pos_inf(), ExtReal::pos_inf()});
    CHECK(to_csv(r) == "check,t,x#,lhs,rhs,slack\ndemo,0,4,1,+inf,+inf\n");
    CheckReport v;
    v.check = "v";
    v.violations.push_back({{1, 2}, ExtReal(-0.5), ExtReal::neg_inf()});
    CHECK(to_csv(v) == "check,index,lhs,rhs\nv,1;2,-0.5,-inf\n");
    const ValueTable t(make_abstract_set("A", 2), {ExtReal(1e-3), ExtReal::neg_inf()});
    CHECK(to_csv(t) == "index,value\n0,0.001\n1,-inf\n");
}

TEST_CASE("emitted reports re-parse under the schema") {
    const SdpInstance inst = load_sdp_instance(read_json_file(CONJUGAX_DATA_DIR "/bellman_t3.json"));
    std::vector<CheckReport> reps = {hamiltonian_form_check(inst), conjugate_bellman_check(inst),
                                     sandwich_bounds(inst, 3).report};
    const Instance ref = load_instance(read_json_file(CONJUGAX_DATA_DIR "/reference_01.json"));
    DualityInstance d{ref.coupling("c"), ref.coupling("d"), ref.kernel("K"), ref.function("f"), ref.function("g")};
    reps.push_back(check_equality_extended(d));
    reps.push_back(check_equality_real_valued(d));
    for (const auto& r : reps) {
        CAPTURE(r.check);
        const std::string text = to_json(r).dump(2);
        CHECK(to_json(report_from_json(Json::parse(text))).dump(2) == text);
    }
    CHECK_THROWS_AS((void)read_json_file(CONJUGAX_DATA_DIR "/missing.json"), std::invalid_argument);
}
