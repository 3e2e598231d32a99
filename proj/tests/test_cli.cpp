#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "unitsum/decompose.hpp"
#include "unitsum/ff.hpp"
#include "unitsum/funcfield.hpp"
#include "unitsum/poly.hpp"
#include "unitsum/quadratic.hpp"
#include "unitsum/textio.hpp"

using nlohmann::json;
using namespace unitsum;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_with(const std::string& args, const char* redirect) {
    std::string cmd = std::string(UNITSUM_BIN) + " " + args + redirect;
    FILE* p = ::popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = ::pclose(p);
    REQUIRE(WIFEXITED(status));
    return {WEXITSTATUS(status), out};
}

RunResult run(const std::string& args) { return run_with(args, " 2>/dev/null"); }
RunResult run_merged(const std::string& args) { return run_with(args, " 2>&1"); }

const json& schema() {
    static const json sch = [] {
        std::ifstream f(UNITSUM_SCHEMA);
        if (!f.good()) throw std::runtime_error("schema file missing");
        json j;
        f >> j;
        return j;
    }();
    return sch;
}

bool type_ok(const json& inst, const std::string& t) {
    if (t == "object") return inst.is_object();
    if (t == "array") return inst.is_array();
    if (t == "string") return inst.is_string();
    if (t == "boolean") return inst.is_boolean();
    if (t == "integer")
        return inst.is_number_integer() || inst.is_number_unsigned();
    if (t == "number") return inst.is_number();
    return false;
}

// The subset of draft-07 the shipped schema uses: type, const, enum,
// required, properties, items, oneOf.
bool validate(const json& inst, const json& sch, std::string& why) {
    if (sch.contains("const") && inst != sch["const"]) {
        why = "const mismatch: " + inst.dump();
        return false;
    }
    if (sch.contains("enum")) {
        bool hit = false;
        for (const auto& v : sch["enum"])
            if (inst == v) hit = true;
        if (!hit) {
            why = "enum mismatch: " + inst.dump();
            return false;
        }
    }
    if (sch.contains("type") && !type_ok(inst, sch["type"].get<std::string>())) {
        why = "expected " + sch["type"].get<std::string>() + ", got " +
              inst.dump();
        return false;
    }
    if (sch.contains("required")) {
        for (const auto& k : sch["required"]) {
            if (!inst.is_object() || !inst.contains(k.get<std::string>())) {
                why = "missing required field " + k.get<std::string>();
                return false;
            }
        }
    }
    if (sch.contains("properties") && inst.is_object()) {
        for (auto it = sch["properties"].begin(); it != sch["properties"].end();
             ++it) {
            if (!inst.contains(it.key())) continue;
            if (!validate(inst.at(it.key()), it.value(), why)) {
                why = it.key() + ": " + why;
                return false;
            }
        }
    }
    if (sch.contains("items") && inst.is_array()) {
        for (const auto& el : inst) {
            if (!validate(el, sch["items"], why)) {
                why = "items: " + why;
                return false;
            }
        }
    }
    if (sch.contains("oneOf")) {
        int hits = 0;
        for (const auto& branch : sch["oneOf"]) {
            std::string w;
            if (validate(inst, branch, w)) ++hits;
        }
        if (hits != 1) {
            why = "oneOf matched " + std::to_string(hits) + " branches";
            return false;
        }
    }
    return true;
}

json parse_valid(const std::string& text) {
    json j = json::parse(text);
    std::string why;
    bool ok = validate(j, schema(), why);
    CAPTURE(why);
    CHECK(ok);
    return j;
}

} // namespace

TEST_CASE("classify prints the documented criterion trail") {
    RunResult r = run("classify --field 'GF(5)' --curve 'y^2 = x^2+1'");
    CHECK(r.exit_code == 0);
    CHECK(r.out ==
          "deg f = 2; lc(f) = 1 is a square in GF(5) ⇒ u(O_F) = ω\n");
    RunResult inert = run("classify --field 'GF(5)' --curve 'y^2 = 2*x^2+1'");
    CHECK(inert.exit_code == 0);
    CHECK(inert.out.find("is not a square in GF(5)") != std::string::npos);
    CHECK(inert.out.find("u(O_F) = ∞") != std::string::npos);
}

TEST_CASE("classification instances match over JSON") {
    auto verdict_of = [](const std::string& field, const std::string& curve) {
        RunResult r = run("classify --field '" + field + "' --curve '" +
                          curve + "' --json");
        CHECK(r.exit_code == 0);
        json j = parse_valid(r.out);
        CHECK(j["kind"] == "classification");
        CHECK(j["schema_version"] == 1);
        CHECK(j["input_echo"]["curve"] == curve);
        return j["verdict"].get<std::string>();
    };
    CHECK(verdict_of("GF(5)", "y^2 = x^2+1") == "omega");
    CHECK(verdict_of("GF(5)", "y^2 = 2*x^2+1") == "infinity");
    CHECK(verdict_of("GF(5)", "y^2 = x^3+x") == "infinity");
    CHECK(verdict_of("GF(2)", "y^2 + (x)y + (x) = 0") == "omega");
    CHECK(verdict_of("GF(2)", "y^2 + (x)y + (x^2+x) = 0") == "infinity");
    CHECK(verdict_of("GF(4):t^2+t+1", "y^2 + (x)y + (x^2+x) = 0") == "omega");
}

TEST_CASE("decompose prints the documented unit sum and round-trips") {
    RunResult human =
        run("decompose --field 'GF(5)' --places inf,x --elem '(x^2+1)/x'");
    CHECK(human.exit_code == 0);
    CHECK(human.out == "x + 1/x\n");

    RunResult r = run(
        "decompose --field 'GF(5)' --places inf,x --elem '(x^2+1)/x' --json");
    CHECK(r.exit_code == 0);
    json j = parse_valid(r.out);
    CHECK(j["kind"] == "decomposition");
    CHECK(j["units"] == json::array({"x", "1/x"}));
    CHECK(j["sum"] == "(x^2+1)/x");
    // every printed unit re-parses; the parsed units sum to the parsed echo
    FieldRef F = FieldSpec::prime(5);
    RationalFunction sum = RationalFunction::zero(F);
    for (const auto& u : j["units"])
        sum = sum + parse_rational(F, u.get<std::string>());
    CHECK(sum == parse_rational(F, j["sum"].get<std::string>()));
    auto trace = j["height_trace"].get<std::vector<long long>>();
    REQUIRE(!trace.empty());
    CHECK(trace.front() == 2);
    for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] < trace[i - 1]);
}

TEST_CASE("nonrep prints the documented certificate") {
    RunResult human = run("nonrep --p 2 --M 2 --A 1");
    CHECK(human.exit_code == 0);
    CHECK(human.out == "n = 11 (certified mod 2^5)\n");

    RunResult r = run("nonrep --p 2 --M 2 --A 1 --json");
    CHECK(r.exit_code == 0);
    json j = parse_valid(r.out);
    CHECK(j["kind"] == "nonrepresentable");
    CHECK(j["n"] == 11);
    CHECK(j["T"] == 5);
    CHECK(j["modulus"] == 32);
}

TEST_CASE("fundamental-unit and powers emit pinned values") {
    RunResult fu = run(
        "fundamental-unit --field 'GF(5)' --curve 'y^2 = x^4+1' --json");
    CHECK(fu.exit_code == 0);
    json j = parse_valid(fu.out);
    CHECK(j["present"] == true);
    CHECK(j["eps"] == "(x^2) + (1)y");
    CHECK(j["mu"] == "4");

    RunResult rank0 = run(
        "fundamental-unit --field 'GF(5)' --curve 'y^2 = x^3+x' --json");
    CHECK(rank0.exit_code == 0);
    json j0 = parse_valid(rank0.out);
    CHECK(j0["present"] == false);

    RunResult pw =
        run("powers --field 'GF(5)' --curve 'y^2 = x^2+1' --n 2 --json");
    CHECK(pw.exit_code == 0);
    json jp = parse_valid(pw.out);
    CHECK(jp["a"] == "2*x^2+1");
    CHECK(jp["b"] == "2*x");
    CHECK(jp["deg_a"] == 2);
    CHECK(jp["deg_b"] == 1);
}

TEST_CASE("valuation and height agree with the library") {
    RunResult v =
        run("valuation --field 'GF(5)' --place x --elem '(x^2+1)/x' --json");
    CHECK(v.exit_code == 0);
    json jv = parse_valid(v.out);
    CHECK(jv["place"] == "x");
    CHECK(jv["infinite"] == false);
    CHECK(jv["value"] == -1);

    RunResult h = run("height --field 'GF(5)' --elem '(x^2+1)/x' --json");
    CHECK(h.exit_code == 0);
    json jh = parse_valid(h.out);
    CHECK(jh["elem"] == "(x^2+1)/x");
    CHECK(jh["height"] == 2);
}

TEST_CASE("quadratic decomposition re-parses and re-sums") {
    RunResult r = run(
        "decompose --field 'GF(5)' --curve 'y^2 = x^2+1' --elem 'x' --json");
    CHECK(r.exit_code == 0);
    json j = parse_valid(r.out);
    CHECK(j["kind"] == "quadratic-decomposition");
    REQUIRE(j["terms"].size() == 2);
    CHECK(j["terms"][0]["lambda"] == "3");
    CHECK(j["terms"][0]["power"] == 1);
    CHECK(j["terms"][1]["lambda"] == "2");
    CHECK(j["terms"][1]["power"] == -1);

    FieldRef F = FieldSpec::prime(5);
    CurveRef cur = parse_curve(F, "y^2 = x^2+1");
    auto fu = fundamental_unit(cur);
    REQUIRE(fu.has_value());
    CHECK(fu->first.text() == j["eps"].get<std::string>());
    OrderElement sum = OrderElement::zero(cur);
    for (const auto& t : j["terms"]) {
        FieldElement lambda =
            parse_poly(F, t["lambda"].get<std::string>()).coeff(0);
        sum = sum + unit_term_value(fu->first, fu->second, lambda,
                                    t["power"].get<long long>());
    }
    CHECK(sum == OrderElement::from_poly(cur, Polynomial::x(F)));
}

TEST_CASE("witness verdicts, certificates, and exit codes") {
    RunResult exact = run(
        "witness --field 'GF(5)' --curve 'y^2 = x^4+1' --elem 'x' --json");
    CHECK(exact.exit_code == 0); // a proof of non-representability is success
    json je = parse_valid(exact.out);
    CHECK(je["mode"] == "exact");
    CHECK(je["verdict"] == "not-representable-exact");
    CHECK(!je["reason"].get<std::string>().empty());

    RunResult rep = run("witness --field 'GF(2)' --places 'inf,x,x+1' "
                        "--elem 'x^2+x+1' --max-units 2 --height-bound 4 "
                        "--json");
    CHECK(rep.exit_code == 0);
    json jr = parse_valid(rep.out);
    CHECK(jr["mode"] == "bounded");
    CHECK(jr["verdict"] == "representable");
    CHECK(jr["units"] == json::array({"x^2", "x+1"}));
    FieldRef F2 = FieldSpec::prime(2);
    RationalFunction sum = RationalFunction::zero(F2);
    for (const auto& u : jr["units"])
        sum = sum + parse_rational(F2, u.get<std::string>());
    CHECK(sum == parse_rational(F2, "x^2+x+1"));

    RunResult nwb = run("witness --field 'GF(2)' --places 'inf,x' "
                        "--elem 'x^2+x+1' --max-units 2 --height-bound 3 "
                        "--json");
    CHECK(nwb.exit_code == 3);
    json jn = parse_valid(nwb.out);
    CHECK(jn["verdict"] == "none-within-bounds");
    CHECK(jn["height_bound"] == 3);
    CHECK(jn["unit_count"] == 7);
}

TEST_CASE("selftest JSON reporting and the mutation hook") {
    RunResult ok = run("selftest --filter modulus-certificates --json");
    CHECK(ok.exit_code == 0);
    json j = parse_valid(ok.out);
    CHECK(j["kind"] == "selftest");
    REQUIRE(j["criteria"].size() == 1);
    CHECK(j["criteria"][0]["name"] == "modulus-certificates");
    CHECK(j["criteria"][0]["pass"] == true);
    CHECK(j["failures"] == 0);

    RunResult bad = run("selftest --filter degree-laws --mutate --json");
    CHECK(bad.exit_code == 1);
    json jb = parse_valid(bad.out);
    CHECK(jb["criteria"][0]["pass"] == false);
    CHECK(jb["failures"] == 1);
}

TEST_CASE("exit codes separate input errors from inconclusive searches") {
    RunResult parse_err =
        run_merged("classify --field 'GF(5)' --curve 'y^2 = x^'");
    CHECK(parse_err.exit_code == 1);
    CHECK(parse_err.out.find("line 1, column") != std::string::npos);

    CHECK(run("classify --field 'GF(6)' --curve 'y^2 = x^2+1'").exit_code == 1);
    CHECK(run("decompose --field 'GF(5)' --curve 'y^2 = x^4+1' --elem 'x'")
              .exit_code == 1); // not omega
    CHECK(run("decompose --field 'GF(5)' --elem 'x'").exit_code == 1);
    CHECK(run("witness --field 'GF(5)' --places inf,x --curve 'y^2 = x^2+1' "
              "--elem 'x'")
              .exit_code == 1); // both modes at once
    CHECK(run("classify --field 'GF(5)'").exit_code == 1);
    CHECK(run("bogus").exit_code == 1);
    CHECK(run("selftest --filter no-such-criterion").exit_code == 1);
    CHECK(run("--help").exit_code == 0);
    CHECK(run("nonrep --p 2 --M 1 --A 1 --limit 2").exit_code == 3);
    CHECK(run("witness --field 'GF(2)' --places 'inf,x' --elem 'x^2+x+1' "
              "--max-units 2 --height-bound 3 --budget 3")
              .exit_code == 3); // budget exhausted mid-search
}

TEST_CASE("json output is deterministic") {
    const std::string cmd =
        "classify --field 'GF(5)' --curve 'y^2 = x^2+1' --json";
    RunResult a = run(cmd), b = run(cmd);
    CHECK(a.out == b.out);
    CHECK(a.exit_code == b.exit_code);
}
