#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "doctest.h"
#include "npsim/oracle.hpp"
#include "support/random_instances.hpp"
#include "support/tables.hpp"

using namespace npsim;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string joined(const EncodedTape& t) {
    std::string s;
    for (const auto& tok : t.tokens) s += tok;
    return s;
}

std::set<std::string> as_set(const std::vector<std::string>& v) { return {v.begin(), v.end()}; }

std::set<std::string> digits_plus(std::initializer_list<const char*> extra) {
    std::set<std::string> s;
    for (int d = 0; d < 10; ++d) s.insert(std::to_string(d));
    for (auto* e : extra) s.insert(e);
    return s;
}

Decision decide(Variant v, const ProblemInstance& inst, bool sanitize, const std::string& cert) {
    Machine m(build_machine(v, inst, sanitize));
    auto tape = encode_instance(inst, cert);
    return run_direct(m, tape.tokens, default_max_steps(tape.tokens.size()), false).decision;
}

}  // namespace

TEST_CASE("fixtures round-trip through parse and render") {
    const std::string root = NPSIM_FIXTURES;
    for (int i = 1; i <= 6; ++i) {
        const std::string text = slurp(root + "/sat/I" + std::to_string(i) + ".txt");
        auto inst = parse_instance(Problem::sat, text);
        CHECK(render_instance(inst) == text);
        CHECK(render_instance(parse_instance(Problem::sat, render_instance(inst))) == text);
    }
    for (int i = 1; i <= 5; ++i) {
        const std::string text = slurp(root + "/ss/I" + std::to_string(i) + ".txt");
        auto inst = parse_instance(Problem::subset_sum, text);
        CHECK(render_instance(inst) == text);
    }
}

TEST_CASE("fixture tape and certificate lengths") {
    const std::string root = NPSIM_FIXTURES;
    auto sat = parse_instance(Problem::sat, slurp(root + "/sat/I1.txt"));
    auto t = encode_instance(sat);
    CHECK(t.instance_len == 189);
    CHECK(t.cert_len == 10);
    const std::size_t ss_cert[] = {29, 27, 25, 26, 27};
    for (int i = 1; i <= 5; ++i) {
        auto inst = parse_instance(Problem::subset_sum, slurp(root + "/ss/I" + std::to_string(i) + ".txt"));
        CHECK(encode_instance(inst).cert_len == ss_cert[i - 1]);
    }
}

TEST_CASE("parse errors") {
    CHECK_THROWS_AS(parse_instance(Problem::sat, "1_2&3"), ParseError);
    CHECK_THROWS_AS(parse_instance(Problem::sat, "1_x_#"), ParseError);
    CHECK_THROWS_AS(parse_instance(Problem::subset_sum, "5_1_2#"), ParseError);
}

TEST_CASE("encode examples") {
    ProblemInstance sat;
    sat.kind = Problem::sat;
    sat.clauses = {{1, 2, 3}, {-9, 10, 1}};
    sat.var_count = 10;
    sat.trailing_delim = true;
    CHECK(joined(encode_instance(sat, std::string("TFTFTFTFTT"))) == "1_2_3&-9_10_1_#TFTFTFTFTT");
    CHECK(joined(encode_instance(sat)) == "1_2_3&-9_10_1_#");

    ProblemInstance ss;
    ss.kind = Problem::subset_sum;
    ss.target = 1;
    ss.elements = {1, 3, 5, 7, 10, 20};
    CHECK(joined(encode_instance(ss, subset_certificate({3, 5, 7}))) == "1_@_1_3_5_7_10_20#3_5_7_;");
    auto bare = encode_instance(ss);
    CHECK(joined(bare) == "1_@_1_3_5_7_10_20#");
    CHECK(bare.instance_len == bare.tokens.size());
}

TEST_CASE("certificate alphabet examples") {
    ProblemInstance sat;
    sat.kind = Problem::sat;
    sat.clauses = {{1, -2}};
    sat.var_count = 2;
    auto s = certificate_schema(sat);
    CHECK(as_set(certificate_alphabet(s, 0)) == std::set<std::string>{"T", "F"});
    CHECK(certificate_alphabet(s, 2).empty());

    ProblemInstance ss;
    ss.kind = Problem::subset_sum;
    ss.target = 40;
    ss.elements = {31, 9, 50};
    auto q = certificate_schema(ss);
    CHECK(as_set(certificate_alphabet(q, 1, std::string_view("3"))) == digits_plus({"_"}));
    CHECK(as_set(certificate_alphabet(q, 2, std::string_view("3_"))) == digits_plus({";"}));
    CHECK(certificate_alphabet(q, 2, std::string_view("3;")).empty());
    CHECK(certificate_alphabet(q, 0, std::string_view("")).size() == 11);
}

TEST_CASE("machine entry states") {
    ProblemInstance sat;
    sat.kind = Problem::sat;
    sat.clauses = {{1}};
    sat.var_count = 1;
    CHECK(build_machine(Variant::sat_fixed, sat, false).q_init == "Check.Forwarded");
    CHECK(build_machine(Variant::sat_id, sat, false).q_init == "Check");
    CHECK(build_machine(Variant::sat_id, sat, true).q_init == "InputCheck");
    sat.var_count = 0;
    CHECK_THROWS(build_machine(Variant::sat_id, sat, false));

    ProblemInstance ss;
    ss.kind = Problem::subset_sum;
    auto spec = build_machine(Variant::subset_sum, ss, false);
    CHECK(spec.q_init == "Forward");
    CHECK(spec.q_acc == "Accept");
}

TEST_CASE("sanitizer equivalence on well-formed certificates") {
    std::mt19937 rng(11);
    for (int n = 0; n < 40; ++n) {
        auto inst = testing::random_sat(rng, 4, 3);
        for (auto v : {Variant::sat_id, Variant::sat_fixed})
            for (const auto& cert : enumerate_certificates(certificate_schema(inst), 64))
                CHECK(decide(v, inst, false, cert) == decide(v, inst, true, cert));
    }
    for (int n = 0; n < 40; ++n) {
        auto inst = testing::random_subset_sum(rng, 2, 9);
        for (const auto& cert : enumerate_certificates(certificate_schema(inst), 400))
            CHECK(decide(Variant::subset_sum, inst, false, cert) == decide(Variant::subset_sum, inst, true, cert));
    }
}

TEST_CASE("sanitizer rejects foreign certificate symbols") {
    ProblemInstance sat;
    sat.kind = Problem::sat;
    sat.clauses = {{1, 2}};
    sat.var_count = 2;
    for (const char* cert : {"T?", "1T", "T&", "-F"}) {
        CHECK(decide(Variant::sat_id, sat, true, cert) == Decision::reject);
        CHECK(decide(Variant::sat_fixed, sat, true, cert) == Decision::reject);
    }
    ProblemInstance ss;
    ss.kind = Problem::subset_sum;
    ss.target = 3;
    ss.elements = {3};
    CHECK(decide(Variant::subset_sum, ss, false, "3_;") == Decision::accept);
    for (const char* cert : {"3#;", "~_;", "3@;", "$;"})
        CHECK(decide(Variant::subset_sum, ss, true, cert) == Decision::reject);
}

TEST_CASE("schema certificates pass the sanitizer check phase") {
    ProblemInstance ss;
    ss.kind = Problem::subset_sum;
    ss.target = 12;
    ss.elements = {4, 8, 15};
    MachineSpec spec = build_machine(Variant::subset_sum, ss, true);
    Machine m(spec);
    const auto check = m.state_id("CertificateCheck");
    const auto reject = m.rej;
    for (const auto& cert : enumerate_certificates(certificate_schema(ss), 2000)) {
        auto tape = encode_instance(ss, cert);
        auto r = run_direct(m, tape.tokens, default_max_steps(tape.tokens.size()));
        for (const auto& st : r.trace) {
            if (st.state != check) continue;
            CHECK(m.step(st.state, st.read).next != reject);
        }
    }
}

TEST_CASE("dump-tm contains every transcribed table row") {
    auto rep = testing::table_fidelity(std::string(NPSIM_FIXTURES) + "/tables");
    for (const auto& f : rep.failures) MESSAGE(f);
    CHECK(rep.cases == 25 + 56 + 47 + 8 + 8 + 8);
    CHECK(rep.ok());
}
