#include "npsim/machines.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace npsim {

Problem problem_of(Variant v) { return v == Variant::subset_sum ? Problem::subset_sum : Problem::sat; }

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool canonical_number(std::string_view s) { return all_digits(s) && (s.size() == 1 || s[0] != '0'); }

std::uint64_t to_u64(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw ParseError("number out of range: " + std::string(s));
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        auto pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(s.substr(start));
            return out;
        }
        out.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

ProblemInstance parse_sat(std::string_view text) {
    ProblemInstance inst;
    inst.kind = Problem::sat;
    if (text.empty() || text.back() != '#') throw ParseError("SAT instance must end with '#'");
    std::string_view body = text.substr(0, text.size() - 1);
    if (!body.empty() && body.back() == '_') {
        inst.trailing_delim = true;
        body.remove_suffix(1);
    }
    if (body.empty()) throw ParseError("empty formula");
    for (auto clause : split(body, '&')) {
        if (clause.empty()) throw ParseError("empty clause");
        std::vector<int> lits;
        for (auto lit : split(clause, '_')) {
            bool neg = !lit.empty() && lit[0] == '-';
            auto digits = neg ? lit.substr(1) : lit;
            if (!canonical_number(digits) || digits == "0")
                throw ParseError("bad literal '" + std::string(lit) + "'");
            auto v = to_u64(digits);
            if (v > 1000000) throw ParseError("variable index too large");
            int var = static_cast<int>(v);
            inst.var_count = std::max(inst.var_count, var);
            lits.push_back(neg ? -var : var);
        }
        inst.clauses.push_back(std::move(lits));
    }
    return inst;
}

ProblemInstance parse_subset_sum(std::string_view text) {
    ProblemInstance inst;
    inst.kind = Problem::subset_sum;
    if (text.empty() || text.back() != '#') throw ParseError("subset-sum instance must end with '#'");
    std::string_view body = text.substr(0, text.size() - 1);
    auto at = body.find("_@");
    if (at == std::string_view::npos) throw ParseError("missing '_@' after the target");
    auto target = body.substr(0, at);
    if (!canonical_number(target)) throw ParseError("bad target '" + std::string(target) + "'");
    inst.target = to_u64(target);
    auto rest = body.substr(at + 2);
    if (!rest.empty() && rest.back() == '_') {
        inst.trailing_delim = true;
        rest.remove_suffix(1);
    }
    if (rest.empty()) return inst;
    if (rest[0] != '_') throw ParseError("elements must follow '@' with '_'");
    for (auto e : split(rest.substr(1), '_')) {
        if (!canonical_number(e)) throw ParseError("bad element '" + std::string(e) + "'");
        inst.elements.push_back(to_u64(e));
    }
    return inst;
}

}  // namespace

ProblemInstance parse_instance(Problem kind, std::string_view text) {
    return kind == Problem::sat ? parse_sat(text) : parse_subset_sum(text);
}

std::string render_instance(const ProblemInstance& inst) {
    std::string out;
    if (inst.kind == Problem::sat) {
        for (std::size_t c = 0; c < inst.clauses.size(); ++c) {
            if (c) out += '&';
            for (std::size_t i = 0; i < inst.clauses[c].size(); ++i) {
                if (i) out += '_';
                out += std::to_string(inst.clauses[c][i]);
            }
        }
    } else {
        out = std::to_string(inst.target) + "_@";
        for (auto e : inst.elements) out += "_" + std::to_string(e);
    }
    if (inst.trailing_delim) out += '_';
    out += '#';
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    out.reserve(text.size());
    for (char c : text) out.emplace_back(1, c);
    return out;
}

CertificateSchema certificate_schema(const ProblemInstance& inst) {
    CertificateSchema s;
    s.kind = inst.kind;
    std::string text = render_instance(inst);
    s.region_start = static_cast<long>(text.size());
    if (inst.kind == Problem::sat) {
        s.max_length = static_cast<std::size_t>(inst.var_count);
    } else {
        // Element region from the cell after '@' up to '#', plus the terminator.
        auto at = text.find('@');
        s.max_length = text.size() - 1 - (at + 1) + 1;
        s.terminator = ";";
    }
    return s;
}

std::vector<std::string> certificate_alphabet(const CertificateSchema& schema, std::size_t pos,
                                              std::optional<std::string_view> prefix) {
    std::vector<std::string> out;
    if (pos >= schema.max_length) return out;
    if (schema.kind == Problem::sat) return {"F", "T"};

    // Only the last prefix symbol matters for the rules below.
    bool after_digit = true, after_sep = true, empty = pos == 0;
    if (prefix) {
        if (prefix->find(';') != std::string_view::npos) return out;
        empty = prefix->empty();
        after_digit = !empty && prefix->back() >= '0' && prefix->back() <= '9';
        after_sep = !empty && prefix->back() == '_';
    }
    bool digit_ok = pos + 3 <= schema.max_length;
    bool sep_ok = !empty && after_digit && pos + 2 <= schema.max_length;
    bool term_ok = (empty || after_sep) && pos + 1 <= schema.max_length;
    if (digit_ok)
        for (char c = '0'; c <= '9'; ++c) out.emplace_back(1, c);
    if (term_ok) out.emplace_back(";");
    if (sep_ok) out.emplace_back("_");
    std::sort(out.begin(), out.end());
    return out;
}

bool certificate_well_formed(const CertificateSchema& schema, std::string_view cert) {
    if (schema.kind == Problem::sat) {
        return cert.size() == schema.max_length &&
               std::all_of(cert.begin(), cert.end(), [](char c) { return c == 'T' || c == 'F'; });
    }
    if (cert.empty() || cert.back() != ';') return false;
    for (std::size_t i = 0; i < cert.size(); ++i) {
        auto allowed = certificate_alphabet(schema, i, cert.substr(0, i));
        if (std::find(allowed.begin(), allowed.end(), std::string(1, cert[i])) == allowed.end()) return false;
    }
    return true;
}

EncodedTape encode_instance(const ProblemInstance& inst, const std::optional<std::string>& certificate) {
    EncodedTape t;
    std::string text = render_instance(inst);
    t.instance_len = text.size();
    t.cert_len = certificate_schema(inst).max_length;
    if (certificate) text += *certificate;
    t.tokens = tokenize(text);
    return t;
}

std::string assignment_certificate(const std::vector<bool>& values) {
    std::string s;
    for (bool v : values) s += v ? 'T' : 'F';
    return s;
}

std::string subset_certificate(const std::vector<std::uint64_t>& picked) {
    std::string s;
    for (auto v : picked) s += std::to_string(v) + "_";
    return s + ";";
}

std::optional<std::vector<std::uint64_t>> parse_subset_certificate(std::string_view cert) {
    if (cert.empty() || cert.back() != ';') return std::nullopt;
    cert.remove_suffix(1);
    std::vector<std::uint64_t> out;
    while (!cert.empty()) {
        auto sep = cert.find('_');
        if (sep == std::string_view::npos || sep == 0 || !all_digits(cert.substr(0, sep))) return std::nullopt;
        out.push_back(to_u64(cert.substr(0, sep)));
        cert.remove_prefix(sep + 1);
    }
    return out;
}

namespace {

struct Row {
    const char* state;
    const char* read;
    const char* next;
    const char* write;
    char move;
};

void add_rows(MachineSpec& spec, std::initializer_list<Row> rows) {
    for (const auto& r : rows) spec.add({r.state, r.read, r.next, r.write, r.move == 'R' ? 1 : -1});
}

void add_sat_id_rows(MachineSpec& spec) {
    add_rows(spec, {
        {"Check", "_", "Check", "_", 'R'},
        {"Check", "-", "Not", "-", 'R'},
        {"Check", "D", "Inc.D", "?", 'R'},
        {"Not", "D", "Inc.D", "!", 'R'},
        {"Skip", "&", "Check", "_", 'R'},
        {"Skip", "#", "Accept", "_", 'R'},
        {"Skip", "*", "Skip", "_", 'R'},
        {"Check", "&", "Reject", "_", 'R'},
        {"Check", "#", "Reject", "_", 'R'},
        {"Inc.N", "_", "Forward.N", "_", 'R'},
        {"Inc.N", "&", "Forward.N", "&", 'R'},
        {"Inc.N", "#", "Dec.(N-1)", "#", 'R'},
        {"Inc.N", "D", "Inc.(10N+D)", "_", 'R'},
        {"Forward.N", "*", "Forward.N", "*", 'R'},
        {"Forward.N", "#", "Dec.(N-1)", "#", 'R'},
        {"Dec.N", "T", "Dec.(N-1)", "T", 'R'},
        {"Dec.N", "F", "Dec.(N-1)", "F", 'R'},
        {"Dec.0", "T", "Backward.T", "T", 'L'},
        {"Dec.0", "F", "Backward.F", "F", 'L'},
        {"Backward.T", "*", "Backward.T", "*", 'L'},
        {"Backward.F", "*", "Backward.F", "*", 'L'},
        {"Backward.T", "?", "Skip", "_", 'R'},
        {"Backward.F", "?", "Check", "_", 'R'},
        {"Backward.T", "!", "Check", "_", 'R'},
        {"Backward.F", "!", "Skip", "_", 'R'},
    });
}

void add_sat_fixed_rows(MachineSpec& spec) {
    add_rows(spec, {
        {"Check.S", "_", "Check.S", "_", 'R'},
        {"Check.S", "-", "CheckNot.S", "-", 'R'},
        {"Check.S", "0", "Unknown.S", "_", 'R'},
        {"Check.S", "D", "UnknownTerm.S", "D", 'R'},
        {"Check.S", "T", "Skip.S", "T", 'R'},
        {"Check.S", "F", "Check.S", "F", 'R'},
        {"Check.S", "&", "Reject", "_", 'R'},
        {"Check.S", "#", "Reject", "_", 'R'},

        {"CheckNot.S", "_", "CheckNot.S", "_", 'R'},
        {"CheckNot.S", "T", "Check.S", "T", 'R'},
        {"CheckNot.S", "F", "Skip.S", "F", 'R'},
        {"CheckNot.S", "D", "UnknownTerm.S", "D", 'R'},
        {"CheckNot.S", "0", "Unknown.S", "_", 'R'},

        {"Unknown.S", "_", "Unknown.S", "_", 'R'},
        {"Unknown.S", "0", "Unknown.S", "_", 'R'},
        {"Unknown.S", "D", "UnknownTerm.S", "D", 'R'},
        {"Unknown.S", "T", "Skip.S", "T", 'R'},
        {"Unknown.S", "F", "Unknown.S", "F", 'R'},
        {"Unknown.S", "-", "UnknownNot.S", "-", 'R'},
        {"Unknown.S", "&", "Check.Free", "&", 'R'},
        {"Unknown.S", "#", "Fetch", "#", 'R'},

        {"UnknownNot.S", "_", "UnknownNot.S", "_", 'R'},
        {"UnknownNot.S", "T", "Unknown.S", "T", 'R'},
        {"UnknownNot.S", "F", "Skip.S", "F", 'R'},
        {"UnknownNot.S", "D", "UnknownTerm.S", "D", 'R'},
        {"UnknownNot.S", "0", "Unknown.S", "_", 'R'},

        {"UnknownTerm.S", "D", "UnknownTerm.S", "D", 'R'},
        {"UnknownTerm.S", "_", "Unknown.S", "_", 'R'},
        {"UnknownTerm.S", "&", "Check.Free", "&", 'R'},
        {"UnknownTerm.S", "#", "Fetch", "#", 'R'},

        {"Skip.S", "*", "Skip.S", "_", 'R'},
        {"Skip.Free", "&", "Check.Free", "&", 'R'},
        {"Skip.Free", "#", "Fetch", "#", 'R'},
        {"Skip.Forwarded", "&", "Check.Forwarded", "&", 'R'},
        {"Skip.Forwarded", "#", "Accept", "#", 'R'},

        {"Fetch", "_", "Fetch", "_", 'R'},
        {"Fetch", "T", "Backward.B", "_", 'L'},
        {"Fetch", "F", "Backward.B", "_", 'L'},

        {"Backward.B", "*", "Backward.B", "*", 'L'},
        {"Backward.B", "1", "BackwardFrom1.B", "0", 'L'},
        {"Backward.B", "0", "Borrow.B", "9", 'L'},
        {"Backward.B", "D", "BackwardInTerm.B", "D-1", 'L'},
        {"Backward.B", "eps", "Check.Forwarded", "eps", 'R'},

        {"Borrow.B", "0", "Borrow.B", "9", 'L'},
        {"Borrow.B", "D", "BackwardInTerm.B", "D-1", 'L'},

        {"BackwardInTerm.B", "D", "BackwardInTerm.B", "D", 'L'},
        {"BackwardInTerm.B", "_", "Backward.B", "_", 'L'},
        {"BackwardInTerm.B", "&", "Backward.B", "&", 'L'},
        {"BackwardInTerm.B", "-", "Backward.B", "-", 'L'},
        {"BackwardInTerm.B", "eps", "Check.Forwarded", "eps", 'R'},

        {"BackwardFrom1.B", "D", "BackwardInTerm.B", "D", 'L'},
        {"BackwardFrom1.B", "_", "Assign.B", "_", 'R'},
        {"BackwardFrom1.B", "-", "Assign.B", "-", 'R'},
        {"BackwardFrom1.B", "&", "Assign.B", "&", 'R'},
        {"BackwardFrom1.B", "eps", "Assign.B", "eps", 'R'},

        {"Assign.B", "0", "Backward.B", "B", 'L'},
    });
}

void add_subset_sum_rows(MachineSpec& spec) {
    add_rows(spec, {
        {"Forward", "#", "FindDigitToMatch", "#", 'R'},
        {"Forward", "*", "Forward", "*", 'R'},

        {"FindDigitToMatch", "~", "FindDigitToMatch", "~", 'R'},
        {"FindDigitToMatch", "M", "BackwardToMatch.M", "~", 'L'},
        {"FindDigitToMatch", "(D)", "FindDigitToMatch", "(D)", 'R'},
        {"FindDigitToMatch", "_", "BackwardToCheckMatch", "~", 'L'},
        {"FindDigitToMatch", ";", "BackwardToCheckSum", ";", 'L'},

        {"BackwardToMatch.M", "D", "BackwardToMatch.M", "D", 'L'},
        {"BackwardToMatch.M", "|", "BackwardToMatch.M", "|", 'L'},
        {"BackwardToMatch.M", "_", "MatchPosition.M", "|", 'R'},
        {"BackwardToMatch.M", "~", "BackwardToMatch.M", "~", 'L'},
        {"BackwardToMatch.M", "#", "BackwardToMatch.M", "#", 'L'},
        {"BackwardToMatch.M", "(D)", "MatchPosition.M", "D", 'R'},

        {"MatchPosition.M", "|", "BackwardToMatch.M", "|", 'L'},
        {"MatchPosition.M", "~", "BackwardToMatch.M", "~", 'L'},
        {"MatchPosition.M", "M", "BackwardToMatch.M", "(M)", 'L'},
        {"MatchPosition.M", "D", "BackwardToMatch.M", "D", 'L'},

        {"BackwardToMatch.M", "@", "CheckForward", "@", 'L'},

        {"CheckForward", "(D)", "Forward", "(D)", 'R'},
        {"CheckForward", "*", "CheckForward", "*", 'R'},
        {"CheckForward", "#", "Reject", "_", 'L'},

        {"BackwardToCheckMatch", "#", "MatchedDigits", "#", 'L'},
        {"BackwardToCheckMatch", "|", "MatchedDigits", "_", 'L'},
        {"BackwardToCheckMatch", "(D)", "BackwardToCheckMatch", "D", 'L'},
        {"BackwardToCheckMatch", "*", "BackwardToCheckMatch", "*", 'L'},
        {"BackwardToCheckMatch", "@", "Reject", "_", 'L'},

        {"MatchedDigits", "(M)", "BackwardToSubtract.M", "$", 'L'},
        {"MatchedDigits", "D", "BackwardToCheckMatch", "D", 'L'},
        {"MatchedDigits", "~", "BackwardToCheckMatch", "~", 'L'},

        {"BackwardToSubtract.M", "@", "SumArea.M", "@", 'L'},
        {"BackwardToSubtract.M", "*", "BackwardToSubtract.M", "*", 'L'},

        {"SumArea.M", "D", "SumArea.M", "D", 'L'},
        {"SumArea.M", "|", "SumArea.M", "|", 'L'},
        {"SumArea.M", "_", "Subtract.M", "|", 'L'},
        {"SumArea.M", "(D)", "Subtract.M", "D", 'L'},

        {"Subtract.M", "D", "Borrow.B", "(D)-(M)", 'L'},

        {"Borrow.0", "*", "Forward", "*", 'R'},
        {"Borrow.1", "0", "Borrow.1", "9", 'L'},
        {"Borrow.1", "D", "Forward", "D-1", 'R'},
        {"Borrow.1", "eps", "Reject", "_", 'L'},

        {"BackwardToCheckSum", "@", "CheckSum", "@", 'L'},
        {"BackwardToCheckSum", "(D)", "Reject", "(D)", 'L'},
        {"BackwardToCheckSum", "*", "BackwardToCheckSum", "*", 'L'},

        {"CheckSum", "_", "CheckSum", "_", 'L'},
        {"CheckSum", "0", "CheckSum", "0", 'L'},
        {"CheckSum", "eps", "Accept", "_", 'L'},
        {"CheckSum", "*", "Reject", "_", 'L'},
    });
    // Continuation of a subtraction over the remaining digits of the matched
    // element, marker cleanup, and elements that end in "_#".
    add_rows(spec, {
        {"Forward", "$", "FetchNextDigit", "~", 'L'},
        {"FetchNextDigit", "M", "BackwardToSubtract.M", "$", 'L'},
        {"FetchNextDigit", "|", "RestoreMarkers", "_", 'L'},
        {"FetchNextDigit", "_", "RestoreMarkers", "_", 'L'},
        {"RestoreMarkers", "(D)", "RestoreMarkers", "D", 'L'},
        {"RestoreMarkers", "|", "RestoreMarkers", "_", 'L'},
        {"RestoreMarkers", "*", "RestoreMarkers", "*", 'L'},
        {"RestoreMarkers", "eps", "Forward", "eps", 'R'},
        {"MatchPosition.M", "#", "BackwardToMatch.M", "#", 'L'},
        {"MatchedDigits", "|", "MatchedDigits", "_", 'L'},
    });
}

void add_sat_sanitizer(MachineSpec& spec, const std::string& entry) {
    spec.add({"InputCheck", "#", "CertificateCheck", "#", 1});
    spec.add({"InputCheck", "*", "InputCheck", "*", 1});
    spec.add({"CertificateCheck", "T", "CertificateCheck", "T", 1});
    spec.add({"CertificateCheck", "F", "CertificateCheck", "F", 1});
    spec.add({"CertificateCheck", "eps", "BackToBeginning", "eps", -1});
    spec.add({"CertificateCheck", "*", "Reject", "_", 1});
    spec.add({"BackToBeginning", "*", "BackToBeginning", "*", -1});
    spec.add({"BackToBeginning", "eps", entry, "eps", 1});
}

void add_subset_sum_sanitizer(MachineSpec& spec) {
    add_rows(spec, {
        {"InputCheck", "#", "CertificateCheck", "#", 'R'},
        {"InputCheck", "*", "InputCheck", "*", 'R'},
        {"CertificateCheck", "D", "CertificateCheck", "D", 'R'},
        {"CertificateCheck", "_", "CertificateCheck", "_", 'R'},
        {"CertificateCheck", ";", "BackToBeginning", ";", 'L'},
        {"CertificateCheck", "*", "Reject", "_", 'R'},
        {"BackToBeginning", "*", "BackToBeginning", "*", 'L'},
        {"BackToBeginning", "eps", "Forward", "eps", 'R'},
    });
}

std::vector<std::string> sat_alphabet() {
    std::vector<std::string> a{"_", "#", "&", "-", "T", "F", "?", "!", kBlank};
    for (char c = '0'; c <= '9'; ++c) a.emplace_back(1, c);
    return a;
}

std::vector<std::string> subset_sum_alphabet() {
    std::vector<std::string> a{"_", "@", "#", ";", "~", "|", "$", kBlank};
    for (int d = 0; d <= 9; ++d) {
        a.emplace_back(1, static_cast<char>('0' + d));
        a.push_back(circled(d));
    }
    return a;
}

}  // namespace

MachineSpec build_machine(Variant variant, const ProblemInstance& inst, bool sanitize) {
    if (problem_of(variant) != inst.kind) throw std::invalid_argument("machine does not match the instance kind");
    MachineSpec spec;
    spec.variant = variant;
    spec.sanitized = sanitize;
    switch (variant) {
    case Variant::sat_id: {
        if (inst.var_count <= 0) throw std::invalid_argument("sat-id needs a positive variable count");
        spec.k = inst.var_count;
        spec.alphabet = sat_alphabet();
        add_sat_id_rows(spec);
        spec.q_init = "Check";
        if (sanitize) add_sat_sanitizer(spec, "Check");
        spec.declared_states = {"Check", "Not", "Skip", "Backward.T", "Backward.F", spec.q_acc, spec.q_rej};
        for (int n = 0; n <= spec.k; ++n)
            for (const char* fam : {"Inc.", "Forward.", "Dec."}) spec.declared_states.insert(fam + std::to_string(n));
        if (sanitize)
            for (const char* s : {"InputCheck", "CertificateCheck", "BackToBeginning"}) spec.declared_states.insert(s);
        break;
    }
    case Variant::sat_fixed:
        spec.k = inst.var_count;
        spec.alphabet = sat_alphabet();
        add_sat_fixed_rows(spec);
        spec.q_init = "Check.Forwarded";
        if (sanitize) add_sat_sanitizer(spec, "Check.Forwarded");
        break;
    case Variant::subset_sum:
        spec.alphabet = subset_sum_alphabet();
        add_subset_sum_rows(spec);
        spec.q_init = "Forward";
        if (sanitize) add_subset_sum_sanitizer(spec);
        break;
    }
    if (sanitize) spec.q_init = "InputCheck";
    return spec;
}

namespace {
const char* move_name(int m) { return m > 0 ? "R" : "L"; }
}

std::string dump_rules(const MachineSpec& spec) {
    std::ostringstream os;
    for (const auto& r : spec.rules)
        os << r.state << '\t' << r.read << '\t' << r.next << '\t' << r.write << '\t' << move_name(r.move) << '\n';
    return os.str();
}

std::string dump_instantiated(const Machine& m) {
    std::ostringstream os;
    for (std::uint16_t q = 0; q < m.num_states(); ++q) {
        if (m.halting(q)) continue;
        for (std::uint16_t a = 0; a < m.num_symbols(); ++a) {
            const auto& s = m.step(q, a);
            os << m.state_name(q) << '\t' << m.symbol_name(a) << '\t' << m.state_name(s.next) << '\t'
               << m.symbol_name(s.write) << '\t' << move_name(s.move) << '\n';
        }
    }
    return os.str();
}

}  // namespace npsim
