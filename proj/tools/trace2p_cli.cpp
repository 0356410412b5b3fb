// Command-line front end: factorization, decompositions, character sums,
// exact counts, criterion checks, brute-force verification, scans and
// table reproduction. Machine output is JSON (or TSV for verify).

#include <CLI11.hpp>
#include <iostream>

#include "trace2p/pipeline.hpp"

using namespace trace2p;

namespace {

Json report_to_json(const CriterionReport& r) {
    Json j;
    j["id"] = r.id;
    j["q"] = r.q;
    j["n"] = r.n;
    j["beta_class"] = to_string(r.beta);
    if (!r.sieve.empty()) j["sieve"] = r.sieve;
    j["lhs"] = r.lhs_interval().str();
    j["rhs"] = r.rhs_interval().str();
    j["verdict"] = to_string(r.verdict);
    if (!r.note.empty()) j["note"] = r.note;
    if (r.lower_bound) j["lower_bound"] = r.lower_bound->interval().str();
    return j;
}

// parse "c0,c1,..." into a base-field index for the given view
u64 parse_base_index(const ExtensionView& v, const std::string& s) {
    if (s.find(',') == std::string::npos) return std::stoull(s);
    u64 p = v.F->p(), idx = 0, scale = 1;
    size_t pos = 0;
    while (pos < s.size()) {
        size_t next = s.find(',', pos);
        if (next == std::string::npos) next = s.size();
        idx += std::stoull(s.substr(pos, next - pos)) % p * scale;
        scale *= p;
        pos = next + 1;
    }
    return idx;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computations with 2-primitive elements of finite fields"};
    app.require_subcommand(1);

    // ---- factor ----
    std::string factor_arg;
    auto* cmd_factor = app.add_subcommand("factor", "factor a positive integer (<= 2^80)");
    cmd_factor->add_option("t", factor_arg, "integer to factor")->required();

    // ---- decompose ----
    u64 dq = 0;
    int dn = 1;
    auto* cmd_dec = app.add_subcommand("decompose", "integer invariants of a pair (q, n)");
    cmd_dec->add_option("--q", dq)->required();
    cmd_dec->add_option("--n", dn)->required();

    // ---- charsum ----
    auto* cmd_cs = app.add_subcommand("charsum", "character sums over small fields");
    cmd_cs->require_subcommand(1);
    u64 cs_p = 3, cs_chi = 0, cs_r = 2;
    int cs_k = 1, cs_base = 1;
    std::string cs_u = "1", cs_elem;
    auto add_field_opts = [&](CLI::App* c) {
        c->add_option("--p", cs_p, "field characteristic")->required();
        c->add_option("--k", cs_k, "field degree over F_p")->required();
    };
    auto* cs_gauss = cmd_cs->add_subcommand("gauss", "quadratic Gauss sum g(u)");
    add_field_opts(cs_gauss);
    cs_gauss->add_option("--u", cs_u, "element label c0,c1,... (default 1)");
    auto* cs_hybrid = cmd_cs->add_subcommand("hybrid", "sum of chi(x) psi(u x^r)");
    add_field_opts(cs_hybrid);
    cs_hybrid->add_option("--base-degree", cs_base, "degree d of the base subfield (q = p^d)");
    cs_hybrid->add_option("--chi", cs_chi, "character exponent m: chi(g^e) = zeta^(m e)")->required();
    cs_hybrid->add_option("--u", cs_u, "base field element (index or label)");
    cs_hybrid->add_option("--r", cs_r, "power applied to x");
    auto* cs_katz = cmd_cs->add_subcommand("katz", "sum of chi(theta + alpha) over the base line");
    add_field_opts(cs_katz);
    cs_katz->add_option("--base-degree", cs_base);
    cs_katz->add_option("--chi", cs_chi)->required();
    cs_katz->add_option("--theta", cs_elem, "element label generating the extension")->required();
    auto* cs_a1 = cmd_cs->add_subcommand("a1", "|X_b(chi)|^2 identity check");
    add_field_opts(cs_a1);
    cs_a1->add_option("--chi", cs_chi)->required();
    cs_a1->add_option("--b", cs_elem, "element label (default 1)");

    // ---- count ----
    auto* cmd_count = app.add_subcommand("count", "exact counts");
    cmd_count->require_subcommand(1);
    u64 ct_q = 0, ct_m = 1, ct_r = 1;
    int ct_n = 2;
    std::string ct_beta = "0";
    auto* ct_ms = cmd_count->add_subcommand("msquares", "nonzero squares with prescribed trace");
    ct_ms->add_option("--q", ct_q)->required();
    ct_ms->add_option("--n", ct_n)->required();
    ct_ms->add_option("--beta", ct_beta, "base element (index or label)");
    auto* ct_nb = cmd_count->add_subcommand("nbeta", "m-free xi with Tr(xi^2) = beta");
    ct_nb->add_option("--q", ct_q)->required();
    ct_nb->add_option("--n", ct_n)->required();
    ct_nb->add_option("--m", ct_m)->required();
    ct_nb->add_option("--beta", ct_beta);
    auto* ct_qr = cmd_count->add_subcommand("qr", "r-free square non-4th-powers on a trace line");
    ct_qr->add_option("--q", ct_q)->required();
    ct_qr->add_option("--beta", ct_beta)->required();
    ct_qr->add_option("--r", ct_r)->required();

    // ---- check ----
    u64 ck_q = 0;
    int ck_n = 2;
    std::string ck_beta = "any", ck_crit = "auto";
    auto* cmd_check = app.add_subcommand("check", "existence criteria for a pair (q, n)");
    cmd_check->add_option("--q", ck_q)->required();
    cmd_check->add_option("--n", ck_n)->required();
    cmd_check->add_option("--beta-class", ck_beta)->check(CLI::IsMember({"zero", "nonzero", "any"}));
    cmd_check->add_option("--criterion", ck_crit)
        ->check(CLI::IsMember({"auto", "H", "N", "T", "Z", "E1", "G1", "n2", "siev4"}));

    // ---- verify ----
    u64 vf_q = 0;
    int vf_n = 2;
    std::string vf_fmt = "json";
    auto* cmd_verify = app.add_subcommand("verify", "brute-force trace coverage of a pair");
    cmd_verify->add_option("--q", vf_q)->required();
    cmd_verify->add_option("--n", vf_n)->required();
    cmd_verify->add_option("--format", vf_fmt)->check(CLI::IsMember({"json", "tsv"}));

    // ---- scan ----
    std::string sc_n = "2", sc_cache, sc_mode = "full";
    u64 sc_qmax = 0;
    int sc_jobs = 1;
    auto* cmd_scan = app.add_subcommand("scan", "table-reproduction scan over prime powers");
    cmd_scan->add_option("--n", sc_n)->check(CLI::IsMember({"2", "3", "high"}))->required();
    cmd_scan->add_option("--qmax", sc_qmax)->required();
    cmd_scan->add_option("--cache", sc_cache, "JSONL cache path (resumes if present)");
    cmd_scan->add_option("--jobs", sc_jobs);
    cmd_scan->add_option("--mode", sc_mode)->check(CLI::IsMember({"criteria", "full"}));

    // ---- table ----
    int tb_id = 1, tb_jobs = 1;
    auto* cmd_table = app.add_subcommand("table", "regenerate a table and diff it");
    cmd_table->add_option("--id", tb_id)->check(CLI::Range(1, 4))->required();
    cmd_table->add_option("--jobs", tb_jobs);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*cmd_factor) {
            Factorization f = factorize(parse_u128(factor_arg));
            Json j;
            j["value"] = to_string(f.value);
            Json fs = Json::array();
            for (auto& [p, e] : f.factors) fs.push_back({{"prime", to_string(p)}, {"exponent", e}});
            j["factors"] = fs;
            j["radical"] = to_string(f.radical());
            j["W"] = to_string(f.squarefree_divisor_count());
            std::cout << j.dump() << "\n";
        } else if (*cmd_dec) {
            QnDecomposition d = decompose(dq, dn);
            Json j;
            j["q"] = d.q;
            j["n"] = d.n;
            j["order"] = factored_string(d.order_factors);
            j["q0"] = to_string(d.q0);
            j["Q"] = factored_string(d.Q_factors);
            j["mQ"] = to_string(d.mQ);
            j["ell"] = d.ell;
            if (d.r2) j["r2"] = *d.r2;
            if (d.s2) j["s2"] = *d.s2;
            std::cout << j.dump() << "\n";
        } else if (*cmd_cs) {
            FieldCtx F(cs_p, cs_k);
            Json j;
            if (*cs_gauss) {
                GaussSum g = gauss_sum(F, F.parse(cs_u));
                j["value_re"] = g.value.real();
                j["value_im"] = g.value.imag();
                j["abs"] = std::abs(g.value);
                j["degenerate"] = g.degenerate;
            } else if (*cs_hybrid) {
                ExtensionView v(F, cs_base);
                MultChar chi{&F, cs_chi};
                FFElem u = v.base_element(parse_base_index(v, cs_u));
                SumReport rep = hybrid_sum(v, chi, u, cs_r);
                j["value_re"] = rep.value.real();
                j["value_im"] = rep.value.imag();
                j["abs"] = std::abs(rep.value);
                j["bound"] = rep.bound;
                j["tight"] = rep.tight;
                if (!rep.note.empty()) j["note"] = rep.note;
            } else if (*cs_katz) {
                ExtensionView v(F, cs_base);
                MultChar chi{&F, cs_chi};
                SumReport rep = katz_sum(v, F.parse(cs_elem), chi);
                j["value_re"] = rep.value.real();
                j["value_im"] = rep.value.imag();
                j["abs"] = std::abs(rep.value);
                j["bound"] = rep.bound;
                j["note"] = rep.note;
            } else if (*cs_a1) {
                MultChar chi{&F, cs_chi};
                FFElem b = cs_elem.empty() ? F.one() : F.parse(cs_elem);
                A1Identity a1 = a1_identity_check(F, chi, b);
                j["lhs"] = a1.lhs;
                j["rhs"] = a1.rhs;
                j["c_magnitude"] = a1.c_magnitude;
                j["c_bound"] = a1.c_bound;
                j["holds"] = a1.holds;
            }
            std::cout << j.dump() << "\n";
        } else if (*cmd_count) {
            Json j;
            if (*ct_ms) {
                u64 p = 0;
                int d = 0;
                if (!prime_power(ct_q, &p, &d) || p == 2)
                    throw std::domain_error("q must be an odd prime power");
                FieldCtx F(p, d * ct_n);
                ExtensionView v(F, d);
                FFElem beta = v.base_element(parse_base_index(v, ct_beta));
                SquareTraceCount c = count_squares_with_trace(v, beta);
                j["q"] = ct_q;
                j["n"] = ct_n;
                j["beta"] = v.base_to_string(beta);
                j["exact"] = c.exact;
                j["formula"] = c.formula;
            } else if (*ct_nb) {
                u64 p = 0;
                int d = 0;
                if (!prime_power(ct_q, &p, &d) || p == 2)
                    throw std::domain_error("q must be an odd prime power");
                FieldCtx F(p, d * ct_n);
                ExtensionView v(F, d);
                FFElem beta = v.base_element(parse_base_index(v, ct_beta));
                j["q"] = ct_q;
                j["n"] = ct_n;
                j["m"] = ct_m;
                j["beta"] = v.base_to_string(beta);
                j["count"] = count_Nbeta(v, ct_m, beta);
            } else if (*ct_qr) {
                u64 p = 0;
                int d = 0;
                if (!prime_power(ct_q, &p, &d) || p == 2)
                    throw std::domain_error("q must be an odd prime power");
                FieldCtx F(p, 2 * d);
                ExtensionView v(F, d);
                QrCount c = count_Qr_exact(ct_q, parse_base_index(v, ct_beta), ct_r);
                j["q"] = c.q;
                j["beta"] = c.beta;
                j["r"] = c.r;
                j["theta1"] = c.theta1;
                j["theta2"] = c.theta2;
                j["count"] = c.value;
            }
            std::cout << j.dump() << "\n";
        } else if (*cmd_check) {
            BetaClass bc = ck_beta == "zero"      ? BetaClass::Zero
                           : ck_beta == "nonzero" ? BetaClass::NonZero
                                                  : BetaClass::Any;
            auto reports = check_criterion(ck_q, ck_n, ck_crit, bc);
            Json j = Json::array();
            for (auto& r : reports) j.push_back(report_to_json(r));
            std::cout << j.dump() << "\n";
        } else if (*cmd_verify) {
            TraceCoverage cov = verify_pair(vf_q, vf_n);
            if (vf_fmt == "tsv") {
                std::cout << "q\tn\tcovered\ttotal\n";
                std::cout << cov.q << "\t" << cov.n << "\t" << (cov.covered ? "true" : "false")
                          << "\t" << cov.total << "\n";
                std::cout << "trace\tcount\n";
                for (auto& [label, cnt] : cov.counts_by_label)
                    std::cout << label << "\t" << cnt << "\n";
            } else {
                Json j;
                j["q"] = cov.q;
                j["n"] = cov.n;
                {
                    u64 p = 0;
                    int d = 0;
                    prime_power(vf_q, &p, &d);
                    FieldCtx F(p, d * vf_n);
                    j["field"] = {{"p", p}, {"k", d * vf_n}, {"modulus", F.modulus()}};
                }
                j["covered"] = cov.covered;
                j["total"] = cov.total;
                Json tr = Json::object();
                for (auto& [label, cnt] : cov.counts_by_label) tr[label] = cnt;
                j["traces"] = tr;
                Json miss = Json::array();
                for (auto& s : cov.labels_missing) miss.push_back(s);
                j["missing"] = miss;
                std::cout << j.dump() << "\n";
            }
        } else if (*cmd_scan) {
            int nm = sc_n == "high" ? 0 : std::stoi(sc_n);
            ScanMode mode = sc_mode == "full" ? ScanMode::Full : ScanMode::CriteriaOnly;
            std::vector<ScanRecord> recs;
            if (sc_cache.empty())
                recs = scan(nm, sc_qmax, mode, sc_jobs);
            else
                recs = scan_with_cache(nm, sc_qmax, mode, sc_jobs, sc_cache, &std::cerr);
            u64 proved = 0, brute = 0, exceptions = 0, unresolved = 0;
            for (auto& rec : recs) {
                if (rec.status == "proved-theoretically") ++proved;
                else if (rec.status == "verified-by-brute-force") ++brute;
                else if (rec.status == "genuine-exception") ++exceptions;
                else ++unresolved;
            }
            Json j;
            j["records"] = recs.size();
            j["proved_theoretically"] = proved;
            j["verified_by_brute_force"] = brute;
            j["genuine_exceptions"] = exceptions;
            j["unresolved"] = unresolved;
            std::cout << j.dump() << "\n";
        } else if (*cmd_table) {
            TableCheck t = reproduce_table(tb_id, tb_jobs);
            std::cout << t.rendered;
            if (!t.diffs.empty()) {
                for (auto& d : t.diffs) std::cerr << "DIFF: " << d << "\n";
                return 1;
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
