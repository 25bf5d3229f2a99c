// arclab command-line front end: instance parsing, subcommand dispatch,
// deterministic sampling, and report emission in csv / json / ascii form.
//
// Exit status: 0 = all requested checks pass, 1 = a check failed,
// 2 = invalid instance or configuration. Reports are byte-identical for
// identical (configuration, seed) regardless of --threads; elapsed_ms is
// reported as 0 unless --timing is given, so that timing noise never
// breaks reproducibility.

#include <CLI11.hpp>
#include <json.hpp>

#include <arclab/arcs.hpp>
#include <arclab/errors.hpp>
#include <arclab/expsum.hpp>
#include <arclab/ff.hpp>
#include <arclab/minor.hpp>
#include <arclab/poly.hpp>
#include <arclab/specseq.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace es = arclab::expsum;
namespace mn = arclab::minor;
namespace sq = arclab::specseq;
using arclab::DomainError;
using arclab::GuardError;
using arclab::InstanceError;
using ordered_json = nlohmann::ordered_json;

namespace {

constexpr const char* kTool = "arclab";
constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------- options

struct Options {
    std::string format = "json";  // csv | json | ascii
    std::string out;              // empty = stdout
    std::uint64_t seed = 0;
    std::uint64_t max_enum = es::kDefaultGuard;
    unsigned threads = 1;
    bool timing = false;

    std::string instance_path;
    std::string check;
    int p = 5, kd = 0, n = 0, k = 0, d = 0;
    int m = -1;
    int prec = 8;
    int trials = 50;
    long long samples = -1;  // -1 = per-check default
};

void add_common(CLI::App* sub, Options& opt) {
    sub->add_option("--format", opt.format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "ascii"}))
        ->capture_default_str();
    sub->add_option("--out", opt.out, "Write the report to a file instead of stdout");
    sub->add_option("--seed", opt.seed, "Seed for all randomized sampling")->capture_default_str();
    sub->add_option("--max-enum", opt.max_enum, "Enumeration size guard override")
        ->capture_default_str();
    sub->add_option("--threads", opt.threads, "Worker threads (never changes results)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_flag("--timing", opt.timing, "Report real elapsed_ms (breaks byte-reproducibility)");
}

// ---------------------------------------------------------------- reports

struct Report {
    std::string subcommand;
    ordered_json params = ordered_json::object();
    ordered_json results = ordered_json::object();
    std::vector<std::string> violations;
    std::string csv;     // complete table, '\n' separated
    std::string ascii;   // human-readable block
    long long elapsed_ms = 0;
};

std::string fmt_double(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(12) << v;
    return os.str();
}

std::string tail_str(const arclab::poly::LaurentTail& b) {
    std::string s = "(";
    for (std::size_t i = 0; i < b.b.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(b.b[i]);
    }
    return s + ")";
}

int emit(const Report& rep, const Options& opt) {
    std::string body;
    if (opt.format == "json") {
        ordered_json j;
        j["tool"] = kTool;
        j["version"] = kVersion;
        j["subcommand"] = rep.subcommand;
        j["params"] = rep.params;
        j["results"] = rep.results;
        j["violations"] = rep.violations;
        j["elapsed_ms"] = rep.elapsed_ms;
        body = j.dump(2) + "\n";
    } else if (opt.format == "csv") {
        body = rep.csv;
        if (!body.empty() && body.back() != '\n') body += '\n';
        for (const auto& v : rep.violations) body += "violation," + v + "\n";
    } else {
        body = rep.ascii;
        if (!body.empty() && body.back() != '\n') body += '\n';
        if (rep.violations.empty()) {
            body += "PASS\n";
        } else {
            body += "FAIL: " + std::to_string(rep.violations.size()) + " violation(s)\n";
            for (const auto& v : rep.violations) body += "  " + v + "\n";
        }
    }
    if (opt.out.empty()) {
        std::cout << body;
    } else {
        std::ofstream f(opt.out);
        if (!f) throw DomainError("cannot open output file: " + opt.out);
        f << body;
    }
    return rep.violations.empty() ? 0 : 1;
}

void echo_common(Report& rep, const Options& opt) {
    rep.params["seed"] = opt.seed;
    rep.params["max_enum"] = opt.max_enum;
    rep.params["format"] = opt.format;
}

// ---------------------------------------------------------------- instance files

// Flat key=value text: p=7 / k=3 / n=3 / d=2 / P=1,6,0 /
// f=3,0,0:1;0,3,0:1;0,0,3:1;0,0,0:1 (exponent vector : coefficient).
struct ParsedInstance {
    es::MorInstance inst;
    std::string path;
    std::string f_text;  // canonical re-serialization
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

int parse_int(const std::string& s, const std::string& what) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(trim(s), &pos);
        if (pos != trim(s).size()) throw DomainError("trailing characters in " + what + ": " + s);
        if (v < -1000000000LL || v > 1000000000LL) throw DomainError(what + " out of range: " + s);
        return static_cast<int>(v);
    } catch (const std::invalid_argument&) {
        throw DomainError("cannot parse " + what + ": '" + s + "'");
    } catch (const std::out_of_range&) {
        throw DomainError(what + " out of range: " + s);
    }
}

ParsedInstance load_instance(const std::string& path, std::uint64_t max_enum) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open instance file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(f, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) throw DomainError("instance line without '=': " + line);
        const std::string key = trim(line.substr(0, eq));
        if (kv.count(key)) throw DomainError("duplicate instance key: " + key);
        kv[key] = trim(line.substr(eq + 1));
    }
    for (const char* req : {"p", "k", "n", "d", "P", "f"})
        if (!kv.count(req)) throw DomainError(std::string("instance file missing key: ") + req);
    for (const auto& [key, val] : kv)
        if (key != "p" && key != "k" && key != "n" && key != "d" && key != "P" && key != "f")
            throw DomainError("unknown instance key: " + key);

    const int p = parse_int(kv["p"], "p");
    const int k = parse_int(kv["k"], "k");
    const int n = parse_int(kv["n"], "n");
    const int d = parse_int(kv["d"], "d");

    std::vector<int> P;
    for (const auto& part : split(kv["P"], ',')) P.push_back(parse_int(part, "P entry"));

    std::vector<es::Monomial> terms;
    for (const auto& term : split(kv["f"], ';')) {
        const auto halves = split(term, ':');
        if (halves.size() != 2) throw DomainError("malformed f term (want exps:coeff): " + term);
        es::Monomial mono;
        for (const auto& e : split(halves[0], ',')) mono.exps.push_back(parse_int(e, "exponent"));
        mono.coeff = parse_int(halves[1], "coefficient");
        terms.push_back(std::move(mono));
    }

    ParsedInstance out;
    out.inst = es::make_instance(p, k, n, d, std::move(terms), std::move(P), max_enum);
    out.path = path;
    for (std::size_t t = 0; t < out.inst.f.size(); ++t) {
        if (t) out.f_text += ';';
        for (std::size_t j = 0; j < out.inst.f[t].exps.size(); ++j) {
            if (j) out.f_text += ',';
            out.f_text += std::to_string(out.inst.f[t].exps[j]);
        }
        out.f_text += ':' + std::to_string(out.inst.f[t].coeff);
    }
    return out;
}

void echo_instance(Report& rep, const ParsedInstance& pi) {
    ordered_json j;
    j["path"] = pi.path;
    j["p"] = pi.inst.p;
    j["k"] = pi.inst.k;
    j["n"] = pi.inst.n;
    j["d"] = pi.inst.d;
    j["P"] = pi.inst.P;
    j["f"] = pi.f_text;
    rep.params["instance"] = std::move(j);
}

// ---------------------------------------------------------------- subcommands

Report run_strata(const Options& opt) {
    const auto table = arclab::arcs::enumerate_strata(opt.p, opt.kd, opt.max_enum, opt.threads);

    Report rep;
    rep.subcommand = "strata";
    rep.params["p"] = opt.p;
    rep.params["kd"] = opt.kd;
    echo_common(rep, opt);

    ordered_json rows = ordered_json::array();
    std::string csv = "m,card_stratum,card_Um\n";
    std::ostringstream ascii;
    ascii << "strata of the coefficient space  p=" << opt.p << " kd=" << opt.kd << "\n";
    ascii << std::setw(4) << "m" << std::setw(16) << "card_stratum" << std::setw(12) << "card_Um"
          << "\n";
    for (const auto& row : table.rows) {
        ordered_json r;
        r["m"] = row.m;
        r["card_stratum"] = row.card_stratum;
        r["card_Um"] = row.card_Um;
        rows.push_back(std::move(r));
        csv += std::to_string(row.m) + "," + std::to_string(row.card_stratum) + "," +
               std::to_string(row.card_Um) + "\n";
        ascii << std::setw(4) << row.m << std::setw(16) << row.card_stratum << std::setw(12)
              << row.card_Um << "\n";
    }
    rep.results["rows"] = std::move(rows);
    rep.results["total"] = table.total();
    ascii << "total = " << table.total() << "\n";
    rep.csv = csv;
    rep.ascii = ascii.str();
    return rep;
}

Report run_count_mor(const Options& opt) {
    const auto pi = load_instance(opt.instance_path, opt.max_enum);
    const auto hist = es::build_histogram(pi.inst, opt.max_enum, opt.threads);
    const auto count = es::count_mor(hist);

    Report rep;
    rep.subcommand = "count-mor";
    echo_instance(rep, pi);
    echo_common(rep, opt);
    rep.results["count_mor"] = count;
    rep.results["domain"] = hist.total;
    rep.results["nonzero_cells"] = static_cast<std::int64_t>(hist.cells.size());
    rep.csv = "count_mor,domain\n" + std::to_string(count) + "," + std::to_string(hist.total) + "\n";
    rep.ascii = "count_mor = " + std::to_string(count) + "  (domain " + std::to_string(hist.total) +
                ", " + std::to_string(hist.cells.size()) + " occupied cells)\n";
    return rep;
}

// Enumerate monic polynomials of the given degree, ascending index order.
std::vector<arclab::poly::FqPoly> monic_of_degree(int p, int deg, std::uint64_t max_enum) {
    const std::uint64_t total = es::checked_pow(p, deg, max_enum);
    std::vector<arclab::poly::FqPoly> out;
    out.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::vector<int> c(static_cast<std::size_t>(deg) + 1, 0);
        std::uint64_t rem = idx;
        for (int i = 0; i < deg; ++i) {
            c[static_cast<std::size_t>(i)] = static_cast<int>(rem % static_cast<std::uint64_t>(p));
            rem /= static_cast<std::uint64_t>(p);
        }
        c[static_cast<std::size_t>(deg)] = 1;
        out.emplace_back(p, std::move(c));
    }
    return out;
}

Report run_sweep(const Options& opt) {
    const auto pi = load_instance(opt.instance_path, opt.max_enum);
    const auto& inst = pi.inst;

    Report rep;
    rep.subcommand = "sweep";
    rep.params["check"] = opt.check;
    if (opt.m >= 0) rep.params["m"] = opt.m;
    echo_instance(rep, pi);
    echo_common(rep, opt);
    std::ostringstream ascii;
    ascii << "sweep check '" << opt.check << "' on " << pi.path << "\n";

    if (opt.check == "orthogonality") {
        const auto hist = es::build_histogram(inst, opt.max_enum, opt.threads);
        const auto r = es::check_orthogonality(hist);
        rep.results["mor_count"] = r.mor_count;
        rep.results["aggregate"] = r.aggregate.counts;
        rep.results["expected"] = r.expected.counts;
        rep.results["pass"] = r.pass;
        if (!r.pass) rep.violations.push_back("aggregate count vector differs from the closed form");
        rep.csv = "check,mor_count,pass\northogonality," + std::to_string(r.mor_count) + "," +
                  (r.pass ? "1" : "0") + "\n";
        ascii << "mor_count = " << r.mor_count << "\n";
    } else if (opt.check == "infinity") {
        if (opt.m < 0) throw DomainError("sweep --check infinity requires --m");
        const auto hist = es::build_histogram(inst, opt.max_enum, opt.threads);
        const auto r = es::check_infinity_vanishing(inst, hist, opt.m, opt.threads);
        rep.results["m"] = r.m;
        rep.results["tested"] = r.tested;
        rep.results["violators"] = static_cast<std::int64_t>(r.violators.size());
        for (const auto& b : r.violators) rep.violations.push_back("nonuniform b=" + tail_str(b));
        rep.csv = "check,m,tested,violators\ninfinity," + std::to_string(r.m) + "," +
                  std::to_string(r.tested) + "," + std::to_string(r.violators.size()) + "\n";
        ascii << "tested " << r.tested << " uncharted level-" << r.m << " tails\n";
    } else if (opt.check == "power") {
        std::int64_t tested = 0;
        for (int deg = 2; deg <= inst.d; ++deg) {
            for (const auto& h2 : monic_of_degree(inst.p, deg, opt.max_enum)) {
                if (arclab::poly::is_squarefree(h2)) continue;
                ++tested;
                if (!es::check_power_vanishing(inst, h2))
                    rep.violations.push_back("nonuniform aggregate at h2=" +
                                             arclab::poly::to_string(h2));
            }
        }
        rep.results["tested"] = tested;
        rep.results["violators"] = static_cast<std::int64_t>(rep.violations.size());
        rep.csv = "check,tested,violators\npower," + std::to_string(tested) + "," +
                  std::to_string(rep.violations.size()) + "\n";
        ascii << "tested " << tested << " non-squarefree monic moduli of degree <= " << inst.d
              << "\n";
    } else if (opt.check == "factorisation") {
        std::int64_t pairs = 0;
        for (int d1 = 1; d1 <= inst.d - 1; ++d1) {
            for (int d2 = d1; d1 + d2 <= inst.d; ++d2) {
                const auto l1s = monic_of_degree(inst.p, d1, opt.max_enum);
                const auto l2s = monic_of_degree(inst.p, d2, opt.max_enum);
                for (std::size_t i = 0; i < l1s.size(); ++i) {
                    const std::size_t j0 = (d1 == d2) ? i + 1 : 0;
                    for (std::size_t j = j0; j < l2s.size(); ++j) {
                        if (arclab::poly::poly_gcd(l1s[i], l2s[j]).deg() != 0) continue;
                        ++pairs;
                        if (!es::check_factorisation(inst, l1s[i], l2s[j]))
                            rep.violations.push_back(
                                "aggregate at product differs from convolution: l1=" +
                                arclab::poly::to_string(l1s[i]) + " l2=" +
                                arclab::poly::to_string(l2s[j]));
                    }
                }
            }
        }
        rep.results["pairs"] = pairs;
        rep.results["violators"] = static_cast<std::int64_t>(rep.violations.size());
        rep.csv = "check,pairs,violators\nfactorisation," + std::to_string(pairs) + "," +
                  std::to_string(rep.violations.size()) + "\n";
        ascii << "tested " << pairs << " coprime monic pairs with deg(l1 l2) <= " << inst.d << "\n";
    } else if (opt.check == "mainterm") {
        const auto r = es::check_mainterm(inst);
        rep.results["points_on_X"] = r.points_on_X;
        rep.results["psi_re"] = r.psi_value.real();
        rep.results["psi_im"] = r.psi_value.imag();
        rep.results["expected_psi"] = r.expected_psi;
        rep.results["x_independent"] = r.x_independent;
        rep.results["counts_match"] = r.counts_match;
        if (!r.x_independent) rep.violations.push_back("degree-one aggregates depend on the root");
        if (!r.counts_match) rep.violations.push_back("aggregate differs from the predicted counts");
        rep.csv = "check,points_on_X,psi,expected_psi,pass\nmainterm," +
                  std::to_string(r.points_on_X) + "," + fmt_double(r.psi_value.real()) + "," +
                  fmt_double(r.expected_psi) + "," + (r.pass ? "1" : "0") + "\n";
        ascii << "#X(F_p) = " << r.points_on_X << "  psi-sum = " << fmt_double(r.psi_value.real())
              << "  expected = " << fmt_double(r.expected_psi) << "\n";
    } else if (opt.check == "residue") {
        if (opt.m < 1 || opt.m > inst.d) throw DomainError("sweep --check residue requires 1 <= m <= d");
        const auto hist = es::build_histogram(inst, opt.max_enum, opt.threads);
        const std::uint64_t total = es::checked_pow(inst.p, inst.kd(), opt.max_enum);
        std::int64_t tested = 0;
        for (std::uint64_t idx = 0; idx < total; ++idx) {
            const auto b = arclab::arcs::tail_from_index(inst.p, inst.kd(), idx);
            if (arclab::arcs::arc_level(b) != opt.m) continue;
            if (!arclab::arcs::in_Um(b)) continue;
            ++tested;
            if (!es::check_residue_reduction(inst, hist, b))
                rep.violations.push_back("reduction failed at b=" + tail_str(b));
        }
        rep.results["m"] = opt.m;
        rep.results["tested"] = tested;
        rep.results["violators"] = static_cast<std::int64_t>(rep.violations.size());
        rep.csv = "check,m,tested,violators\nresidue," + std::to_string(opt.m) + "," +
                  std::to_string(tested) + "," + std::to_string(rep.violations.size()) + "\n";
        ascii << "tested " << tested << " charted level-" << opt.m << " tails\n";
    } else if (opt.check == "stratum-sum") {
        if (opt.m < 0) throw DomainError("sweep --check stratum-sum requires --m");
        const auto hist = es::build_histogram(inst, opt.max_enum, opt.threads);
        const auto sw = es::sweep(hist, opt.max_enum, opt.threads);
        const auto r = es::stratum_sum(inst, hist, sw, opt.m);
        rep.results["m"] = r.m;
        rep.results["direct_re"] = r.direct.real();
        rep.results["direct_im"] = r.direct.imag();
        rep.results["assembled_re"] = r.assembled.real();
        rep.results["assembled_im"] = r.assembled.imag();
        rep.results["pass"] = r.pass;
        if (!r.pass) rep.violations.push_back("direct and assembled stratum sums disagree");
        rep.csv = "check,m,direct_re,direct_im,assembled_re,assembled_im,pass\nstratum-sum," +
                  std::to_string(r.m) + "," + fmt_double(r.direct.real()) + "," +
                  fmt_double(r.direct.imag()) + "," + fmt_double(r.assembled.real()) + "," +
                  fmt_double(r.assembled.imag()) + "," + (r.pass ? "1" : "0") + "\n";
        ascii << "direct = " << fmt_double(r.direct.real()) << " + " << fmt_double(r.direct.imag())
              << "i,  assembled = " << fmt_double(r.assembled.real()) << " + "
              << fmt_double(r.assembled.imag()) << "i\n";
    } else {
        throw DomainError("unknown sweep check: " + opt.check);
    }

    rep.ascii = ascii.str();
    return rep;
}

Report run_e1(const Options& opt) {
    const auto page = sq::e1_page(opt.n, opt.k, opt.d);

    Report rep;
    rep.subcommand = "e1";
    rep.params["n"] = opt.n;
    rep.params["k"] = opt.k;
    rep.params["d"] = opt.d;
    echo_common(rep, opt);

    ordered_json entries = ordered_json::array();
    std::string csv = "m,s,dim,twist\n";
    for (const auto& e : page.entries) {
        ordered_json je;
        je["m"] = e.m;
        je["s"] = e.s;
        je["dim"] = e.dim.str();
        je["twist"] = e.twist;
        entries.push_back(std::move(je));
        csv += std::to_string(e.m) + "," + std::to_string(e.s) + "," + e.dim.str() + "," +
               std::to_string(e.twist) + "\n";
    }
    rep.results["N"] = page.N.str();
    rep.results["entries"] = std::move(entries);
    rep.csv = csv;

    // Triangle in the shape of the first-page support: rows s downward from 0,
    // columns m; every cell shows dim(twist); cell width is fixed by the
    // widest dimension on the page.
    int s_min = 0;
    std::size_t width = 1;
    std::map<std::pair<int, int>, std::string> cell;
    for (const auto& e : page.entries) {
        s_min = std::min(s_min, e.s);
        std::string text = e.dim.str() + "(" + std::to_string(e.twist) + ")";
        width = std::max(width, text.size());
        cell[{e.s, e.m}] = std::move(text);
    }
    std::ostringstream ascii;
    ascii << "E1 page  n=" << opt.n << " k=" << opt.k << " d=" << opt.d << "  N=" << page.N.str()
          << "\n";
    const int label_w = static_cast<int>(std::string("s=" + std::to_string(s_min)).size());
    ascii << std::setw(label_w) << "" << " ";
    for (int m = 0; m <= opt.d; ++m)
        ascii << " " << std::setw(static_cast<int>(width)) << ("m=" + std::to_string(m));
    ascii << "\n";
    for (int s = 0; s >= s_min; --s) {
        ascii << std::setw(label_w) << ("s=" + std::to_string(s)) << " ";
        for (int m = 0; m <= opt.d; ++m) {
            const auto it = cell.find({s, m});
            ascii << " " << std::setw(static_cast<int>(width))
                  << (it == cell.end() ? std::string() : it->second);
        }
        ascii << "\n";
    }
    rep.ascii = ascii.str();
    return rep;
}

Report run_window(const Options& opt) {
    const auto w = sq::stable_window(opt.d, opt.k, opt.n);

    Report rep;
    rep.subcommand = "window";
    rep.params["d"] = opt.d;
    rep.params["k"] = opt.k;
    rep.params["n"] = opt.n;
    echo_common(rep, opt);

    rep.results["theorem_threshold"] = w.theorem_threshold.str();
    rep.results["minor_threshold"] = w.minor_threshold.str();
    rep.results["n_range_ok"] = w.n_range_ok;
    rep.results["theorem_hypothesis_ok"] = w.theorem_hypothesis_ok;
    ordered_json gaps = ordered_json::array();
    std::string csv = "key,value\n";
    csv += "theorem_threshold," + w.theorem_threshold.str() + "\n";
    csv += "minor_threshold," + w.minor_threshold.str() + "\n";
    csv += std::string("n_range_ok,") + (w.n_range_ok ? "1" : "0") + "\n";
    csv += std::string("theorem_hypothesis_ok,") + (w.theorem_hypothesis_ok ? "1" : "0") + "\n";
    for (std::size_t i = 0; i < w.cor_stable_gaps.size(); ++i) {
        const auto& [lo, hi] = w.cor_stable_gaps[i];
        ordered_json g;
        g["m"] = static_cast<int>(i + 1);
        g["lo"] = lo;
        g["hi"] = hi;
        gaps.push_back(std::move(g));
        csv += "gap_" + std::to_string(i + 1) + "," + std::to_string(lo) + ".." +
               std::to_string(hi) + "\n";
    }
    rep.results["stable_gaps"] = std::move(gaps);
    rep.csv = csv;

    std::ostringstream ascii;
    ascii << "stable window  d=" << opt.d << " k=" << opt.k << " n=" << opt.n << "\n";
    ascii << "  theorem threshold   " << w.theorem_threshold.str() << "\n";
    ascii << "  minor threshold     " << w.minor_threshold.str() << "\n";
    ascii << "  n range ok          " << (w.n_range_ok ? "yes" : "no") << "\n";
    ascii << "  theorem hypothesis  " << (w.theorem_hypothesis_ok ? "yes" : "no") << "\n";
    for (std::size_t i = 0; i < w.cor_stable_gaps.size(); ++i)
        ascii << "  gap m=" << (i + 1) << "   [" << w.cor_stable_gaps[i].first << ", "
              << w.cor_stable_gaps[i].second << "]\n";
    rep.ascii = ascii.str();
    return rep;
}

Report run_diffs(const Options& opt) {
    const auto diffs = sq::feasible_differentials(opt.n, opt.d);

    Report rep;
    rep.subcommand = "diffs";
    rep.params["n"] = opt.n;
    rep.params["d"] = opt.d;
    echo_common(rep, opt);

    ordered_json rows = ordered_json::array();
    std::string csv = "m,s,r,target_m,target_s\n";
    std::ostringstream ascii;
    ascii << "support-compatible differentials  n=" << opt.n << " d=" << opt.d << "\n";
    for (const auto& dd : diffs) {
        ordered_json r;
        r["m"] = dd.m;
        r["s"] = dd.s;
        r["r"] = dd.r;
        r["target_m"] = dd.m + dd.r;
        r["target_s"] = dd.s - dd.r + 1;
        rows.push_back(std::move(r));
        csv += std::to_string(dd.m) + "," + std::to_string(dd.s) + "," + std::to_string(dd.r) +
               "," + std::to_string(dd.m + dd.r) + "," + std::to_string(dd.s - dd.r + 1) + "\n";
        ascii << "  d_" << dd.r << ": (" << dd.m << ", " << dd.s << ") -> (" << dd.m + dd.r << ", "
              << dd.s - dd.r + 1 << ")\n";
    }
    rep.results["count"] = static_cast<std::int64_t>(diffs.size());
    rep.results["differentials"] = std::move(rows);
    rep.csv = csv;
    if (diffs.empty()) ascii << "  (none)\n";
    rep.ascii = ascii.str();
    return rep;
}

arclab::poly::LaurentTail random_tail(int p, int kd, std::mt19937_64& rng) {
    std::vector<int> b(static_cast<std::size_t>(kd));
    for (auto& v : b) v = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
    return arclab::poly::LaurentTail(p, std::move(b));
}

mn::LaurentMat random_sym_mat(int p, int n, int prec, std::mt19937_64& rng) {
    std::vector<std::vector<int>> g(static_cast<std::size_t>(n * n),
                                    std::vector<int>(static_cast<std::size_t>(prec)));
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            for (auto& v : g[static_cast<std::size_t>(i * n + j)])
                v = static_cast<int>(rng() % static_cast<std::uint64_t>(p));
            g[static_cast<std::size_t>(j * n + i)] = g[static_cast<std::size_t>(i * n + j)];
        }
    return mn::make_laurent_mat(p, n, prec, std::move(g));
}

// A random polynomial of degree exactly k in nv variables: a handful of
// degree-k monomials (resampled until the merged leading form is nonzero)
// plus lower-order noise.
std::vector<es::Monomial> random_poly(int p, int nv, int k, std::mt19937_64& rng) {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<es::Monomial> terms;
        std::map<std::vector<int>, long long> lead;
        for (int t = 0; t < 4; ++t) {
            std::vector<int> exps(static_cast<std::size_t>(nv), 0);
            for (int left = 0; left < k; ++left)
                exps[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(nv))]++;
            const long long coeff = static_cast<long long>(rng() % static_cast<std::uint64_t>(p));
            lead[exps] += coeff;
            terms.push_back({std::move(exps), coeff});
        }
        for (int t = 0; t < 2; ++t) {
            std::vector<int> exps(static_cast<std::size_t>(nv), 0);
            const int deg = static_cast<int>(rng() % static_cast<std::uint64_t>(k));
            for (int left = 0; left < deg; ++left)
                exps[static_cast<std::size_t>(rng() % static_cast<std::uint64_t>(nv))]++;
            terms.push_back({std::move(exps), static_cast<long long>(
                                                  rng() % static_cast<std::uint64_t>(p))});
        }
        for (const auto& [exps, c] : lead)
            if (c % p != 0) return terms;
    }
    throw GuardError("random_poly: could not draw a nonzero leading form");
}

Report run_minor(const Options& opt) {
    const auto pi = load_instance(opt.instance_path, opt.max_enum);
    const auto& inst = pi.inst;

    Report rep;
    rep.subcommand = "minor";
    rep.params["check"] = opt.check;
    if (opt.m >= 0) rep.params["m"] = opt.m;
    echo_instance(rep, pi);
    echo_common(rep, opt);
    std::ostringstream ascii;
    ascii << "minor-arc check '" << opt.check << "' on " << pi.path << "\n";

    std::mt19937_64 rng(opt.seed);

    if (opt.check == "nalpha") {
        const long long samples = opt.samples < 0 ? 50 : opt.samples;
        rep.params["samples"] = samples;
        const auto f0 = mn::sym_form(inst);
        long long mismatches = 0;
        for (long long t = 0; t < samples; ++t) {
            const auto b = random_tail(inst.p, inst.kd(), rng);
            const long long sys = mn::count_system(f0, b, inst.d, opt.max_enum, opt.threads);
            const long long direct = mn::count_Nalpha(f0, b, inst.d, opt.max_enum, opt.threads);
            if (sys != direct) {
                ++mismatches;
                rep.violations.push_back("count mismatch at b=" + tail_str(b) + ": system=" +
                                         std::to_string(sys) + " direct=" + std::to_string(direct));
            }
        }
        rep.results["samples"] = samples;
        rep.results["mismatches"] = mismatches;
        rep.csv = "check,samples,mismatches\nnalpha," + std::to_string(samples) + "," +
                  std::to_string(mismatches) + "\n";
        ascii << samples << " random tails, " << mismatches << " mismatches\n";
    } else if (opt.check == "weyl") {
        const long long samples = opt.samples < 0 ? 100 : opt.samples;
        rep.params["samples"] = samples;
        long long failures = 0;
        for (long long t = 0; t < samples; ++t) {
            const int nv = 1 + static_cast<int>(rng() % 4);
            const auto terms = random_poly(inst.p, nv, inst.k, rng);
            const auto r = mn::weyl_check(inst.p, nv, inst.k, terms, opt.max_enum);
            if (!r.pass()) {
                ++failures;
                rep.violations.push_back(
                    "weyl chain failed at sample " + std::to_string(t) + " (nvars=" +
                    std::to_string(nv) + "): conj=" + (r.conj_ok ? "ok" : "BAD") + " shear=" +
                    (r.shear_ok ? "ok" : "BAD") + " bound=" + (r.weyl_ok ? "ok" : "BAD"));
            }
        }
        rep.results["samples"] = samples;
        rep.results["failures"] = failures;
        rep.csv = "check,samples,failures\nweyl," + std::to_string(samples) + "," +
                  std::to_string(failures) + "\n";
        ascii << samples << " random degree-" << inst.k << " forms, " << failures << " failures\n";
    } else if (opt.check == "shrink") {
        const long long samples = opt.samples < 0 ? 50 : opt.samples;
        rep.params["samples"] = samples;
        rep.params["prec"] = opt.prec;
        long long failures = 0;
        for (long long t = 0; t < samples; ++t) {
            const auto gamma = random_sym_mat(inst.p, inst.n, opt.prec, rng);
            const int a = static_cast<int>(rng() % 4);
            const int c = 1 + static_cast<int>(rng() % 3);
            const int s = static_cast<int>(rng() % 4);
            const auto r = mn::shrink_check(gamma, a, c, s, opt.max_enum);
            if (!r.pass) {
                ++failures;
                rep.violations.push_back("shrink bound failed at sample " + std::to_string(t) +
                                         " (a=" + std::to_string(a) + " c=" + std::to_string(c) +
                                         " s=" + std::to_string(s) + "): ratio=" +
                                         fmt_double(r.ratio) + " bound=" + fmt_double(r.bound));
            }
        }
        rep.results["samples"] = samples;
        rep.results["failures"] = failures;
        rep.csv = "check,samples,failures\nshrink," + std::to_string(samples) + "," +
                  std::to_string(failures) + "\n";
        ascii << samples << " random shrink configurations, " << failures << " failures\n";
    } else if (opt.check == "bound") {
        if (opt.m < 0) throw DomainError("minor --check bound requires --m");
        const long long samples = opt.samples < 0 ? 0 : opt.samples;
        rep.params["samples"] = samples;
        const auto r = mn::minor_bound_check(inst, opt.m, samples, opt.seed, opt.max_enum,
                                             opt.threads);
        rep.results["m"] = r.m;
        rep.results["tested"] = r.tested;
        rep.results["max_count"] = r.max_count;
        rep.results["denom"] = r.denom;
        rep.results["max_ratio"] = r.max_ratio;
        rep.results["argmax_b"] = r.argmax_b;
        std::string argmax = "(";
        for (std::size_t i = 0; i < r.argmax_b.size(); ++i) {
            if (i) argmax += ' ';
            argmax += std::to_string(r.argmax_b[i]);
        }
        argmax += ")";
        rep.csv = "check,m,tested,max_count,denom,max_ratio,argmax_b\nbound," +
                  std::to_string(r.m) + "," + std::to_string(r.tested) + "," +
                  std::to_string(r.max_count) + "," + fmt_double(r.denom) + "," +
                  fmt_double(r.max_ratio) + "," + argmax + "\n";
        ascii << "tested " << r.tested << " tails outside the level-" << r.m
              << " arcs: max count " << r.max_count << ", ratio " << fmt_double(r.max_ratio)
              << " at b=" << argmax << "\n";
    } else if (opt.check == "dimfit") {
        const auto r = mn::dimv_fit_report(mn::sym_form(inst), opt.max_enum);
        rep.results["n1"] = r.n1;
        rep.results["n2"] = r.n2;
        rep.results["d_hat"] = r.d_hat;
        rep.results["c1"] = r.c1;
        rep.results["c2"] = r.c2;
        rep.results["dim_ok"] = r.dim_ok;
        rep.results["langweil_ok"] = r.langweil_ok;
        if (!r.dim_ok)
            rep.violations.push_back("fitted dimension " + std::to_string(r.d_hat) +
                                     " exceeds (k-2) n");
        if (!r.langweil_ok)
            rep.violations.push_back("leading constants differ by more than a factor 2");
        rep.csv = "check,n1,n2,d_hat,c1,c2,dim_ok,langweil_ok\ndimfit," + std::to_string(r.n1) +
                  "," + std::to_string(r.n2) + "," + std::to_string(r.d_hat) + "," +
                  fmt_double(r.c1) + "," + fmt_double(r.c2) + "," + (r.dim_ok ? "1" : "0") + "," +
                  (r.langweil_ok ? "1" : "0") + "\n";
        ascii << "point counts " << r.n1 << " / " << r.n2 << " fit dimension " << r.d_hat << "\n";
    } else {
        throw DomainError("unknown minor check: " + opt.check);
    }

    rep.ascii = ascii.str();
    return rep;
}

Report run_lattice(const Options& opt) {
    arclab::ff::PrimeField{opt.p};  // validates the modulus

    Report rep;
    rep.subcommand = "lattice";
    rep.params["p"] = opt.p;
    rep.params["n"] = opt.n;
    rep.params["prec"] = opt.prec;
    rep.params["trials"] = opt.trials;
    echo_common(rep, opt);

    std::mt19937_64 rng(opt.seed);
    long long failures = 0;
    for (int t = 0; t < opt.trials; ++t) {
        const int n = opt.n > 0 ? opt.n : 1 + (t % 2);
        const auto gamma = random_sym_mat(opt.p, n, opt.prec, rng);
        const int a = static_cast<int>(rng() % 4);
        const int c = 1 + static_cast<int>(rng() % 3);
        const int s = static_cast<int>(rng() % 4);
        const std::string where = "trial " + std::to_string(t) + " (n=" + std::to_string(n) +
                                  " a=" + std::to_string(a) + " c=" + std::to_string(c) + " s=" +
                                  std::to_string(s) + ")";
        bool bad = false;

        const auto min_rep = mn::lattice_minima(gamma, a, c);
        const long long brute = mn::lattice_brute_count(gamma, a, c, opt.max_enum);
        if (min_rep.lee != brute) {
            rep.violations.push_back(where + ": Lee count " + std::to_string(min_rep.lee) +
                                     " != brute count " + std::to_string(brute));
            bad = true;
        }
        const auto dual = mn::dual_minima(gamma, a, c);
        for (int i = 0; i < 2 * n; ++i)
            if (min_rep.rho[static_cast<std::size_t>(i)] +
                    dual[static_cast<std::size_t>(2 * n - 1 - i)] !=
                c - a) {
                rep.violations.push_back(where + ": duality defect at index " + std::to_string(i));
                bad = true;
                break;
            }
        if (!mn::shrink_check(gamma, a, c, s, opt.max_enum).pass) {
            rep.violations.push_back(where + ": shrink bound failed");
            bad = true;
        }
        if (bad) ++failures;
    }

    rep.results["trials"] = opt.trials;
    rep.results["failures"] = failures;
    rep.csv = "trials,failures\n" + std::to_string(opt.trials) + "," + std::to_string(failures) +
              "\n";
    rep.ascii = "lattice suite: " + std::to_string(opt.trials) + " random symmetric matrices, " +
                std::to_string(failures) + " failures\n";
    return rep;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arclab: a verification laboratory for the geometric circle method over "
                 "function fields"};
    app.require_subcommand(1);
    Options opt;

    auto* strata = app.add_subcommand("strata", "Enumerate arc strata and chart cells");
    strata->add_option("--p", opt.p, "Prime modulus")->required();
    strata->add_option("--kd", opt.kd, "Tail length k*d")->required();
    add_common(strata, opt);

    auto* cmor = app.add_subcommand("count-mor", "Count parameter points on the instance");
    cmor->add_option("--instance", opt.instance_path, "Instance file")
        ->required()
        ->check(CLI::ExistingFile);
    add_common(cmor, opt);

    auto* sweep = app.add_subcommand("sweep", "Exponential-sum checks over the full tail space");
    sweep->add_option("--instance", opt.instance_path, "Instance file")
        ->required()
        ->check(CLI::ExistingFile);
    sweep->add_option("--check", opt.check, "Which identity to verify")
        ->required()
        ->check(CLI::IsMember({"orthogonality", "infinity", "power", "factorisation", "mainterm",
                               "residue", "stratum-sum"}));
    sweep->add_option("--m", opt.m, "Arc level (required by infinity/residue/stratum-sum)");
    std::string json_out;
    sweep->add_option("--json", json_out, "Shorthand for --format json --out FILE");
    add_common(sweep, opt);

    auto* e1 = app.add_subcommand("e1", "First-page dimensions and twists");
    e1->add_option("--n", opt.n, "Number of variables")->required();
    e1->add_option("--k", opt.k, "Degree")->required();
    e1->add_option("--d", opt.d, "Parameter degree")->required();
    add_common(e1, opt);

    auto* window = app.add_subcommand("window", "Stable-range thresholds and gaps");
    window->add_option("--d", opt.d, "Parameter degree")->required();
    window->add_option("--k", opt.k, "Degree")->required();
    window->add_option("--n", opt.n, "Number of variables")->required();
    add_common(window, opt);

    auto* diffs = app.add_subcommand("diffs", "Support-compatible differentials");
    diffs->add_option("--n", opt.n, "Number of variables")->required();
    diffs->add_option("--d", opt.d, "Parameter degree")->required();
    add_common(diffs, opt);

    auto* minor = app.add_subcommand("minor", "Minor-arc counting and bound checks");
    minor->add_option("--instance", opt.instance_path, "Instance file")
        ->required()
        ->check(CLI::ExistingFile);
    minor->add_option("--check", opt.check, "Which check to run")
        ->required()
        ->check(CLI::IsMember({"nalpha", "weyl", "shrink", "bound", "dimfit"}));
    minor->add_option("--m", opt.m, "Arc level (required by bound)");
    minor->add_option("--samples", opt.samples, "Sample count (0 = exhaustive for bound)");
    minor->add_option("--prec", opt.prec, "Laurent precision for shrink")->capture_default_str();
    add_common(minor, opt);

    auto* lattice = app.add_subcommand("lattice", "Random lattice suite: Lee counts, duality, "
                                                  "shrinking");
    lattice->add_option("--p", opt.p, "Prime modulus")->capture_default_str();
    lattice->add_option("--n", opt.n, "Matrix size (0 = alternate 1 and 2)")
        ->capture_default_str();
    lattice->add_option("--prec", opt.prec, "Laurent precision")->capture_default_str();
    lattice->add_option("--trials", opt.trials, "Number of random trials")->capture_default_str();
    add_common(lattice, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        app.exit(e);
        return 2;
    }

    if (sweep->parsed() && !json_out.empty()) {
        opt.format = "json";
        opt.out = json_out;
    }

    const auto t0 = std::chrono::steady_clock::now();
    try {
        Report rep;
        if (strata->parsed()) rep = run_strata(opt);
        else if (cmor->parsed()) rep = run_count_mor(opt);
        else if (sweep->parsed()) rep = run_sweep(opt);
        else if (e1->parsed()) rep = run_e1(opt);
        else if (window->parsed()) rep = run_window(opt);
        else if (diffs->parsed()) rep = run_diffs(opt);
        else if (minor->parsed()) rep = run_minor(opt);
        else if (lattice->parsed()) rep = run_lattice(opt);
        if (opt.timing)
            rep.elapsed_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                 std::chrono::steady_clock::now() - t0)
                                 .count();
        return emit(rep, opt);
    } catch (const InstanceError& e) {
        std::cerr << "arclab: invalid instance: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "arclab: invalid configuration: " << e.what() << "\n";
        return 2;
    } catch (const GuardError& e) {
        std::cerr << "arclab: size guard: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "arclab: internal error: " << e.what() << "\n";
        return 2;
    }
}
