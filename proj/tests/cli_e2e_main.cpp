// End-to-end exercise of the arclab binary (path in argv[1]): flag parsing,
// output formats, the exit-status contract, and byte-level reproducibility
// across thread counts. Prints one [PASS]/[FAIL] line per check.

#include "spawn.hpp"

#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

namespace {

int failures = 0;

void report(bool ok, const std::string& what) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", what.c_str());
    if (!ok) ++failures;
}

std::string write_file(const std::string& dir, const std::string& name,
                       const std::string& body) {
    const std::string path = dir + "/" + name;
    std::ofstream f(path);
    f << body;
    return path;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: %s <arclab binary>\n", argv[0]);
        return 2;
    }
    const std::string bin = quoted(argv[1]);

    char dir_template[] = "/tmp/arclab_e2e_XXXXXX";
    const char* dir_c = mkdtemp(dir_template);
    if (!dir_c) {
        std::fprintf(stderr, "cannot create temp dir\n");
        return 2;
    }
    const std::string dir = dir_c;

    const std::string fermat = write_file(dir, "fermat.cfg",
                                          "p=5\nk=3\nn=2\nd=2\nP=1,4\nf=3,0:1;0,3:1;0,0:1\n");
    const std::string singular = write_file(dir, "singular.cfg",
                                            "p=7\nk=3\nn=2\nd=1\nP=1,6\nf=3,0:1;0,3:1\n");
    const std::string truncated = write_file(dir, "truncated.cfg", "p=5\nk=3\nn=2\nd=2\n");

    // --- output contents -------------------------------------------------
    {
        const auto r = run_cmd(bin + " strata --p 5 --kd 6 --format csv");
        report(r.exit_code == 0 &&
                   r.out ==
                       "m,card_stratum,card_Um\n0,1,1\n1,24,20\n2,600,500\n3,15000,12500\n",
               "strata csv table is exact");
    }
    {
        const auto r = run_cmd(bin + " strata --p 5 --kd 6 --format json");
        report(r.exit_code == 0 && r.out.find("\"total\": 15625") != std::string::npos &&
                   r.out.find("\"tool\": \"arclab\"") != std::string::npos &&
                   r.out.find("\"violations\": []") != std::string::npos,
               "strata json carries the schema and the 15625 total");
    }
    {
        const auto r = run_cmd(bin + " e1 --n 4 --k 3 --d 4 --format ascii");
        report(r.exit_code == 0 && r.out.find("16(-1)") != std::string::npos &&
                   r.out.find("N=16") != std::string::npos,
               "e1 ascii triangle shows the 16 cell");
    }
    {
        const auto r = run_cmd(bin + " e1 --n 4 --k 3 --d 4 --format csv");
        report(r.exit_code == 0 && r.out.find("1,-2,16,-1\n") != std::string::npos,
               "e1 csv lists the (1,-2) entry");
    }
    {
        const auto r = run_cmd(bin + " sweep --instance " + quoted(fermat) +
                               " --check orthogonality");
        report(r.exit_code == 0, "sweep orthogonality exits 0");
    }
    {
        const auto r = run_cmd(bin + " window --d 2 --k 3 --n 24 --format csv");
        report(r.exit_code == 0 && r.out.find("minor_threshold,96\n") != std::string::npos,
               "window csv reports the exponent threshold");
    }
    {
        const auto r = run_cmd(bin + " diffs --n 4 --d 8 --format csv");
        report(r.exit_code == 0 && r.out.find("4,-11,2,6,-12\n") != std::string::npos,
               "diffs csv lists the first feasible differential");
    }
    {
        const auto r = run_cmd(bin + " count-mor --instance " + quoted(fermat) + " --format csv");
        report(r.exit_code == 0 && r.out.rfind("count_mor,", 0) == 0,
               "count-mor csv emits the count");
    }

    // --- exit-status contract --------------------------------------------
    {
        const auto r = run_cmd(bin + " count-mor --instance " + quoted(singular));
        report(r.exit_code == 2, "singular f exits 2");
    }
    {
        const auto r = run_cmd(bin + " count-mor --instance " + quoted(truncated));
        report(r.exit_code == 2, "truncated instance file exits 2");
    }
    {
        const auto r = run_cmd(bin + " sweep --instance " + quoted(fermat) + " --check bogus");
        report(r.exit_code == 2, "unknown check name exits 2");
    }
    {
        const auto r = run_cmd(bin + " strata --kd 6");
        report(r.exit_code == 2, "missing required flag exits 2");
    }
    {
        const auto r = run_cmd(bin + " sweep --instance " + quoted(fermat) + " --check residue");
        report(r.exit_code == 2, "residue without --m exits 2");
    }
    {
        const auto r = run_cmd(bin + " minor --instance " + quoted(fermat) +
                               " --check bound --m 1");
        report(r.exit_code == 2, "out-of-range arc level exits 2");
    }
    {
        const auto r = run_cmd(bin + " --help");
        report(r.exit_code == 0 && r.out.find("strata") != std::string::npos,
               "--help exits 0 and lists subcommands");
    }

    // --- file output -----------------------------------------------------
    {
        const std::string out = dir + "/orth.json";
        const auto r = run_cmd(bin + " sweep --instance " + quoted(fermat) +
                               " --check orthogonality --json " + quoted(out));
        std::ifstream f(out);
        std::string body((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        report(r.exit_code == 0 && !body.empty() && body.front() == '{' &&
                   body.find("\"subcommand\": \"sweep\"") != std::string::npos,
               "--json alias writes the report file");
    }
    {
        const std::string out = dir + "/strata.csv";
        const auto r = run_cmd(bin + " strata --p 5 --kd 6 --format csv --out " + quoted(out));
        std::ifstream f(out);
        std::string body((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        report(r.exit_code == 0 && body.rfind("m,card_stratum,card_Um\n", 0) == 0,
               "--out writes the csv file");
    }

    // --- reproducibility --------------------------------------------------
    {
        const auto a = run_cmd(bin + " minor --instance " + quoted(fermat) +
                               " --check nalpha --samples 3 --seed 9 --format json");
        const auto b = run_cmd(bin + " minor --instance " + quoted(fermat) +
                               " --check nalpha --samples 3 --seed 9 --format json");
        report(a.exit_code == 0 && a.out == b.out, "fixed seed reproduces byte-identical output");
    }
    const std::vector<std::string> deterministic_cmds = {
        "strata --p 5 --kd 6 --format json",
        "count-mor --instance " + quoted(fermat) + " --format json",
        "sweep --instance " + quoted(fermat) + " --check stratum-sum --m 1 --format json",
        "sweep --instance " + quoted(fermat) + " --check infinity --m 2 --format csv",
        "e1 --n 4 --k 3 --d 4 --format ascii",
        "window --d 2 --k 3 --n 24 --format json",
        "diffs --n 4 --d 8 --format csv",
        "minor --instance " + quoted(fermat) + " --check nalpha --samples 3 --seed 1 --format json",
        "minor --instance " + quoted(fermat) +
            " --check bound --m 2 --samples 15 --seed 2 --format json",
        "lattice --trials 8 --seed 3 --format json",
    };
    for (const auto& args : deterministic_cmds)
        report(thread_invariant(argv[1], args),
               "byte-identical under 1/2/8 threads: " + args.substr(0, args.find(" --format")));

    if (failures) std::printf("%d end-to-end check(s) failed\n", failures);
    return failures ? 1 : 0;
}
