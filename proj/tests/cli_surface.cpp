// Exit-code and determinism checks for the command-line surface.
// Usage: cli_surface FIXTURE_DIR CLI_PATH

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_fixtures;
int g_failures = 0;

std::pair<int, std::string> run(const std::string& args) {
    fs::path tmp = fs::temp_directory_path() / "pmw_cli_surface_out.txt";
    std::string cmd = g_cli + " " + args + " > " + tmp.string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    std::ifstream in(tmp);
    std::ostringstream os;
    os << in.rdbuf();
    return {rc == -1 ? -1 : WEXITSTATUS(rc), os.str()};
}

void expect_exit(const std::string& what, const std::string& args, int want) {
    auto [code, out] = run(args);
    bool ok = code == want;
    std::cout << (ok ? "ok" : "FAIL") << ": " << what << " (exit " << code << ", want " << want
              << ")\n";
    if (!ok) {
        std::cout << out;
        ++g_failures;
    }
}

void expect_output(const std::string& what, const std::string& args, const std::string& needle,
                   bool present) {
    auto [code, out] = run(args);
    bool found = out.find(needle) != std::string::npos;
    bool ok = code == 0 && found == present;
    std::cout << (ok ? "ok" : "FAIL") << ": " << what << "\n";
    if (!ok) {
        std::cout << out;
        ++g_failures;
    }
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::cerr << "usage: cli_surface FIXTURE_DIR CLI_PATH\n";
        return 2;
    }
    g_fixtures = argv[1];
    g_cli = argv[2];
    std::string zz = (g_fixtures / "zigzag").string() + "/";
    std::string tp1 = (g_fixtures / "twoparam1").string() + "/";

    expect_exit("decompose of an interval file", "decompose " + zz + "MN.pmod", 0);
    expect_exit("decompose of a grid module is a mode mismatch", "decompose " + tp1 + "x.pmod", 3);
    expect_exit("missing file is a parse error", "decompose " + zz + "nope.pmod", 2);
    expect_exit("module distance on a grid is a mode mismatch",
                "distance -p 1 --module " + tp1 + "x.pmod " + tp1 + "y.pmod", 3);
    expect_exit("bad p is a mode mismatch",
                "distance -p 0 --module " + zz + "MN.pmod " + zz + "L.pmod", 3);
    expect_exit("two distance modes at once is a mode mismatch",
                "distance --module --diagram " + zz + "MN.pmod " + zz + "L.pmod", 3);
    expect_exit("match --mono on a non-mono is a mode mismatch", "match --mono " + zz + "surj.pmorph",
                3);
    expect_exit("distance across different posets is a validation error",
                "distance -p 1 --module " + zz + "L.pmod " + (g_fixtures / "ordered").string() +
                    "/big.pmod",
                2);
    expect_exit("match --epi on the surjection", "match --epi " + zz + "surj.pmorph", 0);
    expect_exit("non-prime field modulus is rejected", "--field-prime 9 decompose " + zz + "MN.pmod",
                2);
    expect_exit("other primes work", "--field-prime 7 decompose " + zz + "MN.pmod", 0);
    expect_exit("verify with zero trials passes vacuously", "verify isometry --trials 0", 0);
    expect_exit("unknown suite is a mode mismatch", "verify everything --trials 1", 3);

    std::string ord = (g_fixtures / "ordered").string() + "/";
    expect_output("inclusion matches as one pair costing the cokernel",
                  "--output machine match --mono " + ord + "inc.pmorph", "pair 2 3 1 3 1", true);
    expect_output("inclusion identity holds", "--output machine match --mono " + ord + "inc.pmorph",
                  "identity_check holds", true);
    expect_output("one-to-two keeps the small-target component",
                  "--output machine match --mono " + ord + "one_to_two.pmorph", "coeff 4 8 2 8",
                  true);
    expect_output("one-to-two eliminates the large-target component",
                  "--output machine match --mono " + ord + "one_to_two.pmorph", "coeff 4 8 0 8",
                  false);
    expect_output("identity morphism matches perfectly at cost zero",
                  "--output machine match --epi " + ord + "id.pmorph", "total_pair_cost 0", true);

    // randomized commands are deterministic for a fixed seed
    auto a = run("--seed 42 --output machine verify bounds --trials 5");
    auto b = run("--seed 42 --output machine verify bounds --trials 5");
    auto c = run("--seed 43 --output machine verify bounds --trials 5");
    bool det = a.first == 0 && a.second == b.second;
    std::cout << (det ? "ok" : "FAIL") << ": verify output is deterministic for a fixed seed\n";
    if (!det) ++g_failures;
    (void)c;

    if (g_failures == 0) {
        std::cout << "cli surface ok\n";
        return 0;
    }
    std::cout << g_failures << " cli surface checks failed\n";
    return 1;
}
