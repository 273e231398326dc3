#include "doctest.h"
#include "zetasum/cli.hpp"
#include "zetasum/errors.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace zetasum;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_path(const char* name) { return (std::filesystem::temp_directory_path() / name).string(); }

bool has(const std::string& text, const std::string& part) { return text.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("compare-bounds") {
    const Result r = run({"compare-bounds", "--phi", "builtin:inv_power:2", "--T", "1000"});
    CHECK(r.code == 0);
    CHECK(has(r.out, "lehman bound          4.009e-06"));
    CHECK(has(r.out, "E2 bound              9.964e-09"));
    CHECK(has(r.out, "ratio                 402.3"));
}

TEST_CASE("zeros find, import, info") {
    CHECK(has(run({"zeros", "find", "--t-max", "10"}).out, "0 zeros"));
    const std::string path = temp_path("zetasum_cli_z100.txt");
    const Result f = run({"zeros", "find", "--t-max", "100", "--out", path});
    CHECK(f.code == 0);
    CHECK(has(f.out, "29 zeros"));
    const Result i = run({"zeros", "import", "--in", path});
    CHECK(i.code == 0);
    CHECK(has(i.out, "29 zeros"));
    CHECK(has(i.out, "first                 14.1347251417"));
    const Result info = run({"zeros", "info", "--in", path});
    CHECK(has(info.out, "min gap"));
    CHECK(has(run({"zeros", "find", "--n", "5"}).out, "5 zeros"));

    const Result missing = run({"zeros", "import", "--in", temp_path("zetasum_no_such_file.txt")});
    CHECK(missing.code == 1);
    CHECK(has(missing.err, "zeros."));
    std::filesystem::remove(path);
}

TEST_CASE("estimate") {
    const Result c1 = run({"estimate", "--phi", "builtin:inv_power:2", "--method", "theorem1", "--n", "100"});
    CHECK(c1.code == 0);
    CHECK(has(c1.out, "method                theorem1"));
    CHECK(has(c1.out, "zeros used            100"));
    CHECK(has(c1.out, "value                 0.0231"));

    const Result h = run({"estimate", "--phi", "builtin:inv_t", "--method", "theorem4", "--T0", "6.283185307179586",
                          "--T", "200"});
    CHECK(h.code == 0);
    CHECK(has(h.out, "zeros used            79"));
    CHECK(has(h.out, "value                 -0.017"));

    const Result l = run({"estimate", "--phi", "1/t^2", "--method", "lehman", "--T", "1000"});
    CHECK(l.code == 0);
    CHECK(has(l.out, "error bound           4.009e-06"));

    const Result bad = run({"estimate", "--phi", "t", "--n", "10"});
    CHECK(bad.code == 1);
    CHECK(has(bad.err, "phifunc.make_phi"));
    const Result syntax = run({"estimate", "--phi", "1/t^^2", "--n", "10"});
    CHECK(syntax.code == 1);
    CHECK(has(syntax.err, "phifunc.parse_phi"));
    const Result div = run({"estimate", "--phi", "1/t", "--method", "theorem1", "--n", "10"});
    CHECK(div.code == 1);
    CHECK(has(div.err, "diverges"));
    CHECK(run({"estimate", "--phi", "1/t", "--method", "nope", "--n", "10"}).code == 2);
}

TEST_CASE("constants and table1") {
    const Result c = run({"constants", "c2", "--n", "100"});
    CHECK(c.code == 0);
    CHECK(has(c.out, "contains published    yes"));
    const std::string csv = temp_path("zetasum_cli_table1.csv");
    const Result t = run({"table1", "--max-n", "10", "--csv", csv});
    CHECK(t.code == 0);
    CHECK(has(t.out, "-0.4998625875"));
    CHECK(has(t.out, "-0.5273390756"));
    CHECK(has(t.out, "1.96e-02"));
    std::ifstream in(csv);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(has(buf.str(), "n,T,naive,accelerated,bound\n10,51.3720769777,"));
    std::filesystem::remove(csv);
}

TEST_CASE("determinism") {
    const std::vector<std::string> args{"table1", "--max-n", "100"};
    const Result a = run(args), b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
}

TEST_CASE("precision configuration") {
    CHECK(cli::default_precision() == 128);
    setenv("ZETASUM_PRECISION_BITS", "256", 1);
    CHECK(cli::default_precision() == 256);
    const Result hi = run({"compare-bounds", "--phi", "1/t^2", "--T", "1000"});
    CHECK(hi.code == 0);
    CHECK(numeric::working_precision() == 256);
    setenv("ZETASUM_PRECISION_BITS", "12", 1);
    CHECK(run({"compare-bounds", "--phi", "1/t^2", "--T", "1000"}).code == 1);
    unsetenv("ZETASUM_PRECISION_BITS");
    CHECK(run({"--precision", "128", "compare-bounds", "--phi", "1/t^2", "--T", "1000"}).code == 0);
    CHECK(numeric::working_precision() == 128);
}

TEST_CASE("usage errors") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"zeros"}).code == 2);
    CHECK(run({"estimate", "--n", "10"}).code == 2);  // --phi is required
    CHECK(run({"--help"}).code == 0);
}
