#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli_app.hpp"
#include "hstab/ratlin.hpp"

using hstab::cli::run_cli;
using nlohmann::json;

namespace {

struct Run {
    int code = 0;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) out.push_back(line);
    return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("helpers") {
    CHECK(hstab::cli::sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    CHECK(hstab::cli::parse_int_range("5") == std::vector<int>{5});
    CHECK(hstab::cli::parse_int_range("5:9") == std::vector<int>{5, 6, 7, 8, 9});
    CHECK(hstab::cli::parse_int_range("5:11:3") == std::vector<int>{5, 8, 11});
    CHECK(hstab::cli::parse_int_range("3,7,4") == std::vector<int>{3, 7, 4});
    CHECK_THROWS(hstab::cli::parse_int_range("5:"));
    CHECK_THROWS(hstab::cli::parse_int_range("a"));
    CHECK_THROWS(hstab::cli::parse_int_range("5x"));
    CHECK_THROWS(hstab::cli::parse_int_range("1,,2"));
    CHECK_THROWS(hstab::cli::parse_int_range("1:5:0"));
}

TEST_CASE("verify") {
    auto r = cli({"verify", "--model", "ribbon", "--g", "9", "--mmax", "4"});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["report"]["ok"] == true);

    CHECK(cli({"verify", "--model", "rosary1", "--g", "4"}).code == 2);
    CHECK(cli({"verify", "--model", "nonsense", "--g", "5"}).code == 2);
    CHECK(cli({"verify", "--model", "ribbon", "--g", "x"}).code == 2);

    auto d = cli({"verify", "--model", "doubleA", "--g", "6", "--mmax", "3"});
    CHECK(d.code == 0);
    CHECK(d.out.find("determinantal_minors") != std::string::npos);

    auto f = cli({"verify", "--model", "ribbon", "--g", "7", "--m", "3", "--family", "ribbon:Bminus"});
    CHECK(f.code == 0);
    auto k = cli({"verify", "--family", "kempf:H", "--n", "4", "--k", "2"});
    CHECK(k.code == 0);
}

TEST_CASE("cert") {
    auto r = cli({"cert", "ribbon", "--g", "7", "--m", "3", "--check"});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["ok"] == true);
    for (const auto& x : j["certificate"]["residual"]) CHECK(x == "0");
    CHECK(j["sha256"].get<std::string>().size() == 64);

    auto w = cli({"cert", "wiman", "--g", "3", "--m", "2", "--check"});
    CHECK(w.code == 1);
    auto wj = json::parse(w.out);
    CHECK(wj["refused"] == true);
    CHECK(wj["reason"].get<std::string>().find("not semistable") != std::string::npos);

    auto ro = cli({"cert", "rosary2", "--g", "5", "--m", "4", "--check"});
    REQUIRE(ro.code == 0);
    auto rj = json::parse(ro.out);
    std::vector<std::string> coefs;
    for (const auto& e : rj["certificate"]["entries"]) coefs.push_back(e["coefficient"]);
    CHECK(coefs == std::vector<std::string>{"12", "12", "15", "15"});

    CHECK(cli({"cert", "doubleA", "--g", "6", "--m", "3"}).code == 2);  // needs --rho
    CHECK(cli({"cert", "doubleA", "--g", "6", "--m", "3", "--rho", "1,2,3,-1,-2,-3", "--check"}).code == 0);
    CHECK(cli({"cert", "rosary1", "--g", "9", "--m", "3"}).code == 1);
}

TEST_CASE("decide") {
    auto n = json::parse(cli({"decide", "--model", "rosary1", "--g", "9", "--m", "3"}).out);
    CHECK(n["verdict"]["status"] == "NonSemistable");
    auto s = json::parse(cli({"decide", "--model", "rosary1", "--g", "7", "--m", "3"}).out);
    CHECK(s["verdict"]["status"] == "StrictlySemistable");
    auto w = cli({"decide", "--model", "wiman", "--g", "4", "--m", "2"});
    CHECK(w.code == 0);
    const std::string st = json::parse(w.out)["verdict"]["status"];
    CHECK((st == "Stable" || st == "StrictlySemistable"));
    CHECK(cli({"decide", "--model", "wiman", "--g", "3", "--m", "3", "--budget-cuts", "1"}).code == 3);
}

TEST_CASE("destab") {
    auto r = cli({"destab", "--model", "rosary1", "--g", "11", "--m", "3", "--rho", "-1,-1,-1,-1,-1,-1,-1,-1,-1,-1,10"});
    CHECK(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["destabilizes"] == true);
    CHECK(hstab::ratlin::parse_rational(j["min_weight"].get<std::string>()) >= 70);

    auto no = cli({"destab", "--model", "rosary1", "--g", "7", "--m", "3", "--rho", "-1,-1,-1,-1,-1,-1,6"});
    CHECK(no.code == 1);
    CHECK(cli({"destab", "--model", "rosary1", "--g", "7", "--m", "3", "--rho", "1,1,1,1,1,1,1"}).code == 2);
    CHECK(cli({"destab", "--model", "rosary1", "--g", "7", "--m", "3", "--rho", "1,1,1,1,1,1,1", "--project"})
              .code == 2);  // projects to zero
}

TEST_CASE("scan") {
    auto r = cli({"scan", "--model", "rosary1", "--g", "5:13:2", "--m", "2:5"});
    REQUIRE(r.code == 0);
    auto lines = split_lines(r.out);
    REQUIRE(lines.size() == 1 + 5 * 4);
    CHECK(lines[0] == "model,g,m,status,margin,slope,bielliptic_bound,cuts,certificate_sha256");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::istringstream row(lines[i]);
        std::vector<std::string> cells;
        for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
        const int g = std::stoi(cells[1]), m = std::stoi(cells[2]);
        const bool ss = cells[3] == "Stable" || cells[3] == "StrictlySemistable";
        CHECK(ss == (g <= 2 * m + 1));
        if (g == 9 && m == 3) CHECK(cells[6] == "24");
    }
    // slope column at g = 10, m = 2
    auto d = split_lines(cli({"scan", "--model", "doubleA", "--g", "10", "--m", "2"}).out);
    REQUIRE(d.size() == 2);
    CHECK(d[1].find(",38/5,") != std::string::npos);

    auto approx = split_lines(cli({"scan", "--model", "ribbon", "--g", "3", "--m", "2", "--approx"}).out);
    CHECK(approx[0].find("margin_approx") != std::string::npos);
    // even g is skipped for the ribbon
    CHECK(split_lines(cli({"scan", "--model", "ribbon", "--g", "3:6", "--m", "2"}).out).size() == 3);
}

TEST_CASE("scan cache is content addressed and transparent") {
    const auto dir = std::filesystem::temp_directory_path() / "hstab_cli_cache_test";
    std::filesystem::remove_all(dir);
    auto first = cli({"scan", "--model", "rosary1", "--g", "5:9:2", "--m", "3", "--cache", dir.string()});
    auto files = std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator{});
    CHECK(files == 3);
    auto second = cli({"scan", "--model", "rosary1", "--g", "5:9:2", "--m", "3", "--cache", dir.string()});
    CHECK(first.out == second.out);
    CHECK(first.out == cli({"scan", "--model", "rosary1", "--g", "5:9:2", "--m", "3"}).out);
    std::filesystem::remove_all(dir);
}

TEST_CASE("report and --out") {
    const auto path = std::filesystem::temp_directory_path() / "hstab_cli_report.json";
    auto r = cli({"report", "--model", "ribbon", "--g", "5", "--m", "3", "--out", path.string()});
    CHECK(r.code == 0);
    std::ifstream in(path);
    auto j = json::parse(in);
    CHECK(j.contains("verdict"));
    CHECK(j["model_checks_ok"] == true);
    std::filesystem::remove(path);
}

TEST_CASE("identical invocations give identical bytes") {
    const std::vector<std::vector<std::string>> runs{
        {"scan", "--model", "rosary1", "--g", "5:9:2", "--m", "2:3"},
        {"cert", "wiman", "--g", "3", "--m", "3", "--check", "--seed", "9"},
        {"decide", "--model", "doubleA", "--g", "4", "--m", "2"},
        {"verify", "--model", "rosary2", "--g", "5", "--m", "3", "--family", "rosary2:B1minus"}};
    for (const auto& args : runs) {
        auto a = cli(args), b = cli(args);
        CHECK(a.code == b.code);
        CHECK(a.out == b.out);
    }
}

TEST_CASE("usage errors") {
    CHECK(cli({}).code == 2);
    CHECK(cli({"frobnicate"}).code == 2);
    CHECK(cli({"decide", "--model", "ribbon"}).code == 2);
    CHECK(cli({"decide", "--model", "ribbon", "--g", "3", "--m", "2", "--bogus"}).code == 2);
}

}  // TEST_SUITE
