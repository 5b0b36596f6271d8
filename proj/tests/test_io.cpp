#include <doctest.h>

#include "tiadc/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tiadc;

TEST_CASE("parse_list") {
    const auto v = io::parse_list("0.01, 0,-2e-3");
    REQUIRE(v.size() == 3);
    CHECK(v(0) == 0.01);
    CHECK(v(2) == -2e-3);
    CHECK_THROWS_AS(io::parse_list("1,abc"), ValidationError);
    CHECK_THROWS_AS(io::parse_list("1,,2"), ValidationError);
}

TEST_CASE("mismatch file: single column with comments") {
    std::istringstream in("# offsets\n0.01\n\n0  # second\n0\n0\n");
    const auto c = io::parse_mismatch_file(in, "m.txt");
    REQUIRE(c.single);
    CHECK_FALSE(c.full);
    CHECK(c.single->size() == 4);
    CHECK((*c.single)(0) == 0.01);
}

TEST_CASE("mismatch file: three columns with header") {
    std::istringstream in("offset,gain,skew\n0.001,0.002,1e-13\n-0.001,0,0\n");
    const auto c = io::parse_mismatch_file(in, "m.csv");
    REQUIRE(c.full);
    CHECK(c.full->offsets(1) == -0.001);
    CHECK(c.full->gains(0) == 0.002);
    CHECK(c.full->skews(0) == 1e-13);
}

TEST_CASE("mismatch file errors name the line") {
    std::istringstream bad("0.1\nfoo\n");
    try {
        io::parse_mismatch_file(bad, "m.txt");
        FAIL("expected an error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("m.txt:2") != std::string::npos);
    }
    std::istringstream mixed("0.1\n0.1,0,0\n");
    CHECK_THROWS_AS(io::parse_mismatch_file(mixed, "m.txt"), ValidationError);
    std::istringstream two("0.1,0.2\n");
    CHECK_THROWS_AS(io::parse_mismatch_file(two, "m.txt"), ValidationError);
    std::istringstream empty("# nothing\n");
    CHECK_THROWS_AS(io::parse_mismatch_file(empty, "m.txt"), ValidationError);
    CHECK_THROWS_AS(io::read_mismatch_file("/nonexistent/file"), ValidationError);
}

TEST_CASE("number formatting round-trips") {
    const double x = 0.1 + 0.2;
    CHECK(std::stod(io::format_number(x)) == x);
    CHECK(io::format_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("spur table csv") {
    SpurReport r;
    SpurPrediction s;
    s.frequency = 2.5e8;
    s.power = 2.5e-5;
    s.bin_index = 1;
    r.spurs.push_back(s);
    std::ostringstream out;
    io::write_spur_table_csv(out, r);
    CHECK(out.str().rfind("frequency_hz,power_db,reference,kind,bin,tone\n", 0) == 0);
    CHECK(out.str().find("250000000,-46.02") != std::string::npos);
    CHECK(out.str().find(",dBFS,offset,1,-1") != std::string::npos);
}

TEST_CASE("ccdf csv carries metadata") {
    CcdfTable t;
    t.thresholds = Eigen::VectorXd::Constant(1, 1.0);
    t.probabilities = Eigen::VectorXd::Constant(1, 0.25);
    std::ostringstream out;
    io::write_ccdf_csv(out, t, io::metadata("ccdf-compare", {{"n", 16}}, 5));
    std::istringstream in(out.str());
    std::string first;
    std::getline(in, first);
    REQUIRE(first.rfind("# ", 0) == 0);
    const auto meta = io::json::parse(first.substr(2));
    CHECK(meta["seed"] == 5);
    CHECK(meta["rng"].get<std::string>().find("mt19937_64") != std::string::npos);
    CHECK(meta["parameters"]["n"] == 16);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "threshold_db,probability");
    CHECK(row == "0,0.25");
}

TEST_CASE("json views") {
    StepSizeResult r;
    r.sigma = 1.0;
    r.step = std::sqrt(12.0);
    r.step_in_lsb = 0.5;
    const auto j = io::to_json(r);
    CHECK(j["step_in_lsb"] == 0.5);
    CHECK(j["unit"] == "LSB");
    SpurPrediction zero;
    CHECK(io::to_json(zero)["power_db"].is_null());
}

TEST_CASE("atomic file write") {
    const auto dir = std::filesystem::temp_directory_path() / "tiadc_io_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.csv";
    io::write_file_atomic(path, "a,b\n1,2\n");
    std::ifstream in(path);
    std::stringstream buf;
    buf << in.rdbuf();
    CHECK(buf.str() == "a,b\n1,2\n");
    CHECK_FALSE(std::filesystem::exists(dir / "out.csv.tmp"));
    CHECK_THROWS(io::write_file_atomic(dir / "missing" / "x.csv", "x"));
    std::filesystem::remove_all(dir);
}
