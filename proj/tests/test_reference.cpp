#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "reference.hpp"

using namespace fishmpc;
namespace fs = std::filesystem;

namespace {
const GrowthParams P;
const SimConfig SIM;

fs::path temp_csv(const std::string& name, const std::string& body) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << body;
    return path;
}
}  // namespace

TEST_CASE("nominal reference is the model's own constant-plan rollout") {
    const ControlInput u{0.5, 33.0, 2.0};
    const auto ref = generate_nominal_reference(20.0, 10, u, SIM, P);
    REQUIRE(ref.t.size() == 11);
    CHECK(ref.t.front() == 0.0);
    CHECK(ref.t.back() == 10.0);
    CHECK(ref.w_d.front() == 20.0);
    const auto states = simulate(20.0, std::vector<ControlInput>(10, u), SIM, P);
    for (size_t i = 0; i < ref.t.size(); ++i) CHECK(ref.w_d[i] == states[i].w);
    for (size_t i = 1; i < ref.w_d.size(); ++i) CHECK(ref.w_d[i] > ref.w_d[i - 1]);
}

TEST_CASE("a non-growing nominal plan is rejected") {
    CHECK_THROWS_AS(generate_nominal_reference(20.0, 10, {0.0, 33.0, 2.0}, SIM, P), Error);
}

TEST_CASE("sampling interpolates linearly and clamps at the ends") {
    ReferenceTrajectory r;
    r.t = {0.0, 1.0, 3.0};
    r.w_d = {10.0, 20.0, 40.0};
    CHECK(sample_reference(r, 0.0) == 10.0);
    CHECK(sample_reference(r, 1.0) == 20.0);
    CHECK(sample_reference(r, 0.5) == doctest::Approx(15.0));
    CHECK(sample_reference(r, 2.0) == doctest::Approx(30.0));
    CHECK(sample_reference(r, -5.0) == 10.0);
    CHECK(sample_reference(r, 99.0) == 40.0);
}

TEST_CASE("validation guards ordering, positivity and length") {
    ReferenceTrajectory r;
    r.t = {0.0, 1.0};
    r.w_d = {10.0, 20.0};
    CHECK_NOTHROW(r.validate());
    r.t = {1.0, 1.0};
    CHECK_THROWS_AS(r.validate(), Error);
    r.t = {0.0, 1.0};
    r.w_d = {10.0, 0.0};
    CHECK_THROWS_AS(r.validate(), Error);
    r.t = {0.0};
    r.w_d = {10.0};
    CHECK_THROWS_AS(r.validate(), Error);
}

TEST_CASE("csv loading accepts an optional header and reports bad lines") {
    const auto with_header = temp_csv("ref_header.csv", "t_days,w_d_g\n0,20\n1,22.5\n2,25\n");
    auto r = load_reference(with_header.string());
    REQUIRE(r.t.size() == 3);
    CHECK(r.w_d[1] == doctest::Approx(22.5));

    const auto bare = temp_csv("ref_bare.csv", "0,20\n1,22.5\n");
    CHECK(load_reference(bare.string()).t.size() == 2);

    const auto broken = temp_csv("ref_broken.csv", "0,20\nnot,a number\n");
    CHECK_THROWS_WITH_AS(load_reference(broken.string()),
                         doctest::Contains("line 2"), Error);

    CHECK_THROWS_AS(load_reference("/nonexistent/ref.csv"), Error);
    fs::remove(with_header);
    fs::remove(bare);
    fs::remove(broken);
}
