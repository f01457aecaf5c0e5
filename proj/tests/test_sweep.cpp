#include <doctest.h>

#include <sstream>

#include "combnet/analysis.hpp"
#include "combnet/sweep.hpp"
#include "combnet/topology.hpp"

using namespace combnet;

namespace {

// Keeps trailing empty fields, unlike a plain getline loop.
std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

TEST_CASE("sweep of H=6 r=3 emits 20 scheme rows with the memory equalities") {
    auto kinds = std::vector<schemes::SchemeKind>{schemes::SchemeKind::Symmetric,
                                                  schemes::SchemeKind::Asymmetric};
    auto result = sweep::run(6, 3, 20, 1, 10, kinds, 0);
    CHECK(result.rows.size() == 20);
    for (int g = 1; g <= 10; ++g) {
        const auto& sym = result.rows[g - 1];
        const auto& asym = result.rows[10 + g - 1];
        CHECK(sym.scheme == "symmetric");
        CHECK(asym.scheme == "asymmetric");
        CHECK(sym.gain == g);
        CHECK(asym.gain == g);
        if (g >= 6)
            CHECK(sym.memory == asym.memory);
        else if (g >= 2)
            CHECK(asym.memory < sym.memory);
        // R1 = |Z_g| / (H (k1+k2)) for the asymmetric rows.
        CHECK(asym.r1 == make_rat(count_z(6, 3, g), BigInt(6) * (asym.k1 + asym.k2)));
        // r R2 = 1 - M/N for both.
        CHECK(Rat(3) * sym.r2 == 1 - sym.memory / 20);
        CHECK(Rat(3) * asym.r2 == 1 - asym.memory / 20);
    }
}

TEST_CASE("sweep envelope grid brackets [0, N]") {
    auto result = sweep::run(4, 2, 6, 1, 3,
                             {schemes::SchemeKind::Asymmetric}, 11);
    CHECK(result.envelope_points.size() == 11);
    CHECK(result.envelope_points.front().memory == 0);
    CHECK(result.envelope_points.back().memory == 6);
    CHECK(result.envelope_points.back().r1 == 0);
    CHECK(result.envelope_points.front().r1 == make_rat(6, 4));
}

TEST_CASE("sweep with a gain subrange still folds g=1 into the envelope") {
    auto result = sweep::run(4, 2, 6, 2, 3,
                             {schemes::SchemeKind::Symmetric}, 3);
    CHECK(result.rows.size() == 2);
    CHECK(result.curves.at("symmetric").eval(Rat(0)) == make_rat(6, 4));
}

TEST_CASE("csv output parses back to the exact analysis values") {
    auto kinds = std::vector<schemes::SchemeKind>{schemes::SchemeKind::Symmetric,
                                                  schemes::SchemeKind::Asymmetric};
    auto result = sweep::run(5, 2, 10, 1, 4, kinds, 5);
    std::ostringstream out;
    sweep::write_csv(out, result);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == sweep::csv_header());
    int scheme_rows = 0, envelope_rows = 0;
    while (std::getline(in, line)) {
        auto fields = split(line, ',');
        REQUIRE(fields.size() == 15);
        if (fields[0].empty()) {
            ++envelope_rows;
            continue;
        }
        ++scheme_rows;
        int g = std::stoi(fields[4]);
        auto kind = schemes::scheme_from_name(fields[3]);
        Rat memory = kind == schemes::SchemeKind::Symmetric
                         ? analysis::memory_symmetric(10, 5, 2, g)
                         : analysis::memory_asymmetric(10, 5, 2, g);
        CHECK(parse_fraction(fields[5]) == memory);
        CHECK(parse_fraction(fields[7]) == analysis::load_at(10, 5, 2, g, memory));
        Rat r2 = (1 - memory / 10) / 2;
        r2.canonicalize();
        CHECK(parse_fraction(fields[9]) == r2);
    }
    CHECK(scheme_rows == 8);
    CHECK(envelope_rows == 10);
}

TEST_CASE("empty results yield a header-only csv") {
    sweep::Result empty;
    std::ostringstream out;
    sweep::write_csv(out, empty);
    CHECK(out.str() == sweep::csv_header() + "\n");
}
