#include "acbound/serialize.hpp"

#include <stdexcept>

namespace acbound {

using nlohmann::json;

json family_to_json(const LowerBoundFamily& f) {
    json j;
    j["d"] = f.d;
    j["q"] = f.q;
    j["b"] = f.b;
    j["delta"] = f.delta;
    j["alpha"] = f.alpha;
    j["C"] = f.C;
    j["c2"] = f.c2;
    j["a"] = f.a;
    j["w"] = f.w;
    j["bw"] = f.bw;
    j["cell_excess"] = f.cell_excess;
    j["null_volume"] = f.null_volume;
    j["lambda0"] = f.lambda0;
    j["id"] = f.id;
    j["warnings"] = f.warnings;
    json codes = json::array();
    for (const auto& code : f.codes) {
        json row = json::array();
        for (auto s : code) row.push_back(static_cast<int>(s));
        codes.push_back(std::move(row));
    }
    j["codes"] = std::move(codes);
    return j;
}

LowerBoundFamily family_from_json(const json& j) {
    FamilyParams p;
    p.d = j.at("d").get<int>();
    p.q = j.at("q").get<int>();
    p.delta = j.at("delta").get<double>();
    p.alpha = j.at("alpha").get<double>();
    p.C = j.at("C").get<double>();
    p.c2 = j.at("c2").get<double>();
    std::vector<std::vector<std::int8_t>> codes;
    for (const auto& row : j.at("codes")) {
        std::vector<std::int8_t> code;
        code.reserve(row.size());
        for (const auto& v : row) code.push_back(static_cast<std::int8_t>(v.get<int>()));
        codes.push_back(std::move(code));
    }
    LowerBoundFamily f = assemble_family(p, std::move(codes));
    // Stored derived values must reproduce bitwise; anything else means the
    // document was edited or came from a different build.
    const struct {
        const char* key;
        double expect;
    } derived[] = {
        {"a", f.a},       {"w", f.w},           {"bw", f.bw},
        {"cell_excess", f.cell_excess}, {"null_volume", f.null_volume}, {"lambda0", f.lambda0},
    };
    for (const auto& dv : derived) {
        if (j.at(dv.key).get<double>() != dv.expect)
            throw std::invalid_argument(std::string("family_from_json: stored '") + dv.key +
                                        "' disagrees with the recomputed value");
    }
    if (j.at("b").get<long>() != f.b) throw std::invalid_argument("family_from_json: stored 'b' disagrees");
    if (j.at("id").get<std::string>() != f.id)
        throw std::invalid_argument("family_from_json: stored 'id' disagrees");
    return f;
}

json report_to_json(const FamilyReport& report) {
    json j;
    j["verdict"] = report.verdict;
    j["warnings"] = report.warnings;
    json checks = json::array();
    for (const auto& c : report.checks)
        checks.push_back({{"name", c.name}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
    j["checks"] = std::move(checks);
    return j;
}

} // namespace acbound
