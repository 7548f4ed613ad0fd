#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tvr/amplitudes.hpp"
#include "tvr/cutjoin.hpp"
#include "tvr/eo.hpp"
#include "tvr/identities.hpp"

using namespace tvr;

namespace {

enum Exit { kPass = 0, kMismatch = 1, kUsage = 2, kProviderGap = 3 };

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct RunConfig {
    int gmax = 0;
    int size = 4;
    int nmax = 3;
    int n1 = -1, n2 = 0, n3 = 0;
    int order = 10;
    std::string a;  // empty: symbolic
    std::string provider = "direct";
    std::string cache_dir;
    bool no_cache = false;
    std::string format = "csv";
    std::string suite = "all";
    std::string what = "amplitudes";
    std::string out;
    std::string cache_action = "path";
};

std::optional<BigRat> framing_value(const RunConfig& c) {
    if (c.a.empty()) return std::nullopt;
    BigRat v;
    try {
        v = parse_bigrat(c.a);
    } catch (const std::invalid_argument&) {
        throw UsageError("--a expects a rational p/q, got '" + c.a + "'");
    }
    if (v == 0 || v == -1) throw UsageError("--a must avoid 0 and -1");
    return v;
}

std::string cache_dir(const RunConfig& c) {
    if (c.no_cache) return "";
    if (!c.cache_dir.empty()) return c.cache_dir;
    if (const char* env = std::getenv("TVR_CACHE_DIR")) return env;
    return ".tvr-cache";
}

// Direct-side provider, optionally extended by a table file or by brackets
// read off the recursion for genera 2..gmax.
HodgeProvider make_provider(const RunConfig& c, int gmax, int npoints) {
    HodgeProvider hp;
    if (c.provider == "direct") return hp;
    if (c.provider == "eo") {
        for (int g = 2; g <= gmax; ++g)
            for (int n = 1; n <= npoints; ++n) {
                auto run = run_recursion_targets({{g, {n, 0, 0}}}, cache_dir(c));
                install_brackets(hp, g, extract_brackets(run.forms.at({g, {n, 0, 0}})));
            }
        return hp;
    }
    if (!std::filesystem::exists(c.provider)) throw UsageError("--provider: direct, eo, or a table file path");
    hp.load_table(c.provider);
    return hp;
}

std::string value_string(const RatFuncA& v, const std::optional<BigRat>& a) {
    return a ? to_string(v.eval(*a)) : v.to_string();
}

int write_amplitudes(const RunConfig& c, std::ostream& os) {
    const auto a = framing_value(c);
    HodgeProvider hp = make_provider(c, c.gmax, c.size);
    std::vector<std::tuple<int, PartitionTriple, std::string>> rows;
    for (int g = 0; g <= c.gmax; ++g)
        for (const auto& [t, v] : amplitude_table(g, c.size, hp)) rows.emplace_back(g, t, value_string(v, a));
    if (c.format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& [g, t, v] : rows) j.push_back({{"g", g}, {"triple", triple_to_string(t)}, {"value", v}});
        os << j.dump(1) << "\n";
    } else {
        os << amplitudes_csv(rows);
    }
    return kPass;
}

nlohmann::json numeric_json(const Correlator<BigRat>& w) {
    nlohmann::json j;
    j["g"] = w.g;
    j["n"] = {w.n[0], w.n[1], w.n[2]};
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& [b, v] : w.coeffs) cs.push_back({{"b", b}, {"value", to_string(v)}});
    j["coefficients"] = cs;
    return j;
}

int write_correlators(const RunConfig& c, std::ostream& os) {
    const auto a = framing_value(c);
    if (c.format != "json") throw UsageError("correlators are written as json");
    std::map<CorrelatorKey, Correlator<RatFuncA>> forms;
    auto t0 = std::chrono::steady_clock::now();
    int hits = 0;
    if (c.n1 >= 0) {
        const LegCounts n{c.n1, c.n2, c.n3};
        if (2 * c.gmax - 2 + c.n1 + c.n2 + c.n3 <= 0) throw UsageError("requested (g, n) is unstable");
        // n1 = 0 targets come from rotating a form with a leg-1 slot
        LegCounts src = n;
        int turns = 0;
        while (src[0] == 0 && turns < 3) {
            src = {src[1], src[2], src[0]};
            ++turns;
        }
        if (src[0] == 0) throw UsageError("empty leg counts");
        if (a && turns == 0) {
            EOEngine<BigRat> eng(*a);
            os << nlohmann::json::array({numeric_json(eng.compute(c.gmax, n))}).dump(1) << "\n";
            return kPass;
        }
        auto run = run_recursion_targets({{c.gmax, src}}, cache_dir(c));
        hits = run.cache_hits;
        forms[{c.gmax, n}] = rotated_to(run.forms, c.gmax, n);
    } else {
        auto run = run_recursion(c.gmax, c.nmax, cache_dir(c));
        hits = run.cache_hits;
        forms = std::move(run.forms);
    }
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [k, w] : forms) {
        if (!a) {
            j.push_back(correlator_to_json(w));
            continue;
        }
        Correlator<BigRat> nw;
        nw.g = w.g;
        nw.n = w.n;
        for (const auto& [b, v] : w.coeffs) nw.coeffs[b] = v.eval(*a);
        j.push_back(numeric_json(nw));
    }
    os << j.dump(1) << "\n";
    std::cerr << "correlators: " << forms.size() << " forms, " << hits << " cache hits, "
              << std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() << " s\n";
    return kPass;
}

int verify_identities_suite(const RunConfig& c) {
    auto res = verify_identities(c.order);
    int fails = 0;
    for (const auto& r : res)
        if (!r.pass) {
            ++fails;
            std::cout << "FAIL " << r.name << ": " << r.detail << "\n";
        }
    std::cout << "identities N=" << c.order << ": " << res.size() - fails << "/" << res.size() << " pass\n";
    return fails ? kMismatch : kPass;
}

int verify_cutjoin_suite(const RunConfig& c) {
    HodgeProvider hp = make_provider(c, c.gmax, c.size);
    GenFun gf = GenFun::direct(c.gmax, c.size, hp);
    CJReport rep = verify_cj(gf, c.gmax, c.size);
    if (c.format == "json") std::cout << rep.to_json().dump(1) << "\n";
    for (const auto& m : rep.mismatches())
        std::cout << "MISMATCH g=" << m.g << " " << triple_to_string(m.triple) << " lhs=" << m.lhs.to_string()
                  << " rhs=" << m.rhs.to_string() << "\n";
    std::cout << "cutjoin g<=" << c.gmax << " |mu|<=" << c.size << ": " << rep.cells.size() - rep.mismatches().size()
              << "/" << rep.cells.size() << " cells agree\n";
    return rep.passed() ? kPass : kMismatch;
}

int verify_eo_suite(const RunConfig& c) {
    HodgeProvider hp;
    bool ok = true;
    auto run = run_recursion(std::min(c.gmax, 1), c.nmax, cache_dir(c));
    for (const auto& cmp : compare_with_direct(run, hp, c.order)) {
        if (cmp.pass()) continue;
        ok = false;
        std::cout << "MISMATCH g=" << cmp.g << " n=(" << cmp.n[0] << "," << cmp.n[1] << "," << cmp.n[2] << ")\n";
    }
    std::cout << "eo vs direct g<=" << std::min(c.gmax, 1) << " n<=" << c.nmax << ": " << run.forms.size()
              << " forms compared, " << run.truncations.size() << " order enlargements\n";
    for (int g = 2; g <= c.gmax; ++g) {
        auto loop = run_genus_loop(g, c.nmax, c.nmax, hp, cache_dir(c));
        ok = ok && loop.report.passed() && loop.positive_genus_calls_during_recursion == 0;
        std::cout << "genus " << g << " loop: " << loop.report.cells.size() - loop.report.mismatches().size() << "/"
                  << loop.report.cells.size() << " cut-and-join cells agree\n";
    }
    return ok ? kPass : kMismatch;
}

int cmd_verify(const RunConfig& c) {
    if (c.suite == "identities") return verify_identities_suite(c);
    if (c.suite == "cutjoin") return verify_cutjoin_suite(c);
    if (c.suite == "eo") return verify_eo_suite(c);
    int r = verify_identities_suite(c);
    r = std::max(r, verify_cutjoin_suite(c));
    return std::max(r, verify_eo_suite(c));
}

int cmd_export(const RunConfig& c) {
    if (c.out.empty()) throw UsageError("export needs --out");
    std::ostringstream s;
    int r = c.what == "correlators" ? write_correlators(c, s) : write_amplitudes(c, s);
    std::ofstream o(c.out);
    if (!o) throw std::runtime_error("cannot write " + c.out);
    o << s.str();
    return r;
}

int cmd_cache(const RunConfig& c) {
    const std::string dir = cache_dir(c);
    if (dir.empty()) throw UsageError("cache is disabled");
    if (c.cache_action == "path") {
        std::cout << dir << "\n";
    } else if (c.cache_action == "list") {
        if (!std::filesystem::exists(dir)) return kPass;
        std::vector<std::string> lines;
        for (const auto& e : std::filesystem::directory_iterator(dir)) {
            if (e.path().extension() != ".json") continue;
            std::ifstream in(e.path());
            nlohmann::json j;
            try {
                in >> j;
                lines.push_back(e.path().filename().string() + "  " + j.value("key", std::string("?")));
            } catch (const nlohmann::json::exception&) {
                lines.push_back(e.path().filename().string() + "  (unreadable)");
            }
        }
        std::sort(lines.begin(), lines.end());
        for (const auto& l : lines) std::cout << l << "\n";
    } else {
        std::size_t removed = 0;
        if (std::filesystem::exists(dir))
            for (const auto& e : std::filesystem::directory_iterator(dir))
                if (e.path().extension() == ".json") removed += std::filesystem::remove(e.path());
        std::cout << "removed " << removed << " cached forms\n";
    }
    return kPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Triple Hodge integrals: amplitudes, cut-and-join and recursion checks"};
    app.set_config("--config", "", "key = value configuration file; flags win");
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig c;
    app.add_option("--gmax", c.gmax, "Largest genus")->check(CLI::Range(0, 6));
    app.add_option("--size", c.size, "Largest total partition size |mu|")->check(CLI::NonNegativeNumber);
    app.add_option("--n", c.nmax, "Largest number of points for correlators")->check(CLI::Range(1, 8));
    app.add_option("--n1", c.n1, "Points on leg 1 (selects one correlator)")->check(CLI::NonNegativeNumber);
    app.add_option("--n2", c.n2, "Points on leg 2")->check(CLI::NonNegativeNumber);
    app.add_option("--n3", c.n3, "Points on leg 3")->check(CLI::NonNegativeNumber);
    app.add_option("-N,--order", c.order, "Series truncation order")->check(CLI::Range(1, 40));
    app.add_option("--a", c.a, "Rational framing p/q instead of symbolic a");
    app.add_option("--provider", c.provider, "direct, eo, or a table file");
    app.add_option("--cache-dir", c.cache_dir, "Correlator cache directory")->envname("TVR_CACHE_DIR");
    app.add_flag("--no-cache", c.no_cache, "Disable the correlator cache");
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* amp = app.add_subcommand("amplitudes", "Normalized amplitudes for every triple within the bounds");
    auto* cor = app.add_subcommand("correlators", "Basis forms of W_g from the recursion");
    auto* ver = app.add_subcommand("verify", "Run verifier suites; exit 0 iff all pass");
    ver->add_option("suite", c.suite, "identities, cutjoin, eo or all")
        ->check(CLI::IsMember({"identities", "cutjoin", "eo", "all"}));
    auto* exp = app.add_subcommand("export", "Write amplitudes or correlators to a file");
    exp->add_option("what", c.what, "amplitudes or correlators")->check(CLI::IsMember({"amplitudes", "correlators"}));
    exp->add_option("--out", c.out, "Output file")->required();
    auto* cache = app.add_subcommand("cache", "Inspect or clear the correlator cache");
    cache->add_option("action", c.cache_action, "path, list or clear")->check(CLI::IsMember({"path", "list", "clear"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }
    if (cor->parsed() && !app.get_option("--format")->count() && c.format == "csv") c.format = "json";
    if (exp->parsed() && c.what == "correlators" && !app.get_option("--format")->count()) c.format = "json";

    try {
        if (amp->parsed()) return write_amplitudes(c, std::cout);
        if (cor->parsed()) return write_correlators(c, std::cout);
        if (ver->parsed()) return cmd_verify(c);
        if (exp->parsed()) return cmd_export(c);
        if (cache->parsed()) return cmd_cache(c);
    } catch (const ProviderGap& e) {
        std::cerr << "provider gap: " << e.what() << "\n";
        return kProviderGap;
    } catch (const UsageError& e) {
        std::cerr << "usage: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kMismatch;
    }
    return kUsage;
}
