// SPDX-License-Identifier: Apache-2.0
//---------------------------------------------------------------------------//
//! \file acceptance.cpp
//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.
//---------------------------------------------------------------------------//
#include <unistd.h>

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "arrobf/arrobf.hpp"
#include "arrobf/cli.hpp"

using namespace arrobf;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace
{
//! Failure description, or empty on success; \c note adds detail to PASS.
struct Outcome
{
    std::optional<std::string> failure;
    std::string note;
};

Outcome pass(std::string note = {}) { return {std::nullopt, std::move(note)}; }
Outcome fail(std::string why) { return {std::move(why), {}}; }

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(fs::path const& path)
{
    std::ifstream is(path, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::string strip_ws(std::string s)
{
    s.erase(std::remove_if(s.begin(), s.end(),
                           [](unsigned char c) { return std::isspace(c); }),
            s.end());
    return s;
}

fs::path data(std::string const& rel) { return fs::path(ARROBF_TEST_DATA_DIR) / rel; }

std::map<std::string, std::string> snapshot(fs::path const& dir)
{
    std::map<std::string, std::string> files;
    if (!fs::is_directory(dir))
        return files;
    for (auto const& e : fs::recursive_directory_iterator(dir))
    {
        if (e.is_regular_file())
            files[fs::relative(e.path(), dir).string()] = read_file(e.path());
    }
    return files;
}

struct CliRun
{
    int code;
    std::string out;
    std::string err;
};

CliRun run_cli(std::vector<std::string> args)
{
    args.insert(args.begin(), "arrobf");
    std::vector<char const*> argv;
    for (auto const& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class ScratchDir
{
  public:
    explicit ScratchDir(std::string const& tag)
        : path_(fs::temp_directory_path()
                / fmt::format("arrobf_accept_{}_{}", ::getpid(), tag))
    {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~ScratchDir()
    {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    fs::path operator/(std::string const& s) const { return path_ / s; }
    fs::path const& path() const { return path_; }

  private:
    fs::path path_;
};

std::set<std::string> changed_files(std::map<std::string, std::string> before,
                                    std::map<std::string, std::string> const& after)
{
    std::set<std::string> changed;
    for (auto const& [name, text] : after)
    {
        if (before[name] != text)
            changed.insert(name);
    }
    return changed;
}

std::string join(std::set<std::string> const& names)
{
    std::string out;
    for (auto const& n : names)
        out += (out.empty() ? "" : ",") + n;
    return "{" + out + "}";
}

//---------------------------------------------------------------------------//
Outcome constant_hiding_triple()
{
    struct Case
    {
        std::uint64_t a, b;
        int count;
    };
    Case const cases[] = {{41, 23, 2}, {6130, 3071, 9}, {24560, 12287, 11}};
    auto start = Clock::now();
    std::uint64_t results[3];
    for (int i = 0; i < 3; ++i)
        results[i] = f_eval(cases[i].a % cases[i].b, cases[i].count);
    double elapsed = seconds_since(start);
    for (int i = 0; i < 3; ++i)
    {
        if (results[i] != 2)
            return fail(fmt::format("F({} % {}, {}) = {}", cases[i].a, cases[i].b,
                                    cases[i].count, results[i]));
    }
    if (elapsed >= 1e-3)
        return fail(fmt::format("took {:.3f} ms", elapsed * 1e3));
    return pass(fmt::format("{:.1f} us", elapsed * 1e6));
}

Outcome factor_table_exact()
{
    std::uint64_t const ref[13][2] = {{2, 3}, {5, 6}, {11, 12}, {23, 24},
                                          {47, 48}, {95, 96}, {191, 192},
                                          {383, 384}, {767, 768}, {1535, 1536},
                                          {3071, 3072}, {6143, 6144}, {12287, 12288}};
    auto const& t = factor_table();
    if (t.size() != 13)
        return fail(fmt::format("{} pairs", t.size()));
    for (std::size_t i = 0; i < 13; ++i)
    {
        if (t[i].n1 != ref[i][0] || t[i].n2 != ref[i][1])
            return fail(fmt::format("pair {} is {{{},{}}}", i, t[i].n1, t[i].n2));
    }
    return pass();
}

Outcome renderer_round_trip()
{
    struct Case
    {
        int count;
        std::uint64_t base;
        char const* text;
    };
    Case const cases[] = {{2, 18, "F(41 % 23, 2)"},
                          {9, 3059, "F(6130 % 3071, 9)"},
                          {11, 12273, "F(24560 % 12287, 11)"}};
    std::string seeds;
    for (auto const& c : cases)
    {
        std::optional<std::uint64_t> seed;
        for (std::uint64_t s = 0; s < 1000000 && !seed; ++s)
        {
            if (hide_constant(2, c.count, s).base == c.base)
                seed = s;
        }
        if (!seed)
            return fail(fmt::format("no seed yields base {}", c.base));
        auto text = render_call(hide_constant(2, c.count, *seed));
        if (text != c.text)
            return fail(fmt::format("seed {} renders '{}'", *seed, text));
        seeds += fmt::format("{}{}", seeds.empty() ? "seeds " : "/", *seed);
    }
    return pass(seeds);
}

Outcome loc_potency_table()
{
    struct Row
    {
        std::uint64_t loc;
        char const* s_loc;
        char const* s_pot;
    };
    Row const rows[] = {{296, "12.45", "155.63"}, {164, "6.45", "80.63"}, {117, "4.32", "54.00"}};
    for (auto const& r : rows)
    {
        double loc = s_loc(22, r.loc);
        double pot = s_pot(loc, default_potency_weight);
        auto shown_loc = fmt::format("{:.2f}", round_half_up(loc, 2));
        auto shown_pot = fmt::format("{:.2f}", round_half_up(pot, 2));
        if (shown_loc != r.s_loc || shown_pot != r.s_pot)
            return fail(fmt::format("LOC {}: S_LOC {} S_pot {}", r.loc, shown_loc, shown_pot));
    }
    return pass();
}

Outcome cost_quality_table()
{
    struct Row
    {
        double size_obf;
        double ref_storage;
        double ref_runtime;
        std::uint64_t loc_obf;
        char const* storage;
        char const* cst;
        char const* quality;
    };
    Row const rows[] = {{1.135, 0.61, 0.2, 296, "0.61", "0.182", "62.07"},
                        {1.136, 0.61, 0.0, 164, "0.61", "0.092", "32.16"},
                        {1.223, 0.75, 0.0, 117, "0.74", "0.113", "21.49"}};
    for (auto const& r : rows)
    {
        double storage = s_storage(0.704, r.size_obf);
        if (std::abs(storage - std::stod(r.storage)) > 0.01 + 1e-12)
            return fail(fmt::format("S_storage {:.4f} for {} KB", storage, r.size_obf));
        if (fmt::format("{:.2f}", round_half_up(storage, 2)) != r.storage)
            return fail(fmt::format("S_storage displays {:.2f}", round_half_up(storage, 2)));
        double cst = s_cst(r.ref_storage, r.ref_runtime);
        double pot = s_pot(s_loc(22, r.loc_obf));
        double quality = s_quality(pot, cst);
        auto shown_cst = fmt::format("{:.3f}", round_half_up(cst, 3));
        auto shown_q = fmt::format("{:.2f}", round_half_up(quality, 2));
        if (shown_cst != r.cst || shown_q != r.quality)
            return fail(fmt::format("S_cst {} S_quality {}", shown_cst, shown_q));
    }
    return pass("flatten storage computes 0.74; the reference 0.75 feeds S_cst");
}

Outcome oracle_equivalence()
{
    VerifyOptions opt;
    opt.size_limit = 257;
    opt.ops_per_case = 10000;
    opt.large_split = true;
    auto start = Clock::now();
    auto res = verify_stores(opt);
    double elapsed = seconds_since(start);
    if (!res.ok())
        return fail(res.counterexample.value_or("cases failed"));
    if (res.cases != 3 * 4 * 257 + 4)
        return fail(fmt::format("ran {} cases", res.cases));
    if (elapsed >= 60)
        return fail(fmt::format("took {:.1f} s", elapsed));
    return pass(fmt::format("{} cases in {:.2f} s", res.cases, elapsed));
}

Outcome bijection_suites()
{
    VerifyOptions opt;
    opt.size_limit = 300;
    auto split = verify_split_bijection(opt);
    if (!split.ok() || split.cases != 300)
        return fail("split: " + split.counterexample.value_or("incomplete"));
    opt.fold_cell_limit = 100000;
    auto fold = verify_fold_flatten(opt);
    if (!fold.ok())
        return fail("fold/flatten: " + fold.counterexample.value_or("incomplete"));

    AffineMap const amap{3, 0, 100};
    if (!affine_valid(amap))
        return fail("k=3 n=100 rejected");
    std::vector<bool> hit(100);
    for (std::uint64_t i = 0; i < 100; ++i)
        hit[affine_index(i, amap)] = true;
    if (std::count(hit.begin(), hit.end(), true) != 100)
        return fail("k=3 n=100 is not a permutation");
    AffineMap const even{2, 0, 100};
    if (affine_valid(even))
        return fail("k=2 n=100 accepted");
    bool threw = false;
    try
    {
        affine_inverse(even);
    }
    catch (std::invalid_argument const&)
    {
        threw = true;
    }
    if (!threw)
        return fail("k=2 n=100 has an inverse");
    std::set<std::uint64_t> images;
    for (std::uint64_t i = 0; i < 100; ++i)
        images.insert(affine_index(i, even));
    if (images.size() == 100)
        return fail("k=2 n=100 has no collisions");

    std::mt19937_64 rng(50);
    int checked = 0;
    while (checked < 50)
    {
        std::uint64_t n = 1 + rng() % 100000;
        AffineMap m{1 + rng() % n, rng() % n, n};
        if (!affine_valid(m))
            continue;
        auto inv = affine_inverse(m);
        for (int j = 0; j < 200; ++j)
        {
            auto i = rng() % n;
            if (affine_index(affine_index(i, m), inv) != i
                || affine_index(affine_index(i, inv), m) != i)
                return fail(fmt::format("inverse of ({},{},{}) fails at {}", m.k, m.b, n, i));
        }
        ++checked;
    }
    return pass(fmt::format("{} fold/flatten shapes; positions exhaustive up to {} cells, "
                            "corners plus 16 random positions above",
                            fold.cases, opt.fold_exhaustive_limit));
}

Outcome stub_calibration()
{
    auto stub = emit_stub(RestructureOp::split, ElementKind::integer);
    auto count = count_statements(stub.source_text);
    if (count != 7)
        return fail(fmt::format("count {}", count));
    auto golden = read_file(data("golden/SplitArray_Integer.stub.java"));
    if (golden.empty())
        return fail("golden file missing");
    if (strip_ws(golden) != strip_ws(stub.source_text))
        return fail("stub text differs from golden file");
    return pass();
}

Outcome hiding_site_counts()
{
    for (auto id : predefined_classes())
    {
        ObfConfig config;
        config.hide_constants = true;
        auto cls = emit_full(id.op, id.kind, config);
        std::regex call(R"(F\(\d+( % \d+)?, \d+\))");
        auto in_text = static_cast<std::size_t>(
            std::distance(std::sregex_iterator(cls.source_text.begin(),
                                               cls.source_text.end(), call),
                          std::sregex_iterator()));
        std::size_t want = hiding_site_count(id.op);
        if (cls.hiding_sites != want || in_text != want)
            return fail(fmt::format("{}: {} sites recorded, {} in text, want {}", cls.name,
                                    cls.hiding_sites, in_text, want));

        auto text = cls.source_text;
        auto helper = text.find(emit_hiding_helper());
        if (helper == std::string::npos)
            return fail(cls.name + ": helper missing");
        text.erase(helper, emit_hiding_helper().size());
        std::size_t from = 0;
        for (auto const& site : cls.sites)
        {
            auto at = text.find(site.text, from);
            if (at == std::string::npos)
                return fail(cls.name + ": site text not found");
            auto value = std::to_string(f_eval(site.call.base, site.call.count));
            text.replace(at, site.text.size(), value);
            from = at + value.size();
        }
        config.hide_constants = false;
        if (strip_ws(text) != strip_ws(emit_full(id.op, id.kind, config).source_text))
            return fail(cls.name + ": substituted text differs from hiding-off text");
    }
    return pass("9/5/3");
}

Outcome tool_pipeline()
{
    ScratchDir dir("pipeline");
    auto gen = run_cli({"generate", "--infile", data("fixtures/InFile.txt").string(), "--op",
                        "split", "--out", (dir / "gen").string()});
    if (gen.code != 0)
        return fail("generate exit " + std::to_string(gen.code));
    std::set<std::string> const split{"SplitArray_Char.java", "SplitArray_Double.java",
                                      "SplitArray_Integer.java", "SplitArray_String.java"};
    std::set<std::string> generated;
    for (auto const& [name, text] : snapshot(dir / "gen"))
        generated.insert(name);
    if (generated != split)
        return fail("generate wrote " + join(generated));

    for (auto const& [source, expect] :
         {std::pair{"fixtures/test.java", split},
          std::pair{"fixtures/search_Arrayflatten.java",
                    std::set<std::string>{"FlattenedArray_Integer.java"}}})
    {
        auto classes = dir / (std::string("classes_") + fs::path(source).stem().string());
        if (run_cli({"stubs", "--out", classes.string()}).code != 0)
            return fail("stubs failed");
        auto before = snapshot(classes);
        auto rw = run_cli({"rewrite", "--source", data(source).string(), "--class-dir",
                           classes.string()});
        if (rw.code != 0)
            return fail(std::string("rewrite exit ") + std::to_string(rw.code));
        auto changed = changed_files(before, snapshot(classes));
        if (changed != expect)
            return fail(std::string(source) + " rewrote " + join(changed));
    }
    return pass();
}

Outcome hide_round_trip()
{
    std::size_t n = 0;
    for (std::uint64_t c = 0; c < 5; ++c)
    {
        for (int count = 1; count <= 13; ++count)
        {
            for (std::uint64_t seed = 0; seed < 100; ++seed)
            {
                auto call = hide_constant(c, count, seed);
                if (f_eval(call.base, count) != c)
                    return fail(fmt::format("c={} count={} seed={} base={}", c, count,
                                            seed, call.base));
                ++n;
            }
        }
    }
    return pass(fmt::format("{} calls", n));
}

Outcome determinism()
{
    ScratchDir dir("determinism");
    auto session = [&](std::string const& tag) {
        auto base = dir / tag;
        fs::create_directories(base);
        std::string log;
        auto record = [&](CliRun const& r) {
            log += fmt::format("[{}]\n{}{}", r.code, r.out, r.err);
        };
        record(run_cli({"generate", "--infile", data("fixtures/InFile.txt").string(), "--op",
                        "split", "--out", (base / "gen").string(), "--seed", "17", "--hide",
                        "--index-obfuscate"}));
        record(run_cli({"generate", "--infile", data("fixtures/InFile2D.txt").string(), "--op",
                        "flatten", "--out", (base / "gen").string(), "--hide"}));
        record(run_cli({"stubs", "--out", (base / "cls").string()}));
        record(run_cli({"rewrite", "--source", data("fixtures/test.java").string(),
                        "--class-dir", (base / "cls").string(), "--seed", "5", "--hide"}));
        record(run_cli({"metrics", "--orig", data("fixtures/search_orig.java").string(),
                        "--obf", data("fixtures/search_Arraysplit.java").string(), "--class",
                        (base / "cls" / "SplitArray_Integer.java").string(), "--t-orig", "5",
                        "--t-obf", "6"}));
        record(run_cli({"hide", "--value", "2", "--count", "11", "--seed", "2280"}));
        record(run_cli({"verify", "--size-limit", "60", "--ops", "500", "--seed", "3"}));
        // paths are the only legitimate difference between sessions
        auto p = base.string();
        for (auto at = log.find(p); at != std::string::npos; at = log.find(p))
            log.replace(at, p.size(), "<dir>");
        return std::make_pair(log, snapshot(base));
    };
    auto a = session("a");
    auto b = session("b");
    if (a.first != b.first)
        return fail("stdout/stderr differ between runs");
    if (a.second != b.second)
        return fail("written files differ between runs");
    if (a.second.size() != 4 + 1 + 12)
        return fail(fmt::format("{} files written", a.second.size()));
    return pass("generate, stubs, rewrite, metrics, hide, verify");
}
}  // namespace

int main()
{
    struct Criterion
    {
        int id;
        char const* name;
        std::function<Outcome()> check;
    };
    std::vector<Criterion> const criteria{
        {1, "constant-hiding triple", constant_hiding_triple},
        {2, "factor table", factor_table_exact},
        {3, "renderer round trip", renderer_round_trip},
        {4, "LOC and potency table", loc_potency_table},
        {5, "storage, cost and quality table", cost_quality_table},
        {6, "store oracle equivalence", oracle_equivalence},
        {7, "bijection suites", bijection_suites},
        {8, "stub calibration", stub_calibration},
        {9, "hiding-site counts", hiding_site_counts},
        {10, "tool pipeline fixture", tool_pipeline},
        {11, "hide round trip", hide_round_trip},
        {12, "determinism", determinism},
    };

    int failures = 0;
    for (auto const& c : criteria)
    {
        Outcome outcome;
        try
        {
            outcome = c.check();
        }
        catch (std::exception const& e)
        {
            outcome = fail(std::string("exception: ") + e.what());
        }
        if (outcome.failure)
        {
            ++failures;
            std::cout << fmt::format("FAIL {:2} {}: {}\n", c.id, c.name, *outcome.failure);
        }
        else
        {
            std::cout << fmt::format("PASS {:2} {}{}\n", c.id, c.name,
                                     outcome.note.empty() ? "" : " (" + outcome.note + ")");
        }
        std::cout.flush();
    }
    std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failures,
                             criteria.size());
    return failures == 0 ? 0 : 1;
}
