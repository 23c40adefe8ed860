#include "hexwalk/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "hexwalk/audit.hpp"
#include "hexwalk/cache.hpp"
#include "hexwalk/constructions.hpp"
#include "hexwalk/enumerator.hpp"
#include "hexwalk/errors.hpp"
#include "hexwalk/partitions.hpp"

namespace hexwalk {

namespace {

struct Globals {
    std::string k;
    std::optional<int> cap;
    int workers = 1;
    std::string format = "json";
    std::string cache_dir;
    std::uint64_t budget = kDefaultBudget;
    int precision = 12;
    std::string x;
    bool slow = false;
    int triangle_cap = 4;
    int length_cap = 30;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

// Field coefficients c_0..c_15 of sum c_j zeta^j, ';'-separated.
std::string exact_text(const CycNum& v) {
    std::string s;
    for (int j = 0; j < CycNum::kDegree; ++j) {
        if (j) s += ';';
        s += v.coeff(j).get_str();
    }
    return s;
}

int int_of(const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(s, &used);
    } catch (const std::exception&) {
        throw ContractError("not an integer: '" + s + "'");
    }
    if (used != s.size()) throw ContractError("not an integer: '" + s + "'");
    return v;
}

MidEdge parse_mid(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw ContractError("mid-edge must be written xq,yq");
    MidEdge m{int_of(s.substr(0, comma)), int_of(s.substr(comma + 1))};
    require_valid(m);
    return m;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

Domain parse_domain(const std::string& s) {
    const auto parts = split(s, ':');
    const std::string& kind = parts.empty() ? s : parts[0];
    auto need = [&](std::size_t n) {
        if (parts.size() != n) throw ContractError("malformed domain '" + s + "'");
    };
    if (kind == "triangle") {
        need(2);
        return Domain::triangle(int_of(parts[1]));
    }
    if (kind == "strip") {
        need(2);
        return Domain::strip(int_of(parts[1]));
    }
    if (kind == "halfplane") {
        need(1);
        return Domain::half_plane();
    }
    if (kind == "plane") {
        need(1);
        return Domain::plane();
    }
    if (kind == "trapezoid") {
        need(3);
        return Domain::trapezoid(int_of(parts[1]), parse_mid(parts[2]));
    }
    if (kind == "rotated") {
        need(3);
        return Domain::rotated_triangle(int_of(parts[1]), parse_mid(parts[2]));
    }
    if (kind == "offset") {
        need(3);
        return Domain::offset_triangle(int_of(parts[1]), int_of(parts[2]));
    }
    if (kind == "vertices") {
        need(2);
        return Domain::load_vertex_file(parts[1]);
    }
    throw ContractError("unknown domain '" + s + "' (triangle:K, strip:K, halfplane, plane, trapezoid:I:XQ,YQ, "
                        "rotated:I:XQ,YQ, offset:K:I, vertices:FILE)");
}

class Session {
public:
    Session(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {
        if (g.workers < 1) throw ContractError("--workers must be positive");
        if (g.precision < 1 || g.precision > 200) throw ContractError("--precision must be in 1..200");
        if (g.triangle_cap < 0 || g.length_cap < 1) throw ContractError("caps must be positive");
        if (g.format != "json" && g.format != "csv") throw ContractError("--format must be csv or json");
        if (g.cap && *g.cap < 0) throw ContractError("--cap must be nonnegative");
        if (!g.cache_dir.empty()) cache_ = std::make_unique<ResultCache>(g.cache_dir);
        ctx_.workers = g.workers;
        ctx_.cache = cache_.get();
        ctx_.budget = g.budget;
        ctx_.triangle_cap = g.triangle_cap;
        ctx_.length_cap = g.length_cap;
        if (!g.x.empty()) ctx_.x = parse_rational(g.x);
    }

    ~Session() {
        if (cache_)
            err_ << "cache: " << cache_->hits() << " hits, " << cache_->misses() << " misses, " << cache_->size()
                 << " entries in " << cache_->file() << "\n";
    }

    Session(const Session&) = delete;
    Session& operator=(const Session&) = delete;

    int verify(const std::string& suite) {
        VerifyParams p;
        if (!g_.k.empty()) p.k_range = parse_range(g_.k);
        p.cap = g_.cap.value_or(24);
        p.slow = g_.slow;
        p.ctx = ctx_;
        std::vector<std::string> names;
        if (suite == "all")
            names = suite_names();
        else
            names.push_back(suite);
        std::vector<SuiteReport> reports;
        for (const auto& n : names) reports.push_back(run_suite(n, p));
        bool failed = false;
        for (const auto& r : reports) failed = failed || r.failed();
        if (g_.format == "csv") {
            out_ << "suite,check,status,detail\n";
            for (const auto& r : reports)
                for (const auto& c : r.checks)
                    out_ << r.suite << ',' << csv_field(c.name) << ',' << c.status << ',' << csv_field(c.detail) << '\n';
        } else {
            nlohmann::json j{{"status", failed ? "fail" : "pass"}, {"suites", nlohmann::json::array()}};
            if (ctx_.x) j["x"] = g_.x;
            for (const auto& r : reports) j["suites"].push_back(r.to_json());
            out_ << j.dump(2) << '\n';
        }
        return failed ? kExitFail : kExitPass;
    }

    int partition(const std::string& target) {
        const auto [lo, hi] = g_.k.empty() ? std::pair{0, 0} : parse_range(g_.k);
        const int cap = g_.cap.value_or(24);
        std::vector<PartitionBracket> rows;
        for (int k = lo; k <= hi; ++k) {
            if (target == "D") {
                PartitionBracket b{"D", k, 0, D_index(k, ctx_), std::nullopt, true};
                b.upper = b.lower;
                rows.push_back(b);
            } else if (target == "Atri") {
                PartitionBracket b{"Atri", k, 0, triangle_D(k, ctx_).A, std::nullopt, true};
                b.upper = b.lower;
                rows.push_back(b);
            } else if (target == "A") {
                rows.push_back(strip_A(k, cap, ctx_));
            } else if (target == "B") {
                rows.push_back(strip_B(k, cap, ctx_));
            } else if (target == "G") {
                if (k < 1) throw ContractError("G needs k >= 1");
                rows.push_back(halfplane_G(k, k, cap, ctx_).front());
            } else {
                throw ContractError("unknown partition target '" + target + "' (D, Atri, A, B, G)");
            }
        }
        if (g_.format == "csv") {
            out_ << "target,k,cap,lower,upper,exact,decimal_" << g_.precision << '\n';
            for (const auto& b : rows)
                out_ << b.target << ',' << b.k << ',' << b.cap << ',' << exact_text(b.lower) << ','
                     << (b.upper ? exact_text(*b.upper) : "") << ',' << (b.exact ? "true" : "false") << ','
                     << approximate(b.lower, g_.precision).first << '\n';
        } else {
            auto j = nlohmann::json::array();
            for (const auto& b : rows) j.push_back(b.to_json(g_.precision));
            out_ << j.dump(2) << '\n';
        }
        return kExitPass;
    }

    int count(int n) {
        if (n < 0) throw ContractError("--n must be nonnegative");
        const auto c = count_saws_upto(n, ctx_.workers, std::max(kDefaultHardCap, n), ctx_.budget);
        const CycNum mu = constant(Constant::Mu);
        CycNum mu_pow(1);
        auto j = nlohmann::json::array();
        if (g_.format == "csv") out_ << "n,c_n,c_n_ge_mu_pow_n\n";
        for (int i = 0; i <= n; ++i) {
            const bool ge = compare_real(CycNum(mpq_class(std::to_string(c[static_cast<std::size_t>(i)]))), mu_pow) >= 0;
            if (g_.format == "csv")
                out_ << i << ',' << c[static_cast<std::size_t>(i)] << ',' << (ge ? "true" : "false") << '\n';
            else
                j.push_back({{"n", i}, {"c_n", c[static_cast<std::size_t>(i)]}, {"c_n_ge_mu_pow_n", ge}});
            mu_pow *= mu;
        }
        if (g_.format == "json") out_ << j.dump(2) << '\n';
        return kExitPass;
    }

    int enumerate_cmd(const std::string& domain, const std::string& start, const std::string& ends,
                      const std::string& walks_out) {
        EnumSpec spec;
        spec.domain = parse_domain(domain);
        spec.start = start.empty() ? MidEdge{0, 0} : parse_mid(start);
        if (!spec.domain.contains(spec.start)) throw ContractError("start mid-edge is outside the domain");
        if (g_.cap)
            spec.max_length = *g_.cap;
        else if (spec.domain.bounded())
            spec.max_length = std::max<int>(0, static_cast<int>(spec.domain.mids().size()) - 1);
        else
            throw ContractError("unbounded domains need --cap");
        if (!ends.empty()) {
            std::vector<SideLabel> sides;
            for (const auto& s : split(ends, ',')) sides.push_back(side_label_from_string(s));
            spec.filter = EndpointFilter::on_sides(sides);
        }
        spec.accumulators = acc::WeightSum | acc::PerEndpoint;
        if (!walks_out.empty()) spec.accumulators |= acc::Collector;
        if (ctx_.x) spec.x = *ctx_.x;
        spec.budget = ctx_.budget;
        const EnumResult r = walks_out.empty() ? run_enumeration(spec, ctx_.workers, cache_.get())
                                               : parallel_enumerate(spec, ctx_.workers);
        if (!walks_out.empty()) {
            if (r.collector_overflow) throw ResourceError("more walks than the collector cap");
            write_walks_ndjson(r.walks, walks_out);
        }
        if (g_.format == "csv") {
            out_ << "length,count\n";
            for (std::size_t l = 0; l < r.count_by_length.size(); ++l) out_ << l << ',' << r.count_by_length[l] << '\n';
        } else {
            nlohmann::json j{{"domain", spec.domain.name()},
                             {"start", {spec.start.xq, spec.start.yq}},
                             {"max_length", r.max_length},
                             {"walks", r.total_walks()},
                             {"count_by_length", r.count_by_length},
                             {"weight_sum", r.weight_sum},
                             {"weight_sum_decimal", approximate(r.weight_sum, g_.precision).first}};
            if (!walks_out.empty()) j["walks_file"] = walks_out;
            out_ << j.dump(2) << '\n';
        }
        return kExitPass;
    }

    int unfold(const std::string& file) {
        auto j = nlohmann::json::array();
        bool ok = true;
        for (const auto& w : read_walk_file(file)) {
            const auto u = hw_unfold(w);
            const bool cert = is_x_bridge(u.bridge);
            ok = ok && cert;
            j.push_back({{"input", walk_to_json(w)},
                         {"input_is_x_bridge", is_x_bridge(w)},
                         {"bridge", walk_to_json(u.bridge)},
                         {"reflections", u.reflections},
                         {"certificate", {{"is_x_bridge", cert}, {"length", u.bridge.length()}}}});
        }
        out_ << j.dump(2) << '\n';
        return ok ? kExitPass : kExitFail;
    }

    int decompose(const std::string& file, int m, int w) {
        auto j = nlohmann::json::array();
        bool ok = true;
        for (const auto& walk : read_walk_file(file)) {
            const auto rec = bridge_decompose(walk, m, w);
            const bool round_trip = reconstruct(rec).mids() == walk.mids();
            ok = ok && round_trip;
            auto e = rec.to_json();
            e["round_trip"] = round_trip;
            j.push_back(e);
        }
        out_ << j.dump(2) << '\n';
        return ok ? kExitPass : kExitFail;
    }

    int renewals(const std::string& file) {
        const int k = g_.k.empty() ? 0 : parse_range(g_.k).first;
        auto j = nlohmann::json::array();
        for (const auto& w : read_walk_file(file)) j.push_back(renewal_times(w, k).to_json());
        out_ << j.dump(2) << '\n';
        return kExitPass;
    }

    int displacement(int n) {
        const auto s = displacement_stats(n);
        if (g_.format == "csv")
            out_ << s.to_csv();
        else
            out_ << s.to_json().dump(2) << '\n';
        return kExitPass;
    }

    int render(const std::string& file, const RenderOptions& opts, const std::string& out_path) {
        const auto walks = read_walk_file(file);
        if (walks.size() != 1) throw ContractError("render expects exactly one walk in the file");
        const std::string svg = render_svg(walks.front(), opts);
        if (out_path.empty()) {
            out_ << svg;
        } else {
            std::ofstream f(out_path, std::ios::binary);
            if (!f) throw ContractError("cannot write " + out_path);
            f << svg;
        }
        return kExitPass;
    }

    int cache_cmd(const std::string& action) {
        if (!cache_) throw ContractError("cache commands need --cache-dir");
        if (action == "clear") {
            cache_->clear();
        } else if (action != "stats") {
            throw ContractError("cache action must be stats or clear");
        }
        out_ << nlohmann::json{{"file", cache_->file()}, {"entries", cache_->size()}, {"version", kCacheVersion}}.dump(2)
             << '\n';
        return kExitPass;
    }

private:
    const Globals& g_;
    std::ostream& out_;
    std::ostream& err_;
    std::unique_ptr<ResultCache> cache_;
    RunContext ctx_;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

} // namespace

std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    if (dots == std::string::npos) {
        const int v = int_of(text);
        return {v, v};
    }
    const int lo = int_of(text.substr(0, dots));
    const int hi = int_of(text.substr(dots + 2));
    if (hi < lo) throw ContractError("empty range '" + text + "'");
    return {lo, hi};
}

std::vector<Walk> read_walk_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path + ": cannot open");
    std::vector<std::string> lines;
    for (std::string l; std::getline(in, l);) lines.push_back(l);

    auto blank = [](const std::string& l) {
        const auto p = l.find_first_not_of(" \t\r");
        return p == std::string::npos || l[p] == '#';
    };
    auto fail = [&](std::size_t line, const std::string& why) -> ParseError {
        return ParseError(path + ":" + std::to_string(line) + ": " + why);
    };
    auto walk_at = [&](const nlohmann::json& j, std::size_t line) {
        try {
            return walk_from_json(j);
        } catch (const ParseError& e) {
            throw fail(line, e.what());
        } catch (const ContractError& e) {
            throw fail(line, e.what());
        }
    };

    std::vector<Walk> walks;
    std::size_t first = 0;
    while (first < lines.size() && blank(lines[first])) ++first;
    if (first == lines.size()) throw fail(lines.size() + 1, "no walk found");

    // A pretty-printed document spans several lines; NDJSON has one walk per line.
    if (!nlohmann::json::accept(lines[first])) {
        std::string doc;
        for (std::size_t i = first; i < lines.size(); ++i) doc += (blank(lines[i]) ? std::string() : lines[i]) + "\n";
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(doc);
        } catch (const nlohmann::json::parse_error& e) {
            std::size_t line = first + 1;
            for (std::size_t b = 0; b + 1 < e.byte && b < doc.size(); ++b) line += doc[b] == '\n';
            throw fail(line, "malformed JSON");
        }
        const bool many = j.is_array() && !j.empty() && j[0].is_array() && !j[0].empty() && j[0][0].is_array();
        if (many)
            for (const auto& w : j) walks.push_back(walk_at(w, first + 1));
        else
            walks.push_back(walk_at(j, first + 1));
        return walks;
    }
    for (std::size_t i = first; i < lines.size(); ++i) {
        if (blank(lines[i])) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(lines[i]);
        } catch (const nlohmann::json::parse_error&) {
            throw fail(i + 1, "malformed JSON");
        }
        walks.push_back(walk_at(j, i + 1));
    }
    return walks;
}

std::string render_svg(const Walk& walk, const RenderOptions& opts) {
    if (!(opts.scale > 0)) throw ContractError("scale must be positive");
    const auto& mids = walk.mids();
    if (mids.empty()) throw ContractError("cannot render an empty walk");
    int xmin = mids[0].xq, xmax = xmin, ymin = mids[0].yq, ymax = ymin;
    auto grow = [&](int x, int y) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    };
    for (auto m : mids) grow(m.xq, m.yq);
    std::vector<std::pair<int, int>> tri;
    if (opts.triangle) {
        const int k = *opts.triangle;
        if (k < 0) throw ContractError("triangle index must be nonnegative");
        tri = {{-4 * k - 2, 0}, {4 * k + 2, 0}, {0, 6 * (2 * k + 1)}};
        for (auto [x, y] : tri) grow(x, y);
    }
    xmin -= 6;
    xmax += 6;
    ymin -= 6;
    ymax += 6;

    const double s = opts.scale;
    const double ry = std::sqrt(3.0) / 12.0;
    auto px = [&](int xq) { return fmt((xq - xmin) * s / 4.0); };
    auto py = [&](int yq) { return fmt((ymax - yq) * s * ry); };

    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt((xmax - xmin) * s / 4.0) << "\" height=\""
      << fmt((ymax - ymin) * s * ry) << "\">\n";
    o << "<g stroke=\"#c8c8c8\" stroke-width=\"1\">\n";
    for (int yq = ymin; yq <= ymax; ++yq)
        for (int xq = xmin; xq <= xmax; ++xq) {
            const MidEdge m{xq, yq};
            if (!is_valid(m)) continue;
            const auto e = endpoints(m);
            o << "<line x1=\"" << px(e[0].xq) << "\" y1=\"" << py(e[0].yq) << "\" x2=\"" << px(e[1].xq) << "\" y2=\""
              << py(e[1].yq) << "\"/>\n";
        }
    o << "</g>\n";
    if (!tri.empty()) {
        o << "<polygon fill=\"none\" stroke=\"#3060c0\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < tri.size(); ++i)
            o << (i ? " " : "") << px(tri[i].first) << ',' << py(tri[i].second);
        o << "\"/>\n";
    }
    if (mids.size() > 1) {
        o << "<polyline fill=\"none\" stroke=\"#c03030\" stroke-width=\"3\" points=\"" << px(mids[0].xq) << ','
          << py(mids[0].yq);
        for (std::size_t i = 1; i < mids.size(); ++i) {
            const auto v = shared_vertex(mids[i - 1], mids[i]);
            o << ' ' << px(v.xq) << ',' << py(v.yq) << ' ' << px(mids[i].xq) << ',' << py(mids[i].yq);
        }
        o << "\"/>\n";
    }
    o << "<circle class=\"start\" cx=\"" << px(mids.front().xq) << "\" cy=\"" << py(mids.front().yq) << "\" r=\""
      << fmt(s / 10.0) << "\" fill=\"#202020\"/>\n";
    if (mids.size() > 1)
        o << "<circle class=\"end\" cx=\"" << px(mids.back().xq) << "\" cy=\"" << py(mids.back().yq) << "\" r=\""
          << fmt(s / 10.0) << "\" fill=\"#c03030\"/>\n";
    o << "</svg>\n";
    return o.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"hexwalk: exact self-avoiding walk computations on the hexagonal lattice"};
    app.fallthrough();
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value file mirroring the long flags");

    Globals g;
    app.add_option("--k", g.k, "index or inclusive range a..b");
    app.add_option("--cap", g.cap, "length cap for strips, the half-plane and unbounded enumerations");
    app.add_option("--workers", g.workers, "enumeration threads");
    app.add_option("--format", g.format, "csv or json");
    app.add_option("--cache-dir", g.cache_dir, "persistent result cache directory");
    app.add_option("--budget", g.budget, "maximum walks visited per enumeration");
    app.add_option("--precision", g.precision, "decimal digits in reports");
    app.add_option("--x", g.x, "off-critical weight as an exact rational p/q");
    app.add_flag("--slow", g.slow, "include the large instances");
    app.add_option("--triangle-cap", g.triangle_cap, "largest k with Tria_{2k+1} enumerable");
    app.add_option("--length-cap", g.length_cap, "largest strip / half-plane length cap");

    std::string suite, target, walk_file, domain, start, ends, walks_out, out_path, cache_action;
    int n = 0, m = 1, w = -1;
    RenderOptions ropts;
    std::optional<int> render_triangle;

    auto* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "suite name or 'all'")->required();
    auto* partition = app.add_subcommand("partition", "tabulate a partition function");
    partition->add_option("target", target, "D, Atri, A, B or G")->required();
    auto* count = app.add_subcommand("count", "c_n for n = 0..N");
    count->add_option("--n", n, "largest length")->required();
    auto* enumerate_sub = app.add_subcommand("enumerate", "enumerate walks in a domain");
    enumerate_sub->add_option("--domain", domain, "domain descriptor")->required();
    enumerate_sub->add_option("--start", start, "start mid-edge xq,yq");
    enumerate_sub->add_option("--ends", ends, "comma-separated side labels");
    enumerate_sub->add_option("--walks-out", walks_out, "write walks as JSON lines");
    auto* unfold = app.add_subcommand("unfold", "unfold walks into bridges");
    unfold->add_option("--walk", walk_file, "walk file")->required();
    auto* decompose = app.add_subcommand("decompose", "decompose bridges");
    decompose->add_option("--walk", walk_file, "walk file")->required();
    decompose->add_option("--m", m, "bridge height step");
    decompose->add_option("--w", w, "width parameter (default: bridge height)");
    auto* renewals = app.add_subcommand("renewals", "renewal times of triangle walks (uses --k)");
    renewals->add_option("--walk", walk_file, "walk file")->required();
    auto* displacement = app.add_subcommand("displacement", "exact max-displacement histogram");
    displacement->add_option("--n", n, "walk length")->required();
    auto* render = app.add_subcommand("render", "render a walk as SVG");
    render->add_option("--walk", walk_file, "walk file")->required();
    render->add_option("--scale", ropts.scale, "pixels per lattice unit");
    render->add_option("--triangle", render_triangle, "draw Tria_{2k+1}");
    render->add_option("--out", out_path, "output file (default stdout)");
    auto* cache = app.add_subcommand("cache", "inspect or clear the result cache");
    cache->add_option("action", cache_action, "stats or clear")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        Session s(g, out, err);
        if (*verify) return s.verify(suite);
        if (*partition) return s.partition(target);
        if (*count) return s.count(n);
        if (*enumerate_sub) return s.enumerate_cmd(domain, start, ends, walks_out);
        if (*unfold) return s.unfold(walk_file);
        if (*decompose) return s.decompose(walk_file, m, w);
        if (*renewals) return s.renewals(walk_file);
        if (*displacement) return s.displacement(n);
        if (*render) {
            ropts.triangle = render_triangle;
            return s.render(walk_file, ropts, out_path);
        }
        if (*cache) return s.cache_cmd(cache_action);
    } catch (const ResourceError& e) {
        err << "resource limit: " << e.what() << '\n';
        return kExitResource;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ContractError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

} // namespace hexwalk
