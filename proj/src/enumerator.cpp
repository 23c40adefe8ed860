#include "hexwalk/enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <memory>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "hexwalk/errors.hpp"

namespace hexwalk {

namespace {

constexpr int kPhases = CycNum::kOrder;
constexpr std::uint64_t kFlushEvery = 1u << 14;

struct MidHash {
    std::size_t operator()(MidEdge m) const noexcept {
        return std::hash<long long>()((static_cast<long long>(m.xq) << 32) ^ static_cast<unsigned>(m.yq));
    }
};

struct Link {
    int to = -1;
    std::int8_t side = 0;    // endpoint of this node used by the step
    std::int8_t to_side = 0; // endpoint of the neighbour used by the step
    std::int8_t turn = 0;
};

struct Node {
    MidEdge mid;
    std::array<Link, 4> links{};
    int nlinks = 0;
    int slot = -1;
    int line = -1;
    bool touch = false;
};

struct Arena {
    std::vector<Node> nodes;
    std::vector<MidEdge> slots;
    int start = 0;
};

int side_index(MidEdge m, LatticeVertex v) { return endpoints(m)[0] == v ? 0 : 1; }

Arena build_arena(const EnumSpec& spec) {
    Arena arena;
    std::unordered_map<MidEdge, int, MidHash> index;
    std::deque<std::pair<MidEdge, int>> queue;
    index[spec.start] = 0;
    arena.nodes.push_back(Node{spec.start});
    queue.emplace_back(spec.start, 0);
    while (!queue.empty()) {
        auto [m, depth] = queue.front();
        queue.pop_front();
        if (depth >= spec.max_length) continue;
        for (const auto& nb : neighbors(m)) {
            if (index.count(nb.mid) || !spec.domain.contains(nb.mid)) continue;
            index[nb.mid] = static_cast<int>(arena.nodes.size());
            arena.nodes.push_back(Node{nb.mid});
            queue.emplace_back(nb.mid, depth + 1);
        }
    }
    for (auto& node : arena.nodes) {
        for (const auto& nb : neighbors(node.mid)) {
            auto it = index.find(nb.mid);
            if (it == index.end()) continue;
            Link l;
            l.to = it->second;
            l.side = static_cast<std::int8_t>(side_index(node.mid, nb.via));
            l.to_side = static_cast<std::int8_t>(side_index(nb.mid, nb.via));
            l.turn = static_cast<std::int8_t>(step_turn(node.mid, nb.mid));
            node.links[static_cast<std::size_t>(node.nlinks++)] = l;
        }
        for (std::size_t r = 0; r < spec.renewal_lines.size(); ++r)
            if (spec.renewal_lines[r].on_line(node.mid)) node.line = static_cast<int>(r);
        node.touch = spec.touch_region && spec.touch_region->satisfied(node.mid);
    }
    for (const auto& node : arena.nodes)
        if (spec.filter.accepts(spec.domain, node.mid)) arena.slots.push_back(node.mid);
    std::sort(arena.slots.begin(), arena.slots.end());
    for (auto& node : arena.nodes) {
        auto it = std::lower_bound(arena.slots.begin(), arena.slots.end(), node.mid);
        if (it != arena.slots.end() && *it == node.mid) node.slot = static_cast<int>(it - arena.slots.begin());
    }
    return arena;
}

struct Tallies {
    std::vector<std::uint64_t> by_length, el, ew, er, et;
    std::uint64_t visited = 0;
    bool truncated = false;
    std::vector<Walk> walks;
    bool overflow = false;

    Tallies(const EnumSpec& spec, std::size_t slots, int nlines) {
        const std::size_t lens = static_cast<std::size_t>(spec.max_length) + 1;
        by_length.assign(lens, 0);
        if (spec.accumulators & acc::PerEndpoint) el.assign(slots * lens, 0);
        if (spec.accumulators & acc::Phase) ew.assign(slots * lens * kPhases, 0);
        if (spec.accumulators & acc::Renewal) er.assign(slots * lens * static_cast<std::size_t>(nlines + 1), 0);
        if (spec.accumulators & acc::Touch) et.assign(slots * lens, 0);
    }

    void merge(const Tallies& o) {
        auto add = [](std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
            for (std::size_t n = 0; n < a.size(); ++n) a[n] += b[n];
        };
        add(by_length, o.by_length);
        add(el, o.el);
        add(ew, o.ew);
        add(er, o.er);
        add(et, o.et);
        visited += o.visited;
        truncated = truncated || o.truncated;
    }
};

struct Prefix {
    std::vector<int> path;
    std::vector<std::int8_t> entry; // entry side of every path node (root: -1)
    int wmod = 0;
};

// Marks where a prefix's subtree sits among the walks collected before it.
struct Event {
    bool is_prefix = false;
    std::size_t index = 0;
};

class Searcher {
public:
    Searcher(const Arena& arena, const EnumSpec& spec, std::atomic<std::uint64_t>* shared_visits)
        : arena_(arena), spec_(spec), tallies_(spec, arena.slots.size(), static_cast<int>(spec.renewal_lines.size())),
          visited_(arena.nodes.size(), 0), line_count_(spec.renewal_lines.size(), 0), shared_(shared_visits) {
        lens_ = static_cast<std::size_t>(spec.max_length) + 1;
        nlines_ = static_cast<std::size_t>(spec.renewal_lines.size()) + 1;
        path_.reserve(lens_);
    }

    void set_visitor(const WalkVisitor* v) { visitor_ = v; }

    void set_prefix_mode(int depth, std::vector<Prefix>* out, std::vector<Event>* events) {
        prefix_depth_ = depth;
        prefixes_ = out;
        events_ = events;
    }

    void run_from_start() {
        push(arena_.start, -1);
        dfs(arena_.start, -1, 0);
        pop(arena_.start);
    }

    void run_from_prefix(const Prefix& p) {
        for (std::size_t n = 0; n < p.path.size(); ++n) push(p.path[n], p.entry[n]);
        wmod_ = p.wmod;
        dfs(p.path.back(), p.entry.back(), static_cast<int>(p.path.size()) - 1);
        for (auto it = p.path.rbegin(); it != p.path.rend(); ++it) pop(*it);
    }

    void finish() {
        if (shared_) flush();
    }

    Tallies& tallies() { return tallies_; }

private:
    void push(int node, int entry) {
        visited_[static_cast<std::size_t>(node)] = 1;
        path_.push_back(node);
        entry_.push_back(static_cast<std::int8_t>(entry));
        const Node& n = arena_.nodes[static_cast<std::size_t>(node)];
        if (n.line >= 0) {
            const int c = ++line_count_[static_cast<std::size_t>(n.line)];
            if (c == 1) ++renewals_;
            if (c == 2) --renewals_;
        }
        if (n.touch) ++touched_;
    }

    void pop(int node) {
        visited_[static_cast<std::size_t>(node)] = 0;
        path_.pop_back();
        entry_.pop_back();
        const Node& n = arena_.nodes[static_cast<std::size_t>(node)];
        if (n.line >= 0) {
            const int c = line_count_[static_cast<std::size_t>(n.line)]--;
            if (c == 1) --renewals_;
            if (c == 2) ++renewals_;
        }
        if (n.touch) --touched_;
    }

    void flush() {
        const std::uint64_t total = shared_->fetch_add(pending_) + pending_;
        pending_ = 0;
        if (total > spec_.budget) throw ResourceError("walk budget exhausted");
    }

    std::vector<MidEdge> current_mids() const {
        std::vector<MidEdge> out;
        out.reserve(path_.size());
        for (int n : path_) out.push_back(arena_.nodes[static_cast<std::size_t>(n)].mid);
        return out;
    }

    int signed_winding() const {
        int w = 0;
        for (std::size_t n = 1; n < path_.size(); ++n) {
            const Node& from = arena_.nodes[static_cast<std::size_t>(path_[n - 1])];
            for (int l = 0; l < from.nlinks; ++l)
                if (from.links[static_cast<std::size_t>(l)].to == path_[n]) w += from.links[static_cast<std::size_t>(l)].turn;
        }
        return w;
    }

    void record(int node, int len) {
        ++tallies_.visited;
        if (shared_) {
            if (++pending_ >= kFlushEvery) flush();
        } else if (tallies_.visited > spec_.budget) {
            throw ResourceError("walk budget exhausted");
        }
        const Node& n = arena_.nodes[static_cast<std::size_t>(node)];
        if (n.slot < 0 || len < spec_.filter.min_length) return;
        const std::size_t slot = static_cast<std::size_t>(n.slot);
        const std::size_t l = static_cast<std::size_t>(len);
        ++tallies_.by_length[l];
        if (!tallies_.el.empty()) ++tallies_.el[slot * lens_ + l];
        if (!tallies_.ew.empty()) ++tallies_.ew[(slot * lens_ + l) * kPhases + static_cast<std::size_t>(wmod_)];
        if (!tallies_.er.empty()) ++tallies_.er[(slot * lens_ + l) * nlines_ + static_cast<std::size_t>(renewals_)];
        if (!tallies_.et.empty() && touched_ > 0) ++tallies_.et[slot * lens_ + l];
        if (spec_.accumulators & acc::Collector) {
            if (tallies_.walks.size() < spec_.collect_cap)
                tallies_.walks.push_back(Walk::trusted(current_mids()));
            else
                tallies_.overflow = true;
        }
        if (visitor_) {
            const auto mids = current_mids();
            (*visitor_)(mids, signed_winding());
        }
    }

    void dfs(int node, int entry, int len) {
        if (prefixes_ && len == prefix_depth_) {
            if (events_) events_->push_back({true, prefixes_->size()});
            prefixes_->push_back({path_, entry_, wmod_});
            return;
        }
        const std::size_t before = tallies_.walks.size();
        record(node, len);
        if (events_ && tallies_.walks.size() > before) events_->push_back({false, tallies_.walks.size() - 1});
        const Node& n = arena_.nodes[static_cast<std::size_t>(node)];
        for (int j = 0; j < n.nlinks; ++j) {
            const Link& l = n.links[static_cast<std::size_t>(j)];
            if (l.side == entry || visited_[static_cast<std::size_t>(l.to)]) continue;
            if (len == spec_.max_length) {
                tallies_.truncated = true;
                return;
            }
            const int saved = wmod_;
            wmod_ = (wmod_ + l.turn + kPhases) % kPhases;
            push(l.to, l.to_side);
            dfs(l.to, l.to_side, len + 1);
            pop(l.to);
            wmod_ = saved;
        }
    }

    const Arena& arena_;
    const EnumSpec& spec_;
    Tallies tallies_;
    std::vector<std::uint8_t> visited_;
    std::vector<int> path_;
    std::vector<std::int8_t> entry_;
    std::vector<int> line_count_;
    int renewals_ = 0;
    int touched_ = 0;
    int wmod_ = 0;
    std::size_t lens_ = 0;
    std::size_t nlines_ = 0;
    std::atomic<std::uint64_t>* shared_ = nullptr;
    std::uint64_t pending_ = 0;
    const WalkVisitor* visitor_ = nullptr;
    int prefix_depth_ = -1;
    std::vector<Prefix>* prefixes_ = nullptr;
    std::vector<Event>* events_ = nullptr;
};

void check_spec(const EnumSpec& spec) {
    if (spec.max_length < 0) throw ContractError("max_length must be nonnegative");
    if (!spec.domain.bounded() && spec.max_length > spec.hard_cap)
        throw ResourceError("length cap " + std::to_string(spec.max_length) + " exceeds hard cap " +
                            std::to_string(spec.hard_cap));
    require_valid(spec.start);
    if (!spec.domain.contains(spec.start)) throw ContractError("start " + to_string(spec.start) + " outside domain");
    if (spec.sigma_eighths < 0) throw ContractError("sigma must be nonnegative");
}

EnumResult package(const EnumSpec& spec, const Arena& arena, Tallies&& t) {
    EnumResult r;
    r.max_length = spec.max_length;
    r.truncated = t.truncated;
    r.walks_visited = t.visited;
    r.accumulators = spec.accumulators;
    r.count_by_length = std::move(t.by_length);
    r.endpoints = arena.slots;
    r.endpoint_length = std::move(t.el);
    r.endpoint_winding = std::move(t.ew);
    r.renewal_lines = static_cast<int>(spec.renewal_lines.size());
    r.endpoint_renewal = std::move(t.er);
    r.endpoint_touch = std::move(t.et);
    r.walks = std::move(t.walks);
    r.collector_overflow = t.overflow;
    r.finalize(spec.x, spec.sigma_eighths);
    return r;
}

// Integer coefficient vectors of zeta^e, e = 0..47.
const std::array<std::array<long, CycNum::kDegree>, CycNum::kOrder>& zeta_table() {
    static const auto table = [] {
        std::array<std::array<long, CycNum::kDegree>, CycNum::kOrder> t{};
        for (int e = 0; e < CycNum::kOrder; ++e) {
            const CycNum z = CycNum::zeta_pow(e);
            for (int j = 0; j < CycNum::kDegree; ++j)
                t[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)] = z.numerator(j).get_si();
        }
        return t;
    }();
    return table;
}

CycNum integer_combination(const std::array<mpz_class, CycNum::kDegree>& coeffs) {
    CycNum out;
    for (int j = 0; j < CycNum::kDegree; ++j) {
        if (coeffs[static_cast<std::size_t>(j)] == 0) continue;
        CycNum term = CycNum::zeta_pow(j);
        term *= coeffs[static_cast<std::size_t>(j)];
        out += term;
    }
    return out;
}

} // namespace

EndpointFilter EndpointFilter::on_sides(std::vector<SideLabel> s, int min_length) {
    EndpointFilter f;
    f.mode = Mode::Sides;
    f.sides = std::move(s);
    f.min_length = min_length;
    return f;
}

EndpointFilter EndpointFilter::at_mids(std::vector<MidEdge> m, int min_length) {
    EndpointFilter f;
    f.mode = Mode::Mids;
    std::sort(m.begin(), m.end());
    f.mids = std::move(m);
    f.min_length = min_length;
    return f;
}

bool EndpointFilter::accepts(const Domain& d, MidEdge m) const {
    switch (mode) {
    case Mode::Any: return true;
    case Mode::Sides:
        return std::any_of(sides.begin(), sides.end(), [&](SideLabel s) { return d.on_side(m, s); });
    case Mode::Mids: return std::binary_search(mids.begin(), mids.end(), m);
    }
    return false;
}

nlohmann::json EndpointFilter::to_json() const {
    nlohmann::json j;
    j["mode"] = mode == Mode::Any ? "any" : mode == Mode::Sides ? "sides" : "mids";
    auto s = nlohmann::json::array();
    for (auto l : sides) s.push_back(to_string(l));
    j["sides"] = s;
    auto m = nlohmann::json::array();
    for (auto p : mids) m.push_back({p.xq, p.yq});
    j["mids"] = m;
    j["min_length"] = min_length;
    return j;
}

nlohmann::json EnumSpec::canonical_json() const {
    nlohmann::json j;
    j["domain"] = domain.to_json();
    j["start"] = {start.xq, start.yq};
    j["max_length"] = max_length;
    j["filter"] = filter.to_json();
    j["accumulators"] = accumulators;
    j["x"] = x;
    j["sigma_eighths"] = sigma_eighths;
    auto lines = nlohmann::json::array();
    for (const auto& h : renewal_lines) lines.push_back({h.a, h.b, h.c});
    j["renewal_lines"] = lines;
    if (touch_region)
        j["touch"] = {touch_region->a, touch_region->b, touch_region->c};
    else
        j["touch"] = nullptr;
    j["collect_cap"] = (accumulators & acc::Collector) ? collect_cap : 0;
    return j;
}

std::uint64_t EnumResult::total_walks() const {
    std::uint64_t s = 0;
    for (auto c : count_by_length) s += c;
    return s;
}

std::optional<std::size_t> EnumResult::slot_of(MidEdge m) const {
    auto it = std::lower_bound(endpoints.begin(), endpoints.end(), m);
    if (it == endpoints.end() || *it != m) return std::nullopt;
    return static_cast<std::size_t>(it - endpoints.begin());
}

std::uint64_t EnumResult::length_tally(std::size_t slot, int len) const {
    return endpoint_length.at(slot * static_cast<std::size_t>(max_length + 1) + static_cast<std::size_t>(len));
}

std::uint64_t EnumResult::winding_tally(std::size_t slot, int len, int wmod) const {
    return endpoint_winding.at((slot * static_cast<std::size_t>(max_length + 1) + static_cast<std::size_t>(len)) *
                                   kPhases +
                               static_cast<std::size_t>(wmod));
}

std::uint64_t EnumResult::renewal_tally(std::size_t slot, int len, int n) const {
    const std::size_t width = static_cast<std::size_t>(renewal_lines) + 1;
    return endpoint_renewal.at((slot * static_cast<std::size_t>(max_length + 1) + static_cast<std::size_t>(len)) *
                                   width +
                               static_cast<std::size_t>(n));
}

std::uint64_t EnumResult::touch_tally(std::size_t slot, int len) const {
    return endpoint_touch.at(slot * static_cast<std::size_t>(max_length + 1) + static_cast<std::size_t>(len));
}

void EnumResult::finalize(const CycNum& x, int sigma_eighths) {
    std::vector<CycNum> xp(static_cast<std::size_t>(max_length) + 1);
    xp[0] = CycNum(1);
    for (std::size_t l = 1; l < xp.size(); ++l) xp[l] = xp[l - 1] * x;

    weight_sum = CycNum();
    for (std::size_t l = 0; l < count_by_length.size(); ++l)
        if (count_by_length[l]) {
            CycNum term = xp[l];
            term *= mpz_class(std::to_string(count_by_length[l]));
            weight_sum += term;
        }

    const std::size_t lens = static_cast<std::size_t>(max_length) + 1;
    per_endpoint.clear();
    if (!endpoint_length.empty())
        for (std::size_t s = 0; s < endpoints.size(); ++s) {
            CycNum sum;
            bool any = false;
            for (std::size_t l = 0; l < lens; ++l) {
                const auto c = endpoint_length[s * lens + l];
                if (!c) continue;
                CycNum term = xp[l];
                term *= mpz_class(std::to_string(c));
                sum += term;
                any = true;
            }
            if (any) per_endpoint[endpoints[s]] = sum;
        }

    phase_sum.clear();
    if (!endpoint_winding.empty()) {
        const auto& zt = zeta_table();
        for (std::size_t s = 0; s < endpoints.size(); ++s) {
            CycNum sum;
            bool any = false;
            for (std::size_t l = 0; l < lens; ++l) {
                std::array<mpz_class, CycNum::kDegree> coeffs{};
                bool nonzero = false;
                for (int w = 0; w < kPhases; ++w) {
                    const auto c = endpoint_winding[(s * lens + l) * kPhases + static_cast<std::size_t>(w)];
                    if (!c) continue;
                    nonzero = true;
                    const int e = ((-sigma_eighths * w) % kPhases + kPhases) % kPhases;
                    const mpz_class cz(std::to_string(c));
                    for (int j = 0; j < CycNum::kDegree; ++j) {
                        const long t = zt[static_cast<std::size_t>(e)][static_cast<std::size_t>(j)];
                        if (t) coeffs[static_cast<std::size_t>(j)] += cz * t;
                    }
                }
                if (!nonzero) continue;
                sum += integer_combination(coeffs) * xp[l];
                any = true;
            }
            if (any) phase_sum[endpoints[s]] = sum;
        }
    }
}

nlohmann::json EnumResult::to_json() const {
    nlohmann::json j;
    j["max_length"] = max_length;
    j["truncated"] = truncated;
    j["walks_visited"] = walks_visited;
    j["accumulators"] = accumulators;
    j["count_by_length"] = count_by_length;
    auto eps = nlohmann::json::array();
    for (auto m : endpoints) eps.push_back({m.xq, m.yq});
    j["endpoints"] = eps;
    j["endpoint_length"] = endpoint_length;
    j["endpoint_winding"] = endpoint_winding;
    j["renewal_lines"] = renewal_lines;
    j["endpoint_renewal"] = endpoint_renewal;
    j["endpoint_touch"] = endpoint_touch;
    auto ws = nlohmann::json::array();
    for (const auto& w : walks) ws.push_back(walk_to_json(w));
    j["walks"] = ws;
    j["collector_overflow"] = collector_overflow;
    j["weight_sum"] = weight_sum;
    auto pe = nlohmann::json::array();
    for (const auto& [m, v] : per_endpoint) pe.push_back({{"mid", {m.xq, m.yq}}, {"value", v}});
    j["per_endpoint"] = pe;
    auto ph = nlohmann::json::array();
    for (const auto& [m, v] : phase_sum) ph.push_back({{"mid", {m.xq, m.yq}}, {"value", v}});
    j["phase_sum"] = ph;
    return j;
}

EnumResult EnumResult::from_json(const nlohmann::json& j) {
    try {
        EnumResult r;
        r.max_length = j.at("max_length").get<int>();
        r.truncated = j.at("truncated").get<bool>();
        r.walks_visited = j.at("walks_visited").get<std::uint64_t>();
        r.accumulators = j.at("accumulators").get<unsigned>();
        r.count_by_length = j.at("count_by_length").get<std::vector<std::uint64_t>>();
        for (const auto& m : j.at("endpoints")) r.endpoints.push_back({m.at(0).get<int>(), m.at(1).get<int>()});
        r.endpoint_length = j.at("endpoint_length").get<std::vector<std::uint64_t>>();
        r.endpoint_winding = j.at("endpoint_winding").get<std::vector<std::uint64_t>>();
        r.renewal_lines = j.at("renewal_lines").get<int>();
        r.endpoint_renewal = j.at("endpoint_renewal").get<std::vector<std::uint64_t>>();
        r.endpoint_touch = j.at("endpoint_touch").get<std::vector<std::uint64_t>>();
        for (const auto& w : j.at("walks")) r.walks.push_back(walk_from_json(w));
        r.collector_overflow = j.at("collector_overflow").get<bool>();
        r.weight_sum = j.at("weight_sum").get<CycNum>();
        for (const auto& e : j.at("per_endpoint"))
            r.per_endpoint[{e.at("mid").at(0).get<int>(), e.at("mid").at(1).get<int>()}] = e.at("value").get<CycNum>();
        for (const auto& e : j.at("phase_sum"))
            r.phase_sum[{e.at("mid").at(0).get<int>(), e.at("mid").at(1).get<int>()}] = e.at("value").get<CycNum>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed enumeration result: ") + e.what());
    }
}

EnumResult enumerate(const EnumSpec& spec) { return enumerate(spec, WalkVisitor{}); }

EnumResult enumerate(const EnumSpec& spec, const WalkVisitor& visitor) {
    check_spec(spec);
    const Arena arena = build_arena(spec);
    Searcher s(arena, spec, nullptr);
    if (visitor) s.set_visitor(&visitor);
    s.run_from_start();
    return package(spec, arena, std::move(s.tallies()));
}

EnumResult parallel_enumerate(const EnumSpec& spec, int workers) {
    if (workers < 1) throw ContractError("worker count must be positive");
    check_spec(spec);
    if (workers == 1) return enumerate(spec);
    const Arena arena = build_arena(spec);
    const int depth = std::min(spec.max_length, 6);

    std::atomic<std::uint64_t> visits{0};
    std::vector<Prefix> prefixes;
    std::vector<Event> events;
    Searcher head(arena, spec, &visits);
    head.set_prefix_mode(depth, &prefixes, &events);
    head.run_from_start();
    head.finish();

    std::vector<std::unique_ptr<Searcher>> searchers;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> ranges(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) searchers.push_back(std::make_unique<Searcher>(arena, spec, &visits));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            try {
                auto& s = *searchers[static_cast<std::size_t>(w)];
                for (std::size_t p = static_cast<std::size_t>(w); p < prefixes.size();
                     p += static_cast<std::size_t>(workers)) {
                    const std::size_t first = s.tallies().walks.size();
                    s.run_from_prefix(prefixes[p]);
                    ranges[static_cast<std::size_t>(w)].emplace_back(first, s.tallies().walks.size());
                }
                s.finish();
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    Tallies merged = std::move(head.tallies());
    std::vector<Walk> head_walks = std::move(merged.walks);
    merged.walks.clear();
    for (auto& s : searchers) merged.merge(s->tallies());

    // Splice collected walks back into depth-first order.
    bool overflow = merged.overflow;
    for (auto& s : searchers) overflow = overflow || s->tallies().overflow;
    std::vector<std::size_t> seen(static_cast<std::size_t>(workers), 0);
    auto emit = [&](Walk&& w) {
        if (merged.walks.size() < spec.collect_cap)
            merged.walks.push_back(std::move(w));
        else
            overflow = true;
    };
    for (const auto& ev : events) {
        if (!ev.is_prefix) {
            emit(std::move(head_walks[ev.index]));
            continue;
        }
        const std::size_t w = ev.index % static_cast<std::size_t>(workers);
        const auto [first, last] = ranges[w][seen[w]++];
        auto& src = searchers[w]->tallies().walks;
        for (std::size_t n = first; n < last; ++n) emit(std::move(src[n]));
    }
    merged.overflow = overflow;
    return package(spec, arena, std::move(merged));
}

std::uint64_t count_saws(int n, int hard_cap, std::uint64_t budget) {
    if (n < 0) throw ContractError("length must be nonnegative");
    if (n > hard_cap) throw ResourceError("length " + std::to_string(n) + " exceeds hard cap " + std::to_string(hard_cap));
    return count_saws_upto(n, 1, hard_cap, budget).at(static_cast<std::size_t>(n));
}

std::vector<std::uint64_t> count_saws_upto(int n_max, int workers, int hard_cap, std::uint64_t budget) {
    if (n_max > hard_cap)
        throw ResourceError("length " + std::to_string(n_max) + " exceeds hard cap " + std::to_string(hard_cap));
    EnumSpec spec;
    spec.domain = Domain::plane();
    spec.start = {0, 0};
    spec.max_length = n_max;
    spec.accumulators = acc::WeightSum;
    spec.x = CycNum(1);
    spec.budget = budget;
    spec.hard_cap = hard_cap;
    return parallel_enumerate(spec, workers).count_by_length;
}

nlohmann::json walk_to_json(const Walk& w) {
    auto a = nlohmann::json::array();
    for (auto m : w.mids()) a.push_back({m.xq, m.yq});
    return a;
}

Walk walk_from_json(const nlohmann::json& j) {
    if (!j.is_array()) throw ParseError("walk must be a JSON array of [xq, yq] pairs");
    std::vector<MidEdge> mids;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer())
            throw ParseError("walk entries must be [xq, yq] integer pairs");
        mids.push_back({p[0].get<int>(), p[1].get<int>()});
    }
    if (!Walk::is_valid_sequence(mids)) throw ParseError("sequence is not a self-avoiding walk");
    return Walk(std::move(mids));
}

void write_walks_ndjson(const std::vector<Walk>& walks, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ResourceError("cannot write '" + path + "'");
    for (const auto& w : walks) out << walk_to_json(w).dump() << '\n';
}

} // namespace hexwalk
