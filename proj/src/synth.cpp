#include "synth.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "common.hpp"
#include "rng.hpp"

namespace sb {

namespace {

struct Builder {
    std::vector<std::pair<int, int>> edges;
    std::vector<int> types;
    std::vector<int> roles;
    bool typed = false;

    int add_node(int role) {
        roles.push_back(role);
        return static_cast<int>(roles.size()) - 1;
    }
    void edge(int u, int v, int t = 0) {
        edges.emplace_back(u, v);
        types.push_back(t);
    }
    void clique(const std::vector<int>& vs, int t = 0) {
        for (size_t i = 0; i < vs.size(); ++i)
            for (size_t j = i + 1; j < vs.size(); ++j) edge(vs[i], vs[j], t);
    }
    SynthGraph finish(std::string family, std::vector<std::string> role_names,
                      std::string labeling, uint64_t seed) {
        SynthGraph out;
        out.family = std::move(family);
        out.g = Graph::build(static_cast<int>(roles.size()), edges,
                             typed ? &types : nullptr);
        out.roles = roles;
        out.role_names = std::move(role_names);
        out.labeling = std::move(labeling);
        out.seed = seed;
        return out;
    }
};

int param(const std::map<std::string, int>& p, const std::string& key, int dflt,
          int min_val) {
    auto it = p.find(key);
    int v = it == p.end() ? dflt : it->second;
    if (v < min_val)
        throw ConfigError("parameter '" + key + "' must be >= " + std::to_string(min_val));
    return v;
}

// --- automorphic base motifs -------------------------------------------------

SynthGraph make_h5(uint64_t seed) {
    Builder b;
    int s1 = b.add_node(1), s2 = b.add_node(1);
    int f1 = b.add_node(2), f2 = b.add_node(2);
    int roof = b.add_node(0);
    b.edge(s1, s2);
    b.edge(s2, f2);
    b.edge(f2, f1);
    b.edge(f1, s1);
    b.edge(roof, s1);
    b.edge(roof, s2);
    return b.finish("h5", {"roof", "shoulder", "base"}, "automorphic", seed);
}

SynthGraph make_b5(uint64_t seed) {
    Builder b;
    std::vector<int> ca, cb, path;
    ca.push_back(b.add_node(0)); // ports are role 0
    for (int i = 0; i < 4; ++i) ca.push_back(b.add_node(1));
    for (int i = 0; i < 5; ++i) path.push_back(b.add_node(i == 2 ? 4 : (i == 1 || i == 3 ? 3 : 2)));
    cb.push_back(b.add_node(0));
    for (int i = 0; i < 4; ++i) cb.push_back(b.add_node(1));
    b.clique(ca);
    b.clique(cb);
    for (int i = 0; i + 1 < 5; ++i) b.edge(path[i], path[i + 1]);
    b.edge(ca[0], path[0]);
    b.edge(path[4], cb[0]);
    return b.finish("b5", {"clique-port", "clique-core", "chain-outer", "chain-inner", "chain-center"},
                    "automorphic", seed);
}

SynthGraph make_wheel(const std::string& family, int rim, bool chords, uint64_t seed) {
    Builder b;
    int hub = b.add_node(0);
    std::vector<int> r;
    for (int i = 0; i < rim; ++i) r.push_back(b.add_node(1));
    for (int i = 0; i < rim; ++i) {
        b.edge(r[i], r[(i + 1) % rim]);
        if (chords) b.edge(r[i], r[(i + 2) % rim]);
        b.edge(hub, r[i]);
    }
    return b.finish(family, {"hub", "rim"}, "automorphic", seed);
}

SynthGraph make_s5(uint64_t seed) {
    Builder b;
    int c = b.add_node(0);
    for (int i = 0; i < 4; ++i) b.edge(c, b.add_node(1));
    int c1 = b.add_node(2), c2 = b.add_node(2);
    for (int i = 0; i < 3; ++i) {
        int leaf = b.add_node(3);
        b.edge(c1, leaf);
        b.edge(c2, leaf);
    }
    return b.finish("s5", {"star-center", "star-leaf", "binary-center", "binary-leaf"},
                    "automorphic", seed);
}

SynthGraph make_pb5(uint64_t seed) {
    Builder b;
    std::vector<int> a, c;
    for (int i = 0; i < 5; ++i) a.push_back(b.add_node(0));
    for (int i = 0; i < 5; ++i) c.push_back(b.add_node(0));
    for (int i = 0; i < 5; ++i) {
        b.edge(a[i], a[(i + 1) % 5]);
        b.edge(c[i], c[(i + 1) % 5]);
        b.edge(a[i], c[i]);
    }
    return b.finish("pb5", {"prism"}, "automorphic", seed);
}

SynthGraph make_l5(uint64_t seed) {
    Builder b;
    std::vector<int> cl;
    cl.push_back(b.add_node(0));
    for (int i = 0; i < 4; ++i) cl.push_back(b.add_node(1));
    b.clique(cl);
    int prev = cl[0];
    for (int i = 0; i < 5; ++i) {
        int s = b.add_node(2 + i);
        b.edge(prev, s);
        prev = s;
    }
    return b.finish("l5", {"clique-port", "clique-core", "stem-1", "stem-2", "stem-3", "stem-4", "stem-5"},
                    "automorphic", seed);
}

// --- automorphic enlarged graphs ---------------------------------------------

// Houses sit on a circle. side=true embeds the floor edge in the circle;
// side=false embeds the roof apex. Two connector nodes between houses.
SynthGraph make_house_circle(const std::string& family, bool side, int houses,
                             uint64_t seed) {
    Builder b;
    std::vector<int> left(houses), right(houses); // circle attachment points
    for (int h = 0; h < houses; ++h) {
        int roof = b.add_node(0);
        int s1 = b.add_node(1), s2 = b.add_node(1);
        int f1 = b.add_node(2), f2 = b.add_node(2);
        b.edge(s1, s2);
        b.edge(s2, f2);
        b.edge(f2, f1);
        b.edge(f1, s1);
        b.edge(roof, s1);
        b.edge(roof, s2);
        if (side) {
            left[h] = f1;
            right[h] = f2;
        } else {
            left[h] = right[h] = roof;
        }
    }
    for (int h = 0; h < houses; ++h) {
        int k1 = b.add_node(3), k2 = b.add_node(3);
        b.edge(right[h], k1);
        b.edge(k1, k2);
        b.edge(k2, left[(h + 1) % houses]);
    }
    return b.finish(family, {"roof", "shoulder", "base", "connector"}, "automorphic", seed);
}

SynthGraph make_barbell_circle(const std::string& family, int units, bool pendants,
                               uint64_t seed) {
    Builder b;
    std::vector<int> pl(units), pr(units), mid(units);
    for (int u = 0; u < units; ++u) {
        std::vector<int> cl;
        cl.push_back(b.add_node(0)); // left port
        cl.push_back(b.add_node(0)); // right port
        for (int i = 0; i < 3; ++i) cl.push_back(b.add_node(1));
        b.clique(cl);
        pl[u] = cl[0];
        pr[u] = cl[1];
        std::vector<int> p;
        for (int i = 0; i < 5; ++i) p.push_back(b.add_node(i == 2 ? 4 : (i == 1 || i == 3 ? 3 : 2)));
        for (int i = 0; i + 1 < 5; ++i) b.edge(p[i], p[i + 1]);
        b.edge(pr[u], p[0]);
        mid[u] = p[2];
    }
    for (int u = 0; u < units; ++u) {
        // close the ring: path of unit u ends at the left port of unit u+1
        int last = mid[u] + 2;
        b.edge(last, pl[(u + 1) % units]);
    }
    std::vector<std::string> names{"clique-port", "clique-core", "chain-outer",
                                   "chain-inner", "chain-center"};
    if (pendants) {
        for (int u = 0; u < units; ++u) {
            std::vector<int> q;
            q.push_back(b.add_node(5));
            for (int i = 0; i < 4; ++i) q.push_back(b.add_node(6));
            b.clique(q);
            b.edge(mid[u], q[0]);
        }
        names.push_back("pendant-port");
        names.push_back("pendant-core");
    }
    return b.finish(family, std::move(names), "automorphic", seed);
}

SynthGraph make_city_of_stars(int stars, int binaries, uint64_t seed) {
    Builder b;
    for (int s = 0; s < stars; ++s) {
        int c = b.add_node(0);
        for (int i = 0; i < 4; ++i) b.edge(c, b.add_node(1));
    }
    for (int s = 0; s < binaries; ++s) {
        int c1 = b.add_node(2), c2 = b.add_node(2);
        for (int i = 0; i < 3; ++i) {
            int leaf = b.add_node(3);
            b.edge(c1, leaf);
            b.edge(c2, leaf);
        }
    }
    return b.finish("city_of_stars", {"star-center", "star-leaf", "binary-center", "binary-leaf"},
                    "automorphic", seed);
}

// 10-cycle, each node carrying a pentagon with two crossing chords; the
// chords keep every node at degree 3.
SynthGraph make_pb_l(int pentagons, uint64_t seed) {
    Builder b;
    std::vector<int> circ;
    for (int i = 0; i < pentagons; ++i) circ.push_back(b.add_node(0));
    for (int i = 0; i < pentagons; ++i) b.edge(circ[i], circ[(i + 1) % pentagons]);
    for (int i = 0; i < pentagons; ++i) {
        int a = b.add_node(1);
        int p1 = b.add_node(2), q1 = b.add_node(3), q2 = b.add_node(3), p2 = b.add_node(2);
        // pentagon a-p1-q1-q2-p2-a plus chords p1-q2, q1-p2
        b.edge(a, p1);
        b.edge(p1, q1);
        b.edge(q1, q2);
        b.edge(q2, p2);
        b.edge(p2, a);
        b.edge(p1, q2);
        b.edge(q1, p2);
        b.edge(circ[i], a);
    }
    return b.finish("pb_l", {"circle", "pent-attach", "pent-outer", "pent-inner"},
                    "automorphic", seed);
}

// --- regular-equivalence families --------------------------------------------

SynthGraph make_conference(int papers, int authors, int venues, uint64_t seed) {
    if (papers < venues)
        throw ConfigError("conference: need papers >= venues so every venue hosts a paper");
    if (authors > 6 * papers)
        throw ConfigError("conference: need authors <= 6*papers so every author writes");
    Builder b;
    b.typed = true;
    std::vector<int> av, pv, vv;
    for (int i = 0; i < authors; ++i) av.push_back(b.add_node(0));
    for (int i = 0; i < papers; ++i) pv.push_back(b.add_node(1));
    for (int i = 0; i < venues; ++i) vv.push_back(b.add_node(2));

    Rng rng(seed);
    // venue coverage first, then uniform
    for (int p = 0; p < papers; ++p) {
        int v = p < venues ? p : static_cast<int>(rng.next_below(venues));
        b.edge(pv[p], vv[v], 1);
    }
    std::vector<std::vector<int>> by_paper(papers);
    std::vector<bool> covered(authors, false);
    for (int p = 0; p < papers; ++p) {
        int c = 4 + static_cast<int>(rng.next_below(3));
        by_paper[p] = rng.sample_without_replacement(authors, c);
        std::sort(by_paper[p].begin(), by_paper[p].end());
        for (int a : by_paper[p]) covered[a] = true;
    }
    int cursor = 0;
    for (int a = 0; a < authors; ++a) {
        if (covered[a]) continue;
        for (int tries = 0; tries < papers; ++tries) {
            auto& lst = by_paper[cursor];
            cursor = (cursor + 1) % papers;
            if (lst.size() < 6 && std::find(lst.begin(), lst.end(), a) == lst.end()) {
                lst.push_back(a);
                break;
            }
        }
    }
    for (int p = 0; p < papers; ++p)
        for (int a : by_paper[p]) {
            covered[a] = true;
            b.edge(av[a], pv[p], 0);
        }
    if (std::find(covered.begin(), covered.end(), false) != covered.end())
        throw ConfigError("conference: author coverage repair failed for these sizes");
    return b.finish("conference", {"author", "paper", "venue"}, "regular", seed);
}

// 9 stars, 7 cliques, 7 chains, sizes cycling 3..9. Cliques form a ring
// joined by chains; a chain of size k is two clique-attached ends plus k-2
// middles adjacent to both ends. Star hubs attach to clique ports. Edge
// types come from coarse endpoint families: (hub,spoke)=0 (hub,clique)=1
// (clique,clique)=2 (clique,chain)=3 (chain,chain)=4.
SynthGraph make_reg_syn_l(uint64_t seed) {
    Builder b;
    b.typed = true;
    const int n_cliques = 7, n_chains = 7, n_stars = 9;
    std::vector<int> port(n_cliques);
    for (int i = 0; i < n_cliques; ++i) {
        int size = 3 + i;
        std::vector<int> cl;
        cl.push_back(b.add_node(2));
        for (int j = 1; j < size; ++j) cl.push_back(b.add_node(3));
        b.clique(cl, 2);
        port[i] = cl[0];
    }
    for (int i = 0; i < n_chains; ++i) {
        int size = 3 + i;
        int e1 = b.add_node(4), e2 = b.add_node(4);
        for (int j = 0; j < size - 2; ++j) {
            int m = b.add_node(5);
            b.edge(e1, m, 4);
            b.edge(e2, m, 4);
        }
        b.edge(port[i], e1, 3);
        b.edge(port[(i + 1) % n_cliques], e2, 3);
    }
    for (int j = 0; j < n_stars; ++j) {
        int size = 3 + (j % 7);
        int hub = b.add_node(0);
        for (int k = 1; k < size; ++k) b.edge(hub, b.add_node(1), 0);
        b.edge(hub, port[j % n_cliques], 1);
    }
    return b.finish("reg_syn_l", {"hub", "spoke", "clique-port", "clique-core", "chain-end", "chain-mid"},
                    "regular", seed);
}

// cliques hang off a circle, one connector every 4th circle node; edge
// types: (circle,circle)=0 (circle,clique)=1 (clique,clique)=2
SynthGraph make_knitting_wheel(int cliques, uint64_t seed) {
    Builder b;
    b.typed = true;
    const int gap = 4; // connector plus three plain circle nodes
    int circle_len = cliques * gap;
    std::vector<int> circ;
    for (int i = 0; i < circle_len; ++i) {
        int pos = i % gap;
        int role = pos == 0 ? 0 : (pos == 2 ? 2 : 1);
        circ.push_back(b.add_node(role));
    }
    for (int i = 0; i < circle_len; ++i) b.edge(circ[i], circ[(i + 1) % circle_len], 0);
    for (int c = 0; c < cliques; ++c) {
        int size = 3 + (c % 7);
        std::vector<int> cl;
        cl.push_back(b.add_node(3));
        for (int j = 1; j < size; ++j) cl.push_back(b.add_node(4));
        b.clique(cl, 2);
        b.edge(circ[c * gap], cl[0], 1);
    }
    return b.finish("knitting_wheel", {"circle-hub", "circle-near", "circle-far", "clique-port", "clique-core"},
                    "regular", seed);
}

} // namespace

std::vector<std::string> synth_families() {
    return {"h5", "b5", "c8", "s5", "pb5", "l5",
            "h10_s_l", "h10_t_l", "barbell_l_a", "barbell_l_b",
            "ferris_wheel", "city_of_stars", "pb_l",
            "conference", "reg_syn_l", "knitting_wheel"};
}

std::string canonical_family(const std::string& name) {
    std::string k;
    for (char c : name) k += c == '-' ? '_' : static_cast<char>(std::tolower(c));
    static const std::map<std::string, std::string> aliases = {
        {"house_circle_side", "h10_s_l"},
        {"house_circle_roof", "h10_t_l"},
        {"barbell_circle_a", "barbell_l_a"},
        {"barbell_circle_b", "barbell_l_b"},
        {"pb_cubic", "pb_l"},
        {"reg_syn_large", "reg_syn_l"},
    };
    auto it = aliases.find(k);
    if (it != aliases.end()) k = it->second;
    auto fams = synth_families();
    if (std::find(fams.begin(), fams.end(), k) == fams.end()) {
        std::string valid;
        for (auto& f : fams) valid += (valid.empty() ? "" : ", ") + f;
        throw ConfigError("unknown synthetic family '" + name + "'; valid: " + valid);
    }
    return k;
}

SynthGraph generate(const std::string& family, uint64_t seed,
                    const std::map<std::string, int>& params) {
    std::string f = canonical_family(family);
    if (f == "h5") return make_h5(seed);
    if (f == "b5") return make_b5(seed);
    if (f == "c8") return make_wheel("c8", 7, false, seed);
    if (f == "s5") return make_s5(seed);
    if (f == "pb5") return make_pb5(seed);
    if (f == "l5") return make_l5(seed);
    if (f == "h10_s_l")
        return make_house_circle("h10_s_l", true, param(params, "houses", 10, 3), seed);
    if (f == "h10_t_l")
        return make_house_circle("h10_t_l", false, param(params, "houses", 10, 3), seed);
    if (f == "barbell_l_a")
        return make_barbell_circle("barbell_l_a", param(params, "units", 5, 2), false, seed);
    if (f == "barbell_l_b")
        return make_barbell_circle("barbell_l_b", param(params, "units", 5, 2), true, seed);
    if (f == "ferris_wheel")
        return make_wheel("ferris_wheel", param(params, "rim", 20, 5), true, seed);
    if (f == "city_of_stars")
        return make_city_of_stars(param(params, "stars", 10, 1), param(params, "binaries", 5, 1), seed);
    if (f == "pb_l") return make_pb_l(param(params, "pentagons", 10, 3), seed);
    if (f == "conference")
        return make_conference(param(params, "papers", 80, 2),
                               param(params, "authors", 120, 7),
                               param(params, "venues", 30, 1), seed);
    if (f == "reg_syn_l") return make_reg_syn_l(seed);
    if (f == "knitting_wheel")
        return make_knitting_wheel(param(params, "cliques", 10, 3), seed);
    throw ConfigError("unknown synthetic family: " + family);
}

} // namespace sb
