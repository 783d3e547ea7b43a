#include "cfrk/tree_dp.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "cfrk/assignment.hpp"

namespace cfrk {

Rational BinarizedTree::path_length(int a, int b) const {
  std::map<int, Rational> up_a;
  Rational acc(0);
  for (int v = a; v != -1; v = nodes[v].parent) {
    up_a[v] = acc;
    if (nodes[v].parent != -1) acc += nodes[v].up_len;
  }
  acc = Rational(0);
  for (int v = b; v != -1; v = nodes[v].parent) {
    auto it = up_a.find(v);
    if (it != up_a.end()) return acc + it->second;
    if (nodes[v].parent != -1) acc += nodes[v].up_len;
  }
  throw std::logic_error("path_length: nodes in different trees");
}

std::optional<int> BinarizedTree::leaf_of_client(int client_index) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].client == client_index) return static_cast<int>(i);
  return std::nullopt;
}

std::optional<int> BinarizedTree::leaf_of_facility(int facility_index) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].facility == facility_index) return static_cast<int>(i);
  return std::nullopt;
}

BinarizedTree binarize(const Instance& inst) {
  if (!inst.metric || inst.metric->kind() != MetricKind::tree)
    throw std::invalid_argument("binarize: tree metric required");
  const MetricSpace& m = *inst.metric;
  const int n = m.size();

  std::vector<std::vector<std::pair<int, Rational>>> children(n);
  for (const auto& e : m.tree_edges()) children[e.parent].push_back({e.child, e.weight});

  std::vector<int> client_at(n, -1), facility_at(n, -1);
  for (size_t i = 0; i < inst.clients.size(); ++i)
    client_at[inst.clients[i]] = static_cast<int>(i);
  for (size_t i = 0; i < inst.facilities.size(); ++i)
    facility_at[inst.facilities[i]] = static_cast<int>(i);

  BinarizedTree bt;
  auto add_node = [&](int parent, Rational len, int metric_node) {
    BinarizedTree::Node node;
    node.parent = parent;
    node.up_len = std::move(len);
    node.metric_node = metric_node;
    bt.nodes.push_back(std::move(node));
    return static_cast<int>(bt.nodes.size()) - 1;
  };

  std::vector<Rational> up_len(n, Rational(0));
  std::vector<int> parent_metric(n, -1);
  for (const auto& e : m.tree_edges()) {
    parent_metric[e.child] = e.parent;
    up_len[e.child] = e.weight;
  }
  std::vector<int> order{m.tree_root()};
  for (size_t qi = 0; qi < order.size(); ++qi)
    for (const auto& [c, w] : children[order[qi]]) order.push_back(c);

  // One work node per metric node, role leaves hung beneath on zero-length
  // edges. A childless metric node carrying exactly one role keeps it.
  int pseudo = add_node(-1, Rational(0), -1);
  std::vector<int> work_of(n, -1);
  for (int u : order) {
    int pw = parent_metric[u] == -1 ? pseudo : work_of[parent_metric[u]];
    int roles = (client_at[u] >= 0 ? 1 : 0) + (facility_at[u] >= 0 ? 1 : 0);
    int w = add_node(pw, up_len[u], u);
    work_of[u] = w;
    if (children[u].empty() && roles == 1) {
      bt.nodes[w].client = client_at[u];
      bt.nodes[w].facility = facility_at[u];
    } else {
      if (client_at[u] >= 0)
        bt.nodes[add_node(w, Rational(0), u)].client = client_at[u];
      if (facility_at[u] >= 0)
        bt.nodes[add_node(w, Rational(0), u)].facility = facility_at[u];
    }
  }
  bt.pseudo_root = pseudo;

  // Binarize: singletons get an empty dummy sibling, larger fanouts fold
  // pairwise under zero-length dummies. Dummies are wired at creation.
  std::vector<std::vector<int>> kid(bt.nodes.size());
  for (size_t v = 1; v < bt.nodes.size(); ++v)
    kid[bt.nodes[v].parent].push_back(static_cast<int>(v));
  const int original_count = static_cast<int>(bt.nodes.size());
  for (int v = 0; v < original_count; ++v) {
    std::vector<int> ch = kid[v];
    if (v == pseudo) {
      if (ch.size() != 1) throw std::logic_error("binarize: pseudo-root fanout");
      bt.nodes[v].left = ch[0];
      continue;
    }
    if (ch.empty()) continue;
    if (ch.size() == 1) ch.push_back(add_node(v, Rational(0), -1));
    while (ch.size() > 2) {
      int a = ch[ch.size() - 2], b = ch[ch.size() - 1];
      ch.pop_back();
      ch.pop_back();
      int dummy = add_node(v, Rational(0), -1);
      bt.nodes[a].parent = dummy;
      bt.nodes[b].parent = dummy;
      bt.nodes[dummy].left = a;
      bt.nodes[dummy].right = b;
      ch.push_back(dummy);
    }
    bt.nodes[v].left = ch[0];
    bt.nodes[v].right = ch[1];
  }
  return bt;
}

namespace {

struct DpEntry {
  Rational cost;
  bool finite = false;
  int back_kl = -1;
  int back_ol = -1;
  long long back_bl = 0;
};

struct NodeTable {
  std::vector<int> kcap;   // per-group component cap
  int ocap = 0;            // total-open cap
  long long b_lo = 0, b_hi = 0;
  std::vector<int> kstride;
  std::vector<DpEntry> cells;

  int kdim() const { return kstride.empty() ? 1 : kstride.back() * (kcap.back() + 1); }
  int bdim() const { return static_cast<int>(b_hi - b_lo + 1); }

  void init() {
    kstride.resize(kcap.size());
    int acc = 1;
    for (size_t g = 0; g < kcap.size(); ++g) {
      kstride[g] = acc;
      acc *= kcap[g] + 1;
    }
    cells.assign(static_cast<size_t>(acc) * (ocap + 1) * bdim(), DpEntry{});
  }

  DpEntry& at(int kflat, int o, long long b) {
    size_t idx = (static_cast<size_t>(kflat) * (ocap + 1) + o) * bdim() +
                 static_cast<size_t>(b - b_lo);
    return cells[idx];
  }
  const DpEntry& at(int kflat, int o, long long b) const {
    return const_cast<NodeTable*>(this)->at(kflat, o, b);
  }

  std::vector<int> unflatten(int kflat) const {
    std::vector<int> comps(kcap.size());
    for (size_t g = 0; g < kcap.size(); ++g)
      comps[g] = (kflat / kstride[g]) % (kcap[g] + 1);
    return comps;
  }
};

}  // namespace

std::optional<Solution> dp_solve(const BinarizedTree& bt, const Instance& inst,
                                 const TreeDpOptions& opts) {
  const int t = inst.group_count();
  if (t > 16) throw std::invalid_argument("dp_solve: too many groups (t > 16)");
  const int nn = static_cast<int>(bt.nodes.size());

  // Facility group masks by facility index.
  std::vector<unsigned> fac_mask(inst.facilities.size(), 0);
  {
    std::map<int, int> fidx;
    for (size_t i = 0; i < inst.facilities.size(); ++i)
      fidx[inst.facilities[i]] = static_cast<int>(i);
    for (int g = 0; g < t; ++g)
      for (int f : inst.groups[g]) fac_mask[fidx.at(f)] |= 1u << g;
  }

  // Scale client weights to integers (identical policy to the flow solver).
  long long scale = 1;
  bool rounded = false;
  for (int c : inst.clients) {
    long long d = inst.weight_of(c).den();
    long long g = std::gcd(scale, d);
    __int128 next = static_cast<__int128>(scale) / g * d;
    if (next > kWeightScaleCap) {
      scale = kWeightScaleCap;
      rounded = true;
      break;
    }
    scale = static_cast<long long>(next);
  }
  auto scaled_weight = [&](int client_node) {
    Rational x = inst.weight_of(client_node) * Rational(scale);
    if (!rounded) return x.num();
    long long fl = x.num() / x.den();
    return (x - Rational(fl)) >= Rational(1, 2) ? fl + 1 : fl;
  };
  long long w_total = 0;
  std::vector<long long> w_of_leaf(nn, 0);
  for (int v = 0; v < nn; ++v)
    if (bt.nodes[v].client >= 0) {
      w_of_leaf[v] = scaled_weight(inst.clients[bt.nodes[v].client]);
      w_total += w_of_leaf[v];
    }

  // Subtree aggregates, post-order.
  std::vector<int> post;
  {
    std::vector<int> stack{bt.pseudo_root};
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      post.push_back(v);
      if (bt.nodes[v].left != -1) stack.push_back(bt.nodes[v].left);
      if (bt.nodes[v].right != -1) stack.push_back(bt.nodes[v].right);
    }
    std::reverse(post.begin(), post.end());
  }
  std::vector<long long> w_in(nn, 0), capsum(nn, 0);
  std::vector<int> fac_below(nn, 0);
  std::vector<std::vector<int>> gfac_below(nn, std::vector<int>(t, 0));
  for (int v : post) {
    w_in[v] = w_of_leaf[v];
    if (bt.nodes[v].facility >= 0) {
      long long cap = inst.capacity_of(inst.facilities[bt.nodes[v].facility]);
      __int128 sc = static_cast<__int128>(cap) * scale;
      capsum[v] = sc > w_total ? w_total : static_cast<long long>(sc);
      fac_below[v] = 1;
      for (int g = 0; g < t; ++g)
        if (fac_mask[bt.nodes[v].facility] & (1u << g)) gfac_below[v][g] = 1;
    }
    for (int c : {bt.nodes[v].left, bt.nodes[v].right}) {
      if (c == -1) continue;
      w_in[v] += w_in[c];
      capsum[v] = std::min<long long>(capsum[v] + capsum[c], 4 * w_total + 4);
      fac_below[v] += fac_below[c];
      for (int g = 0; g < t; ++g) gfac_below[v][g] += gfac_below[c][g];
    }
  }

  std::vector<NodeTable> table(nn);
  auto dims_for = [&](int v) {
    NodeTable nt;
    nt.kcap.resize(t);
    for (int g = 0; g < t; ++g)
      nt.kcap[g] = static_cast<int>(std::min<long long>(
          {inst.upper[g], gfac_below[v][g], inst.k}));
    nt.ocap = std::min(inst.k, fac_below[v]);
    nt.b_lo = -w_in[v];
    nt.b_hi = std::min(capsum[v], w_total) - w_in[v];
    if (nt.b_hi < nt.b_lo) nt.b_hi = nt.b_lo;  // degenerate, single slot
    nt.init();
    return nt;
  };

  for (int v : post) {
    if (v == bt.pseudo_root) continue;
    NodeTable nt = dims_for(v);
    const auto& node = bt.nodes[v];
    const bool is_leaf = node.left == -1 && node.right == -1;
    if (is_leaf) {
      if (node.client >= 0) {
        long long w = w_of_leaf[v];
        DpEntry& e = nt.at(0, 0, -w);
        e.finite = true;
        e.cost = node.up_len * Rational(w);
      } else if (node.facility >= 0) {
        DpEntry& closed = nt.at(0, 0, 0);
        closed.finite = true;
        closed.cost = Rational(0);
        unsigned mask = fac_mask[node.facility];
        bool allowed = true;
        int kflat = 0;
        for (int g = 0; g < t; ++g)
          if (mask & (1u << g)) {
            if (nt.kcap[g] < 1) allowed = false;
            kflat += nt.kstride[g];
          }
        if (allowed && nt.ocap >= 1) {
          for (long long b = 0; b <= nt.b_hi; ++b) {
            DpEntry& e = nt.at(kflat, 1, b);
            e.finite = true;
            e.cost = node.up_len * Rational(b);
          }
        }
      } else {
        DpEntry& e = nt.at(0, 0, 0);  // empty dummy leaf
        e.finite = true;
        e.cost = Rational(0);
      }
      table[v] = std::move(nt);
      continue;
    }

    const NodeTable& tl = table[node.left];
    const NodeTable& tr = table[node.right];
    // Combined kappa target per (kl, kr) pair, -1 when a component overflows.
    std::vector<int> pair_target(static_cast<size_t>(tl.kdim()) * tr.kdim());
    for (int kl = 0; kl < tl.kdim(); ++kl) {
      auto kl_comps = tl.unflatten(kl);
      for (int kr = 0; kr < tr.kdim(); ++kr) {
        auto kr_comps = tr.unflatten(kr);
        int kflat = 0;
        for (int g = 0; g < t; ++g) {
          int sum = kl_comps[g] + kr_comps[g];
          if (sum > nt.kcap[g]) {
            kflat = -1;
            break;
          }
          kflat += sum * nt.kstride[g];
        }
        pair_target[static_cast<size_t>(kl) * tr.kdim() + kr] = kflat;
      }
    }
    // Split enumeration in (kappa_l, open_l, b_l) lexicographic order; the
    // first strict minimum wins, so equal-cost splits keep the smaller tuple.
    for (int kl = 0; kl < tl.kdim(); ++kl)
      for (int ol = 0; ol <= tl.ocap; ++ol)
        for (long long bl = tl.b_lo; bl <= tl.b_hi; ++bl) {
          const DpEntry& el = tl.at(kl, ol, bl);
          if (!el.finite) continue;
          for (int kr = 0; kr < tr.kdim(); ++kr) {
            int kflat = pair_target[static_cast<size_t>(kl) * tr.kdim() + kr];
            if (kflat < 0) continue;
            for (int orr = 0; orr <= tr.ocap; ++orr) {
              if (ol + orr > nt.ocap) break;
              for (long long br = tr.b_lo; br <= tr.b_hi; ++br) {
                const DpEntry& er = tr.at(kr, orr, br);
                if (!er.finite) continue;
                long long b = bl + br;
                if (b < nt.b_lo || b > nt.b_hi) continue;
                Rational cand = el.cost + er.cost;
                DpEntry& target = nt.at(kflat, ol + orr, b);
                if (!target.finite || cand < target.cost) {
                  target.finite = true;
                  target.cost = std::move(cand);
                  target.back_kl = kl;
                  target.back_ol = ol;
                  target.back_bl = static_cast<long long>(bl);
                }
              }
            }
          }
        }
    // Edge crossing term, once per entry.
    if (!node.up_len.is_zero()) {
      for (int kf = 0; kf < nt.kdim(); ++kf)
        for (int o = 0; o <= nt.ocap; ++o)
          for (long long b = nt.b_lo; b <= nt.b_hi; ++b) {
            DpEntry& e = nt.at(kf, o, b);
            if (e.finite && b != 0) e.cost += node.up_len * Rational(b < 0 ? -b : b);
          }
    }
    table[v] = std::move(nt);
  }

  if (opts.dump) {
    for (int v = 0; v < nn; ++v) {
      if (v == bt.pseudo_root) continue;
      const NodeTable& nt = table[v];
      if (nt.cells.empty()) continue;
      for (int kf = 0; kf < nt.kdim(); ++kf)
        for (int o = 0; o <= nt.ocap; ++o)
          for (long long b = nt.b_lo; b <= nt.b_hi; ++b) {
            const DpEntry& e = nt.at(kf, o, b);
            if (!e.finite) continue;
            auto comps = nt.unflatten(kf);
            *opts.dump << v << '\t';
            for (size_t g = 0; g < comps.size(); ++g)
              *opts.dump << (g ? "," : "") << comps[g];
            if (comps.empty()) *opts.dump << "-";
            *opts.dump << '\t' << o << '\t' << b << '\t' << e.cost.str() << '\n';
          }
    }
  }

  // Root: b = 0, per-group counts within bounds, exactly (or at most) k open.
  const int root_child = bt.nodes[bt.pseudo_root].left;
  const NodeTable& rt = table[root_child];
  std::optional<Rational> best;
  int best_kf = -1, best_o = -1;
  for (int kf = 0; kf < rt.kdim(); ++kf) {
    auto comps = rt.unflatten(kf);
    bool ok = true;
    for (int g = 0; g < t; ++g)
      if (comps[g] < inst.lower[g]) ok = false;  // upper enforced by kcap
    if (!ok) continue;
    for (int o = 0; o <= rt.ocap; ++o) {
      if (!opts.at_most_k && o != inst.k) continue;
      if (0 < rt.b_lo || 0 > rt.b_hi) continue;
      const DpEntry& e = rt.at(kf, o, 0);
      if (!e.finite) continue;
      if (!best || e.cost < *best) {
        best = e.cost;
        best_kf = kf;
        best_o = o;
      }
    }
  }
  if (!best) return std::nullopt;

  // Recover the opened facilities by walking backpointers.
  std::vector<int> opened;
  struct Frame { int v; int kf; int o; long long b; };
  std::vector<Frame> stack{{root_child, best_kf, best_o, 0}};
  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    const auto& node = bt.nodes[fr.v];
    if (node.left == -1 && node.right == -1) {
      if (node.facility >= 0 && fr.o == 1)
        opened.push_back(inst.facilities[node.facility]);
      continue;
    }
    const NodeTable& nt = table[fr.v];
    const DpEntry& e = nt.at(fr.kf, fr.o, fr.b);
    const NodeTable& tl = table[node.left];
    auto full = nt.unflatten(fr.kf);
    auto lc = tl.unflatten(e.back_kl);
    int kr = 0;
    const NodeTable& tr = table[node.right];
    for (int g = 0; g < t; ++g) kr += (full[g] - lc[g]) * tr.kstride[g];
    stack.push_back({node.left, e.back_kl, e.back_ol, e.back_bl});
    stack.push_back({node.right, kr, fr.o - e.back_ol, fr.b - e.back_bl});
  }
  std::sort(opened.begin(), opened.end());

  // The assignment is recovered by a flow solve on the opened set; its cost
  // equals the table value for the median objective.
  Instance median_inst = inst;
  median_inst.objective = Objective::median;
  auto assigned = optimal_assignment(median_inst, opened);
  if (!assigned) throw std::logic_error("dp_solve: opened set not assignable");
  if (!rounded && assigned->cost != *best)
    throw std::logic_error("dp_solve: table cost " + best->str() +
                           " != assignment cost " + assigned->cost.str());
  if (inst.objective == Objective::means) {
    auto reassigned = optimal_assignment(inst, opened);
    if (!reassigned) throw std::logic_error("dp_solve: means reassignment failed");
    return reassigned;
  }
  return assigned;
}

}  // namespace cfrk
