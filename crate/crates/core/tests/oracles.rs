//! Independent oracles checked against the library's fast paths.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use searchcov::catalog::connected_graphs_up_to;
use searchcov::coverage::{escape_set, exact_inclusion_all, sample_bound_m, BoundQuery};
use searchcov::encodings::adjacency_encoding;
use searchcov::invariance::dfs_distribution;
use searchcov::samplers::{enumerate_dfs, DEFAULT_ENUMERATION_BUDGET};
use searchcov::wl::{terminating_walks, DEFAULT_WALK_GUARD};
use searchcov::{gen_family, Edge, Family, Graph};

fn all_permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in all_permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn textbook_dfs(g: &Graph, root: usize, orders: &[Vec<usize>]) -> (Vec<usize>, BTreeSet<Edge>) {
    fn visit(u: usize, orders: &[Vec<usize>], seen: &mut [bool], seq: &mut Vec<usize>, tree: &mut BTreeSet<Edge>) {
        seen[u] = true;
        seq.push(u);
        for &v in &orders[u] {
            if !seen[v] {
                tree.insert((u.min(v), u.max(v)));
                visit(v, orders, seen, seq, tree);
            }
        }
    }
    let mut seen = vec![false; g.node_count()];
    let (mut seq, mut tree) = (Vec::new(), BTreeSet::new());
    visit(root, orders, &mut seen, &mut seq, &mut tree);
    (seq, tree)
}

/// Law of (visit order, tree) by brute force: uniform root times every
/// combination of neighbor-list permutations, each weighted equally.
fn permutation_product_law(g: &Graph) -> BTreeMap<(Vec<usize>, BTreeSet<Edge>), BigRational> {
    let n = g.node_count();
    let per_node: Vec<Vec<Vec<usize>>> = (0..n).map(|u| all_permutations(g.neighbors(u))).collect();
    let combos: usize = per_node.iter().map(Vec::len).product();
    let weight = BigRational::new(BigInt::one(), BigInt::from(n * combos));
    let mut law = BTreeMap::new();
    let mut idx = vec![0usize; n];
    for root in 0..n {
        idx.iter_mut().for_each(|i| *i = 0);
        loop {
            let orders: Vec<Vec<usize>> = (0..n).map(|u| per_node[u][idx[u]].clone()).collect();
            let key = textbook_dfs(g, root, &orders);
            *law.entry(key).or_insert_with(BigRational::zero) += &weight;
            // Odometer over the per-node permutation choices.
            let mut k = 0;
            while k < n {
                idx[k] += 1;
                if idx[k] < per_node[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
        }
    }
    law
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

fn small_corpus() -> Vec<Graph> {
    connected_graphs_up_to(5)
        .unwrap()
        .into_iter()
        .filter(|g| g.degrees().iter().map(|&d| factorial(d)).product::<usize>() <= 50_000)
        .collect()
}

#[test]
fn enumerator_matches_permutation_product_law() {
    let corpus = small_corpus();
    assert!(corpus.len() >= 25, "corpus has {} graphs", corpus.len());
    for g in corpus {
        let oracle = permutation_product_law(&g);
        let mut fast: BTreeMap<(Vec<usize>, BTreeSet<Edge>), BigRational> = BTreeMap::new();
        for o in enumerate_dfs(&g, DEFAULT_ENUMERATION_BUDGET).unwrap() {
            let key = (o.record.visit_order.clone(), o.record.tree_edge_set());
            *fast.entry(key).or_insert_with(BigRational::zero) += o.probability;
        }
        assert_eq!(fast, oracle, "{g:?}");
    }
}

#[test]
fn inclusion_matches_oracle_on_hexagon() {
    let g = gen_family(&Family::HexChain { k: 1 }, 0).unwrap();
    let oracle = permutation_product_law(&g);
    let exact = exact_inclusion_all(&g, DEFAULT_ENUMERATION_BUDGET).unwrap();
    for e in g.edges() {
        let p = oracle
            .iter()
            .filter(|((_, tree), _)| tree.contains(&e))
            .fold(BigRational::zero(), |acc, (_, p)| acc + p);
        assert_eq!(exact[&e], p, "{e:?}");
    }
}

#[test]
fn path3_distribution_from_oracle() {
    let g = gen_family(&Family::Path { n: 3 }, 0).unwrap();
    let d = dfs_distribution(&g, 100).unwrap();
    let third = BigRational::new(1.into(), 3.into());
    let sixth = BigRational::new(1.into(), 6.into());
    assert_eq!(d.prob(&[0, 1, 2]), third);
    assert_eq!(d.prob(&[1, 0, 2]), sixth);
}

/// Escape set by listing every simple path from u to v that avoids the
/// edge (u, v) and recording its second node.
fn escape_oracle(g: &Graph, u: usize, v: usize) -> BTreeSet<usize> {
    fn extend(g: &Graph, path: &mut Vec<usize>, on_path: &mut [bool], v: usize, firsts: &mut BTreeSet<usize>) {
        let last = *path.last().unwrap();
        for &x in g.neighbors(last) {
            if path.len() == 1 && x == v {
                continue;
            }
            if x == v {
                firsts.insert(path[1]);
                continue;
            }
            if !on_path[x] {
                on_path[x] = true;
                path.push(x);
                extend(g, path, on_path, v, firsts);
                path.pop();
                on_path[x] = false;
            }
        }
    }
    let mut on_path = vec![false; g.node_count()];
    on_path[u] = true;
    let mut firsts = BTreeSet::new();
    extend(g, &mut vec![u], &mut on_path, v, &mut firsts);
    firsts
}

#[test]
fn escape_sets_match_simple_path_search() {
    let mut corpus = connected_graphs_up_to(6).unwrap();
    corpus.push(gen_family(&Family::HexChain { k: 2 }, 0).unwrap());
    for g in &corpus {
        for (a, b) in g.edges() {
            for (u, v) in [(a, b), (b, a)] {
                let s = escape_set(g, (a, b), u).unwrap();
                let oracle: Vec<usize> = escape_oracle(g, u, v).into_iter().collect();
                assert_eq!(s.members, oracle, "{g:?} edge {a}-{b} side {u}");
                assert!(s.tau < g.degree(u).max(1));
            }
        }
    }
}

#[test]
fn bound_formula_by_hand() {
    // ln(600)/ln(1.5) = 15.77 and ln(700)/ln(1.5) = 16.16.
    for (cn, delta, want) in [(30.0f64, 0.05f64, 16), (7.0, 0.01, 17)] {
        let raw = (cn / delta).ln() / 1.5f64.ln();
        assert_eq!(raw.ceil() as usize, want);
        let got = sample_bound_m(&BoundQuery { c: 1.0, n: cn as usize, d_max: 3, delta }).unwrap();
        assert_eq!(got.m_required, want);
    }
}

#[test]
fn bound_is_monotone() {
    let base = BoundQuery { c: 1.2, n: 40, d_max: 3, delta: 0.05 };
    let m = |q: BoundQuery| sample_bound_m(&q).unwrap().m_required;
    assert!(m(BoundQuery { delta: 0.1, ..base }) <= m(base));
    assert!(m(BoundQuery { n: 80, ..base }) >= m(base));
    assert!(m(BoundQuery { d_max: 4, ..base }) >= m(base));
    assert!(m(BoundQuery { d_max: 2, ..base }) < m(base));
}

/// Walks ending at `u` by plain recursion over predecessors.
fn walks_oracle(g: &Graph, u: usize, len: usize) -> Vec<Vec<usize>> {
    if len == 0 {
        return vec![vec![u]];
    }
    let mut out = Vec::new();
    for prefix in (0..g.node_count()).flat_map(|x| walks_oracle(g, x, len - 1)) {
        if g.has_edge(*prefix.last().unwrap(), u) {
            let mut w = prefix;
            w.push(u);
            out.push(w);
        }
    }
    out.sort();
    out
}

#[test]
fn terminating_walks_match_recursion() {
    for g in connected_graphs_up_to(4).unwrap() {
        for u in 0..g.node_count() {
            let got = terminating_walks(&g, u, 3, DEFAULT_WALK_GUARD).unwrap();
            let mut want: Vec<Vec<usize>> = (1..=3).flat_map(|l| walks_oracle(&g, u, l)).collect();
            want.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
            assert_eq!(got, want);
        }
    }
}

#[test]
fn adjacency_encoding_by_hand() {
    // Path a-b-c as 0-1-2; order (a, b, c) with s = 3.
    let g = gen_family(&Family::Path { n: 3 }, 0).unwrap();
    let m = adjacency_encoding(&g, &[0, 1, 2], 3).unwrap();
    let mut want = vec![vec![0u8; 2]; 3];
    for i in 0..3usize {
        for j in 1..3usize {
            if i >= j && g.has_edge([0, 1, 2][i], [0, 1, 2][i - j]) {
                want[i][j - 1] = 1;
            }
        }
    }
    assert_eq!(m.data, want);
}
