//! 1-WL and walk-based (WWL) color refinement, unfolding trees.
//!
//! Refinement runs are joint over a list of graphs: every round hashes each
//! node's key through one dictionary shared by all graphs, so colors are
//! comparable across graphs of the same run. The dictionary hands out ids in
//! sorted key order, which keeps runs deterministic and obviously injective.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub type Color = u32;

/// Walk-count guard used when none is given.
pub const DEFAULT_WALK_GUARD: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rounds {
    Fixed(usize),
    /// Refine until two consecutive rounds induce the same joint partition.
    UntilStable,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Init {
    #[default]
    Uniform,
    /// Arbitrary initial colors, one vector per graph.
    Given(Vec<Vec<Color>>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refinement {
    /// `history[t][graph][node]`: color after round `t`; round 0 is the
    /// initial coloring.
    pub history: Vec<Vec<Vec<Color>>>,
    /// First round whose joint partition equals the next one, if observed.
    pub stable_round: Option<usize>,
}

impl Refinement {
    pub fn last_round(&self) -> usize {
        self.history.len() - 1
    }

    pub fn colors(&self, round: usize, graph: usize) -> &[Color] {
        &self.history[round][graph]
    }

    pub fn partition(&self, round: usize, graph: usize) -> Partition {
        Partition::from_colors(self.colors(round, graph))
    }

    /// Partition at the stable round, or at the last computed round.
    pub fn final_partition(&self, graph: usize) -> Partition {
        self.partition(self.stable_round.unwrap_or(self.last_round()), graph)
    }

    /// Sorted color multiset of one graph at a round.
    pub fn multiset(&self, round: usize, graph: usize) -> Vec<Color> {
        let mut c = self.colors(round, graph).to_vec();
        c.sort_unstable();
        c
    }
}

/// Node partition of a single graph, blocks sorted internally and by their
/// smallest member.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Partition {
    pub blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn from_colors(colors: &[Color]) -> Self {
        let mut by_color: BTreeMap<Color, Vec<usize>> = BTreeMap::new();
        for (v, &c) in colors.iter().enumerate() {
            by_color.entry(c).or_default().push(v);
        }
        let mut blocks: Vec<Vec<usize>> = by_color.into_values().collect();
        blocks.sort_unstable_by_key(|b| b[0]);
        Partition { blocks }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            blocks: (0..n).map(|v| vec![v]).collect(),
        }
    }

    pub fn trivial(n: usize) -> Self {
        if n == 0 {
            return Partition { blocks: vec![] };
        }
        Partition {
            blocks: vec![(0..n).collect()],
        }
    }

    pub fn node_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    fn block_of(&self) -> Result<Vec<usize>> {
        let n = self.node_count();
        let mut owner = vec![usize::MAX; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &v in b {
                if v >= n || owner[v] != usize::MAX {
                    return Err(Error::Shape(format!("blocks do not partition 0..{n}")));
                }
                owner[v] = i;
            }
        }
        Ok(owner)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{{{}}}", b.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "{}", blocks.join(" "))
    }
}

/// True iff every block of `b` lies inside a block of `a`.
pub fn partition_refines(a: &Partition, b: &Partition) -> Result<bool> {
    let owner_a = a.block_of()?;
    let _ = b.block_of()?;
    if a.node_count() != b.node_count() {
        return Err(Error::Shape(format!(
            "partitions over {} and {} nodes",
            a.node_count(),
            b.node_count()
        )));
    }
    Ok(b.blocks.iter().all(|blk| blk.iter().all(|&v| owner_a[v] == owner_a[blk[0]])))
}

type Key = (Color, Vec<Vec<Color>>);

// Relabels colors by first appearance so that equal partitions compare equal.
fn normal_form(colors: &[Vec<Color>]) -> Vec<Color> {
    let mut seen = BTreeMap::new();
    colors
        .iter()
        .flatten()
        .map(|c| {
            let next = seen.len() as Color;
            *seen.entry(*c).or_insert(next)
        })
        .collect()
}

fn initial_colors(gs: &[Graph], init: &Init) -> Result<Vec<Vec<Color>>> {
    match init {
        Init::Uniform => Ok(gs.iter().map(|g| vec![0; g.node_count()]).collect()),
        Init::Given(cs) => {
            if cs.len() != gs.len() || cs.iter().zip(gs).any(|(c, g)| c.len() != g.node_count()) {
                return Err(Error::Shape("initial coloring does not match the graphs".into()));
            }
            // Compress through a shared dictionary like every later round.
            let dict: BTreeMap<Color, Color> = cs
                .iter()
                .flatten()
                .copied()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .enumerate()
                .map(|(i, c)| (c, i as Color))
                .collect();
            Ok(cs.iter().map(|c| c.iter().map(|x| dict[x]).collect()).collect())
        }
    }
}

fn refine<F>(gs: &[Graph], rounds: Rounds, start: Vec<Vec<Color>>, payload: F) -> Refinement
where
    F: Fn(usize, usize, &[Color]) -> Vec<Vec<Color>>,
{
    let total: usize = gs.iter().map(Graph::node_count).sum();
    let max_rounds = match rounds {
        Rounds::Fixed(t) => t,
        // A non-stable round splits at least one block, so this many rounds
        // always reach a repeat.
        Rounds::UntilStable => total + 1,
    };
    let mut history = vec![start];
    let mut stable_round = None;
    for t in 1..=max_rounds {
        let prev = &history[t - 1];
        let keys: Vec<Vec<Key>> = gs
            .iter()
            .enumerate()
            .map(|(gi, g)| {
                (0..g.node_count())
                    .map(|u| (prev[gi][u], payload(gi, u, &prev[gi])))
                    .collect()
            })
            .collect();
        let dict: BTreeMap<&Key, Color> = keys
            .iter()
            .flatten()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .enumerate()
            .map(|(i, k)| (k, i as Color))
            .collect();
        let next: Vec<Vec<Color>> = keys.iter().map(|ks| ks.iter().map(|k| dict[k]).collect()).collect();
        let same = normal_form(prev) == normal_form(&next);
        history.push(next);
        if same && stable_round.is_none() {
            stable_round = Some(t - 1);
            if rounds == Rounds::UntilStable {
                break;
            }
        }
    }
    Refinement { history, stable_round }
}

/// 1-WL: hash (color, multiset of neighbor colors), uniform start.
pub fn wl_refine(gs: &[Graph], rounds: Rounds) -> Refinement {
    wl_refine_from(gs, rounds, &Init::Uniform).expect("uniform initialization always fits")
}

pub fn wl_refine_from(gs: &[Graph], rounds: Rounds, init: &Init) -> Result<Refinement> {
    let start = initial_colors(gs, init)?;
    Ok(refine(gs, rounds, start, |gi, u, colors| {
        let mut p: Vec<Vec<Color>> = gs[gi].neighbors(u).iter().map(|&v| vec![colors[v]]).collect();
        p.sort_unstable();
        p
    }))
}

/// WWL^ell: hash (color, multiset of colored terminating walks of length
/// 1..=ell). Walk colors keep their order and length.
pub fn wwl_refine(gs: &[Graph], ell: usize, rounds: Rounds, init: &Init, guard: u64) -> Result<Refinement> {
    let start = initial_colors(gs, init)?;
    let walks: Vec<Vec<Vec<Vec<usize>>>> = gs
        .iter()
        .map(|g| (0..g.node_count()).map(|u| terminating_walks(g, u, ell, guard)).collect())
        .collect::<Result<_>>()?;
    Ok(refine(gs, rounds, start, |gi, u, colors| {
        let mut p: Vec<Vec<Color>> = walks[gi][u]
            .iter()
            .map(|w| w.iter().map(|&x| colors[x]).collect())
            .collect();
        p.sort_unstable();
        p
    }))
}

fn walks_ending_at(g: &Graph, u: usize, len: usize) -> u128 {
    // counts[v] = number of walks of the current length from v to u.
    let mut counts = vec![0u128; g.node_count()];
    counts[u] = 1;
    for _ in 0..len {
        let next: Vec<u128> = (0..g.node_count())
            .map(|v| g.neighbors(v).iter().map(|&w| counts[w]).fold(0u128, u128::saturating_add))
            .collect();
        counts = next;
    }
    counts.into_iter().fold(0, u128::saturating_add)
}

/// All walks `(w_0, ..., w_L)` with `w_L = u` and `1 <= L <= ell`, with
/// multiplicity, shortest first and lexicographic within a length.
pub fn terminating_walks(g: &Graph, u: usize, ell: usize, guard: u64) -> Result<Vec<Vec<usize>>> {
    g.check_node(u)?;
    if ell == 0 {
        return Err(Error::InvalidArgument("walk length must be >= 1".into()));
    }
    let total: u128 = (1..=ell).map(|l| walks_ending_at(g, u, l)).fold(0, u128::saturating_add);
    if total > guard as u128 {
        return Err(Error::BudgetExceeded {
            what: "terminating walks",
            budget: guard,
        });
    }
    let mut out = Vec::with_capacity(total as usize);
    let mut level: Vec<Vec<usize>> = vec![vec![u]];
    for _ in 0..ell {
        // Reversed walks: extend at the far end, flip when emitting.
        level = level
            .iter()
            .flat_map(|w| {
                let last = *w.last().unwrap();
                g.neighbors(last).iter().map(move |&x| {
                    let mut e = w.clone();
                    e.push(x);
                    e
                })
            })
            .collect();
        let mut emitted: Vec<Vec<usize>> = level.iter().map(|w| w.iter().rev().copied().collect()).collect();
        emitted.sort_unstable();
        out.extend(emitted);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnfoldingTree {
    pub label: usize,
    /// Remaining depth below this node.
    pub depth: usize,
    pub children: Vec<UnfoldingTree>,
}

impl UnfoldingTree {
    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(UnfoldingTree::node_count).sum::<usize>()
    }
}

/// `T[depth, u]`: root `u` with a fresh copy of `T[depth - 1, v]` for every
/// neighbor `v`.
pub fn unfolding_tree(g: &Graph, u: usize, depth: usize, guard: u64) -> Result<UnfoldingTree> {
    g.check_node(u)?;
    let size: u128 = (0..=depth).map(|l| walks_ending_at(g, u, l)).fold(0, u128::saturating_add);
    if size > guard as u128 {
        return Err(Error::BudgetExceeded {
            what: "unfolding tree nodes",
            budget: guard,
        });
    }
    fn build(g: &Graph, u: usize, depth: usize) -> UnfoldingTree {
        let children = if depth == 0 {
            Vec::new()
        } else {
            g.neighbors(u).iter().map(|&v| build(g, v, depth - 1)).collect()
        };
        UnfoldingTree { label: u, depth, children }
    }
    Ok(build(g, u, depth))
}

/// Label sequences read from each full-depth leaf up to the root, sorted.
pub fn leaf_paths(t: &UnfoldingTree) -> Vec<Vec<usize>> {
    fn go(t: &UnfoldingTree, trail: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        trail.push(t.label);
        if t.depth == 0 {
            out.push(trail.iter().rev().copied().collect());
        }
        for c in &t.children {
            go(c, trail, out);
        }
        trail.pop();
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out.sort_unstable();
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Test {
    Wl,
    Wwl(usize),
}

impl fmt::Display for Test {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Test::Wl => write!(f, "wl"),
            Test::Wwl(l) => write!(f, "wwl({l})"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Distinguished,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub test: String,
    pub result: Outcome,
    pub rounds_to_stable: usize,
}

/// Joint run on `g` and `h` until stable; distinguished iff the two color
/// multisets differ.
pub fn distinguish(g: &Graph, h: &Graph, test: Test) -> Result<Verdict> {
    let gs = [g.clone(), h.clone()];
    let run = match test {
        Test::Wl => wl_refine(&gs, Rounds::UntilStable),
        Test::Wwl(ell) => wwl_refine(&gs, ell, Rounds::UntilStable, &Init::Uniform, DEFAULT_WALK_GUARD)?,
    };
    let t = run.stable_round.expect("refinement stabilizes within the round cap");
    let result = if run.multiset(t, 0) == run.multiset(t, 1) {
        Outcome::Inconclusive
    } else {
        Outcome::Distinguished
    };
    Ok(Verdict {
        test: test.to_string(),
        result,
        rounds_to_stable: t,
    })
}
