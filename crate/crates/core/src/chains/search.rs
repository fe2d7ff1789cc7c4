//! Exhaustive longest-chain search.
//!
//! Depth-first over canonical class vectors in lexicographic order. The
//! candidates after a prefix `p_1, …, p_k` are the vectors orthogonal to
//! `p_1, …, p_{k-1}` and not orthogonal to `p_k`; they are read off a
//! precomputed orthogonality bitset. A candidate lying in the span of the
//! prefix ends the chain (a chain of length `L` has its first `L - 1`
//! vectors independent), so such nodes are leaves.
//!
//! Symmetry reduction skips a subtree only when an explicit isometry mapping
//! it onto an explored subtree has been built and verified:
//! * `FirstVertex`: at the root, `d_0 ↦ d` for every other class vector `d`;
//! * `Orbit`: additionally, at every level, an isometry fixing the prefix and
//!   sending the first independent candidate `x_0` to a multiple of `x`.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::witt::{witt_extend, PartialIsometry};
use super::Chain;
use crate::error::{Error, Result};
use crate::formspace::FormSpace;
use crate::matrix::Echelon;
use crate::transpositions::{class_representatives, ClassSpec};
use crate::vector::Vector;

pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SymmetryMode {
    None,
    FirstVertex,
    Orbit,
}

impl std::str::FromStr for SymmetryMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(SymmetryMode::None),
            "first-vertex" => Ok(SymmetryMode::FirstVertex),
            "orbit" => Ok(SymmetryMode::Orbit),
            _ => Err(Error::Config(format!("unknown symmetry mode `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOptions {
    pub symmetry: SymmetryMode,
    pub node_budget: u64,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { symmetry: SymmetryMode::FirstVertex, node_budget: DEFAULT_NODE_BUDGET, parallel: true }
    }
}

impl SearchOptions {
    pub fn with_symmetry(symmetry: SymmetryMode) -> Self {
        SearchOptions { symmetry, ..Self::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchOutcome {
    pub max_length: usize,
    pub witness: Chain,
    pub nodes_explored: u64,
    pub used_symmetry_reduction: bool,
    pub symmetry: SymmetryMode,
    /// Subtrees skipped, each backed by a verified isometry.
    pub skipped_by_symmetry: u64,
    pub class_size: usize,
    pub reached_bound: bool,
}

struct Graph<'a> {
    space: &'a FormSpace,
    reps: Vec<Vector>,
    words: usize,
    orth: Vec<Vec<u64>>,
}

impl<'a> Graph<'a> {
    fn build(space: &'a FormSpace, spec: ClassSpec) -> Result<Self> {
        let reps = class_representatives(space, spec)?;
        let n = reps.len();
        let words = n.div_ceil(64).max(1);
        let duals: Vec<Vec<u8>> = reps.iter().map(|r| space.dual_row(r)).collect();
        let f = space.field();
        let orth = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![0u64; words];
                let x = reps[i].coords();
                for (j, d) in duals.iter().enumerate() {
                    let s = x.iter().zip(d).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                    if s == 0 {
                        row[j / 64] |= 1 << (j % 64);
                    }
                }
                row
            })
            .collect();
        Ok(Graph { space, reps, words, orth })
    }

    fn index_of(&self, v: &Vector) -> Option<usize> {
        self.reps.binary_search(v).ok()
    }
}

fn bits(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(w, &word)| {
        let mut x = word;
        std::iter::from_fn(move || {
            if x == 0 {
                return None;
            }
            let b = x.trailing_zeros() as usize;
            x &= x - 1;
            Some(w * 64 + b)
        })
    })
}

/// Result of one depth-first task.
struct TaskResult {
    best: Vec<usize>,
    nodes: u64,
    skipped: u64,
    hit_bound: bool,
    over_budget: bool,
    aborted: bool,
}

struct Dfs<'g, 'a> {
    g: &'g Graph<'a>,
    orbit: bool,
    bound: usize,
    budget: u64,
    chain: Vec<usize>,
    in_chain: Vec<u64>,
    best: Vec<usize>,
    nodes: u64,
    skipped: u64,
    task: usize,
    winner: Option<&'g AtomicUsize>,
}

enum Stop {
    Bound,
    Budget,
    Aborted,
}

impl<'g, 'a> Dfs<'g, 'a> {
    fn new(
        g: &'g Graph<'a>,
        orbit: bool,
        bound: usize,
        budget: u64,
        task: usize,
        winner: Option<&'g AtomicUsize>,
    ) -> Self {
        Dfs {
            g,
            orbit,
            bound,
            budget,
            chain: Vec::new(),
            in_chain: vec![0; g.words],
            best: Vec::new(),
            nodes: 0,
            skipped: 0,
            task,
            winner,
        }
    }

    fn push(&mut self, j: usize) {
        self.chain.push(j);
        self.in_chain[j / 64] |= 1 << (j % 64);
    }

    fn pop(&mut self) {
        let j = self.chain.pop().expect("nonempty chain");
        self.in_chain[j / 64] &= !(1 << (j % 64));
    }

    fn visit(&mut self) -> Result<(), Stop> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Stop::Budget);
        }
        if let Some(w) = self.winner {
            if w.load(Ordering::Relaxed) < self.task {
                return Err(Stop::Aborted);
            }
        }
        if self.chain.len() > self.best.len() {
            self.best = self.chain.clone();
            if self.chain.len() >= self.bound {
                return Err(Stop::Bound);
            }
        }
        Ok(())
    }

    /// Explores all extensions of the current (independent) chain.
    /// `allowed` is the intersection of the orthogonality rows of every chain
    /// element except the last.
    fn explore(&mut self, allowed: &[u64], ech: &Echelon) -> Result<(), Stop> {
        let g = self.g;
        let last = *self.chain.last().expect("explore needs a nonempty chain");
        let words = g.words;
        let mut cand = vec![0u64; words];
        let mut next_allowed = vec![0u64; words];
        for w in 0..words {
            next_allowed[w] = allowed[w] & g.orth[last][w];
            cand[w] = allowed[w] & !g.orth[last][w] & !self.in_chain[w];
        }
        let mut independent = Vec::new();
        for j in bits(&cand) {
            if ech.contains(&g.reps[j]) {
                self.push(j);
                let r = self.visit();
                self.pop();
                r?;
            } else {
                independent.push(j);
            }
        }
        let explore_list = if self.orbit && independent.len() > 1 {
            let keep = orbit_representatives(g, &self.chain, &independent);
            self.skipped += (independent.len() - keep.len()) as u64;
            keep
        } else {
            independent
        };
        for j in explore_list {
            self.push(j);
            let mut next = ech.clone();
            next.insert(&g.reps[j]);
            let r = self.visit().and_then(|_| self.explore(&next_allowed, &next));
            self.pop();
            r?;
        }
        Ok(())
    }

    fn finish(self, stop: Result<(), Stop>) -> TaskResult {
        let (hit_bound, over_budget, aborted) = match stop {
            Ok(()) => (false, false, false),
            Err(Stop::Bound) => (true, false, false),
            Err(Stop::Budget) => (false, true, false),
            Err(Stop::Aborted) => (false, false, true),
        };
        TaskResult { best: self.best, nodes: self.nodes, skipped: self.skipped, hit_bound, over_budget, aborted }
    }
}

/// Keeps the first candidate and every candidate not proven equivalent to
/// it by an isometry fixing the prefix.
fn orbit_representatives(g: &Graph<'_>, prefix: &[usize], cands: &[usize]) -> Vec<usize> {
    let first = cands[0];
    let equivalent: Vec<bool> = cands[1..].par_iter().map(|&j| maps_within_stabilizer(g, prefix, first, j)).collect();
    std::iter::once(first).chain(cands[1..].iter().zip(equivalent).filter(|(_, eq)| !eq).map(|(&j, _)| j)).collect()
}

/// Is there an isometry fixing every prefix vector and sending `from` to a
/// multiple of `to`? Only a verified extension counts.
fn maps_within_stabilizer(g: &Graph<'_>, prefix: &[usize], from: usize, to: usize) -> bool {
    let space = g.space;
    let f = space.field();
    let x0 = &g.reps[from];
    let x = &g.reps[to];
    let mut domain: Vec<Vector> = prefix.iter().map(|&p| g.reps[p].clone()).collect();
    let mut images = domain.clone();
    let c = match prefix.last() {
        Some(&p) => {
            let a = space.bilinear_codes(x0.coords(), g.reps[p].coords());
            let b = space.bilinear_codes(x.coords(), g.reps[p].coords());
            if a == 0 || b == 0 {
                return false;
            }
            f.mul(a, f.inv(b))
        }
        None => 1,
    };
    domain.push(x0.clone());
    images.push(x.scale_code(c));
    let Ok(partial) = PartialIsometry::new(space, domain, images) else {
        return false;
    };
    match witt_extend(space, &partial) {
        Ok(t) => {
            let image = t.mul_vec(x0);
            image == x.scale_code(c) && prefix.iter().all(|&p| t.mul_vec(&g.reps[p]) == g.reps[p])
        }
        Err(_) => false,
    }
}

/// Longest chain in the class `D` of `space`.
pub fn max_chain(space: &FormSpace, spec: ClassSpec, options: &SearchOptions) -> Result<SearchOutcome> {
    spec.check_space(space)?;
    let g = Graph::build(space, spec)?;
    let n = g.reps.len();
    let bound = space.dim() + 1;
    let reduce = options.symmetry != SymmetryMode::None && space.is_nondegenerate();
    let orbit = reduce && options.symmetry == SymmetryMode::Orbit;
    let budget = options.node_budget;

    let mut outcome = SearchOutcome {
        max_length: 0,
        witness: Chain::from_reps_unchecked(spec, Vec::new()),
        nodes_explored: 0,
        used_symmetry_reduction: reduce,
        symmetry: if reduce { options.symmetry } else { SymmetryMode::None },
        skipped_by_symmetry: 0,
        class_size: n,
        reached_bound: false,
    };
    if n == 0 {
        return Ok(outcome);
    }

    // roots
    let all: Vec<usize> = (0..n).collect();
    let roots = if reduce {
        let keep = orbit_representatives(&g, &[], &all);
        outcome.skipped_by_symmetry += (n - keep.len()) as u64;
        keep
    } else {
        all
    };
    let mut nodes = roots.len() as u64;
    let mut best: Vec<usize> = vec![roots[0]];
    if bound <= 1 {
        return Ok(finish(outcome, &g, spec, best, nodes, true));
    }

    // depth-2 prefixes
    let full = vec![u64::MAX; g.words];
    let mut tasks: Vec<[usize; 2]> = Vec::new();
    for &r in &roots {
        let mut mask: Vec<u64> = g.orth[r].iter().map(|w| !w).collect();
        mask[r / 64] &= !(1 << (r % 64));
        let nonorth: Vec<usize> = bits(&mask).filter(|&j| j < n).collect();
        let seconds = if orbit && nonorth.len() > 1 {
            let keep = orbit_representatives(&g, &[r], &nonorth);
            outcome.skipped_by_symmetry += (nonorth.len() - keep.len()) as u64;
            keep
        } else {
            nonorth
        };
        tasks.extend(seconds.into_iter().map(|s| [r, s]));
    }
    nodes += tasks.len() as u64;
    if nodes > budget {
        return Err(Error::IncompleteSearch { budget });
    }
    if let Some(t) = tasks.first() {
        best = t.to_vec();
    }
    if tasks.is_empty() || bound <= 2 {
        let hit = best.len() >= bound;
        return Ok(finish(outcome, &g, spec, best, nodes, hit));
    }

    let remaining = budget - nodes;
    let winner = AtomicUsize::new(usize::MAX);
    let run = |(idx, t): (usize, &[usize; 2])| -> TaskResult {
        let mut dfs = Dfs::new(&g, orbit, bound, remaining, idx, Some(&winner));
        dfs.push(t[0]);
        dfs.push(t[1]);
        dfs.best = dfs.chain.clone();
        let mut ech = Echelon::new(space.field(), space.dim());
        ech.insert(&g.reps[t[0]]);
        ech.insert(&g.reps[t[1]]);
        let allowed: Vec<u64> = full.iter().zip(&g.orth[t[0]]).map(|(a, b)| a & b).collect();
        let stop = dfs.explore(&allowed, &ech);
        let res = dfs.finish(stop);
        if res.hit_bound {
            winner.fetch_min(idx, Ordering::Relaxed);
        }
        res
    };
    let results: Vec<TaskResult> = if options.parallel {
        tasks.par_iter().enumerate().map(run).collect()
    } else {
        let mut out = Vec::new();
        for item in tasks.iter().enumerate() {
            let r = run(item);
            let stop = r.hit_bound;
            out.push(r);
            if stop {
                break;
            }
        }
        out
    };
    let cutoff = winner.load(Ordering::Relaxed);
    let considered = results.iter().take(cutoff.saturating_add(1).min(results.len()));
    let mut total = nodes;
    let mut hit = false;
    for r in considered {
        if r.over_budget || r.aborted {
            return Err(Error::IncompleteSearch { budget });
        }
        total += r.nodes;
        outcome.skipped_by_symmetry += r.skipped;
        if r.best.len() > best.len() {
            best = r.best.clone();
        }
        hit |= r.hit_bound;
    }
    if total > budget {
        return Err(Error::IncompleteSearch { budget });
    }
    Ok(finish(outcome, &g, spec, best, total, hit))
}

fn finish(
    mut outcome: SearchOutcome,
    g: &Graph<'_>,
    spec: ClassSpec,
    best: Vec<usize>,
    nodes: u64,
    hit: bool,
) -> SearchOutcome {
    outcome.max_length = best.len();
    outcome.witness = Chain::from_reps_unchecked(spec, best.iter().map(|&i| g.reps[i].clone()).collect());
    outcome.nodes_explored = nodes;
    outcome.reached_bound = hit;
    outcome
}

/// Longest chain extending a given chain. `Orbit` reduction applies below
/// the prefix; `FirstVertex` has nothing to act on and behaves as `None`.
pub fn max_chain_from_prefix(
    space: &FormSpace,
    spec: ClassSpec,
    prefix: &[Vector],
    options: &SearchOptions,
) -> Result<SearchOutcome> {
    let check = super::is_chain(space, spec, prefix)?;
    if let Some(v) = check.violation {
        return Err(Error::CheckFailed { clause: "prefix".into(), detail: v.to_string() });
    }
    if prefix.is_empty() {
        return max_chain(space, spec, options);
    }
    let g = Graph::build(space, spec)?;
    let idx: Vec<usize> = prefix
        .iter()
        .map(|v| {
            g.index_of(&crate::transpositions::canonical_rep(v).expect("class vectors are nonzero"))
                .expect("class vector")
        })
        .collect();
    let orbit = options.symmetry == SymmetryMode::Orbit && space.is_nondegenerate();
    let mut outcome = SearchOutcome {
        max_length: prefix.len(),
        witness: Chain::from_reps_unchecked(spec, idx.iter().map(|&i| g.reps[i].clone()).collect()),
        nodes_explored: 1,
        used_symmetry_reduction: orbit,
        symmetry: if orbit { SymmetryMode::Orbit } else { SymmetryMode::None },
        skipped_by_symmetry: 0,
        class_size: g.reps.len(),
        reached_bound: false,
    };
    let mut ech = Echelon::new(space.field(), space.dim());
    let independent = idx.iter().all(|&i| ech.insert(&g.reps[i]));
    if !independent {
        // a dependent vector can only come last and ends the chain
        return Ok(outcome);
    }
    let mut dfs = Dfs::new(&g, orbit, space.dim() + 1, options.node_budget, 0, None);
    for &i in &idx {
        dfs.push(i);
    }
    dfs.best = dfs.chain.clone();
    let n = g.reps.len();
    let mut allowed: Vec<u64> =
        (0..g.words).map(|w| if n >= 64 * (w + 1) { u64::MAX } else { (1u64 << (n - 64 * w)) - 1 }).collect();
    for &i in &idx[..idx.len() - 1] {
        for (a, b) in allowed.iter_mut().zip(&g.orth[i]) {
            *a &= b;
        }
    }
    let stop = if idx.len() >= space.dim() + 1 { Ok(()) } else { dfs.explore(&allowed, &ech) };
    let res = dfs.finish(stop);
    if res.over_budget {
        return Err(Error::IncompleteSearch { budget: options.node_budget });
    }
    let best = res.best;
    outcome.max_length = best.len();
    outcome.witness = Chain::from_reps_unchecked(spec, best.iter().map(|&i| g.reps[i].clone()).collect());
    outcome.nodes_explored = res.nodes + 1;
    outcome.skipped_by_symmetry = res.skipped;
    outcome.reached_bound = res.hit_bound;
    Ok(outcome)
}
