//! Exact edge-coloring search for small graphs.
//!
//! Complete backtracking over edges with saturation-based dynamic ordering,
//! incremental constraint bookkeeping, and interchangeable-color symmetry
//! breaking (an edge may only open the next unused color).

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::neighborhood::NeighborhoodCache;
use crate::verifier::{verify_relaxed, verify_semistrong, verify_strong, Coloring};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Semistrong,
    Strong,
    Relaxed { s: usize, t: usize },
}

impl Mode {
    pub fn verify(&self, g: &Graph, c: &Coloring) -> bool {
        match *self {
            Mode::Semistrong => verify_semistrong(g, c).valid,
            Mode::Strong => verify_strong(g, c).valid,
            Mode::Relaxed { s, t } => verify_relaxed(g, c, s, t).valid,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Mode::Semistrong => "semistrong".into(),
            Mode::Strong => "strong".into(),
            Mode::Relaxed { s, t } => format!("relaxed({s},{t})"),
        }
    }
}

/// Search budget: wall-clock and/or node count. Both `None` means unlimited.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Budget {
    pub wall: Option<Duration>,
    pub nodes: Option<u64>,
}

impl Budget {
    pub fn unlimited() -> Self {
        Budget::default()
    }

    pub fn nodes(n: u64) -> Self {
        Budget { wall: None, nodes: Some(n) }
    }

    pub fn seconds(s: u64) -> Self {
        Budget { wall: Some(Duration::from_secs(s)), nodes: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Found(Coloring),
    Refuted,
    Timeout,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proof {
    /// Every smaller color count was refuted by complete search.
    Exhausted,
    /// Only the upper bound is certified.
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub value: usize,
    pub certificate: Coloring,
    pub proof: Proof,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("no valid coloring with at most {max_colors} colors")]
    InfeasibleAtMax { max_colors: usize },
    #[error("budget exhausted before any coloring with at most {max_colors} colors was found")]
    Timeout { max_colors: usize },
    #[error("budget must allow at least one node")]
    EmptyBudget,
    #[error("certificate failed verification")]
    BadCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Link {
    /// Never the same color.
    Hard,
    /// Same color counts against the distance-1 limit.
    Near,
    /// Same color counts against the distance-2 limit.
    Far,
    /// Same color blocks endpoints: (mask on self, mask on other). Bit 0 is
    /// the first endpoint, bit 1 the second.
    Block(u8, u8),
}

/// Per-edge constraint lists for one coloring notion.
pub(crate) struct Constraints {
    links: Vec<Vec<(usize, Link)>>,
    near_limit: u32,
    far_limit: u32,
}

fn block_mask(g: &Graph, e: usize, f: usize) -> u8 {
    let (u, v) = g.endpoints(e);
    let (x, y) = g.endpoints(f);
    let mut mask = 0;
    if g.has_edge(u, x) || g.has_edge(u, y) {
        mask |= 1;
    }
    if g.has_edge(v, x) || g.has_edge(v, y) {
        mask |= 2;
    }
    mask
}

impl Constraints {
    pub(crate) fn for_mode(g: &Graph, mode: Mode) -> Self {
        let cache = NeighborhoodCache::new(g);
        let mut links = vec![Vec::new(); g.edge_count()];
        let (near_limit, far_limit) = match mode {
            Mode::Relaxed { s, t } => (s as u32, t as u32),
            _ => (0, 0),
        };
        for (e, list) in links.iter_mut().enumerate() {
            let nb = cache.get(e);
            for &f in &nb.n1 {
                list.push((f, if near_limit == 0 { Link::Hard } else { Link::Near }));
            }
            for &f in &nb.n2 {
                let link = match mode {
                    Mode::Strong => Link::Hard,
                    Mode::Relaxed { .. } if far_limit == 0 => Link::Hard,
                    Mode::Relaxed { .. } => Link::Far,
                    Mode::Semistrong => {
                        let (mine, theirs) = (block_mask(g, e, f), block_mask(g, f, e));
                        if mine == 3 || theirs == 3 {
                            Link::Hard
                        } else {
                            Link::Block(mine, theirs)
                        }
                    }
                };
                list.push((f, link));
            }
        }
        Constraints { links, near_limit, far_limit }
    }

    /// Good colorings without bad edges: F-pairs never share a color and each
    /// edge has at most one same-colored 2-neighbor of type 6.
    pub(crate) fn good_bad_free(cache: &NeighborhoodCache<'_>) -> Self {
        let m = cache.graph().edge_count();
        let links = (0..m)
            .map(|e| {
                let nb = cache.get(e);
                let mut list: Vec<(usize, Link)> = nb.f_set.iter().map(|&f| (f, Link::Hard)).collect();
                list.extend(nb.t6.iter().map(|&f| (f, Link::Far)));
                list
            })
            .collect();
        Constraints { links, near_limit: 0, far_limit: 1 }
    }
}

enum Trail {
    Near(usize),
    Far(usize),
    Mask(usize, u8),
}

struct Search<'a> {
    cons: &'a Constraints,
    k: u32,
    colors: Vec<u32>,
    near: Vec<u32>,
    far: Vec<u32>,
    mask: Vec<u8>,
    trail: Vec<Trail>,
    nodes: u64,
    budget: Budget,
    start: Instant,
    timed_out: bool,
    // Scratch indexed by color.
    forbid: Vec<bool>,
    near_tmp: Vec<u32>,
    far_tmp: Vec<u32>,
    mask_tmp: Vec<u8>,
}

impl<'a> Search<'a> {
    fn new(cons: &'a Constraints, k: u32, budget: Budget) -> Self {
        let m = cons.links.len();
        let slots = k as usize + 1;
        Search {
            cons,
            k,
            colors: vec![0; m],
            near: vec![0; m],
            far: vec![0; m],
            mask: vec![0; m],
            trail: Vec::new(),
            nodes: 0,
            budget,
            start: Instant::now(),
            timed_out: false,
            forbid: vec![false; slots],
            near_tmp: vec![0; slots],
            far_tmp: vec![0; slots],
            mask_tmp: vec![0; slots],
        }
    }

    /// Fill `self.forbid[1..=limit]` for edge `x`; returns the number of
    /// admissible colors.
    fn scan(&mut self, x: usize, limit: u32) -> usize {
        let slots = limit as usize + 1;
        self.forbid[..slots].fill(false);
        self.near_tmp[..slots].fill(0);
        self.far_tmp[..slots].fill(0);
        self.mask_tmp[..slots].fill(0);
        for &(y, link) in &self.cons.links[x] {
            let c = self.colors[y];
            if c == 0 || c > limit {
                continue;
            }
            let c = c as usize;
            match link {
                Link::Hard => self.forbid[c] = true,
                Link::Near => {
                    self.near_tmp[c] += 1;
                    if self.near[y] + 1 > self.cons.near_limit {
                        self.forbid[c] = true;
                    }
                }
                Link::Far => {
                    self.far_tmp[c] += 1;
                    if self.far[y] + 1 > self.cons.far_limit {
                        self.forbid[c] = true;
                    }
                }
                Link::Block(mine, theirs) => {
                    self.mask_tmp[c] |= mine;
                    if self.mask[y] | theirs == 3 {
                        self.forbid[c] = true;
                    }
                }
            }
        }
        let mut count = 0;
        for c in 1..slots {
            if self.near_tmp[c] > self.cons.near_limit
                || self.far_tmp[c] > self.cons.far_limit
                || self.mask_tmp[c] == 3
            {
                self.forbid[c] = true;
            }
            if !self.forbid[c] {
                count += 1;
            }
        }
        count
    }

    fn assign(&mut self, x: usize, c: u32) {
        self.colors[x] = c;
        let (mut near, mut far, mut mask) = (0, 0, 0);
        for &(y, link) in &self.cons.links[x] {
            if self.colors[y] != c || y == x {
                continue;
            }
            match link {
                Link::Hard => {}
                Link::Near => {
                    near += 1;
                    self.near[y] += 1;
                    self.trail.push(Trail::Near(y));
                }
                Link::Far => {
                    far += 1;
                    self.far[y] += 1;
                    self.trail.push(Trail::Far(y));
                }
                Link::Block(mine, theirs) => {
                    mask |= mine;
                    self.trail.push(Trail::Mask(y, self.mask[y]));
                    self.mask[y] |= theirs;
                }
            }
        }
        self.near[x] = near;
        self.far[x] = far;
        self.mask[x] = mask;
    }

    fn unassign(&mut self, x: usize, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Trail::Near(y) => self.near[y] -= 1,
                Trail::Far(y) => self.far[y] -= 1,
                Trail::Mask(y, old) => self.mask[y] = old,
            }
        }
        self.colors[x] = 0;
        self.near[x] = 0;
        self.far[x] = 0;
        self.mask[x] = 0;
    }

    fn out_of_budget(&mut self) -> bool {
        if self.timed_out {
            return true;
        }
        if let Some(limit) = self.budget.nodes {
            if self.nodes >= limit {
                self.timed_out = true;
            }
        }
        if let Some(wall) = self.budget.wall {
            if self.nodes.is_multiple_of(1024) && self.start.elapsed() >= wall {
                self.timed_out = true;
            }
        }
        self.timed_out
    }

    /// Returns true when every edge is colored.
    fn solve(&mut self, max_used: u32) -> bool {
        self.nodes += 1;
        if self.out_of_budget() {
            return false;
        }
        let limit = (max_used + 1).min(self.k);
        let m = self.colors.len();
        let mut best: Option<(usize, usize, usize)> = None;
        for x in 0..m {
            if self.colors[x] != 0 {
                continue;
            }
            let count = self.scan(x, limit);
            if count == 0 {
                return false;
            }
            let degree = self.cons.links[x].iter().filter(|&&(y, _)| self.colors[y] == 0).count();
            let better = match best {
                None => true,
                Some((_, bc, bd)) => count < bc || (count == bc && degree > bd),
            };
            if better {
                best = Some((x, count, degree));
            }
        }
        let Some((x, _, _)) = best else {
            return true;
        };
        self.scan(x, limit);
        let options: Vec<u32> = (1..=limit).filter(|&c| !self.forbid[c as usize]).collect();
        for c in options {
            let mark = self.trail.len();
            self.assign(x, c);
            if self.solve(max_used.max(c)) {
                return true;
            }
            self.unassign(x, mark);
            if self.timed_out {
                return false;
            }
        }
        false
    }
}

pub(crate) fn run_search(cons: &Constraints, k: usize, budget: Budget) -> (Feasibility, u64) {
    let mut search = Search::new(cons, k as u32, budget);
    if search.colors.is_empty() {
        return (Feasibility::Found(Coloring::new(Vec::new(), k as u32).unwrap()), 0);
    }
    if k == 0 {
        return (Feasibility::Refuted, 0);
    }
    let found = search.solve(0);
    let nodes = search.nodes;
    let outcome = if found {
        Feasibility::Found(Coloring::new(search.colors, k as u32).expect("colors within 1..=k"))
    } else if search.timed_out {
        Feasibility::Timeout
    } else {
        Feasibility::Refuted
    };
    (outcome, nodes)
}

/// Decide whether `g` has a valid `k`-coloring in `mode`.
pub fn feasibility(g: &Graph, mode: Mode, k: usize, budget: Budget) -> Feasibility {
    let cons = Constraints::for_mode(g, mode);
    let (outcome, _) = run_search(&cons, k, budget);
    if let Feasibility::Found(c) = &outcome {
        assert!(mode.verify(g, c), "exact search produced an invalid {} certificate", mode.name());
    }
    outcome
}

fn lower_bound(g: &Graph, mode: Mode) -> usize {
    match mode {
        Mode::Relaxed { s, .. } if s > 0 => 1,
        _ => g.max_degree().max(1),
    }
}

/// Smallest `k <= max_colors` admitting a valid coloring, searching upward.
/// The budget applies to the whole run.
pub fn exact_index(g: &Graph, mode: Mode, max_colors: usize, budget: Budget) -> Result<ExactResult, ExactError> {
    if budget.nodes == Some(0) || budget.wall == Some(Duration::ZERO) {
        return Err(ExactError::EmptyBudget);
    }
    if g.edge_count() == 0 {
        return Ok(ExactResult { value: 0, certificate: Coloring::new(Vec::new(), 0).unwrap(), proof: Proof::Exhausted, nodes: 0 });
    }
    let cons = Constraints::for_mode(g, mode);
    let start = Instant::now();
    let mut total_nodes = 0u64;
    let mut proof = Proof::Exhausted;
    for k in lower_bound(g, mode)..=max_colors {
        let remaining = Budget {
            wall: budget.wall.map(|w| w.saturating_sub(start.elapsed())),
            nodes: budget.nodes.map(|n| n.saturating_sub(total_nodes)),
        };
        if remaining.nodes == Some(0) || remaining.wall == Some(Duration::ZERO) {
            return Err(ExactError::Timeout { max_colors });
        }
        let (outcome, nodes) = run_search(&cons, k, remaining);
        total_nodes += nodes;
        match outcome {
            Feasibility::Found(c) => {
                if !mode.verify(g, &c) {
                    return Err(ExactError::BadCertificate);
                }
                let value = c.colors_used();
                return Ok(ExactResult { value, certificate: c, proof, nodes: total_nodes });
            }
            Feasibility::Refuted => {}
            Feasibility::Timeout => proof = Proof::Timeout,
        }
    }
    match proof {
        Proof::Exhausted => Err(ExactError::InfeasibleAtMax { max_colors }),
        Proof::Timeout => Err(ExactError::Timeout { max_colors }),
    }
}
