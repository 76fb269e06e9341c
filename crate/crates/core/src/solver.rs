//! Greedy good colorings, the local repair engine, and per-component
//! dispatch to the closed-form constructions.
//!
//! A coloring is *good* when no edge shares its color with an edge of F(e).
//! Repair drives the lexicographic potential (κ1, κ2) down with a catalog of
//! recoloring moves until no bad edge remains; a good coloring without bad
//! edges is both semistrong and (0,1)-relaxed strong.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construct;
use crate::exact::{self, Budget, Constraints, Feasibility};
use crate::graph::{bipartition, connected_components, g_family_witness, is_complete_bipartite_dd, Graph};
use crate::neighborhood::{NeighborhoodCache, TypeClass};
use crate::verifier::{badness_with, is_good_with, verify_relaxed, verify_semistrong, Coloring};

const MAX_PATH_EDGES: usize = 8;
const MAX_PATHS: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Schema {
    S1,
    S2,
    S3,
    S4,
    S5,
    S6,
    S7,
    F1,
    F2,
    F3,
}

impl Schema {
    /// Order in which the engine tries the move families.
    pub const SEARCH_ORDER: [Schema; 9] =
        [Schema::S1, Schema::S2, Schema::S4, Schema::S3, Schema::S5, Schema::S6, Schema::S7, Schema::F1, Schema::F2];
}

impl fmt::Display for Schema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveProposal {
    pub assignments: Vec<(usize, u32)>,
    pub schema: Schema,
    /// (κ1, κ2) after the move.
    pub predicted_potential: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GreedyError {
    #[error("edge {edge} has no available color in a palette of {palette}")]
    Stuck { edge: usize, palette: u32 },
    #[error("palette must be nonempty")]
    EmptyPalette,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RepairError {
    #[error("coloring is not good")]
    NotGood,
    #[error("coloring has no bad edge")]
    NoBadEdge,
    #[error("coloring length {got} does not match edge count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("repair requires a connected graph with Δ ≥ 3 outside the regular family: {0}")]
    Unsupported(&'static str),
    #[error("bad-edge invariant violated: {0}")]
    Invariant(String),
    #[error("no improving move and the exact fallback did not finish (κ1 = {kappa1})")]
    Stuck { kappa1: usize },
    #[error(transparent)]
    Greedy(#[from] GreedyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairConfig {
    /// Recompute badness and goodness from scratch after every accepted move.
    pub audit: bool,
    /// Return an error on the first bad-edge invariant violation.
    pub strict: bool,
    /// Node budget for the exact fallback.
    pub fallback_nodes: u64,
    /// Wall-clock budget for the exact fallback, in milliseconds.
    pub fallback_millis: u64,
    /// Move families left out of the search. Invariant checks run only
    /// when nothing is skipped.
    #[serde(default)]
    pub skip: Vec<Schema>,
}

impl Default for RepairConfig {
    fn default() -> Self {
        RepairConfig { audit: cfg!(debug_assertions), strict: false, fallback_nodes: 50_000_000, fallback_millis: 120_000, skip: Vec::new() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepairStats {
    pub moves: BTreeMap<Schema, usize>,
    /// Times the exact fallback was invoked.
    pub fallbacks: usize,
    /// (κ1, κ2) before repair and after every accepted move.
    pub trajectory: Vec<(usize, usize)>,
    pub invariant_violations: Vec<String>,
    /// Accepted moves where full recomputation disagreed with the
    /// incremental potential or found the coloring not good.
    pub audit_failures: usize,
    pub audited_moves: usize,
}

impl RepairStats {
    pub fn total_moves(&self) -> usize {
        self.moves.values().sum()
    }

    /// True when every step of the trajectory strictly decreases (κ1, κ2).
    pub fn strictly_decreasing(&self) -> bool {
        self.trajectory.windows(2).all(|w| w[1] < w[0])
    }
}

/// Edge order: breadth-first over vertices from the smallest unvisited one,
/// each vertex contributing its not-yet-listed incident edges.
fn bfs_edge_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut seen_v = vec![false; n];
    let mut seen_e = vec![false; g.edge_count()];
    let mut order = Vec::with_capacity(g.edge_count());
    let mut queue = std::collections::VecDeque::new();
    for s in 0..n {
        if seen_v[s] {
            continue;
        }
        seen_v[s] = true;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            for &(y, e) in g.adjacency(x) {
                if !seen_e[e] {
                    seen_e[e] = true;
                    order.push(e);
                }
                if !seen_v[y] {
                    seen_v[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    order
}

fn greedy_with(cache: &NeighborhoodCache<'_>, palette: u32) -> Result<Vec<u32>, GreedyError> {
    if palette == 0 {
        return Err(GreedyError::EmptyPalette);
    }
    let g = cache.graph();
    let mut colors = vec![0u32; g.edge_count()];
    let mut used = vec![false; palette as usize + 1];
    for e in bfs_edge_order(g) {
        used.fill(false);
        for &f in &cache.get(e).f_set {
            used[colors[f] as usize] = true;
        }
        let c = (1..=palette).find(|&c| !used[c as usize]).ok_or(GreedyError::Stuck { edge: e, palette })?;
        colors[e] = c;
    }
    Ok(colors)
}

/// Greedy good coloring: each edge in breadth-first order takes the
/// smallest color absent from F(e).
pub fn greedy_good_coloring(g: &Graph, palette_size: u32) -> Result<Coloring, GreedyError> {
    let cache = NeighborhoodCache::new(g);
    let colors = greedy_with(&cache, palette_size)?;
    Ok(Coloring::new(colors, palette_size).expect("greedy colors lie in the palette"))
}

struct Engine<'c, 'g> {
    cache: &'c NeighborhoodCache<'g>,
    palette: u32,
    delta: usize,
    /// Bad-edge invariants are proven only for the Δ²−1 palette on
    /// qualifying graphs.
    check_invariants: bool,
    colors: Vec<u32>,
    same2: Vec<u32>,
    kappa: (usize, usize),
    stamp: Vec<u32>,
    epoch: u32,
    scratch: Vec<usize>,
    paths: usize,
}

impl<'c, 'g> Engine<'c, 'g> {
    fn new(cache: &'c NeighborhoodCache<'g>, colors: Vec<u32>, palette: u32) -> Self {
        let g = cache.graph();
        let delta = g.max_degree();
        let qualifies = delta >= 3
            && g.is_connected()
            && g_family_witness(g).is_none()
            && palette as usize + 1 == delta * delta;
        let m = colors.len();
        let mut engine = Engine {
            cache,
            palette,
            delta,
            check_invariants: qualifies,
            colors,
            same2: vec![0; m],
            kappa: (0, 0),
            stamp: vec![0; m],
            epoch: 0,
            scratch: Vec::new(),
            paths: 0,
        };
        engine.recompute();
        engine
    }

    fn count_same(&self, x: usize) -> u32 {
        let c = self.colors[x];
        self.cache.get(x).n2.iter().filter(|&&f| self.colors[f] == c).count() as u32
    }

    fn recompute(&mut self) {
        let mut total = 0usize;
        let mut bad = 0usize;
        for x in 0..self.colors.len() {
            let s = self.count_same(x);
            self.same2[x] = s;
            total += s as usize;
            bad += (s >= 2) as usize;
        }
        self.kappa = (bad, total / 2);
    }

    fn bad_edges(&self) -> Vec<usize> {
        (0..self.colors.len()).filter(|&x| self.same2[x] >= 2).collect()
    }

    fn is_good_at(&self, x: usize) -> bool {
        let c = self.colors[x];
        self.cache.get(x).f_set.iter().all(|&f| self.colors[f] != c)
    }

    /// Fill `self.scratch` with the changed edges and their 2-neighbors.
    fn collect_affected(&mut self, assigns: &[(usize, u32)]) {
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        self.scratch.clear();
        for &(x, _) in assigns {
            for &y in std::iter::once(&x).chain(self.cache.get(x).n2.iter()) {
                if self.stamp[y] != self.epoch {
                    self.stamp[y] = self.epoch;
                    self.scratch.push(y);
                }
            }
        }
    }

    fn well_formed(&self, assigns: &[(usize, u32)]) -> bool {
        let mut changed = false;
        for (i, &(x, c)) in assigns.iter().enumerate() {
            if c == 0 || c > self.palette || assigns[..i].iter().any(|&(y, _)| y == x) {
                return false;
            }
            changed |= self.colors[x] != c;
        }
        changed
    }

    /// Potential after `assigns`, or `None` when the result is not good.
    fn evaluate(&mut self, assigns: &[(usize, u32)]) -> Option<(usize, usize)> {
        if !self.well_formed(assigns) {
            return None;
        }
        let old: Vec<u32> = assigns.iter().map(|&(x, _)| self.colors[x]).collect();
        for &(x, c) in assigns {
            self.colors[x] = c;
        }
        let good = assigns.iter().all(|&(x, _)| self.is_good_at(x));
        let result = if good {
            self.collect_affected(assigns);
            let (mut d_pairs, mut d_bad) = (0i64, 0i64);
            for i in 0..self.scratch.len() {
                let y = self.scratch[i];
                let now = self.count_same(y);
                let before = self.same2[y];
                d_pairs += now as i64 - before as i64;
                d_bad += (now >= 2) as i64 - (before >= 2) as i64;
            }
            Some(((self.kappa.0 as i64 + d_bad) as usize, (self.kappa.1 as i64 + d_pairs / 2) as usize))
        } else {
            None
        };
        for (&(x, _), &c) in assigns.iter().zip(&old) {
            self.colors[x] = c;
        }
        result
    }

    fn commit(&mut self, assigns: &[(usize, u32)], potential: (usize, usize)) {
        for &(x, c) in assigns {
            self.colors[x] = c;
        }
        self.collect_affected(assigns);
        for i in 0..self.scratch.len() {
            let y = self.scratch[i];
            self.same2[y] = self.count_same(y);
        }
        self.kappa = potential;
    }

    fn try_move(&mut self, assigns: Vec<(usize, u32)>, schema: Schema) -> Option<MoveProposal> {
        let potential = self.evaluate(&assigns)?;
        (potential < self.kappa).then_some(MoveProposal { assignments: assigns, schema, predicted_potential: potential })
    }

    fn color_mask(&self, edges: &[usize]) -> Vec<bool> {
        let mut mask = vec![false; self.palette as usize + 1];
        for &f in edges {
            mask[self.colors[f] as usize] = true;
        }
        mask
    }

    fn count_on(&self, edges: &[usize], color: u32) -> usize {
        edges.iter().filter(|&&f| self.colors[f] == color).count()
    }

    /// Colors absent from F(x) (and from x itself when `closed`) that appear
    /// at most once on T6(x).
    fn free_colors(&self, x: usize, closed: bool) -> Vec<u32> {
        let nb = self.cache.get(x);
        let mut mask = self.color_mask(&nb.f_set);
        if closed {
            mask[self.colors[x] as usize] = true;
        }
        (1..=self.palette).filter(|&a| !mask[a as usize] && self.count_on(&nb.t6, a) <= 1).collect()
    }

    fn s1(&mut self, e: usize) -> Option<MoveProposal> {
        for a in self.free_colors(e, false) {
            if let Some(p) = self.try_move(vec![(e, a)], Schema::S1) {
                return Some(p);
            }
        }
        None
    }

    fn s2(&mut self, e: usize) -> Option<MoveProposal> {
        let n1 = self.cache.get(e).n1.clone();
        for f in n1 {
            let cf = self.colors[f];
            for a in self.free_colors(f, true) {
                if let Some(p) = self.try_move(vec![(f, a), (e, cf)], Schema::S2) {
                    return Some(p);
                }
            }
        }
        None
    }

    fn s4(&mut self, e: usize) -> Option<MoveProposal> {
        let n1 = self.cache.get(e).n1.clone();
        let ce = self.colors[e];
        for h in n1 {
            if let Some(p) = self.try_move(vec![(e, self.colors[h]), (h, ce)], Schema::S4) {
                return Some(p);
            }
        }
        None
    }

    fn s3(&mut self, e: usize) -> Option<MoveProposal> {
        let g = self.cache.graph();
        let (u, v) = g.endpoints(e);
        for (v0, v1) in [(u, v), (v, u)] {
            let mut path = vec![v0, v1];
            let mut edges = vec![e];
            if let Some(p) = self.s3_extend(&mut path, &mut edges) {
                return Some(p);
            }
        }
        None
    }

    fn s3_extend(&mut self, path: &mut Vec<usize>, edges: &mut Vec<usize>) -> Option<MoveProposal> {
        if self.paths >= MAX_PATHS {
            return None;
        }
        self.paths += 1;
        let g = self.cache.graph();
        let k = edges.len();
        let tip = path[k];
        let last = edges[k - 1];
        let previous = (k >= 2).then(|| edges[k - 2]);
        let m = crate::neighborhood::m_set_from(self.cache.get(last), tip, previous);
        let present = self.color_mask(&m);
        let missing: Vec<u32> = (1..=self.palette).filter(|&a| !present[a as usize]).collect();
        if !missing.is_empty() {
            for a in missing {
                let mut assigns: Vec<(usize, u32)> = (0..k - 1).map(|i| (edges[i], self.colors[edges[i + 1]])).collect();
                assigns.push((last, a));
                if let Some(p) = self.try_move(assigns, Schema::S3) {
                    return Some(p);
                }
            }
            return None;
        }
        if k >= MAX_PATH_EDGES {
            return None;
        }
        let next: Vec<(usize, usize)> = g
            .adjacency(tip)
            .iter()
            .copied()
            .filter(|&(w, _)| !path.contains(&w) && path[..k].iter().all(|&p| !g.has_edge(p, w)))
            .collect();
        for (w, f) in next {
            path.push(w);
            edges.push(f);
            let found = self.s3_extend(path, edges);
            path.pop();
            edges.pop();
            if found.is_some() {
                return found;
            }
            if self.paths >= MAX_PATHS {
                return None;
            }
        }
        None
    }

    /// Same-colored 2-neighbors of `e` on the side of endpoint `w`.
    fn same_colored_on_side(&self, e: usize, w: usize) -> Vec<usize> {
        let c = self.colors[e];
        let (_, far) = self.cache.get(e).side(w);
        far.iter().copied().filter(|&f| self.colors[f] == c).collect()
    }

    /// Edges `w w1` (w1 ≠ other) whose far end touches `target`.
    fn links_to(&self, w: usize, other: usize, target: usize) -> Vec<usize> {
        let g = self.cache.graph();
        let (x, y) = g.endpoints(target);
        g.adjacency(w)
            .iter()
            .filter(|&&(w1, _)| w1 != other && (w1 == x || w1 == y))
            .map(|&(_, f)| f)
            .collect()
    }

    fn s5(&mut self, e: usize) -> Option<MoveProposal> {
        let g = self.cache.graph();
        let (u, v) = g.endpoints(e);
        let f_set = self.cache.get(e).f_set.clone();
        for e1 in self.same_colored_on_side(e, u) {
            for e2 in self.same_colored_on_side(e, v) {
                for f1 in self.links_to(u, v, e1) {
                    for f2 in self.links_to(v, u, e2) {
                        let (a1, a2) = (self.colors[f1], self.colors[f2]);
                        for a in 1..=self.palette {
                            if a == a1 || a == a2 {
                                continue;
                            }
                            let holders: Vec<usize> = f_set.iter().copied().filter(|&x| self.colors[x] == a).collect();
                            let [gg] = holders[..] else { continue };
                            if gg == f1 || gg == f2 {
                                continue;
                            }
                            for (to_g, to_e) in [(a2, a1), (a1, a2)] {
                                let assigns = vec![(f1, a), (f2, a), (gg, to_g), (e, to_e)];
                                if let Some(p) = self.try_move(assigns, Schema::S5) {
                                    return Some(p);
                                }
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn s6(&mut self, e: usize) -> Option<MoveProposal> {
        let g = self.cache.graph();
        let (a, b) = g.endpoints(e);
        let around = self.cache.get(e).within_two();
        for (u, v) in [(a, b), (b, a)] {
            for &(u1, g1) in g.adjacency(u) {
                if u1 == v {
                    continue;
                }
                for &(v1, g2) in g.adjacency(v) {
                    if v1 == u || v1 == u1 || g.has_edge(u1, v1) {
                        continue;
                    }
                    let (b1, b2) = (self.colors[g1], self.colors[g2]);
                    for &(_, f2) in g.adjacency(v1) {
                        if f2 == g2 {
                            continue;
                        }
                        let a2 = self.colors[f2];
                        let case1 = vec![(g1, b2), (f2, b2), (g2, b1), (e, a2)];
                        if let Some(p) = self.try_move(case1, Schema::S6) {
                            return Some(p);
                        }
                        let far = self.cache.get(f2).n2.clone();
                        for q in far {
                            if q == e || around.binary_search(&q).is_ok() {
                                continue;
                            }
                            let case2 = vec![(g1, b2), (g2, b1), (e, a2), (q, a2), (f2, self.colors[q])];
                            if let Some(p) = self.try_move(case2, Schema::S6) {
                                return Some(p);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn s7(&mut self, e: usize) -> Option<MoveProposal> {
        let g = self.cache.graph();
        let (a, b) = g.endpoints(e);
        for (u, v) in [(a, b), (b, a)] {
            let nu: Vec<(usize, usize)> = g.adjacency(u).iter().copied().filter(|&(w, _)| w != v).collect();
            let nv: Vec<(usize, usize)> = g.adjacency(v).iter().copied().filter(|&(w, _)| w != u).collect();
            for &(up, uup) in &nu {
                for &(vp, vvp) in &nv {
                    if vp == up || g.has_edge(up, vp) {
                        continue;
                    }
                    for &(u1, uu1) in &nu {
                        if u1 == up {
                            continue;
                        }
                        for &(vpp, vvpp) in &nv {
                            if vpp == vp {
                                continue;
                            }
                            let c = |x: usize| self.colors[x];
                            let assigns =
                                vec![(e, c(uu1)), (uup, c(vvpp)), (vvp, c(vvpp)), (uu1, c(uup)), (vvpp, c(vvp))];
                            if let Some(p) = self.try_move(assigns, Schema::S7) {
                                return Some(p);
                            }
                        }
                    }
                }
            }
        }
        None
    }

    fn f1(&mut self) -> Option<MoveProposal> {
        for x in 0..self.colors.len() {
            for a in 1..=self.palette {
                if let Some(p) = self.try_move(vec![(x, a)], Schema::F1) {
                    return Some(p);
                }
            }
        }
        None
    }

    fn f2(&mut self, e: usize) -> Option<MoveProposal> {
        let mut region = self.cache.get(e).within_two();
        region.push(e);
        region.sort_unstable();
        for (i, &x) in region.iter().enumerate() {
            for &y in &region[i + 1..] {
                for a in 1..=self.palette {
                    if a == self.colors[x] {
                        continue;
                    }
                    for b in 1..=self.palette {
                        if b == self.colors[y] {
                            continue;
                        }
                        if let Some(p) = self.try_move(vec![(x, a), (y, b)], Schema::F2) {
                            return Some(p);
                        }
                    }
                }
            }
        }
        None
    }

    fn find(&mut self, skip: &[Schema], mut on_stage: impl FnMut(&Self, Schema)) -> Option<MoveProposal> {
        let bad = self.bad_edges();
        self.paths = 0;
        for schema in Schema::SEARCH_ORDER {
            if skip.contains(&schema) {
                continue;
            }
            on_stage(self, schema);
            if schema == Schema::F1 {
                if let Some(p) = self.f1() {
                    return Some(p);
                }
                continue;
            }
            for &e in &bad {
                let found = match schema {
                    Schema::S1 => self.s1(e),
                    Schema::S2 => self.s2(e),
                    Schema::S3 => self.s3(e),
                    Schema::S4 => self.s4(e),
                    Schema::S5 => self.s5(e),
                    Schema::S6 => self.s6(e),
                    Schema::S7 => self.s7(e),
                    Schema::F2 => self.f2(e),
                    Schema::F1 | Schema::F3 => None,
                };
                if found.is_some() {
                    return found;
                }
            }
        }
        None
    }

    /// Structural facts every bad edge must satisfy once single recolorings
    /// of it and of its 1-neighbors no longer help (`after_swap` adds the
    /// facts that also need color exchanges with 1-neighbors exhausted).
    fn invariant_findings(&self, after_swap: bool) -> Vec<String> {
        let mut out = Vec::new();
        let g = self.cache.graph();
        let full = self.delta * self.delta - 1;
        for e in self.bad_edges() {
            let nb = self.cache.get(e);
            let c = self.colors[e];
            let mut fail = |what: &str| out.push(format!("edge {e}: {what}"));
            if !after_swap {
                let same: Vec<usize> = nb.n2.iter().copied().filter(|&f| self.colors[f] == c).collect();
                if same.len() != 2 {
                    fail("expected exactly two same-colored 2-neighbors");
                }
                if same.iter().any(|&f| nb.type_of(f) != Some(TypeClass::T6)) {
                    fail("same-colored 2-neighbor outside T6");
                }
                let on_u = same.iter().filter(|&&f| nb.n2_u.binary_search(&f).is_ok()).count();
                let on_v = same.iter().filter(|&&f| nb.n2_v.binary_search(&f).is_ok()).count();
                if same.len() == 2 && (on_u != 1 || on_v != 1) {
                    fail("same-colored 2-neighbors not split across the endpoints");
                }
                if !nb.t6.len().is_multiple_of(2) {
                    fail("|T6| is odd");
                }
                if !nb.c_delta.is_empty() {
                    fail("edge lies on a triangle");
                }
                if nb.class_size(TypeClass::T5) != 0 {
                    fail("T5 is nonempty");
                }
                let f_mask = self.color_mask(&nb.f_set);
                if f_mask.iter().filter(|&&b| b).count() != nb.f_set.len() {
                    fail("F(e) is not rainbow");
                }
                let mut t6_count = vec![0usize; self.palette as usize + 1];
                for &f in &nb.t6 {
                    t6_count[self.colors[f] as usize] += 1;
                }
                if t6_count.iter().enumerate().any(|(a, &k)| k != 0 && (k != 2 || f_mask[a])) {
                    fail("T6 colors do not come in pairs disjoint from F(e)");
                }
                if g.neighbors(nb.u).chain(g.neighbors(nb.v)).any(|w| g.degree(w) != self.delta) {
                    fail("a vertex next to the edge has degree below Δ");
                }
            } else {
                for w in [nb.u, nb.v] {
                    let (_, far) = nb.side(w);
                    let mut set = nb.n1.clone();
                    set.extend_from_slice(far);
                    let distinct = self.color_mask(&set).iter().filter(|&&b| b).count();
                    if set.len() != full || distinct != full {
                        fail("N(e) ∪ N²_w(e) is not a rainbow set of Δ²−1 edges");
                    }
                }
                let t6_u = nb.t6.iter().filter(|&&f| nb.n2_u.binary_search(&f).is_ok()).count();
                if 2 * t6_u != nb.t6.len() {
                    fail("T6 is unbalanced across the endpoints");
                }
            }
        }
        out
    }

    fn exact_fallback(&mut self, config: &RepairConfig) -> Option<MoveProposal> {
        let constraints = Constraints::good_bad_free(self.cache);
        let budget = Budget { nodes: Some(config.fallback_nodes), wall: Some(Duration::from_millis(config.fallback_millis)) };
        let (outcome, _) = exact::run_search(&constraints, self.palette as usize, budget);
        let Feasibility::Found(c) = outcome else { return None };
        let assigns: Vec<(usize, u32)> =
            c.colors().iter().enumerate().filter(|&(x, &a)| self.colors[x] != a).map(|(x, &a)| (x, a)).collect();
        self.try_move(assigns, Schema::F3)
    }
}

fn check_input(g: &Graph, c: &Coloring) -> Result<(), RepairError> {
    if c.len() != g.edge_count() {
        return Err(RepairError::LengthMismatch { expected: g.edge_count(), got: c.len() });
    }
    Ok(())
}

/// First improving move from the schema catalog and the F1/F2 fallbacks.
pub fn find_improving_move(g: &Graph, c: &Coloring) -> Result<Option<MoveProposal>, RepairError> {
    check_input(g, c)?;
    let cache = NeighborhoodCache::new(g);
    if !is_good_with(&cache, c.colors()) {
        return Err(RepairError::NotGood);
    }
    let mut engine = Engine::new(&cache, c.colors().to_vec(), c.palette());
    if engine.kappa.0 == 0 {
        return Err(RepairError::NoBadEdge);
    }
    Ok(engine.find(&[], |_, _| {}))
}

/// Repair with default configuration.
pub fn repair(g: &Graph, c: &Coloring) -> Result<Coloring, RepairError> {
    repair_with(g, c, &RepairConfig::default()).map(|(c, _)| c)
}

fn check_qualifies(g: &Graph) -> Result<(), RepairError> {
    if !g.is_connected() {
        return Err(RepairError::Unsupported("graph is disconnected"));
    }
    if g.max_degree() < 3 {
        return Err(RepairError::Unsupported("maximum degree below 3"));
    }
    if g_family_witness(g).is_some() {
        return Err(RepairError::Unsupported("graph belongs to the regular family"));
    }
    Ok(())
}

/// Apply improving moves until no bad edge remains.
pub fn repair_with(g: &Graph, c: &Coloring, config: &RepairConfig) -> Result<(Coloring, RepairStats), RepairError> {
    check_input(g, c)?;
    check_qualifies(g)?;
    let cache = NeighborhoodCache::new(g);
    repair_cached(&cache, c.colors().to_vec(), c.palette(), config).map(|(colors, stats)| {
        (Coloring::new(colors, c.palette()).expect("moves stay inside the palette"), stats)
    })
}

fn repair_cached(
    cache: &NeighborhoodCache<'_>,
    colors: Vec<u32>,
    palette: u32,
    config: &RepairConfig,
) -> Result<(Vec<u32>, RepairStats), RepairError> {
    if !is_good_with(cache, &colors) {
        return Err(RepairError::NotGood);
    }
    let mut engine = Engine::new(cache, colors, palette);
    let mut stats = RepairStats { trajectory: vec![engine.kappa], ..RepairStats::default() };
    while engine.kappa.0 > 0 {
        let mut findings = Vec::new();
        let checking = engine.check_invariants && config.skip.is_empty();
        let proposal = engine.find(&config.skip, |eng, stage| {
            if !checking {
                return;
            }
            match stage {
                Schema::S4 => findings.extend(eng.invariant_findings(false)),
                Schema::S3 => findings.extend(eng.invariant_findings(true)),
                _ => {}
            }
        });
        if !findings.is_empty() {
            if config.strict {
                return Err(RepairError::Invariant(findings.join("; ")));
            }
            stats.invariant_violations.extend(findings);
        }
        let proposal = match proposal {
            Some(p) => p,
            None => {
                stats.fallbacks += 1;
                engine.exact_fallback(config).ok_or(RepairError::Stuck { kappa1: engine.kappa.0 })?
            }
        };
        engine.commit(&proposal.assignments, proposal.predicted_potential);
        *stats.moves.entry(proposal.schema).or_default() += 1;
        stats.trajectory.push(engine.kappa);
        if config.audit {
            stats.audited_moves += 1;
            let full = badness_with(cache, &engine.colors);
            if (full.kappa1, full.kappa2) != engine.kappa || !is_good_with(cache, &engine.colors) {
                stats.audit_failures += 1;
                engine.recompute();
            }
        }
    }
    Ok((engine.colors, stats))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Semistrong,
    Relaxed01,
}

impl SolveMode {
    pub fn name(&self) -> &'static str {
        match self {
            SolveMode::Semistrong => "semistrong",
            SolveMode::Relaxed01 => "relaxed01",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Trivial,
    Delta2,
    Kdd,
    GFamily,
    GreedyRepair,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Trivial => "trivial",
            Strategy::Delta2 => "delta2",
            Strategy::Kdd => "kdd",
            Strategy::GFamily => "g_family",
            Strategy::GreedyRepair => "greedy_repair",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentTrace {
    /// Smallest vertex of the component.
    pub root: usize,
    pub vertices: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub strategy: Strategy,
    pub colors_used: usize,
    /// Colors used exceed max(3, Δ²−1) for the component Δ.
    pub exceeds_bound: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub repair: Option<RepairStats>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificates {
    pub semistrong: bool,
    pub relaxed01: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub coloring: Coloring,
    pub colors_used: usize,
    pub mode: SolveMode,
    pub trace: Vec<ComponentTrace>,
    pub certificates: Certificates,
}

impl SolveResult {
    /// Whether the coloring passes the verifier of its mode.
    pub fn valid(&self) -> bool {
        match self.mode {
            SolveMode::Semistrong => self.certificates.semistrong,
            SolveMode::Relaxed01 => self.certificates.relaxed01,
        }
    }

    pub fn total_fallbacks(&self) -> usize {
        self.trace.iter().filter_map(|t| t.repair.as_ref()).map(|r| r.fallbacks).sum()
    }
}

/// Walk of a connected graph with Δ = 2: edges in path order from the
/// smallest end vertex, or in cycle order from the smallest vertex towards
/// its smaller neighbor. The flag is true for cycles.
fn delta2_walk(g: &Graph) -> (Vec<usize>, bool) {
    let n = g.vertex_count();
    let is_cycle = (0..n).all(|x| g.degree(x) == 2);
    let start = if is_cycle { 0 } else { (0..n).find(|&x| g.degree(x) == 1).expect("paths have an end") };
    let mut order = Vec::with_capacity(g.edge_count());
    let (mut prev_edge, mut x) = (usize::MAX, start);
    while order.len() < g.edge_count() {
        let &(y, e) = g.adjacency(x).iter().find(|&&(_, e)| e != prev_edge).expect("walk continues");
        order.push(e);
        prev_edge = e;
        x = y;
    }
    (order, is_cycle)
}

fn color_component(
    sub: &Graph,
    mode: SolveMode,
    config: &RepairConfig,
) -> Result<(Vec<u32>, Strategy, Option<RepairStats>), RepairError> {
    let d = sub.max_degree();
    let m = sub.edge_count();
    if d <= 1 {
        return Ok((vec![1; m], Strategy::Trivial, None));
    }
    if d == 2 {
        let (order, is_cycle) = delta2_walk(sub);
        let seq = match (is_cycle, mode) {
            (false, _) => construct::color_path(m + 1),
            (true, SolveMode::Semistrong) => construct::color_cycle(m),
            (true, SolveMode::Relaxed01) => construct::color_cycle_relaxed(m),
        }
        .expect("Δ = 2 components have valid sizes");
        let mut colors = vec![0; m];
        for (i, &e) in order.iter().enumerate() {
            colors[e] = seq.color(i);
        }
        return Ok((colors, Strategy::Delta2, None));
    }
    if is_complete_bipartite_dd(sub, d).unwrap_or(false) {
        let side = bipartition(sub).expect("K_{d,d} is bipartite");
        let first = side[0];
        let a: Vec<usize> = (0..sub.vertex_count()).filter(|&x| side[x] == first).collect();
        let b: Vec<usize> = (0..sub.vertex_count()).filter(|&x| side[x] != first).collect();
        let seq = match mode {
            SolveMode::Semistrong => construct::color_kdd_semistrong(d),
            SolveMode::Relaxed01 => construct::color_kdd_relaxed(d),
        }
        .expect("d >= 1");
        let mut colors = vec![0; m];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                colors[sub.edge_between(x, y).expect("complete bipartite")] = seq.color(i * d + j);
            }
        }
        return Ok((colors, Strategy::Kdd, None));
    }
    if let Some(w) = g_family_witness(sub) {
        let c = construct::color_g_family(sub, w).expect("witnessed family member other than K_{d,d}");
        return Ok((c.colors().to_vec(), Strategy::GFamily, None));
    }
    let palette = (d * d - 1) as u32;
    let cache = NeighborhoodCache::new(sub);
    let colors = greedy_with(&cache, palette)?;
    let (colors, stats) = repair_cached(&cache, colors, palette, config)?;
    Ok((colors, Strategy::GreedyRepair, Some(stats)))
}

/// Solve with default repair configuration.
pub fn solve(g: &Graph, mode: SolveMode) -> Result<SolveResult, RepairError> {
    solve_with(g, mode, &RepairConfig::default())
}

/// Color each component with its dedicated strategy; components share colors.
/// Errors arise only from a failed repair fallback or, in strict mode, a
/// violated bad-edge invariant.
pub fn solve_with(g: &Graph, mode: SolveMode, config: &RepairConfig) -> Result<SolveResult, RepairError> {
    let mut colors = vec![0u32; g.edge_count()];
    let mut trace = Vec::new();
    for view in connected_components(g) {
        let sub = view.subgraph();
        let (local, strategy, repair) = color_component(&sub, mode, config)?;
        for (i, &c) in local.iter().enumerate() {
            colors[view.edge_map[i]] = c;
        }
        let used = {
            let mut seen: Vec<u32> = local.clone();
            seen.sort_unstable();
            seen.dedup();
            seen.len()
        };
        let d = sub.max_degree();
        trace.push(ComponentTrace {
            root: view.vertex_map[0],
            vertices: sub.vertex_count(),
            edges: sub.edge_count(),
            max_degree: d,
            strategy,
            colors_used: used,
            exceeds_bound: used > (d * d).saturating_sub(1).max(3),
            repair,
        });
    }
    let coloring = if colors.is_empty() {
        Coloring::new(Vec::new(), 0).expect("empty coloring")
    } else {
        Coloring::from_colors(colors).expect("every edge colored")
    };
    let certificates = Certificates {
        semistrong: verify_semistrong(g, &coloring).valid,
        relaxed01: verify_relaxed(g, &coloring, 0, 1).valid,
    };
    Ok(SolveResult { colors_used: coloring.colors_used(), coloring, mode, trace, certificates })
}
