//! Checkers for strong, semistrong and (s,t)-relaxed edge colorings, plus
//! the bad-edge / bad-pair accounting used by the repair engine.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;
use crate::neighborhood::{compute_neighborhood, NeighborhoodCache};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("edge {edge} has color {color}, outside 1..={palette}")]
    ColorOutOfRange { edge: usize, color: u32, palette: u32 },
    #[error("coloring has {got} entries, graph has {expected} edges")]
    LengthMismatch { expected: usize, got: usize },
}

/// Total assignment of colors `1..=palette` to edge indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<u32>,
    palette: u32,
}

impl Coloring {
    pub fn new(colors: Vec<u32>, palette: u32) -> Result<Self, ColoringError> {
        for (edge, &color) in colors.iter().enumerate() {
            if color == 0 || color > palette {
                return Err(ColoringError::ColorOutOfRange { edge, color, palette });
            }
        }
        Ok(Coloring { colors, palette })
    }

    /// Palette is the largest color present.
    pub fn from_colors(colors: Vec<u32>) -> Result<Self, ColoringError> {
        let palette = colors.iter().copied().max().unwrap_or(0);
        Coloring::new(colors, palette)
    }

    pub fn rainbow(m: usize) -> Self {
        Coloring { colors: (1..=m as u32).collect(), palette: m as u32 }
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn color(&self, e: usize) -> u32 {
        self.colors[e]
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn colors_used(&self) -> usize {
        let mut seen: Vec<u32> = self.colors.clone();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    pub fn check_against(&self, g: &Graph) -> Result<(), ColoringError> {
        if self.colors.len() != g.edge_count() {
            return Err(ColoringError::LengthMismatch { expected: g.edge_count(), got: self.colors.len() });
        }
        Ok(())
    }
}

/// First failing `(color, edge)` in lexicographic order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub color: u32,
    pub edge: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub valid: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn from_witness(witness: Option<Witness>) -> Self {
        Verdict { valid: witness.is_none(), witness }
    }
}

fn vertex_set(g: &Graph, m: &[usize]) -> Vec<bool> {
    let mut in_set = vec![false; g.vertex_count()];
    for &e in m {
        let (u, v) = g.endpoints(e);
        in_set[u] = true;
        in_set[v] = true;
    }
    in_set
}

fn induced_degree(g: &Graph, in_set: &[bool], x: usize) -> usize {
    g.neighbors(x).filter(|&w| in_set[w]).count()
}

fn dedup_sorted(m: &[usize]) -> Vec<usize> {
    let mut m = m.to_vec();
    m.sort_unstable();
    m.dedup();
    m
}

/// Edges of `m` that share an endpoint with another edge of `m`, ascending.
fn non_matching_edges(g: &Graph, m: &[usize]) -> Vec<usize> {
    let mut count = vec![0u32; g.vertex_count()];
    for &e in m {
        let (u, v) = g.endpoints(e);
        count[u] += 1;
        count[v] += 1;
    }
    m.iter()
        .copied()
        .filter(|&e| {
            let (u, v) = g.endpoints(e);
            count[u] > 1 || count[v] > 1
        })
        .collect()
}

/// Smallest edge of `m` violating the semistrong condition.
fn semistrong_violation(g: &Graph, m: &[usize]) -> Option<usize> {
    let m = dedup_sorted(m);
    let clash = non_matching_edges(g, &m);
    let in_set = vertex_set(g, &m);
    m.iter().copied().find(|&e| {
        if clash.binary_search(&e).is_ok() {
            return true;
        }
        let (u, v) = g.endpoints(e);
        induced_degree(g, &in_set, u) != 1 && induced_degree(g, &in_set, v) != 1
    })
}

fn induced_violation(g: &Graph, m: &[usize]) -> Option<usize> {
    let m = dedup_sorted(m);
    let clash = non_matching_edges(g, &m);
    let in_set = vertex_set(g, &m);
    m.iter().copied().find(|&e| {
        if clash.binary_search(&e).is_ok() {
            return true;
        }
        let (u, v) = g.endpoints(e);
        induced_degree(g, &in_set, u) != 1 || induced_degree(g, &in_set, v) != 1
    })
}

/// A matching in which every edge has an endpoint of degree 1 in G[V(M)].
pub fn is_semistrong_matching(g: &Graph, m: &[usize]) -> bool {
    semistrong_violation(g, m).is_none()
}

/// A matching in which every vertex of G[V(M)] has degree 1.
pub fn is_induced_matching(g: &Graph, m: &[usize]) -> bool {
    induced_violation(g, m).is_none()
}

fn color_classes(c: &Coloring) -> BTreeMap<u32, Vec<usize>> {
    let mut classes: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (e, &color) in c.colors().iter().enumerate() {
        classes.entry(color).or_default().push(e);
    }
    classes
}

fn verify_classes(c: &Coloring, check: impl Fn(&[usize]) -> Option<usize>) -> Verdict {
    let witness = color_classes(c)
        .into_iter()
        .find_map(|(color, class)| check(&class).map(|edge| Witness { color, edge }));
    Verdict::from_witness(witness)
}

pub fn verify_semistrong(g: &Graph, c: &Coloring) -> Verdict {
    verify_classes(c, |class| semistrong_violation(g, class))
}

pub fn verify_strong(g: &Graph, c: &Coloring) -> Verdict {
    verify_classes(c, |class| induced_violation(g, class))
}

/// Every edge has at most `s` same-colored 1-neighbors and at most `t`
/// same-colored 2-neighbors.
pub fn verify_relaxed(g: &Graph, c: &Coloring, s: usize, t: usize) -> Verdict {
    let mut failures: Vec<Witness> = Vec::new();
    for e in 0..g.edge_count() {
        let nb = compute_neighborhood(g, e).expect("edge in range");
        let color = c.color(e);
        let near = nb.n1.iter().filter(|&&f| c.color(f) == color).count();
        let far = nb.n2.iter().filter(|&&f| c.color(f) == color).count();
        if near > s || far > t {
            failures.push(Witness { color, edge: e });
        }
    }
    Verdict::from_witness(failures.into_iter().min_by_key(|w| (w.color, w.edge)))
}

/// Every edge's color is absent from the colors of its F-set.
pub fn is_good_coloring(g: &Graph, c: &Coloring) -> bool {
    let cache = NeighborhoodCache::new(g);
    is_good_with(&cache, c.colors())
}

pub(crate) fn is_good_with(cache: &NeighborhoodCache<'_>, colors: &[u32]) -> bool {
    (0..colors.len()).all(|e| cache.get(e).f_set.iter().all(|&f| colors[f] != colors[e]))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct BadnessReport {
    pub kappa1: usize,
    pub kappa2: usize,
    pub per_color_kappa1: BTreeMap<u32, usize>,
    pub per_color_kappa2: BTreeMap<u32, usize>,
    pub bad_edges: Vec<usize>,
    pub bad_pairs: Vec<(usize, usize)>,
}

/// Bad edges have at least two same-colored 2-neighbors; bad pairs are
/// same-colored 2-neighbor pairs. Defined for any coloring.
pub fn badness(g: &Graph, c: &Coloring) -> BadnessReport {
    let cache = NeighborhoodCache::new(g);
    badness_with(&cache, c.colors())
}

pub(crate) fn badness_with(cache: &NeighborhoodCache<'_>, colors: &[u32]) -> BadnessReport {
    let mut report = BadnessReport::default();
    for e in 0..colors.len() {
        let color = colors[e];
        let same: Vec<usize> = cache.get(e).n2.iter().copied().filter(|&f| colors[f] == color).collect();
        if same.len() >= 2 {
            report.bad_edges.push(e);
            *report.per_color_kappa1.entry(color).or_default() += 1;
        }
        for f in same.into_iter().filter(|&f| f > e) {
            report.bad_pairs.push((e, f));
            *report.per_color_kappa2.entry(color).or_default() += 1;
        }
    }
    report.kappa1 = report.bad_edges.len();
    report.kappa2 = report.bad_pairs.len();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    fn cycle(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        build_graph(n, &pairs).unwrap()
    }

    fn path(n: usize) -> Graph {
        let pairs: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        build_graph(n, &pairs).unwrap()
    }

    fn col(v: &[u32]) -> Coloring {
        Coloring::from_colors(v.to_vec()).unwrap()
    }

    #[test]
    fn coloring_range_checked() {
        assert!(Coloring::new(vec![1, 0], 2).is_err());
        assert!(Coloring::new(vec![1, 3], 2).is_err());
        assert_eq!(col(&[2, 2, 5]).colors_used(), 2);
    }

    #[test]
    fn matchings() {
        let c4 = cycle(4);
        assert!(is_semistrong_matching(&c4, &[0]));
        assert!(!is_semistrong_matching(&c4, &[0, 2]));
        assert!(!is_semistrong_matching(&c4, &[0, 1]));
        let p4 = path(4);
        assert!(is_semistrong_matching(&p4, &[0, 2]));
        assert!(!is_induced_matching(&p4, &[0, 2]));
        assert!(is_induced_matching(&p4, &[0]));
        let c6 = cycle(6);
        assert!(is_induced_matching(&c6, &[0, 3]));
    }

    #[test]
    fn c7_with_patched_pattern_is_not_semistrong() {
        // Paper colors (1,2,0,2,1,0,2) with 0 written as 3.
        let g = cycle(7);
        let c = col(&[1, 2, 3, 2, 1, 3, 2]);
        let verdict = verify_semistrong(&g, &c);
        assert!(!verdict.valid);
        // Class {e2,e4,e7} = indices {1,3,6}; e7 = v7v1 is squeezed by e2 and...
        let w = verdict.witness.unwrap();
        assert_eq!(w.color, 2);
        assert!([1, 3, 6].contains(&w.edge));
    }

    #[test]
    fn rainbow_passes_everything() {
        let g = cycle(5);
        let c = Coloring::rainbow(5);
        assert!(verify_semistrong(&g, &c).valid);
        assert!(verify_strong(&g, &c).valid);
        assert!(verify_relaxed(&g, &c, 0, 0).valid);
        assert!(is_good_coloring(&g, &c));
        let r = badness(&g, &c);
        assert_eq!((r.kappa1, r.kappa2), (0, 0));
    }

    #[test]
    fn c5_strong_needs_five() {
        let g = cycle(5);
        assert!(verify_strong(&g, &Coloring::rainbow(5)).valid);
        assert!(!verify_strong(&g, &col(&[1, 2, 3, 4, 1])).valid);
    }

    #[test]
    fn c4_alternating() {
        let g = cycle(4);
        let c = col(&[1, 2, 1, 2]);
        assert!(verify_relaxed(&g, &c, 0, 1).valid);
        let v = verify_relaxed(&g, &c, 0, 0);
        assert_eq!(v.witness, Some(Witness { color: 1, edge: 0 }));
        assert!(!is_good_coloring(&g, &c));
    }

    #[test]
    fn badness_on_c7() {
        let g = cycle(7);
        let r = badness(&g, &col(&[1, 2, 3, 1, 2, 3, 4]));
        assert_eq!((r.kappa1, r.kappa2), (0, 0));
        let r = badness(&g, &col(&[1, 2, 3, 2, 1, 3, 2]));
        // e2 (index 1) has same-colored 2-neighbors e4 (index 3) and e7 (index 6).
        assert!(r.bad_edges.contains(&1));
        assert!(r.kappa1 >= 1);
        assert_eq!(r.per_color_kappa1.values().sum::<usize>(), r.kappa1);
        assert_eq!(r.per_color_kappa2.values().sum::<usize>(), r.kappa2);
    }
}
