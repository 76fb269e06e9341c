#![allow(dead_code)]

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use semistrong_core::families;
use semistrong_core::graph::{connected_components, g_family_witness};
use semistrong_core::neighborhood::{observation_bound, NeighborhoodCache, TypeClass};
use semistrong_core::{Coloring, Graph};

/// Seeded corpus of random graphs with n ≤ 14 and Δ ≤ 5.
pub fn random_corpus(count: u64) -> Vec<Graph> {
    (0..count)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
            let n = rng.gen_range(2..=14);
            let d = rng.gen_range(1..=5);
            families::random_max_degree(n, d, seed).unwrap()
        })
        .collect()
}

/// Good coloring built in a random edge order with random free colors.
pub fn random_good(g: &Graph, palette: u32, rng: &mut ChaCha8Rng) -> Option<Coloring> {
    let cache = NeighborhoodCache::new(g);
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.shuffle(rng);
    let mut colors = vec![0u32; g.edge_count()];
    for e in order {
        let used: Vec<u32> = cache.get(e).f_set.iter().map(|&f| colors[f]).collect();
        let free: Vec<u32> = (1..=palette).filter(|c| !used.contains(c)).collect();
        colors[e] = *free.choose(rng)?;
    }
    Some(Coloring::new(colors, palette).unwrap())
}

fn sorted_union(parts: &[&[usize]]) -> Vec<usize> {
    let mut out: Vec<usize> = parts.iter().flat_map(|p| p.iter().copied()).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Every structural property of the per-edge neighborhoods, reported as
/// human-readable violations.
pub fn structural_violations(g: &Graph) -> Vec<String> {
    let mut out = Vec::new();
    let cache = NeighborhoodCache::new(g);
    let delta = g.max_degree();
    let degree_sum: usize = (0..g.vertex_count()).map(|v| g.degree(v)).sum();
    if degree_sum != 2 * g.edge_count() {
        out.push("degree sum".into());
    }
    for e in 0..g.edge_count() {
        let nb = cache.get(e);
        let classes: Vec<Vec<usize>> = TypeClass::ALL.iter().map(|&t| nb.class(t)).collect();
        let total: usize = classes.iter().map(Vec::len).sum();
        let refs: Vec<&[usize]> = classes.iter().map(Vec::as_slice).collect();
        if total != nb.n2.len() || sorted_union(&refs) != nb.n2 {
            out.push(format!("edge {e}: type classes do not partition N²(e)"));
        }
        if nb.n1.iter().any(|f| nb.n2.binary_search(f).is_ok()) {
            out.push(format!("edge {e}: N(e) meets N²(e)"));
        }
        let f_expected = sorted_union(&[&nb.n1, &classes[0], &classes[1], &classes[2], &classes[3], &classes[4]]);
        if f_expected != nb.f_set {
            out.push(format!("edge {e}: F(e) is not N(e) ∪ T1..T5"));
        }
        let both: Vec<usize> = nb.n2_u.iter().copied().filter(|f| nb.n2_v.binary_search(f).is_ok()).collect();
        if both != sorted_union(&[&classes[0], &classes[1], &classes[2], &classes[3]]) {
            out.push(format!("edge {e}: N²_u ∩ N²_v differs from T1 ∪ T2 ∪ T3 ∪ T4"));
        }
        let (u, v) = g.endpoints(e);
        let lhs: usize = g
            .neighbors(u)
            .filter(|&w| w != v)
            .chain(g.neighbors(v).filter(|&w| w != u))
            .map(|w| g.degree(w) - 1)
            .sum();
        let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
        let rhs = nb.c_delta.len() + 4 * sizes[0] + 3 * sizes[1] + 2 * (sizes[2] + sizes[3] + sizes[4]) + sizes[5];
        if lhs != rhs {
            out.push(format!("edge {e}: counting identity {lhs} != {rhs}"));
        }
        if delta >= 1 {
            let bound = observation_bound(nb, delta);
            if num_rational::Rational64::from_integer(nb.f_set.len() as i64) > bound {
                out.push(format!("edge {e}: |F(e)| = {} exceeds {bound}", nb.f_set.len()));
            }
        }
        for &f in &nb.n2 {
            let other = cache.get(f);
            if nb.in_f(f) != other.in_f(e) || (nb.type_of(f) == Some(TypeClass::T6)) != (other.type_of(e) == Some(TypeClass::T6)) {
                out.push(format!("edges {e},{f}: F/T6 membership is not symmetric"));
            }
        }
        if nb.c_delta.is_empty() && sizes[..3].iter().any(|&s| s > 0) {
            out.push(format!("edge {e}: no triangle but T1 ∪ T2 ∪ T3 nonempty"));
        }
    }
    for view in connected_components(g) {
        let sub = view.subgraph();
        let d = sub.max_degree();
        if d == 0 {
            continue;
        }
        let sub_cache = NeighborhoodCache::new(&sub);
        let tight = (0..sub.edge_count()).any(|e| sub_cache.get(e).f_set.len() == d * d - 1);
        if tight != g_family_witness(&sub).is_some() {
            out.push(format!("component at {}: tight F(e) disagrees with family membership", view.vertex_map[0]));
        }
    }
    out
}
