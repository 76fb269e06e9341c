//! Deterministic generators for named graphs and seeded random instances.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("parameter {name} = {value} out of range ({expected})")]
    OutOfRange { name: &'static str, value: usize, expected: &'static str },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
}

fn require(name: &'static str, value: usize, min: usize, expected: &'static str) -> Result<(), FamilyError> {
    if value < min {
        Err(FamilyError::OutOfRange { name, value, expected })
    } else {
        Ok(())
    }
}

fn graph(n: usize, pairs: &[(usize, usize)]) -> Graph {
    Graph::new(n, pairs).expect("generators emit simple graphs")
}

/// Path on `n` vertices, edges `(i, i+1)`.
pub fn path(n: usize) -> Result<Graph, FamilyError> {
    require("n", n, 1, "n >= 1")?;
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Ok(graph(n, &pairs))
}

/// Cycle on `n` vertices, edges `(i, i+1)` then the closing edge `(n-1, 0)`.
pub fn cycle(n: usize) -> Result<Graph, FamilyError> {
    require("n", n, 3, "n >= 3")?;
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Ok(graph(n, &pairs))
}

/// K_{a,b}: side A is `0..a`, side B is `a..a+b`; edge `i*b + j` joins `i` and `a+j`.
pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph, FamilyError> {
    require("a", a, 1, "a >= 1")?;
    require("b", b, 1, "b >= 1")?;
    let mut pairs = Vec::with_capacity(a * b);
    for i in 0..a {
        for j in 0..b {
            pairs.push((i, a + j));
        }
    }
    Ok(graph(a + b, &pairs))
}

/// C_n × K_2: outer cycle, inner cycle, then spokes `(i, n+i)`.
pub fn prism(n: usize) -> Result<Graph, FamilyError> {
    require("n", n, 3, "n >= 3")?;
    let mut pairs = Vec::with_capacity(3 * n);
    pairs.extend((0..n).map(|i| (i, (i + 1) % n)));
    pairs.extend((0..n).map(|i| (n + i, n + (i + 1) % n)));
    pairs.extend((0..n).map(|i| (i, n + i)));
    Ok(graph(2 * n, &pairs))
}

pub fn hypercube(dim: usize) -> Result<Graph, FamilyError> {
    require("n", dim, 1, "n >= 1")?;
    if dim > 20 {
        return Err(FamilyError::OutOfRange { name: "n", value: dim, expected: "n <= 20" });
    }
    let n = 1usize << dim;
    let mut pairs = Vec::new();
    for x in 0..n {
        for bit in 0..dim {
            let y = x ^ (1 << bit);
            if x < y {
                pairs.push((x, y));
            }
        }
    }
    Ok(graph(n, &pairs))
}

/// Cycle of independent sets: part `i` is `i*s .. (i+1)*s`, and every vertex
/// of part `i` is joined to every vertex of part `i+1 (mod len)`.
pub fn blowup(cycle_len: usize, part_size: usize) -> Result<Graph, FamilyError> {
    require("cycle_len", cycle_len, 3, "cycle_len >= 3")?;
    require("part_size", part_size, 1, "part_size >= 1")?;
    let mut pairs = Vec::new();
    for i in 0..cycle_len {
        let next = (i + 1) % cycle_len;
        for a in 0..part_size {
            for b in 0..part_size {
                pairs.push((i * part_size + a, next * part_size + b));
            }
        }
    }
    Ok(graph(cycle_len * part_size, &pairs))
}

/// 14 vertices, 28 edges, 4-regular.
pub fn c7_blowup() -> Graph {
    blowup(7, 2).expect("fixed parameters")
}

/// Two copies of K_{d-1,d} joined by one edge between degree-(d-1)
/// vertices. Copy `c` occupies `c*(2d-1) ..`; its small side comes first.
/// The bridge joins the first large-side vertex of each copy.
pub fn h_graph(d: usize) -> Result<Graph, FamilyError> {
    require("d", d, 2, "d >= 2")?;
    let copy = 2 * d - 1;
    let mut pairs = Vec::new();
    for c in 0..2 {
        let base = c * copy;
        for i in 0..d - 1 {
            for j in 0..d {
                pairs.push((base + i, base + d - 1 + j));
            }
        }
    }
    pairs.push((d - 1, copy + d - 1));
    Ok(graph(2 * copy, &pairs))
}

pub fn petersen() -> Graph {
    graph(
        10,
        &[
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
        ],
    )
}

/// Seeded random graph with maximum degree at most `max_degree`.
///
/// A target edge count is drawn uniformly from `0..=n*Δ/2`; candidate pairs
/// are shuffled and added in order whenever both endpoints still have room.
pub fn random_max_degree(n: usize, max_degree: usize, seed: u64) -> Result<Graph, FamilyError> {
    require("n", n, 1, "n >= 1")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cap = (n * max_degree / 2) as u64;
    let target = rng.gen_range(0..=cap) as usize;
    let mut candidates: Vec<(usize, usize)> = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            candidates.push((u, v));
        }
    }
    candidates.shuffle(&mut rng);
    let mut degree = vec![0usize; n];
    let mut pairs = Vec::with_capacity(target);
    for (u, v) in candidates {
        if pairs.len() >= target {
            break;
        }
        if degree[u] < max_degree && degree[v] < max_degree {
            degree[u] += 1;
            degree[v] += 1;
            pairs.push((u, v));
        }
    }
    Ok(graph(n, &pairs))
}

/// Parameters accepted by [`make`]; unused ones are ignored.
#[derive(Debug, Clone, Copy, Default)]
pub struct FamilyParams {
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub d: Option<usize>,
    pub seed: Option<u64>,
}

fn param(value: Option<usize>, name: &'static str) -> Result<usize, FamilyError> {
    value.ok_or(FamilyError::OutOfRange { name, value: 0, expected: "required" })
}

/// Generate a family member by name.
///
/// `complete_bipartite` takes sides `n` and `m` (default `m = n`); `blowup`
/// takes cycle length `n` and part size `d`; `random` takes `n`, `d` = Δ
/// and `seed`.
pub fn make(family: &str, p: FamilyParams) -> Result<Graph, FamilyError> {
    match family {
        "path" => path(param(p.n, "n")?),
        "cycle" => cycle(param(p.n, "n")?),
        "complete_bipartite" => {
            let a = param(p.n, "n")?;
            complete_bipartite(a, p.m.unwrap_or(a))
        }
        "prism" => prism(param(p.n, "n")?),
        "hypercube" => hypercube(param(p.n, "n")?),
        "c7_blowup" => Ok(c7_blowup()),
        "h_graph" => h_graph(param(p.d, "d")?),
        "blowup" => blowup(param(p.n, "n")?, param(p.d, "d")?),
        "petersen" => Ok(petersen()),
        "random" => random_max_degree(param(p.n, "n")?, param(p.d, "d")?, p.seed.unwrap_or(0)),
        other => Err(FamilyError::UnknownFamily(other.to_string())),
    }
}

// Small-graph enumeration. Graphs on at most 10 vertices are packed into a
// bitmask over vertex pairs (i < j), pair index j*(j-1)/2 + i.

fn pair_bit(i: usize, j: usize) -> u64 {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    1u64 << (j * (j - 1) / 2 + i)
}

fn adjacent(code: u64, i: usize, j: usize) -> bool {
    i != j && code & pair_bit(i, j) != 0
}

fn relabel(code: u64, n: usize, perm: &[usize]) -> u64 {
    let mut out = 0;
    for j in 1..n {
        for i in 0..j {
            if adjacent(code, i, j) {
                out |= pair_bit(perm[i], perm[j]);
            }
        }
    }
    out
}

/// Ordered partition of vertices refined by iterated neighbor-cell counts.
fn refined_cells(code: u64, n: usize) -> Vec<Vec<usize>> {
    let mut cell_of = vec![0usize; n];
    loop {
        let signature: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut counts = vec![0usize; n];
                for w in 0..n {
                    if adjacent(code, v, w) {
                        counts[cell_of[w]] += 1;
                    }
                }
                (cell_of[v], counts)
            })
            .collect();
        let distinct: BTreeSet<&(usize, Vec<usize>)> = signature.iter().collect();
        let ranks: Vec<&(usize, Vec<usize>)> = distinct.into_iter().collect();
        let next: Vec<usize> = signature.iter().map(|s| ranks.binary_search(&s).unwrap()).collect();
        let stable = ranks.len() == cell_of.iter().collect::<BTreeSet<_>>().len();
        cell_of = next;
        if stable {
            break;
        }
    }
    let cells = cell_of.iter().max().map_or(0, |&c| c + 1);
    let mut out = vec![Vec::new(); cells];
    for v in 0..n {
        out[cell_of[v]].push(v);
    }
    out
}

fn next_permutation(xs: &mut [usize]) -> bool {
    if xs.len() < 2 {
        return false;
    }
    let mut i = xs.len() - 1;
    while i > 0 && xs[i - 1] >= xs[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = xs.len() - 1;
    while xs[j] <= xs[i - 1] {
        j -= 1;
    }
    xs.swap(i - 1, j);
    xs[i..].reverse();
    true
}

/// Canonical code: maximum relabelled code over all labellings that respect
/// the ordered refined partition. Isomorphism-invariant because the
/// refinement is.
fn canonical_code(code: u64, n: usize) -> u64 {
    let cells = refined_cells(code, n);
    let mut orders: Vec<Vec<usize>> = cells.clone();
    let mut best = 0u64;
    loop {
        let mut perm = vec![0usize; n];
        let mut next = 0;
        for cell in &orders {
            for &v in cell {
                perm[v] = next;
                next += 1;
            }
        }
        best = best.max(relabel(code, n, &perm));
        // Odometer over per-cell permutations.
        let mut k = 0;
        loop {
            if k == orders.len() {
                return best;
            }
            if next_permutation(&mut orders[k]) {
                break;
            }
            orders[k] = cells[k].clone();
            k += 1;
        }
    }
}

fn code_to_graph(code: u64, n: usize) -> Graph {
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if adjacent(code, i, j) {
                pairs.push((i, j));
            }
        }
    }
    graph(n, &pairs)
}

/// One representative of every isomorphism class of graphs on `n` vertices
/// (`n <= 8`), ordered by canonical code.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>, FamilyError> {
    if n > 8 {
        return Err(FamilyError::OutOfRange { name: "n", value: n, expected: "n <= 8" });
    }
    let mut classes: BTreeSet<u64> = BTreeSet::from([0]);
    for size in 2..=n {
        let mut next = BTreeSet::new();
        for &code in &classes {
            for mask in 0u64..(1 << (size - 1)) {
                let mut extended = code;
                for i in 0..size - 1 {
                    if mask >> i & 1 == 1 {
                        extended |= pair_bit(i, size - 1);
                    }
                }
                next.insert(canonical_code(extended, size));
            }
        }
        classes = next;
    }
    if n == 0 {
        return Ok(vec![graph(0, &[])]);
    }
    Ok(classes.into_iter().map(|code| code_to_graph(code, n)).collect())
}

/// Connected isomorphism classes on `n` vertices.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>, FamilyError> {
    Ok(all_graphs(n)?.into_iter().filter(Graph::is_connected).collect())
}
