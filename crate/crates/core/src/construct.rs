//! Closed-form colorings for paths, cycles, K_{d,d} and the regular family
//! of Δ-regular graphs on 2Δ vertices.
//!
//! Path and cycle colorings are indexed along the walk `e_1 … e_m`, which
//! coincides with the edge order of [`crate::families::path`] and
//! [`crate::families::cycle`]. K_{d,d} colorings follow the edge order of
//! [`crate::families::complete_bipartite`].

use thiserror::Error;

use crate::graph::{g_family_witness, is_complete_bipartite_dd, Graph};
use crate::verifier::Coloring;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("parameter {name} = {value} out of range ({expected})")]
    OutOfRange { name: &'static str, value: usize, expected: &'static str },
    #[error("graph is isomorphic to K_{{d,d}}")]
    CompleteBipartite,
    #[error("edge {0} does not witness membership in the regular family")]
    NotInFamily(usize),
    #[error("graph is not connected")]
    Disconnected,
}

/// Residues mod 3 written on the 1-based palette: 1 → 1, 2 → 2, 0 → 3.
fn residue_color(i: usize) -> u32 {
    match i % 3 {
        0 => 3,
        r => r as u32,
    }
}

fn from_sequence(colors: Vec<u32>) -> Coloring {
    Coloring::from_colors(colors).expect("constructions emit colors >= 1")
}

/// φ(e_i) = i mod 3 along the path P_n.
pub fn color_path(n: usize) -> Result<Coloring, ConstructError> {
    if n < 2 {
        return Err(ConstructError::OutOfRange { name: "n", value: n, expected: "n >= 2" });
    }
    Ok(from_sequence((1..n).map(residue_color).collect()))
}

/// Semistrong-optimal coloring of C_n: 3 colors except C_4 (rainbow) and
/// C_7 (classes {e1,e4}, {e2,e5}, {e3,e6}, {e7}).
pub fn color_cycle(n: usize) -> Result<Coloring, ConstructError> {
    if n < 3 {
        return Err(ConstructError::OutOfRange { name: "n", value: n, expected: "n >= 3" });
    }
    let colors = match n {
        4 => vec![1, 2, 3, 4],
        7 => vec![1, 2, 3, 1, 2, 3, 4],
        _ if n % 3 == 1 => {
            let mut colors: Vec<u32> = (1..=n - 4).map(residue_color).collect();
            colors.extend([2, 1, 3, 2]);
            colors
        }
        _ => (1..=n).map(residue_color).collect(),
    };
    Ok(from_sequence(colors))
}

/// As [`color_cycle`], except C_4 gets the alternating 2-coloring, which is
/// (0,1)-relaxed but not semistrong.
pub fn color_cycle_relaxed(n: usize) -> Result<Coloring, ConstructError> {
    if n == 4 {
        return Ok(from_sequence(vec![1, 2, 1, 2]));
    }
    color_cycle(n)
}

/// Rainbow coloring of K_{d,d}.
pub fn color_kdd_semistrong(d: usize) -> Result<Coloring, ConstructError> {
    if d < 1 {
        return Err(ConstructError::OutOfRange { name: "d", value: d, expected: "d >= 1" });
    }
    Ok(Coloring::rainbow(d * d))
}

/// (0,1)-relaxed coloring of K_{d,d} with ⌈d²/2⌉ colors: `u_i v_j` and
/// `u_j v_i` share a color for i ≠ j, and the diagonal edges are paired
/// off consecutively.
pub fn color_kdd_relaxed(d: usize) -> Result<Coloring, ConstructError> {
    if d < 1 {
        return Err(ConstructError::OutOfRange { name: "d", value: d, expected: "d >= 1" });
    }
    let off_diagonal = (d * (d - 1) / 2) as u32;
    let mut colors = vec![0u32; d * d];
    let mut next = 1u32;
    for i in 0..d {
        for j in i + 1..d {
            colors[i * d + j] = next;
            colors[j * d + i] = next;
            next += 1;
        }
    }
    for i in 0..d {
        colors[i * d + i] = off_diagonal + (i / 2) as u32 + 1;
    }
    Ok(from_sequence(colors))
}

/// Coloring with Δ²−1 colors for a member of the regular family other than
/// K_{Δ,Δ}: pick u' ∈ N(u)∖{v}, v' ∈ N(v)∖{u} with u'v' ∉ E (the
/// lexicographically smallest such pair), give uu' and vv' color 1 and
/// every other edge its own color in edge-index order.
pub fn color_g_family(g: &Graph, witness: usize) -> Result<Coloring, ConstructError> {
    if !g.is_connected() {
        return Err(ConstructError::Disconnected);
    }
    let delta = g.max_degree();
    if is_complete_bipartite_dd(g, delta).unwrap_or(false) {
        return Err(ConstructError::CompleteBipartite);
    }
    if witness >= g.edge_count() || g_family_witness(g).is_none() {
        return Err(ConstructError::NotInFamily(witness));
    }
    let (u, v) = g.endpoints(witness);
    let mut covered = vec![false; g.vertex_count()];
    for w in g.neighbors(u).chain(g.neighbors(v)) {
        covered[w] = true;
    }
    if !covered.iter().all(|&c| c) {
        return Err(ConstructError::NotInFamily(witness));
    }
    let mut choice = None;
    'outer: for &(up, uu) in g.adjacency(u) {
        if up == v {
            continue;
        }
        for &(vp, vv) in g.adjacency(v) {
            if vp != u && vp != up && !g.has_edge(up, vp) {
                choice = Some((uu, vv));
                break 'outer;
            }
        }
    }
    let (uu, vv) = choice.ok_or(ConstructError::CompleteBipartite)?;
    let mut colors = vec![0u32; g.edge_count()];
    colors[uu] = 1;
    colors[vv] = 1;
    for (next, c) in (2..).zip(colors.iter_mut().filter(|c| **c == 0)) {
        *c = next;
    }
    Ok(from_sequence(colors))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;
    use crate::verifier::{verify_relaxed, verify_semistrong};

    #[test]
    fn path_patterns() {
        assert_eq!(color_path(2).unwrap().colors(), &[1]);
        assert_eq!(color_path(4).unwrap().colors(), &[1, 2, 3]);
        assert!(color_path(1).is_err());
        let c = color_path(30).unwrap();
        let g = families::path(30).unwrap();
        assert!(verify_semistrong(&g, &c).valid);
        assert!(c.colors_used() <= 3);
    }

    #[test]
    fn cycle_patterns() {
        assert_eq!(color_cycle(6).unwrap().colors(), &[1, 2, 3, 1, 2, 3]);
        assert_eq!(color_cycle(4).unwrap().colors_used(), 4);
        assert_eq!(color_cycle(7).unwrap().colors_used(), 4);
        // n = 10: residues for e1..e6, then 2,1,0,2.
        assert_eq!(color_cycle(10).unwrap().colors(), &[1, 2, 3, 1, 2, 3, 2, 1, 3, 2]);
        for n in [7, 10] {
            let g = families::cycle(n).unwrap();
            assert!(verify_semistrong(&g, &color_cycle(n).unwrap()).valid);
        }
        assert!(color_cycle(2).is_err());
        assert_eq!(color_cycle_relaxed(4).unwrap().colors_used(), 2);
    }

    #[test]
    fn kdd() {
        assert_eq!(color_kdd_semistrong(1).unwrap().colors_used(), 1);
        assert_eq!(color_kdd_semistrong(3).unwrap().colors_used(), 9);
        let c2 = color_kdd_relaxed(2).unwrap();
        // u1v1,u2v2 share one color; u1v2,u2v1 the other.
        assert_eq!(c2.colors(), &[2, 1, 1, 2]);
        assert_eq!(color_kdd_relaxed(3).unwrap().colors_used(), 5);
        let c4 = color_kdd_relaxed(4).unwrap();
        assert_eq!(c4.colors_used(), 8);
        assert!(verify_relaxed(&families::complete_bipartite(4, 4).unwrap(), &c4, 0, 1).valid);
        assert!(color_kdd_relaxed(0).is_err());
    }

    #[test]
    fn regular_family() {
        let prism = families::prism(3).unwrap();
        let w = g_family_witness(&prism).unwrap();
        let c = color_g_family(&prism, w).unwrap();
        assert_eq!(c.colors_used(), 8);
        assert!(verify_semistrong(&prism, &c).valid);
        assert!(verify_relaxed(&prism, &c, 0, 1).valid);

        let k33 = families::complete_bipartite(3, 3).unwrap();
        assert_eq!(color_g_family(&k33, 0), Err(ConstructError::CompleteBipartite));
        // A triangle edge of the prism is not a witness.
        assert_eq!(color_g_family(&prism, 0), Err(ConstructError::NotInFamily(0)));
        assert!(color_g_family(&families::petersen(), 0).is_err());
    }
}
