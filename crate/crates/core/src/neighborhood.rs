//! Distance-1 and distance-2 structure around an edge.
//!
//! For an edge `e = uv` and a 2-neighbor `f = xy`, the type of `f` is read off
//! the set of cross edges between `{u, v}` and `{x, y}`:
//!
//! | cross edges                          | type |
//! |--------------------------------------|------|
//! | all four                             | T1   |
//! | three                                | T2   |
//! | two, sharing an endpoint of `f`      | T3   |
//! | two, a perfect matching (4-cycle)    | T4   |
//! | two, sharing an endpoint of `e`      | T5   |
//! | one                                  | T6   |

use std::sync::OnceLock;

use num_rational::Rational64;
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TypeClass {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
}

impl TypeClass {
    pub const ALL: [TypeClass; 6] =
        [TypeClass::T1, TypeClass::T2, TypeClass::T3, TypeClass::T4, TypeClass::T5, TypeClass::T6];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NeighborhoodError {
    #[error("edge index {0} out of range")]
    InvalidEdge(usize),
    #[error("path must contain at least two vertices")]
    PathTooShort,
    #[error("vertices {0} and {1} are consecutive on the path but not adjacent")]
    NotAdjacent(usize, usize),
    #[error("path is not induced: vertices {0} and {1} are adjacent or repeated")]
    NotInduced(usize, usize),
}

/// Cached distance-≤2 structure of one edge. All edge sets are sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeNeighborhood {
    pub edge: usize,
    pub u: usize,
    pub v: usize,
    pub n1: Vec<usize>,
    pub n1_u: Vec<usize>,
    pub n1_v: Vec<usize>,
    pub n2: Vec<usize>,
    /// Type of `n2[i]`.
    pub types: Vec<TypeClass>,
    pub n2_u: Vec<usize>,
    pub n2_v: Vec<usize>,
    pub c_delta: Vec<usize>,
    pub f_set: Vec<usize>,
    pub t6: Vec<usize>,
}

impl EdgeNeighborhood {
    pub fn type_of(&self, f: usize) -> Option<TypeClass> {
        self.n2.binary_search(&f).ok().map(|i| self.types[i])
    }

    pub fn class(&self, t: TypeClass) -> Vec<usize> {
        self.n2.iter().zip(&self.types).filter(|(_, &c)| c == t).map(|(&f, _)| f).collect()
    }

    pub fn class_size(&self, t: TypeClass) -> usize {
        self.types.iter().filter(|&&c| c == t).count()
    }

    pub fn in_f(&self, f: usize) -> bool {
        self.f_set.binary_search(&f).is_ok()
    }

    pub fn in_n1(&self, f: usize) -> bool {
        self.n1.binary_search(&f).is_ok()
    }

    pub fn in_n2(&self, f: usize) -> bool {
        self.n2.binary_search(&f).is_ok()
    }

    /// Side sets `(N_w(e), N_w²(e))` for endpoint `w` of the edge.
    pub fn side(&self, w: usize) -> (&[usize], &[usize]) {
        if w == self.u {
            (&self.n1_u, &self.n2_u)
        } else {
            debug_assert_eq!(w, self.v);
            (&self.n1_v, &self.n2_v)
        }
    }

    /// N(e) ∪ N²(e), sorted.
    pub fn within_two(&self) -> Vec<usize> {
        merge_sorted(&self.n1, &self.n2)
    }
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    out.extend_from_slice(a);
    out.extend_from_slice(b);
    out.sort_unstable();
    out.dedup();
    out
}

fn classify(g: &Graph, u: usize, v: usize, x: usize, y: usize) -> TypeClass {
    let ux = g.has_edge(u, x);
    let uy = g.has_edge(u, y);
    let vx = g.has_edge(v, x);
    let vy = g.has_edge(v, y);
    match [ux, uy, vx, vy].iter().filter(|&&b| b).count() {
        4 => TypeClass::T1,
        3 => TypeClass::T2,
        2 if (ux && vx) || (uy && vy) => TypeClass::T3,
        2 if (ux && vy) || (uy && vx) => TypeClass::T4,
        2 => TypeClass::T5,
        1 => TypeClass::T6,
        _ => unreachable!("a 2-neighbor has at least one cross edge"),
    }
}

pub fn compute_neighborhood(g: &Graph, e: usize) -> Result<EdgeNeighborhood, NeighborhoodError> {
    if e >= g.edge_count() {
        return Err(NeighborhoodError::InvalidEdge(e));
    }
    let (u, v) = g.endpoints(e);
    let n1_u: Vec<usize> = g.incident_edges(u).filter(|&f| f != e).collect();
    let n1_v: Vec<usize> = g.incident_edges(v).filter(|&f| f != e).collect();
    let mut n1_u = n1_u;
    let mut n1_v = n1_v;
    n1_u.sort_unstable();
    n1_v.sort_unstable();
    let n1 = merge_sorted(&n1_u, &n1_v);

    let far_side = |w: usize| -> Vec<usize> {
        let mut out: Vec<usize> = g
            .neighbors(w)
            .filter(|&x| x != u && x != v)
            .flat_map(|x| g.incident_edges(x))
            .filter(|&f| {
                let (a, b) = g.endpoints(f);
                a != u && a != v && b != u && b != v
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    };
    let n2_u = far_side(u);
    let n2_v = far_side(v);
    let n2 = merge_sorted(&n2_u, &n2_v);
    let types: Vec<TypeClass> = n2
        .iter()
        .map(|&f| {
            let (x, y) = g.endpoints(f);
            classify(g, u, v, x, y)
        })
        .collect();

    let mut c_delta = Vec::new();
    for &(w, uw) in g.adjacency(u) {
        if let Some(vw) = g.edge_between(v, w) {
            c_delta.push(uw);
            c_delta.push(vw);
        }
    }
    c_delta.sort_unstable();

    let mut f_set = n1.clone();
    let mut t6 = Vec::new();
    for (&f, &t) in n2.iter().zip(&types) {
        if t == TypeClass::T6 {
            t6.push(f);
        } else {
            f_set.push(f);
        }
    }
    f_set.sort_unstable();

    Ok(EdgeNeighborhood { edge: e, u, v, n1, n1_u, n1_v, n2, types, n2_u, n2_v, c_delta, f_set, t6 })
}

/// Right-hand side of the per-edge bound
/// |F(e)| ≤ Δ² − 1 − ½|C_e^Δ| − |T1(e)| − ½|T2(e)| − ½|T6(e)|.
pub fn observation_bound(nb: &EdgeNeighborhood, delta: usize) -> Rational64 {
    let half = Rational64::new(1, 2);
    let count = |n: usize| Rational64::from_integer(n as i64);
    count(delta * delta) - count(1)
        - half * count(nb.c_delta.len())
        - count(nb.class_size(TypeClass::T1))
        - half * count(nb.class_size(TypeClass::T2))
        - half * count(nb.class_size(TypeClass::T6))
}

fn validate_induced_path(g: &Graph, path: &[usize]) -> Result<(), NeighborhoodError> {
    if path.len() < 2 {
        return Err(NeighborhoodError::PathTooShort);
    }
    for &v in path {
        if v >= g.vertex_count() {
            return Err(NeighborhoodError::NotAdjacent(v, v));
        }
    }
    for i in 0..path.len() {
        for j in i + 1..path.len() {
            let adjacent = g.has_edge(path[i], path[j]);
            if j == i + 1 {
                if !adjacent {
                    return Err(NeighborhoodError::NotAdjacent(path[i], path[j]));
                }
            } else if adjacent || path[i] == path[j] {
                return Err(NeighborhoodError::NotInduced(path[i], path[j]));
            }
        }
    }
    Ok(())
}

/// Edge set M for the last edge `e_k = v_{k-1} v_k` of an induced path
/// `v_0 … v_k` whose first edge is the root:
///
/// * k = 1: N(e_1) ∪ N²_{v_1}(e_1)
/// * k ≥ 2: (N[e_k] ∖ {e_{k-1}}) ∪ N²_{v_k}(e_k)
pub fn m_set(g: &Graph, path: &[usize]) -> Result<Vec<usize>, NeighborhoodError> {
    validate_induced_path(g, path)?;
    let k = path.len() - 1;
    let last = g.edge_between(path[k - 1], path[k]).unwrap();
    let nb = compute_neighborhood(g, last)?;
    Ok(m_set_from(&nb, path[k], (k >= 2).then(|| g.edge_between(path[k - 2], path[k - 1]).unwrap())))
}

/// M set of `nb.edge` with far endpoint `tip`; `previous` is e_{k-1} when k ≥ 2.
pub(crate) fn m_set_from(nb: &EdgeNeighborhood, tip: usize, previous: Option<usize>) -> Vec<usize> {
    let (_, far) = nb.side(tip);
    let mut out: Vec<usize> = match previous {
        None => nb.n1.clone(),
        Some(prev) => nb.n1.iter().copied().filter(|&f| f != prev).chain([nb.edge]).collect(),
    };
    out.extend_from_slice(far);
    out.sort_unstable();
    out.dedup();
    out
}

/// Lazily filled per-edge neighborhood table, safe for concurrent readers.
#[derive(Debug)]
pub struct NeighborhoodCache<'g> {
    graph: &'g Graph,
    slots: Vec<OnceLock<EdgeNeighborhood>>,
}

impl<'g> NeighborhoodCache<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        NeighborhoodCache { graph, slots: (0..graph.edge_count()).map(|_| OnceLock::new()).collect() }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn get(&self, e: usize) -> &EdgeNeighborhood {
        self.slots[e].get_or_init(|| compute_neighborhood(self.graph, e).expect("edge index in range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_graph;

    /// Type of the pair by brute-force inspection of the induced 4-vertex
    /// subgraph: count its edges and the degree pattern.
    fn induced_type(g: &Graph, e: usize, f: usize) -> TypeClass {
        let (u, v) = g.endpoints(e);
        let (x, y) = g.endpoints(f);
        let verts = [u, v, x, y];
        let mut deg = [0usize; 4];
        let mut edges = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if g.has_edge(verts[i], verts[j]) {
                    deg[i] += 1;
                    deg[j] += 1;
                    edges += 1;
                }
            }
        }
        match edges {
            6 => TypeClass::T1,
            5 => TypeClass::T2,
            // Four edges: a 4-cycle (all degree 2) or a paw (triangle + pendant).
            4 if deg.iter().all(|&d| d == 2) => TypeClass::T4,
            4 if deg[2] == 3 || deg[3] == 3 => TypeClass::T3,
            4 => TypeClass::T5,
            3 => TypeClass::T6,
            _ => panic!("not a distance-2 pair"),
        }
    }

    #[test]
    fn c4_opposite_edges_are_t4() {
        let g = build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let nb = compute_neighborhood(&g, 0).unwrap();
        assert_eq!(nb.n1, vec![1, 3]);
        assert_eq!(nb.n2, vec![2]);
        assert_eq!(nb.type_of(2), Some(TypeClass::T4));
        assert_eq!(nb.f_set, vec![1, 2, 3]);
        assert_eq!(observation_bound(&nb, 2), Rational64::from_integer(3));
    }

    #[test]
    fn p4_far_edges_are_t6() {
        let g = build_graph(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let nb = compute_neighborhood(&g, 0).unwrap();
        assert_eq!(nb.type_of(2), Some(TypeClass::T6));
        assert_eq!(nb.t6, vec![2]);
        assert_eq!(nb.n2_v, vec![2]);
        assert!(nb.n2_u.is_empty());
        let mid = compute_neighborhood(&g, 1).unwrap();
        assert_eq!(mid.f_set.len(), 2);
        assert!(Rational64::from_integer(2) <= observation_bound(&mid, 2));
    }

    #[test]
    fn k4_is_t1() {
        let g = build_graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let nb = compute_neighborhood(&g, 0).unwrap();
        assert_eq!(nb.type_of(5), Some(TypeClass::T1));
        assert_eq!(nb.c_delta.len(), 4);
    }

    #[test]
    fn triangle_with_pendant_is_t3() {
        // u=0, v=1, x=2 triangle; pendant 2-3.
        let g = build_graph(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        let nb = compute_neighborhood(&g, 0).unwrap();
        assert_eq!(nb.type_of(3), Some(TypeClass::T3));
        assert_eq!(nb.c_delta, vec![1, 2]);
    }

    #[test]
    fn star_side_is_t5() {
        // e = 0-1, f = 2-3, cross edges 0-2 and 0-3 only.
        let g = build_graph(4, &[(0, 1), (2, 3), (0, 2), (0, 3)]).unwrap();
        let nb = compute_neighborhood(&g, 0).unwrap();
        assert_eq!(nb.type_of(1), Some(TypeClass::T5));
        assert!(nb.c_delta.is_empty());
    }

    #[test]
    fn reconstruction_matches_induced_subgraph_shape() {
        let g = build_graph(
            7,
            &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 1), (4, 5), (5, 6), (6, 0), (3, 6), (1, 5)],
        )
        .unwrap();
        for e in 0..g.edge_count() {
            let nb = compute_neighborhood(&g, e).unwrap();
            for &f in &nb.n2 {
                assert_eq!(nb.type_of(f), Some(induced_type(&g, e, f)), "pair {e},{f}");
            }
        }
    }

    #[test]
    fn m_sets_on_c5() {
        let g = build_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        assert_eq!(m_set(&g, &[0, 1]).unwrap(), vec![1, 2, 4]);
        let m2 = m_set(&g, &[0, 1, 2]).unwrap();
        assert_eq!(m2, vec![1, 2, 3]);
        assert!(m2.contains(&1) && !m2.contains(&0));
        assert_eq!(m_set(&g, &[0, 2]), Err(NeighborhoodError::NotAdjacent(0, 2)));
        assert_eq!(m_set(&g, &[0, 1, 2, 3, 4]), Err(NeighborhoodError::NotInduced(0, 4)));
        assert_eq!(m_set(&g, &[0]), Err(NeighborhoodError::PathTooShort));
    }

    #[test]
    fn invalid_edge() {
        let g = build_graph(2, &[(0, 1)]).unwrap();
        assert_eq!(compute_neighborhood(&g, 1), Err(NeighborhoodError::InvalidEdge(1)));
    }

    #[test]
    fn cache_matches_direct() {
        let g = build_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2)]).unwrap();
        let cache = NeighborhoodCache::new(&g);
        for e in 0..g.edge_count() {
            assert_eq!(cache.get(e), &compute_neighborhood(&g, e).unwrap());
        }
    }
}
