//! Immutable simple undirected graphs with stable edge indices.

use std::collections::{HashSet, VecDeque};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("endpoint {endpoint} out of range for {vertex_count} vertices")]
    EndpointOutOfRange { endpoint: usize, vertex_count: usize },
    #[error("graph is not connected")]
    Disconnected,
    #[error("edge index {0} out of range")]
    InvalidEdge(usize),
}

/// A finite simple undirected graph.
///
/// Edge indices are assigned in construction order and never change.
/// `adjacency[v]` lists `(neighbor, edge index)` sorted by neighbor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<(usize, usize)>>,
}

impl Graph {
    pub fn new(vertex_count: usize, edge_pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut seen = HashSet::with_capacity(edge_pairs.len());
        let mut adjacency = vec![Vec::new(); vertex_count];
        for (index, &(u, v)) in edge_pairs.iter().enumerate() {
            for endpoint in [u, v] {
                if endpoint >= vertex_count {
                    return Err(GraphError::EndpointOutOfRange { endpoint, vertex_count });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u.min(v), u.max(v))) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adjacency[u].push((v, index));
            adjacency[v].push((u, index));
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Graph { vertex_count, edges: edge_pairs.to_vec(), adjacency })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// Endpoint of `e` that is not `v`. `v` must be an endpoint of `e`.
    pub fn other_endpoint(&self, e: usize, v: usize) -> usize {
        let (a, b) = self.edges[e];
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    pub fn adjacency(&self, v: usize) -> &[(usize, usize)] {
        &self.adjacency[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&(w, _)| w)
    }

    pub fn incident_edges(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency[v].iter().map(|&(_, e)| e)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn edge_between(&self, u: usize, v: usize) -> Option<usize> {
        let list = self.adjacency.get(u)?;
        list.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_between(u, v).is_some()
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count <= 1 || connected_components(self).len() == 1
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adjacency.iter().all(|list| list.len() == d)
    }
}

pub fn build_graph(vertex_count: usize, edge_pairs: &[(usize, usize)]) -> Result<Graph, GraphError> {
    Graph::new(vertex_count, edge_pairs)
}

pub fn max_degree(g: &Graph) -> usize {
    g.max_degree()
}

/// One connected component of a parent graph.
///
/// `vertex_map[i]` is the parent vertex of component vertex `i`; `edge_map[j]`
/// the parent edge of component edge `j`. Both are sorted ascending.
#[derive(Debug, Clone)]
pub struct ComponentView<'a> {
    pub parent: &'a Graph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
}

impl ComponentView<'_> {
    /// The component as a standalone graph, vertices and edges renumbered
    /// through `vertex_map` / `edge_map`.
    pub fn subgraph(&self) -> Graph {
        let mut local = vec![usize::MAX; self.parent.vertex_count()];
        for (i, &v) in self.vertex_map.iter().enumerate() {
            local[v] = i;
        }
        let pairs: Vec<(usize, usize)> = self
            .edge_map
            .iter()
            .map(|&e| {
                let (u, v) = self.parent.endpoints(e);
                (local[u], local[v])
            })
            .collect();
        Graph::new(self.vertex_map.len(), &pairs).expect("component of a simple graph is simple")
    }
}

/// Connected components ordered by smallest parent vertex.
pub fn connected_components(g: &Graph) -> Vec<ComponentView<'_>> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    let mut components = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in g.adjacency(v) {
                if v < w {
                    edges.push(e);
                }
                if !seen[w] {
                    seen[w] = true;
                    vertices.push(w);
                    queue.push_back(w);
                }
            }
        }
        vertices.sort_unstable();
        edges.sort_unstable();
        components.push(ComponentView { parent: g, vertex_map: vertices, edge_map: edges });
    }
    components
}

/// Proper 2-coloring of a connected graph starting from vertex 0, or `None`
/// if the graph has an odd cycle.
pub(crate) fn bipartition(g: &Graph) -> Option<Vec<bool>> {
    let n = g.vertex_count();
    let mut side = vec![None; n];
    for start in 0..n {
        if side[start].is_some() {
            continue;
        }
        side[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let s = side[v].unwrap();
            for w in g.neighbors(v) {
                match side[w] {
                    None => {
                        side[w] = Some(!s);
                        queue.push_back(w);
                    }
                    Some(t) if t == s => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(side.into_iter().map(Option::unwrap).collect())
}

/// Whether a connected `g` is isomorphic to K_{d,d}, decided from regularity,
/// vertex count and bipartiteness.
pub fn is_complete_bipartite_dd(g: &Graph, d: usize) -> Result<bool, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::Disconnected);
    }
    if g.vertex_count() != 2 * d || !g.is_regular(d) || g.edge_count() != d * d {
        return Ok(false);
    }
    // d-regular bipartite with both sides of size d forces every cross edge.
    Ok(match bipartition(g) {
        Some(side) => side.iter().filter(|&&s| s).count() == d,
        None => false,
    })
}

/// Smallest edge `uv` certifying membership in the family of Δ-regular graphs
/// on 2Δ vertices with N(u) ∪ N(v) = V, if `g` belongs to it.
pub fn g_family_witness(g: &Graph) -> Option<usize> {
    let delta = g.max_degree();
    if delta == 0 || g.vertex_count() != 2 * delta || !g.is_regular(delta) {
        return None;
    }
    let n = g.vertex_count();
    (0..g.edge_count()).find(|&e| {
        let (u, v) = g.endpoints(e);
        let mut covered = vec![false; n];
        for w in g.neighbors(u).chain(g.neighbors(v)) {
            covered[w] = true;
        }
        covered.iter().all(|&c| c)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        build_graph(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn k33() -> Graph {
        let mut pairs = Vec::new();
        for i in 0..3 {
            for j in 3..6 {
                pairs.push((i, j));
            }
        }
        build_graph(6, &pairs).unwrap()
    }

    fn triangular_prism() -> Graph {
        build_graph(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)])
            .unwrap()
    }

    #[test]
    fn builds_c4() {
        let g = c4();
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.endpoints(3), (3, 0));
        assert_eq!(max_degree(&g), 2);
        assert_eq!(g.adjacency(0), &[(1, 0), (3, 3)]);
    }

    #[test]
    fn single_vertex() {
        let g = build_graph(1, &[]).unwrap();
        assert_eq!(g.max_degree(), 0);
        assert!(g.is_connected());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(build_graph(3, &[(0, 1), (0, 1)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(build_graph(3, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(1, 0)));
        assert_eq!(build_graph(2, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            build_graph(2, &[(0, 2)]),
            Err(GraphError::EndpointOutOfRange { endpoint: 2, vertex_count: 2 })
        );
    }

    #[test]
    fn components() {
        let g = c4();
        let comps = connected_components(&g);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].vertex_map, vec![0, 1, 2, 3]);

        let mut pairs = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
        for i in 0..5 {
            pairs.push((4 + i, 4 + (i + 1) % 5));
        }
        let g = build_graph(9, &pairs).unwrap();
        let comps = connected_components(&g);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[1].vertex_map, vec![4, 5, 6, 7, 8]);
        assert_eq!(comps[1].edge_map, vec![4, 5, 6, 7, 8]);
        let sub = comps[1].subgraph();
        assert_eq!(sub.edge_count(), 5);
        assert!(sub.is_regular(2));

        let g = build_graph(3, &[]).unwrap();
        assert_eq!(connected_components(&g).len(), 3);
    }

    #[test]
    fn complete_bipartite_recognition() {
        assert_eq!(is_complete_bipartite_dd(&k33(), 3), Ok(true));
        assert_eq!(is_complete_bipartite_dd(&triangular_prism(), 3), Ok(false));
        assert_eq!(is_complete_bipartite_dd(&c4(), 2), Ok(true));
        assert_eq!(is_complete_bipartite_dd(&c4(), 3), Ok(false));
        let g = build_graph(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(is_complete_bipartite_dd(&g, 1), Err(GraphError::Disconnected));
    }

    #[test]
    fn family_witness() {
        assert_eq!(g_family_witness(&k33()), Some(0));
        // Rung a1b1 = edge 6: N(0) ∪ N(3) = {1,2,3} ∪ {4,5,0}.
        let prism = triangular_prism();
        let w = g_family_witness(&prism).unwrap();
        assert_eq!(w, 6);
        // Triangle edges do not cover: N(0) ∪ N(1) = {0,1,2,3,4}.
        let petersen = build_graph(
            10,
            &[
                (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
                (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
                (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            ],
        )
        .unwrap();
        assert_eq!(g_family_witness(&petersen), None);
    }
}
