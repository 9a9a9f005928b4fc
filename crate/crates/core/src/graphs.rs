//! Finite ordered graphs omitting cliques.
//!
//! Vertices are `0..n` in their natural order. Order-preserving isomorphism on
//! a fixed ordered vertex set is the identity, so isomorphism classes of
//! ordered graphs on `n` vertices are just labeled graphs.

use alloc::vec::Vec;
use core::fmt;

use crate::canonize::{index_sets, induces_same_partition, project_i, EqRel};
use crate::subsets::{is_subset_sorted, k_subsets};

/// Largest vertex count [`enumerate_class`] accepts (`2^21` labeled graphs).
pub const ENUMERATE_CAP: u32 = 7;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    /// Edge outside `[n]^2` or a self-loop.
    BadEdge(u32, u32),
    TooManyVertices(u32),
    CapExceeded { n: u32, cap: u32 },
    PreconditionViolated(&'static str),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::BadEdge(u, v) => write!(f, "invalid edge ({u}, {v})"),
            GraphError::TooManyVertices(n) => write!(f, "{n} vertices exceed the 64-vertex limit"),
            GraphError::CapExceeded { n, cap } => write!(f, "n = {n} exceeds enumeration cap {cap}"),
            GraphError::PreconditionViolated(why) => write!(f, "precondition violated: {why}"),
        }
    }
}

impl core::error::Error for GraphError {}

/// An ordered graph on at most 64 vertices, stored as adjacency bitmasks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrderedGraph {
    n: u32,
    adj: Vec<u64>,
}

impl OrderedGraph {
    pub fn empty(n: u32) -> Result<Self, GraphError> {
        if n > 64 {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(OrderedGraph { n, adj: alloc::vec![0; n as usize] })
    }

    pub fn new(n: u32, edges: &[(u32, u32)]) -> Result<Self, GraphError> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            if u == v || u >= n || v >= n {
                return Err(GraphError::BadEdge(u, v));
            }
            g.adj[u as usize] |= 1 << v;
            g.adj[v as usize] |= 1 << u;
        }
        Ok(g)
    }

    pub fn complete(n: u32) -> Result<Self, GraphError> {
        let edges: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::new(n, &edges)
    }

    pub fn cycle(n: u32) -> Result<Self, GraphError> {
        let edges: Vec<(u32, u32)> = (0..n).map(|u| (u.min((u + 1) % n), u.max((u + 1) % n))).collect();
        Self::new(n, &edges)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn adjacent(&self, u: u32, v: u32) -> bool {
        self.adj[u as usize] >> v & 1 == 1
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        (0..self.n)
            .flat_map(|u| (u + 1..self.n).filter(move |&v| self.adjacent(u, v)).map(move |v| (u, v)))
            .collect()
    }

    /// The subgraph induced on sorted `vertices`, renumbered in order.
    pub fn induced(&self, vertices: &[u32]) -> OrderedGraph {
        let mut g = OrderedGraph { n: vertices.len() as u32, adj: alloc::vec![0; vertices.len()] };
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
            }
        }
        g
    }

    /// Lexicographically least `size`-set whose pairs are all edges (or all
    /// non-edges when `complement`).
    fn least_homogeneous(&self, size: usize, complement: bool) -> Option<Vec<u32>> {
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let nbrs = |v: u32| {
            let row = self.adj[v as usize];
            (if complement { !row } else { row }) & all & !(1u64 << v)
        };
        fn go(nbrs: &dyn Fn(u32) -> u64, cand: u64, size: usize, set: &mut Vec<u32>) -> bool {
            if set.len() == size {
                return true;
            }
            let mut rest = cand;
            while rest != 0 {
                if (rest.count_ones() as usize) < size - set.len() {
                    return false;
                }
                let v = rest.trailing_zeros();
                rest &= rest - 1;
                set.push(v);
                if go(nbrs, rest & nbrs(v), size, set) {
                    return true;
                }
                set.pop();
            }
            false
        }
        let mut set = Vec::with_capacity(size);
        go(&nbrs, all, size, &mut set).then_some(set)
    }
}

/// No `q` vertices are pairwise adjacent.
pub fn omits_clique(g: &OrderedGraph, q: usize) -> bool {
    g.least_homogeneous(q, false).is_none()
}

/// Every graph on `0..n` omitting `K_q`, ordered by edge bitmask over the
/// lexicographically ordered pairs.
pub fn enumerate_class(n: u32, q: usize) -> Result<Vec<OrderedGraph>, GraphError> {
    if n > ENUMERATE_CAP {
        return Err(GraphError::CapExceeded { n, cap: ENUMERATE_CAP });
    }
    let pairs: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let edges: Vec<(u32, u32)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let g = OrderedGraph::new(n, &edges)?;
        if omits_clique(&g, q) {
            out.push(g);
        }
    }
    Ok(out)
}

/// Vertex sets of `c` inducing `a` under the order-preserving bijection, lexicographic.
pub fn copies(a: &OrderedGraph, c: &OrderedGraph) -> Vec<Vec<u32>> {
    let vertices: Vec<u32> = (0..c.n).collect();
    k_subsets(&vertices, a.n as usize)
        .into_iter()
        .filter(|s| c.induced(s) == *a)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphWitness {
    pub indices: Vec<usize>,
    /// Vertex set in `C` of the copy `B'` of `B`.
    pub b_copy: Vec<u32>,
}

/// Least `(I, B')` such that `E` restricted to the copies of `A` inside `B'`
/// is `E_I`. Index sets are tried before copies. `rel` must be labeled on
/// exactly `copies(a, c)`; with `q` given, all three graphs must omit `K_q`.
pub fn graph_canonize(
    rel: &EqRel,
    a: &OrderedGraph,
    b: &OrderedGraph,
    c: &OrderedGraph,
    q: Option<usize>,
) -> Result<Option<GraphWitness>, GraphError> {
    let a_in_c = copies(a, c);
    if rel.domain().members() != a_in_c.as_slice() {
        return Err(GraphError::PreconditionViolated("relation is not labeled on the copies of A in C"));
    }
    if copies(a, b).is_empty() {
        return Err(GraphError::PreconditionViolated("A does not embed in B"));
    }
    let b_in_c = copies(b, c);
    if b_in_c.is_empty() {
        return Err(GraphError::PreconditionViolated("B does not embed in C"));
    }
    if q.is_some_and(|q| ![a, b, c].iter().all(|g| omits_clique(g, q))) {
        return Err(GraphError::PreconditionViolated("graphs do not omit the clique"));
    }
    let labeled: Vec<(&[u32], u64)> =
        a_in_c.iter().map(|s| s.as_slice()).zip(rel.labels().iter().copied()).collect();
    let inside: Vec<Vec<(&[u32], u64)>> = b_in_c
        .iter()
        .map(|bc| labeled.iter().copied().filter(|(s, _)| is_subset_sorted(s, bc)).collect())
        .collect();
    for idx in index_sets(a.n as usize) {
        for (bc, pairs) in b_in_c.iter().zip(&inside) {
            if induces_same_partition(pairs, |s| project_i(s, &idx).expect("copy has |A| vertices")) {
                return Ok(Some(GraphWitness { indices: idx, b_copy: bc.clone() }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arrow {
    /// An `s`-set with every pair colored 0.
    ZeroHomog(Vec<u32>),
    /// An `n`-set with every pair colored 1.
    OneClique(Vec<u32>),
    Neither,
}

/// The finite arrow dichotomy for the pair coloring whose 1-pairs are the
/// edges of `f`. A 0-homogeneous set is reported in preference to a 1-clique.
pub fn arrow_check(f: &OrderedGraph, s: usize, n: usize) -> Arrow {
    if let Some(x) = f.least_homogeneous(s, true) {
        Arrow::ZeroHomog(x)
    } else if let Some(y) = f.least_homogeneous(n, false) {
        Arrow::OneClique(y)
    } else {
        Arrow::Neither
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ellentuck::FlatFamily;
    use alloc::vec;
    use proptest::prelude::*;

    fn path3() -> OrderedGraph {
        OrderedGraph::new(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn clique_examples() {
        assert!(omits_clique(&OrderedGraph::empty(5).unwrap(), 2));
        assert!(!omits_clique(&OrderedGraph::complete(3).unwrap(), 3));
        assert!(omits_clique(&OrderedGraph::cycle(5).unwrap(), 3));
        assert!(!omits_clique(&OrderedGraph::cycle(5).unwrap(), 2));
        assert!(OrderedGraph::new(2, &[(0, 2)]).is_err());
        assert!(OrderedGraph::new(2, &[(1, 1)]).is_err());
    }

    #[test]
    fn class_counts() {
        assert_eq!(enumerate_class(2, 3).unwrap().len(), 2);
        assert_eq!(enumerate_class(3, 3).unwrap().len(), 7);
        assert_eq!(enumerate_class(1, 2).unwrap().len(), 1);
        assert_eq!(enumerate_class(4, 3).unwrap().len(), 41);
        assert!(enumerate_class(8, 3).is_err());
    }

    #[test]
    fn copy_examples() {
        let edge = OrderedGraph::complete(2).unwrap();
        assert_eq!(copies(&edge, &path3()), vec![vec![0, 1], vec![1, 2]]);
        let dot = OrderedGraph::empty(1).unwrap();
        assert_eq!(copies(&dot, &path3()), vec![vec![0], vec![1], vec![2]]);
        assert!(copies(&edge, &OrderedGraph::empty(4).unwrap()).is_empty());
    }

    fn rel_on(a: &OrderedGraph, c: &OrderedGraph, label: impl Fn(&[u32]) -> u64) -> EqRel {
        EqRel::from_fn(FlatFamily::new(c.n(), copies(a, c)).unwrap(), label)
    }

    #[test]
    fn canonize_examples() {
        let a = OrderedGraph::complete(2).unwrap();
        let b = path3();
        let c = OrderedGraph::cycle(5).unwrap();
        let square = OrderedGraph::new(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let identity = rel_on(&a, &square, |s| u64::from(s[0] * 100 + s[1]));
        let w = graph_canonize(&identity, &a, &square, &square, Some(3)).unwrap().unwrap();
        assert_eq!(w, GraphWitness { indices: vec![0, 1], b_copy: vec![0, 1, 2, 3] });
        // Inside a path the first endpoint already separates the two edges.
        let identity = rel_on(&a, &c, |s| u64::from(s[0] * 100 + s[1]));
        let w = graph_canonize(&identity, &a, &b, &c, Some(3)).unwrap().unwrap();
        assert_eq!(w.indices, vec![0]);
        assert_eq!(w.b_copy, copies(&b, &c)[0]);
        let one = rel_on(&a, &c, |_| 0);
        assert_eq!(graph_canonize(&one, &a, &b, &c, None).unwrap().unwrap().indices, Vec::<usize>::new());
        let wrong = rel_on(&b, &c, |_| 0);
        assert!(graph_canonize(&wrong, &a, &b, &c, None).is_err());
        assert!(graph_canonize(&one, &a, &OrderedGraph::empty(3).unwrap(), &c, None).is_err());
    }

    #[test]
    fn parity_vertices() {
        let a = OrderedGraph::empty(1).unwrap();
        let b = OrderedGraph::empty(2).unwrap();
        let c = OrderedGraph::empty(4).unwrap();
        let parity = rel_on(&a, &c, |s| u64::from(s[0] % 2));
        // Two vertices of equal parity collapse to one class: I = ∅ on {0, 2}.
        let w = graph_canonize(&parity, &a, &b, &c, None).unwrap().unwrap();
        assert_eq!(w, GraphWitness { indices: vec![], b_copy: vec![0, 2] });
    }

    #[test]
    fn arrow_examples() {
        assert_eq!(arrow_check(&OrderedGraph::empty(6).unwrap(), 3, 3), Arrow::ZeroHomog(vec![0, 1, 2]));
        assert_eq!(arrow_check(&OrderedGraph::complete(6).unwrap(), 3, 4), Arrow::OneClique(vec![0, 1, 2, 3]));
        assert_eq!(arrow_check(&OrderedGraph::cycle(5).unwrap(), 3, 3), Arrow::Neither);
    }

    fn graph_strategy(n: u32) -> impl Strategy<Value = OrderedGraph> {
        let pairs = (n * n.saturating_sub(1) / 2) as usize;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let all: Vec<(u32, u32)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let edges: Vec<(u32, u32)> = all.into_iter().zip(bits).filter(|(_, b)| *b).map(|(e, _)| e).collect();
            OrderedGraph::new(n, &edges).unwrap()
        })
    }

    proptest! {
        #[test]
        fn copies_revalidate(a in graph_strategy(3), c in graph_strategy(6)) {
            for s in copies(&a, &c) {
                for (i, &u) in s.iter().enumerate() {
                    for (j, &v) in s.iter().enumerate().skip(i + 1) {
                        prop_assert_eq!(a.adjacent(i as u32, j as u32), c.adjacent(u, v));
                    }
                }
            }
        }

        #[test]
        fn edges_roundtrip(g in graph_strategy(7)) {
            prop_assert_eq!(OrderedGraph::new(7, &g.edges()).unwrap(), g);
        }
    }
}
