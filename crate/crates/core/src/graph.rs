//! Small simple graphs on at most 64 vertices, stored as adjacency bitmasks.
//!
//! This is the workhorse of the brute-force oracles: connectivity tests,
//! induced subgraphs and canonical forms for isomorphism checks.

use std::fmt;

pub const MAX_VERTICES: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<u64>,
}

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

impl Graph {
    pub fn new(n: usize) -> Self {
        assert!(
            n <= MAX_VERTICES,
            "graph with {n} vertices exceeds bitmask capacity"
        );
        Graph { adj: vec![0; n] }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Builds the graph whose edges are the set bits of `mask` over the
    /// lexicographic pair order `(0,1), (0,2), ..., (n-2,n-1)`.
    pub fn from_pair_mask(n: usize, mask: u64) -> Self {
        let mut g = Graph::new(n);
        let mut idx = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                if mask & bit(idx) != 0 {
                    g.add_edge(u, v);
                }
                idx += 1;
            }
        }
        g
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn all_vertices(&self) -> u64 {
        if self.adj.len() == 64 {
            u64::MAX
        } else {
            bit(self.adj.len()) - 1
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop {u}");
        self.adj[u] |= bit(v);
        self.adj[v] |= bit(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !bit(v);
        self.adj[v] &= !bit(u);
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & bit(v) != 0
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.adj
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.adj.len() {
            let mut higher = self.adj[u] & !((bit(u) << 1).wrapping_sub(1));
            while higher != 0 {
                let v = higher.trailing_zeros() as usize;
                out.push((u, v));
                higher &= higher - 1;
            }
        }
        out
    }

    /// Vertices reachable from `start` using only vertices in `within`.
    pub fn reach(&self, start: usize, within: u64) -> u64 {
        let mut seen = bit(start) & within;
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = self.adj[v] & within & !seen;
            seen |= fresh;
            frontier |= fresh;
        }
        seen
    }

    /// Connected components of the subgraph induced by `within`, as masks,
    /// ordered by their smallest vertex.
    pub fn components(&self, within: u64) -> Vec<u64> {
        let mut rest = within;
        let mut out = Vec::new();
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let comp = self.reach(v, within);
            out.push(comp);
            rest &= !comp;
        }
        out
    }

    pub fn is_connected_within(&self, within: u64) -> bool {
        within == 0 || self.reach(within.trailing_zeros() as usize, within) == within
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_within(self.all_vertices())
    }

    /// 2-connectivity; `K₂` counts as 2-connected, smaller graphs do not.
    pub fn is_biconnected(&self) -> bool {
        let n = self.vertex_count();
        if n < 2 {
            return false;
        }
        if n == 2 {
            return self.has_edge(0, 1);
        }
        let all = self.all_vertices();
        if !self.is_connected_within(all) {
            return false;
        }
        (0..n).all(|v| self.is_connected_within(all & !bit(v)))
    }

    /// Whether removing fewer than `k` vertices never disconnects the graph
    /// and the graph has more than `k` vertices.
    pub fn is_k_connected(&self, k: usize) -> bool {
        let n = self.vertex_count();
        if n <= k {
            return false;
        }
        if (0..n).any(|v| self.degree(v) < k) {
            return false;
        }
        fn rec(g: &Graph, within: u64, next: usize, left: usize) -> bool {
            if !g.is_connected_within(within) {
                return false;
            }
            if left == 0 {
                return true;
            }
            (next..g.vertex_count()).all(|v| rec(g, within & !bit(v), v + 1, left - 1))
        }
        rec(self, self.all_vertices(), 0, k - 1)
    }

    pub fn is_three_connected(&self) -> bool {
        self.is_k_connected(3)
    }

    /// Subgraph induced by the vertices of `mask`, with vertices renumbered in
    /// increasing order; the second value maps new index to old index.
    pub fn induced(&self, mask: u64) -> (Graph, Vec<usize>) {
        let verts: Vec<usize> = (0..self.vertex_count())
            .filter(|&v| mask & bit(v) != 0)
            .collect();
        let mut index = [usize::MAX; MAX_VERTICES];
        for (i, &v) in verts.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            let mut nb = self.adj[v] & mask;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if index[w] > i {
                    g.add_edge(i, index[w]);
                }
            }
        }
        (g, verts)
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::new(self.vertex_count());
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    fn pair_bits(&self, order: &[usize]) -> u128 {
        // upper triangle in position order, row-major
        let mut code = 0u128;
        let mut idx = 0;
        for i in 0..order.len() {
            for j in (i + 1)..order.len() {
                if self.has_edge(order[i], order[j]) {
                    code |= 1u128 << idx;
                }
                idx += 1;
            }
        }
        code
    }

    /// Canonical form for graphs on at most 16 vertices.
    ///
    /// Vertices are placed in order of non-decreasing degree; within each
    /// degree class every arrangement is tried and the smallest adjacency
    /// code wins. Two graphs are isomorphic iff their canonical forms agree.
    pub fn canonical_form(&self) -> CanonicalForm {
        let n = self.vertex_count();
        assert!(n <= 16, "canonical form supports at most 16 vertices");
        let mut classes: Vec<(usize, Vec<usize>)> = Vec::new();
        let mut by_degree: Vec<usize> = (0..n).collect();
        by_degree.sort_by_key(|&v| (self.degree(v), v));
        for v in by_degree {
            let d = self.degree(v);
            match classes.last_mut() {
                Some((deg, members)) if *deg == d => members.push(v),
                _ => classes.push((d, vec![v])),
            }
        }
        let mut order = Vec::with_capacity(n);
        let mut best = u128::MAX;
        fn search(
            g: &Graph,
            classes: &mut [(usize, Vec<usize>)],
            class: usize,
            order: &mut Vec<usize>,
            best: &mut u128,
        ) {
            if class == classes.len() {
                let code = g.pair_bits(order);
                if code < *best {
                    *best = code;
                }
                return;
            }
            let members = classes[class].1.clone();
            permute_into(g, classes, class, &members, 0, order, best);
        }
        fn permute_into(
            g: &Graph,
            classes: &mut [(usize, Vec<usize>)],
            class: usize,
            members: &[usize],
            used: u64,
            order: &mut Vec<usize>,
            best: &mut u128,
        ) {
            if used.count_ones() as usize == members.len() {
                search(g, classes, class + 1, order, best);
                return;
            }
            for (i, &v) in members.iter().enumerate() {
                if used & bit(i) == 0 {
                    order.push(v);
                    permute_into(g, classes, class, members, used | bit(i), order, best);
                    order.pop();
                }
            }
        }
        search(self, &mut classes, 0, &mut order, &mut best);
        let mut degrees: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        degrees.sort_unstable();
        CanonicalForm {
            n,
            degrees,
            code: best,
        }
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        if self.vertex_count() != other.vertex_count() || self.edge_count() != other.edge_count() {
            return false;
        }
        let mut a: Vec<usize> = (0..self.vertex_count()).map(|v| self.degree(v)).collect();
        let mut b: Vec<usize> = (0..other.vertex_count()).map(|v| other.degree(v)).collect();
        a.sort_unstable();
        b.sort_unstable();
        a == b && self.canonical_form() == other.canonical_form()
    }

    /// Wheel test: some vertex is adjacent to all others and removing it
    /// leaves a single cycle.
    pub fn is_wheel(&self) -> bool {
        let n = self.vertex_count();
        if n < 4 || self.edge_count() != 2 * (n - 1) {
            return false;
        }
        let all = self.all_vertices();
        (0..n).any(|hub| {
            if self.degree(hub) != n - 1 {
                return false;
            }
            let rim = all & !bit(hub);
            let rim_degrees_ok = (0..n)
                .filter(|&v| v != hub)
                .all(|v| (self.adj[v] & rim).count_ones() == 2);
            rim_degrees_ok && self.is_connected_within(rim)
        })
    }

    /// Number of distinct labeled graphs isomorphic to this one on the same
    /// vertex set, i.e. `n! / |Aut|`, by enumerating all permutations.
    pub fn labeled_copies(&self) -> u64 {
        let n = self.vertex_count();
        assert!(n <= 10, "labeled copy count enumerates n! permutations");
        let mut seen = std::collections::HashSet::new();
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            seen.insert(self.permuted(&perm).adj);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        seen.len() as u64
    }
}

/// Lexicographic successor; returns false after the last permutation.
pub fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n: usize,
    degrees: Vec<usize>,
    code: u128,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; {:?})", self.vertex_count(), self.edges())
    }
}

/// Named small graphs used as fixed cores.
pub mod named {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in (u + 1)..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn k33() -> Graph {
        let mut g = Graph::new(6);
        for u in 0..3 {
            for v in 3..6 {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Triangular prism `K₃ × K₂`.
    pub fn prism() -> Graph {
        Graph::from_edges(
            6,
            &[
                (0, 1),
                (1, 2),
                (0, 2),
                (3, 4),
                (4, 5),
                (3, 5),
                (0, 3),
                (1, 4),
                (2, 5),
            ],
        )
    }

    /// Wheel with a hub (vertex 0) and a rim of `r` vertices.
    pub fn wheel(r: usize) -> Graph {
        let mut g = Graph::new(r + 1);
        for i in 1..=r {
            g.add_edge(0, i);
            g.add_edge(i, if i == r { 1 } else { i + 1 });
        }
        g
    }
}
