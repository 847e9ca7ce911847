//! Brute-force ground truth for small networks: validation, recursive
//! series/parallel/core decomposition, and exhaustive enumeration.

use crate::census::CensusReport;
use crate::classes::CoreClass;
use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};
use crate::sampler::Network;
use std::collections::BTreeMap;
use std::fmt::Write as _;

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Whether `net` is simple and becomes 2-connected once the pole edge is
/// added (as an extra multigraph edge).
pub fn validate_network(net: &Network) -> bool {
    let Some(edges) = net.edges() else {
        return false;
    };
    let n = net.labeled_vertex_count();
    if n + 2 > MAX_VERTICES {
        return false;
    }
    let total = n as u32 + 2;
    if edges
        .iter()
        .any(|&(a, b)| a == b || a >= total || b >= total)
    {
        return false;
    }
    if edges.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    if n == 0 {
        // K₂ plus a parallel pole edge is 2-connected; no edge is not
        return edges == [(0, 1)];
    }
    let mut g = net.to_graph().unwrap();
    g.add_edge(0, 1);
    g.is_biconnected()
}

/// Cores recovered by [`decompose_network_full`], as closed 3-connected
/// graphs renumbered `0..k`.
#[derive(Clone, Debug, Default)]
pub struct Decomposition {
    pub census: CensusReport,
    pub cores: Vec<Graph>,
}

/// Sub-network on the vertices of `mask` with poles `l`, `r`. Its edges are
/// the induced edges, with the pole edge kept only if `pole_edge`.
#[derive(Clone, Copy, Debug)]
struct Sub {
    mask: u64,
    l: usize,
    r: usize,
    pole_edge: bool,
}

struct Decomposer<'a> {
    g: &'a Graph,
    out: Decomposition,
    leaf_edges: usize,
}

impl Decomposer<'_> {
    fn local(&self, s: &Sub) -> Graph {
        let mut h = Graph::new(self.g.vertex_count());
        for v in 0..self.g.vertex_count() {
            if s.mask & bit(v) == 0 {
                continue;
            }
            let mut nb = self.g.neighbors(v) & s.mask;
            while nb != 0 {
                let w = nb.trailing_zeros() as usize;
                nb &= nb - 1;
                if v < w {
                    h.add_edge(v, w);
                }
            }
        }
        if !s.pole_edge {
            h.remove_edge(s.l, s.r);
        }
        h
    }

    fn visit(&mut self, s: Sub) -> Result<()> {
        let h = self.local(&s);
        let poles = bit(s.l) | bit(s.r);
        let inner = s.mask & !poles;
        if inner == 0 {
            if !s.pole_edge {
                return Err(Error::NotANetwork("empty sub-network".into()));
            }
            self.leaf_edges += 1;
            return Ok(());
        }
        let comps = h.components(inner);
        // parallel
        if s.pole_edge || comps.len() >= 2 {
            if s.pole_edge {
                self.leaf_edges += 1;
            }
            for c in comps {
                self.visit(Sub {
                    mask: c | poles,
                    l: s.l,
                    r: s.r,
                    pole_edge: false,
                })?;
            }
            return Ok(());
        }
        // series: the cut vertex with the smallest left side
        let mut best: Option<(u32, usize, u64)> = None;
        for c in iter_bits(inner) {
            let side = h.reach(s.l, s.mask & !bit(c));
            if side & bit(s.r) == 0 {
                let size = side.count_ones();
                if best.is_none_or(|b| size < b.0) {
                    best = Some((size, c, side));
                }
            }
        }
        if let Some((_, c, side)) = best {
            let left = side | bit(c);
            let right = (s.mask & !side) | bit(c);
            self.visit(Sub {
                mask: left,
                l: s.l,
                r: c,
                pole_edge: h.has_edge(s.l, c),
            })?;
            self.visit(Sub {
                mask: right,
                l: c,
                r: s.r,
                pole_edge: h.has_edge(c, s.r),
            })?;
            return Ok(());
        }
        self.core(s, &h)
    }

    fn core(&mut self, s: Sub, h: &Graph) -> Result<()> {
        let poles = bit(s.l) | bit(s.r);
        let verts: Vec<usize> = iter_bits(s.mask).collect();
        let mut interior = 0u64;
        for (i, &u) in verts.iter().enumerate() {
            for &v in &verts[i + 1..] {
                if bit(u) | bit(v) == poles {
                    continue;
                }
                for comp in h.components(s.mask & !bit(u) & !bit(v)) {
                    if comp & poles == 0 {
                        interior |= comp;
                    }
                }
            }
        }
        let core = s.mask & !interior;
        let mut attached: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        for comp in h.components(interior) {
            let mut att = 0u64;
            for w in iter_bits(comp) {
                att |= h.neighbors(w) & core;
            }
            if att.count_ones() != 2 {
                return Err(Error::NotANetwork(format!(
                    "piece {comp:#x} attaches to {} core vertices",
                    att.count_ones()
                )));
            }
            let a = att.trailing_zeros() as usize;
            let b = 63 - att.leading_zeros() as usize;
            *attached.entry((a, b)).or_default() |= comp;
        }
        let mut closed = Graph::new(self.g.vertex_count());
        closed.add_edge(s.l, s.r);
        let core_verts: Vec<usize> = iter_bits(core).collect();
        for (i, &a) in core_verts.iter().enumerate() {
            for &b in &core_verts[i + 1..] {
                if h.has_edge(a, b) || attached.contains_key(&(a, b)) {
                    if bit(a) | bit(b) == poles {
                        return Err(Error::NotANetwork("core edge between the poles".into()));
                    }
                    closed.add_edge(a, b);
                }
            }
        }
        let (closed, _) = closed.induced(core);
        if closed.vertex_count() < 4 || !closed.is_three_connected() {
            return Err(Error::NotANetwork(format!(
                "no series, parallel or 3-connected structure on {} core vertices",
                closed.vertex_count()
            )));
        }
        self.out.census.add(closed.vertex_count());
        self.out.cores.push(closed);
        for (i, &a) in core_verts.iter().enumerate() {
            for &b in &core_verts[i + 1..] {
                let pieces = attached.get(&(a, b)).copied().unwrap_or(0);
                let direct = h.has_edge(a, b);
                if pieces == 0 && !direct {
                    continue;
                }
                self.visit(Sub {
                    mask: pieces | bit(a) | bit(b),
                    l: a,
                    r: b,
                    pole_edge: direct,
                })?;
            }
        }
        Ok(())
    }
}

fn iter_bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

/// Census of `net` together with its core graphs.
pub fn decompose_network_full(net: &Network) -> Result<Decomposition> {
    if !validate_network(net) {
        return Err(Error::NotANetwork(
            "fails the 2-connectivity or simplicity check".into(),
        ));
    }
    let g = net.to_graph().unwrap();
    let mut d = Decomposer {
        g: &g,
        out: Decomposition::default(),
        leaf_edges: 0,
    };
    let all = g.all_vertices();
    d.visit(Sub {
        mask: all,
        l: 0,
        r: 1,
        pole_edge: g.has_edge(0, 1),
    })?;
    if d.leaf_edges != net.edge_count() {
        return Err(Error::NotANetwork(format!(
            "decomposition accounts for {} of {} edges",
            d.leaf_edges,
            net.edge_count()
        )));
    }
    Ok(d.out)
}

/// Core census of `net`, found by structural decomposition.
pub fn decompose_network(net: &Network) -> Result<CensusReport> {
    Ok(decompose_network_full(net)?.census)
}

/// All networks up to a given size whose cores belong to a class.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NetworkEnumeration {
    /// `(labeled vertices, edges)` → count
    pub counts: BTreeMap<(usize, usize), u64>,
    /// explicit edge lists, vertex `0` = L, `1` = R, `i + 1` = label `i`
    pub networks: BTreeMap<(usize, usize), Vec<Vec<(u32, u32)>>>,
}

impl NetworkEnumeration {
    /// Networks on exactly `n` labeled vertices.
    pub fn total(&self, n: usize) -> u64 {
        self.counts
            .range((n, 0)..=(n, usize::MAX))
            .map(|(_, c)| c)
            .sum()
    }

    /// Table text: `n<TAB>m<TAB>count` records, then `N` records listing
    /// each network's edges with poles written `L` and `R`.
    pub fn to_text(&self) -> String {
        let mut out = String::from("# networks: n\tm\tcount; N\tn\tm\tedges (poles L, R)\n");
        for (&(n, m), c) in &self.counts {
            let _ = writeln!(out, "{n}\t{m}\t{c}");
        }
        let name = |v: u32| match v {
            0 => "L".to_string(),
            1 => "R".to_string(),
            v => (v - 1).to_string(),
        };
        for (&(n, m), list) in &self.networks {
            for edges in list {
                let body: Vec<String> = edges
                    .iter()
                    .map(|&(a, b)| format!("{}-{}", name(a), name(b)))
                    .collect();
                let _ = writeln!(out, "N\t{n}\t{m}\t{}", body.join(","));
            }
        }
        out
    }
}

/// Every simple graph on `{L, R, 1..n}` for `n ≤ n_max`, kept when it is a
/// network all of whose cores lie in `class`.
pub fn enumerate_networks(class: &CoreClass, n_max: usize) -> Result<NetworkEnumeration> {
    if n_max > 6 {
        return Err(Error::Validation(format!(
            "enumeration is limited to 6 labeled vertices, got {n_max}"
        )));
    }
    let mut out = NetworkEnumeration::default();
    for n in 0..=n_max {
        let size = n + 2;
        let pairs: Vec<(u32, u32)> = (0..size as u32)
            .flat_map(|a| (a + 1..size as u32).map(move |b| (a, b)))
            .collect();
        for mask in 0u64..(1u64 << pairs.len()) {
            let m = mask.count_ones() as usize;
            if m < n + 1 {
                continue;
            }
            let mut g = Graph::from_pair_mask(size, mask);
            if n > 0 && (2..size).any(|v| g.degree(v) < 2) {
                continue;
            }
            g.add_edge(0, 1);
            if n > 0 && !g.is_biconnected() {
                continue;
            }
            let edges: Vec<(u32, u32)> = (0..pairs.len())
                .filter(|&i| mask & (1 << i) != 0)
                .map(|i| pairs[i])
                .collect();
            let net = Network::from_edges(n, edges);
            if !validate_network(&net) {
                continue;
            }
            let d = decompose_network_full(&net)?;
            let mut ok = true;
            for core in &d.cores {
                match class.contains_core(core) {
                    Some(true) => {}
                    Some(false) => {
                        ok = false;
                        break;
                    }
                    None => return Err(Error::SizeOnlyClass(class.to_string())),
                }
            }
            if ok {
                *out.counts.entry((n, m)).or_default() += 1;
                out.networks
                    .entry((n, m))
                    .or_default()
                    .push(net.edges().unwrap().to_vec());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn net(n: usize, edges: &[(u32, u32)]) -> Network {
        Network::from_edges(n, edges.to_vec())
    }

    #[test]
    fn validation_examples() {
        assert!(validate_network(&net(0, &[(0, 1)])));
        assert!(validate_network(&net(1, &[(0, 2), (1, 2)])));
        // two stars, one on each pole
        assert!(!validate_network(&net(2, &[(0, 2), (1, 3)])));
        assert!(!validate_network(&net(0, &[])));
        assert!(!validate_network(&Network::size_only(1, 2)));
    }

    #[test]
    fn path_has_no_cores() {
        let c = decompose_network(&net(1, &[(0, 2), (1, 2)])).unwrap();
        assert_eq!(c, CensusReport::default());
        let c = decompose_network(&net(1, &[(0, 1), (0, 2), (1, 2)])).unwrap();
        assert_eq!(c.total_cores, 0);
    }

    #[test]
    fn k4_core_network() {
        // K₄ on {L, R, 1, 2} with the pole edge removed
        let d = decompose_network_full(&net(2, &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])).unwrap();
        assert_eq!(
            d.census.counts.into_iter().collect::<Vec<_>>(),
            vec![(4, 1)]
        );
        assert!(d.cores[0].is_isomorphic(&crate::graph::named::complete(4)));
    }

    #[test]
    fn k4_core_with_substituted_edge() {
        // edge 1-2 of the K₄ core network replaced by the path 1-3-2,
        // in parallel with the direct edge
        let d = decompose_network(&net(
            3,
            &[(0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)],
        ))
        .unwrap();
        assert_eq!(d.counts.into_iter().collect::<Vec<_>>(), vec![(4, 1)]);
    }

    #[test]
    fn non_network_is_rejected() {
        assert!(matches!(
            decompose_network(&net(2, &[(0, 2), (1, 3)])),
            Err(Error::NotANetwork(_))
        ));
    }

    #[test]
    fn tiny_enumeration() {
        let e = enumerate_networks(&CoreClass::Wheels, 2).unwrap();
        assert_eq!(e.counts.get(&(0, 1)), Some(&1));
        assert_eq!(e.total(0), 1);
        assert_eq!(e.total(1), 2);
        let text = e.to_text();
        assert!(text.contains("N\t1\t2\tL-1,R-1"));
        assert!(text.contains("N\t0\t1\tL-R"));
    }

    #[test]
    fn enumeration_rejects_size_only_class() {
        let class = CoreClass::parse("synthetic:alpha=1.5,lambda=0.5").unwrap();
        assert!(matches!(
            enumerate_networks(&class, 2),
            Err(Error::SizeOnlyClass(_))
        ));
        assert!(enumerate_networks(&CoreClass::Wheels, 7).is_err());
    }
}
