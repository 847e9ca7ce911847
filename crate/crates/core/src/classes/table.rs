//! Coefficient tables `|T_{n,m}|` of 3-connected classes, their text format,
//! and the exhaustive enumerator used to produce them for small `n`.

use crate::error::{Error, Result};
use crate::graph::Graph;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

pub type EdgeList = Vec<(usize, usize)>;

/// Counts of labeled 3-connected graphs by `(vertices, edges)`, optionally
/// with the explicit labeled graphs (0-based vertices in memory).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefficientTable {
    pub entries: BTreeMap<(usize, usize), BigUint>,
    pub graphs: BTreeMap<(usize, usize), Vec<EdgeList>>,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

impl CoefficientTable {
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count(&self, n: usize, m: usize) -> BigUint {
        self.entries.get(&(n, m)).cloned().unwrap_or_default()
    }

    /// Network-egf coefficient `[x^{n-2} z^{m-1}] T̄ = 2m|T_{n,m}|/n!`.
    pub fn tbar_term(&self, n: usize, m: usize) -> f64 {
        let count = self.count(n, m).to_f64().unwrap_or(f64::INFINITY);
        2.0 * m as f64 * count / factorial(n)
    }

    pub fn max_vertices(&self) -> usize {
        self.entries.keys().map(|&(n, _)| n).max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        for (&(n, m), count) in &self.entries {
            if count.is_zero() {
                continue;
            }
            if n < 4 {
                return Err(Error::Validation(format!("count for n = {n} < 4")));
            }
            if 2 * m < 3 * n || m > n * (n - 1) / 2 {
                return Err(Error::Validation(format!(
                    "edge count {m} impossible for a 3-connected graph on {n} vertices"
                )));
            }
        }
        for (&(n, m), list) in &self.graphs {
            let count = self.count(n, m);
            if BigUint::from(list.len()) != count {
                return Err(Error::Validation(format!(
                    "graph list for (n = {n}, m = {m}) has {} graphs, count says {count}",
                    list.len()
                )));
            }
            let mut seen = HashSet::new();
            for edges in list {
                if edges.len() != m {
                    return Err(Error::Validation(format!(
                        "graph in (n = {n}, m = {m}) list has {} edges",
                        edges.len()
                    )));
                }
                if edges.iter().any(|&(u, v)| u >= n || v >= n || u == v) {
                    return Err(Error::Validation(format!(
                        "bad vertex in (n = {n}, m = {m}) list"
                    )));
                }
                let g = Graph::from_edges(n, edges);
                if g.edge_count() != m {
                    return Err(Error::Validation(format!(
                        "repeated edge in (n = {n}, m = {m}) list"
                    )));
                }
                if !g.is_three_connected() {
                    return Err(Error::Validation(format!(
                        "graph {edges:?} in (n = {n}, m = {m}) list is not 3-connected"
                    )));
                }
                if !seen.insert(g) {
                    return Err(Error::Validation(format!(
                        "duplicate graph in (n = {n}, m = {m}) list"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table = CoefficientTable::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = trimmed.split('\t').collect();
            let err = |message: String| Error::Parse { line, message };
            let int = |s: &str| -> Result<usize> {
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| err(format!("expected integer, found `{s}`")))
            };
            if fields[0] == "G" {
                if fields.len() != 4 {
                    return Err(err("graph record needs 4 tab-separated fields".into()));
                }
                let (n, m) = (int(fields[1])?, int(fields[2])?);
                let mut edges = Vec::new();
                for pair in fields[3].split(',').filter(|p| !p.is_empty()) {
                    let (u, v) = pair
                        .split_once('-')
                        .ok_or_else(|| err(format!("bad edge `{pair}`")))?;
                    let (u, v) = (int(u)?, int(v)?);
                    if u == 0 || v == 0 {
                        return Err(err("graph vertices are numbered from 1".into()));
                    }
                    edges.push(((u - 1).min(v - 1), (u - 1).max(v - 1)));
                }
                table.graphs.entry((n, m)).or_default().push(edges);
            } else {
                let fields: Vec<&str> = trimmed.split_whitespace().collect();
                if fields.len() != 3 {
                    return Err(err(format!(
                        "expected `n m count`, found {} fields",
                        fields.len()
                    )));
                }
                let (n, m) = (int(fields[0])?, int(fields[1])?);
                let count: BigUint = fields[2]
                    .parse()
                    .map_err(|_| err(format!("expected integer count, found `{}`", fields[2])))?;
                if table.entries.insert((n, m), count).is_some() {
                    return Err(err(format!("duplicate record for (n = {n}, m = {m})")));
                }
            }
        }
        table.validate()?;
        Ok(table)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# n\tm\tcount\n");
        for (&(n, m), count) in &self.entries {
            let _ = writeln!(out, "{n}\t{m}\t{count}");
        }
        for (&(n, m), list) in &self.graphs {
            for edges in list {
                let body: Vec<String> = edges
                    .iter()
                    .map(|&(u, v)| format!("{}-{}", u + 1, v + 1))
                    .collect();
                let _ = writeln!(out, "G\t{n}\t{m}\t{}", body.join(","));
            }
        }
        out
    }
}

pub fn load_table(path: impl AsRef<Path>) -> Result<CoefficientTable> {
    CoefficientTable::parse(&std::fs::read_to_string(path)?)
}

pub fn save_table(table: &CoefficientTable, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, table.to_text())?;
    Ok(())
}

/// All labeled 3-connected graphs on `4 ≤ n ≤ n_max` vertices, by exhaustion
/// over edge subsets. Practical up to `n_max = 7` (2²¹ subsets); `8` works
/// but takes minutes.
pub fn brute_force_three_connected(n_max: usize) -> CoefficientTable {
    assert!(
        n_max <= 8,
        "exhaustive enumeration is limited to 8 vertices"
    );
    let mut table = CoefficientTable::default();
    for n in 4..=n_max {
        let pairs = n * (n - 1) / 2;
        let min_edges = (3 * n).div_ceil(2);
        for mask in 0u64..(1u64 << pairs) {
            let m = mask.count_ones() as usize;
            if m < min_edges {
                continue;
            }
            let g = Graph::from_pair_mask(n, mask);
            if g.is_three_connected() {
                *table.entries.entry((n, m)).or_default() += 1u32;
                table.graphs.entry((n, m)).or_default().push(g.edges());
            }
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn four_vertices_only_k4() {
        let t = brute_force_three_connected(4);
        assert_eq!(t.entries.len(), 1);
        assert_eq!(t.count(4, 6), BigUint::from(1u32));
    }

    #[test]
    fn five_vertex_wheels_match_hub_cycle_count() {
        let t = brute_force_three_connected(5);
        // 5 hub choices times 3 distinct 4-cycles on the rim
        assert_eq!(t.count(5, 8), BigUint::from(5u32 * 3));
        let wheels = t.graphs[&(5, 8)]
            .iter()
            .filter(|e| Graph::from_edges(5, e).is_wheel())
            .count();
        assert_eq!(wheels, 15);
    }

    #[test]
    fn six_vertices_nine_edges_are_k33_and_prism() {
        let t = brute_force_three_connected(6);
        let list = &t.graphs[&(6, 9)];
        let k33 = list
            .iter()
            .filter(|e| Graph::from_edges(6, e).is_isomorphic(&named::k33()))
            .count();
        let prism = list
            .iter()
            .filter(|e| Graph::from_edges(6, e).is_isomorphic(&named::prism()))
            .count();
        assert_eq!(k33 as u64, named::k33().labeled_copies());
        assert_eq!(prism as u64, named::prism().labeled_copies());
        assert_eq!(k33 + prism, list.len());
    }

    #[test]
    fn empty_text_is_empty_table() {
        assert!(CoefficientTable::parse("").unwrap().is_empty());
        assert!(CoefficientTable::parse("# only a comment\n\n")
            .unwrap()
            .is_empty());
    }

    #[test]
    fn malformed_count_reports_line() {
        match CoefficientTable::parse("4\t6\t1\n4\tsix\t1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn invalid_counts_are_rejected() {
        assert!(matches!(
            CoefficientTable::parse("3\t3\t1\n"),
            Err(Error::Validation(_))
        ));
        assert!(matches!(
            CoefficientTable::parse("5\t6\t1\n"),
            Err(Error::Validation(_))
        ));
        // graph list shorter than the count
        assert!(matches!(
            CoefficientTable::parse("4\t6\t2\nG\t4\t6\t1-2,1-3,1-4,2-3,2-4,3-4\n"),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn round_trip_through_file() {
        let t = brute_force_three_connected(5);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.tsv");
        save_table(&t, &path).unwrap();
        assert_eq!(load_table(&path).unwrap(), t);
    }
}
