//! Core-size census of a network: how many cores have `k` vertices.

use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    /// core vertex count `k` (poles included) → number of cores
    pub counts: BTreeMap<usize, u64>,
    #[serde(rename = "C1")]
    pub c1: usize,
    #[serde(rename = "totalCores")]
    pub total_cores: u64,
}

impl CensusReport {
    pub fn add(&mut self, k: usize) {
        *self.counts.entry(k).or_default() += 1;
        self.total_cores += 1;
        self.c1 = self.c1.max(k);
    }

    pub fn merge(&mut self, other: &CensusReport) {
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_default() += c;
        }
        self.total_cores += other.total_cores;
        self.c1 = self.c1.max(other.c1);
    }

    /// Second-largest core size (0 if fewer than two cores).
    pub fn c2(&self) -> usize {
        let mut it = self.counts.iter().rev();
        match it.next() {
            Some((&k, &c)) if c >= 2 => k,
            Some(_) => it.next().map(|(&k, _)| k).unwrap_or(0),
            None => 0,
        }
    }

    /// Labeled vertices lying in cores, `Σ (k-2) c(k)`.
    pub fn core_labeled_vertices(&self) -> u64 {
        self.counts.iter().map(|(&k, &c)| (k as u64 - 2) * c).sum()
    }
}

impl FromIterator<usize> for CensusReport {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut c = CensusReport::default();
        for k in iter {
            c.add(k);
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_census() {
        let c = CensusReport::default();
        assert_eq!((c.c1, c.c2(), c.total_cores), (0, 0, 0));
    }

    #[test]
    fn second_largest_handles_ties() {
        let c: CensusReport = [4, 7, 7].into_iter().collect();
        assert_eq!(c.c2(), 7);
        let c: CensusReport = [4, 5, 9].into_iter().collect();
        assert_eq!(c.c2(), 5);
        assert_eq!(c.core_labeled_vertices(), 2 + 3 + 7);
    }
}
