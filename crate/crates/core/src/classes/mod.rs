//! Families of 3-connected cores.
//!
//! A class is described through its network egf `T̄(x, z)`, where `x` marks
//! the non-pole vertices and `z` the edges of a core network (a 3-connected
//! graph with one oriented edge deleted and its endpoints turned into
//! poles). Every class can evaluate `T̄` with partial derivatives, list its
//! coefficients, report its dominant singularity `ρ_T(z)` and draw cores
//! from the Boltzmann distribution of `T̄`.

pub mod table;

use crate::error::{Error, Result};
use crate::graph::{named, Graph};
use crate::polylog::polylog_tail;
use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::HashSet;
use std::fmt;
use std::sync::{Arc, OnceLock};

pub use table::{brute_force_three_connected, load_table, save_table, CoefficientTable};

/// One monomial `coeff · x^k z^m` of `T̄`; `k` counts labeled vertices and
/// `m` the edges of the core network.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TbarTerm {
    pub k: usize,
    pub m: usize,
    pub coeff: f64,
}

/// `T̄` and its partial derivatives at a point.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TbarValue {
    pub value: f64,
    pub dx: f64,
    pub dz: f64,
    pub dzz: f64,
}

impl std::ops::Add for TbarValue {
    type Output = TbarValue;
    fn add(self, o: TbarValue) -> TbarValue {
        TbarValue {
            value: self.value + o.value,
            dx: self.dx + o.dx,
            dz: self.dz + o.dz,
            dzz: self.dzz + o.dzz,
        }
    }
}

/// A core network: vertex 0 is the left pole, 1 the right pole and
/// `2..labeled+2` the labeled vertices. Edge endpoints are ordered.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreGraph {
    pub labeled: usize,
    pub edges: Vec<(u32, u32)>,
    pub origin: String,
}

impl CoreGraph {
    /// The underlying 3-connected graph, i.e. the network plus the pole edge.
    pub fn closed_graph(&self) -> Graph {
        let mut g = Graph::new(self.labeled + 2);
        for &(u, v) in &self.edges {
            g.add_edge(u as usize, v as usize);
        }
        g.add_edge(0, 1);
        g
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreSample {
    Graph(CoreGraph),
    SizeOnly { k: usize, m: usize },
}

impl CoreSample {
    pub fn labeled(&self) -> usize {
        match self {
            CoreSample::Graph(g) => g.labeled,
            CoreSample::SizeOnly { k, .. } => *k,
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            CoreSample::Graph(g) => g.edges.len(),
            CoreSample::SizeOnly { m, .. } => *m,
        }
    }
}

/// A single fixed 3-connected graph together with all of its labeled copies.
#[derive(Clone, Debug)]
pub struct FixedCore {
    name: String,
    graph: Graph,
    copies: u64,
}

impl FixedCore {
    pub fn new(name: impl Into<String>, graph: Graph) -> Result<Self> {
        if !graph.is_three_connected() {
            return Err(Error::Validation(
                "fixed core graph is not 3-connected".into(),
            ));
        }
        let copies = graph.labeled_copies();
        Ok(FixedCore {
            name: name.into(),
            graph,
            copies,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Number of labeled copies on its vertex set (`n!/|Aut|`).
    pub fn copies(&self) -> u64 {
        self.copies
    }

    fn term(&self) -> TbarTerm {
        let n = self.graph.vertex_count();
        let m = self.graph.edge_count();
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        TbarTerm {
            k: n - 2,
            m: m - 1,
            coeff: 2.0 * m as f64 * self.copies as f64 / fact,
        }
    }
}

/// A class given by a coefficient table.
#[derive(Clone, Debug)]
pub struct TableCore {
    source: String,
    table: Arc<CoefficientTable>,
    members: Arc<OnceLock<HashSet<Graph>>>,
}

impl TableCore {
    pub fn new(source: impl Into<String>, table: CoefficientTable) -> Self {
        TableCore {
            source: source.into(),
            table: Arc::new(table),
            members: Arc::new(OnceLock::new()),
        }
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    fn has_all_graphs(&self) -> bool {
        self.table
            .entries
            .iter()
            .all(|(key, c)| c.is_zero() || self.table.graphs.contains_key(key))
    }

    fn terms(&self) -> Vec<TbarTerm> {
        self.table
            .entries
            .keys()
            .map(|&(n, m)| TbarTerm {
                k: n - 2,
                m: m - 1,
                coeff: self.table.tbar_term(n, m),
            })
            .filter(|t| t.coeff > 0.0)
            .collect()
    }
}

/// `T̄(x, z) = λ Σ_{k ≥ min_size} k^{-α-1} (x z² / r)^k`: a class with
/// prescribed singular exponent `α` and `ρ_T(z) = r/z²` (`r` defaults to 1). It only exists at
/// the level of sizes; there are no concrete graphs behind it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SyntheticCore {
    pub alpha: f64,
    pub lambda: f64,
    pub min_size: usize,
    pub radius: f64,
}

impl SyntheticCore {
    pub fn new(alpha: f64, lambda: f64, min_size: usize) -> Result<Self> {
        if !(alpha > 0.0) || (alpha - alpha.round()).abs() < 1e-9 {
            return Err(Error::ClassSpec(format!(
                "synthetic alpha must be positive and non-integer, got {alpha}"
            )));
        }
        if !(lambda > 0.0) {
            return Err(Error::ClassSpec(format!(
                "synthetic lambda must be positive, got {lambda}"
            )));
        }
        if min_size < 2 {
            return Err(Error::ClassSpec(
                "synthetic min size must be at least 2".into(),
            ));
        }
        Ok(SyntheticCore {
            alpha,
            lambda,
            min_size,
            radius: 1.0,
        })
    }

    pub fn with_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::ClassSpec(format!(
                "synthetic radius must be positive, got {radius}"
            )));
        }
        self.radius = radius;
        Ok(self)
    }

    /// `x z² / r`, clamped to the closed unit interval.
    fn reduced(&self, x: f64, z: f64) -> f64 {
        (x * z * z / self.radius).min(1.0)
    }

    /// `λ k^{-α-1} r^{-k} σ^k`, formed in log space.
    fn scaled_weight(&self, k: usize, sigma: f64) -> f64 {
        let kf = k as f64;
        (self.lambda.ln() - self.order() * kf.ln() + kf * (sigma / self.radius).ln()).exp()
    }

    fn order(&self) -> f64 {
        self.alpha + 1.0
    }

    fn weight(&self, k: usize) -> f64 {
        self.lambda * (k as f64).powf(-self.order())
    }
}

#[derive(Clone, Debug)]
pub enum CoreClass {
    Wheels,
    Fixed(FixedCore),
    Union(Vec<CoreClass>),
    Table(TableCore),
    Synthetic(SyntheticCore),
}

impl fmt::Display for CoreClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreClass::Wheels => write!(f, "wheels"),
            CoreClass::Fixed(c) => write!(f, "{}", c.name),
            CoreClass::Union(members) => {
                let names: Vec<String> = members.iter().map(|m| m.to_string()).collect();
                write!(f, "{}", names.join("+"))
            }
            CoreClass::Table(t) => write!(f, "table:{}", t.source),
            CoreClass::Synthetic(s) => {
                write!(f, "synthetic:alpha={},lambda={}", s.alpha, s.lambda)?;
                if s.radius != 1.0 {
                    write!(f, ",radius={}", s.radius)?;
                }
                if s.min_size != 2 {
                    write!(f, ",min={}", s.min_size)?;
                }
                Ok(())
            }
        }
    }
}

fn named_core(name: &str) -> Result<CoreClass> {
    let graph = match name {
        "k4" => named::complete(4),
        "k33" => named::k33(),
        "prism" => named::prism(),
        "k5" => named::complete(5),
        _ => return Err(Error::ClassSpec(name.to_string())),
    };
    Ok(CoreClass::Fixed(FixedCore::new(name, graph)?))
}

impl CoreClass {
    /// Parses `wheels`, `k4`, `k33`, `prism`, `k5`, sums like
    /// `wheels+k33+prism`, `table:<path>` and
    /// `synthetic:alpha=<a>,lambda=<l>[,min=<k>]`.
    pub fn parse(spec: &str) -> Result<CoreClass> {
        let spec = spec.trim();
        if let Some(path) = spec.strip_prefix("table:") {
            let table = load_table(path)?;
            return Ok(CoreClass::Table(TableCore::new(path, table)));
        }
        if let Some(params) = spec.strip_prefix("synthetic:") {
            let (mut alpha, mut lambda, mut min, mut radius) = (None, None, 2usize, 1.0f64);
            for kv in params.split(',') {
                let (key, value) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::ClassSpec(spec.into()))?;
                let bad = || Error::ClassSpec(spec.to_string());
                match key.trim() {
                    "alpha" => alpha = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
                    "lambda" => lambda = Some(value.trim().parse::<f64>().map_err(|_| bad())?),
                    "min" => min = value.trim().parse::<usize>().map_err(|_| bad())?,
                    "radius" => radius = value.trim().parse::<f64>().map_err(|_| bad())?,
                    _ => return Err(bad()),
                }
            }
            let (alpha, lambda) = alpha
                .zip(lambda)
                .ok_or_else(|| Error::ClassSpec(spec.into()))?;
            return Ok(CoreClass::Synthetic(
                SyntheticCore::new(alpha, lambda, min)?.with_radius(radius)?,
            ));
        }
        let mut members = Vec::new();
        for part in spec.split('+') {
            members.push(match part.trim() {
                "wheels" => CoreClass::Wheels,
                other => named_core(other)?,
            });
        }
        Ok(if members.len() == 1 {
            members.pop().unwrap()
        } else {
            CoreClass::Union(members)
        })
    }

    pub fn synthetic(alpha: f64, lambda: f64) -> Result<CoreClass> {
        Ok(CoreClass::Synthetic(SyntheticCore::new(alpha, lambda, 2)?))
    }

    /// The wheels together with `K₃,₃` and the prism.
    pub fn wheels_k33_prism() -> CoreClass {
        CoreClass::parse("wheels+k33+prism").expect("built-in class")
    }

    /// True when cores are only available as `(k, m)` sizes.
    pub fn size_only(&self) -> bool {
        match self {
            CoreClass::Synthetic(_) => true,
            CoreClass::Union(m) => m.iter().any(CoreClass::size_only),
            _ => false,
        }
    }

    /// True when `T̄` is a polynomial (finite class), so `ρ_T = ∞`.
    pub fn is_entire(&self) -> bool {
        match self {
            CoreClass::Fixed(_) | CoreClass::Table(_) => true,
            CoreClass::Union(m) => m.iter().all(CoreClass::is_entire),
            _ => false,
        }
    }

    /// True when `T̄` has a pole rather than a fractional-power singularity.
    pub fn has_pole_singularity(&self) -> bool {
        match self {
            CoreClass::Wheels => true,
            CoreClass::Union(m) => m.iter().any(CoreClass::has_pole_singularity),
            _ => false,
        }
    }

    /// Singular exponent of `T̄`, when it is declared by the class.
    pub fn singular_exponent(&self) -> Option<f64> {
        match self {
            CoreClass::Synthetic(s) => Some(s.alpha),
            CoreClass::Union(m) => m.iter().find_map(CoreClass::singular_exponent),
            _ => None,
        }
    }

    /// All monomials of `T̄` with `k ≤ max_k`, in no particular order.
    pub fn terms(&self, max_k: usize) -> Vec<TbarTerm> {
        match self {
            CoreClass::Wheels => {
                let mut out = Vec::new();
                if max_k >= 2 {
                    out.push(TbarTerm {
                        k: 2,
                        m: 5,
                        coeff: 0.5,
                    });
                }
                for k in 3..=max_k {
                    out.push(TbarTerm {
                        k,
                        m: 2 * k + 1,
                        coeff: 2.0,
                    });
                }
                out
            }
            CoreClass::Fixed(c) => {
                let t = c.term();
                if t.k <= max_k {
                    vec![t]
                } else {
                    vec![]
                }
            }
            CoreClass::Union(members) => members.iter().flat_map(|m| m.terms(max_k)).collect(),
            CoreClass::Table(t) => t.terms().into_iter().filter(|t| t.k <= max_k).collect(),
            CoreClass::Synthetic(s) => (s.min_size..=max_k)
                .map(|k| TbarTerm {
                    k,
                    m: 2 * k,
                    coeff: s.scaled_weight(k, 1.0),
                })
                .collect(),
        }
    }

    /// Terms of `T̄(σx, z)`, i.e. with `σ^k` folded into the coefficient.
    pub fn scaled_terms(&self, max_k: usize, sigma: f64) -> Vec<TbarTerm> {
        match self {
            CoreClass::Synthetic(s) => (s.min_size..=max_k)
                .map(|k| TbarTerm {
                    k,
                    m: 2 * k,
                    coeff: s.scaled_weight(k, sigma),
                })
                .collect(),
            CoreClass::Union(members) => members
                .iter()
                .flat_map(|m| m.scaled_terms(max_k, sigma))
                .collect(),
            _ => self
                .terms(max_k)
                .into_iter()
                .map(|t| TbarTerm {
                    coeff: t.coeff * sigma.powi(t.k as i32),
                    ..t
                })
                .collect(),
        }
    }

    /// `[x^k] T̄(x, z)`.
    pub fn tbar_coeff(&self, k: usize, z: f64) -> f64 {
        match self {
            CoreClass::Wheels => match k {
                0 | 1 => 0.0,
                2 => z.powi(5) / 2.0,
                _ => 2.0 * z.powi(2 * k as i32 + 1),
            },
            CoreClass::Fixed(c) => {
                let t = c.term();
                if t.k == k {
                    t.coeff * z.powi(t.m as i32)
                } else {
                    0.0
                }
            }
            CoreClass::Union(members) => members.iter().map(|m| m.tbar_coeff(k, z)).sum(),
            CoreClass::Table(t) => t
                .table
                .entries
                .keys()
                .filter(|&&(n, _)| n == k + 2)
                .map(|&(n, m)| t.table.tbar_term(n, m) * z.powi(m as i32 - 1))
                .sum(),
            CoreClass::Synthetic(s) => {
                if k < s.min_size {
                    0.0
                } else {
                    s.scaled_weight(k, z * z)
                }
            }
        }
    }

    /// `[x^k]T̄(·, z) · x^k`, evaluated without forming `z^m` and `x^k`
    /// separately (both overflow for large `k`).
    pub fn term_value(&self, k: usize, x: f64, z: f64) -> f64 {
        match self {
            CoreClass::Wheels => match k {
                0 | 1 => 0.0,
                2 => x * x * z.powi(5) / 2.0,
                _ => 2.0 * z * (x * z * z).powi(k as i32),
            },
            CoreClass::Synthetic(s) => {
                if k < s.min_size {
                    0.0
                } else {
                    s.weight(k) * s.reduced(x, z).powi(k as i32)
                }
            }
            CoreClass::Union(members) => members.iter().map(|m| m.term_value(k, x, z)).sum(),
            CoreClass::Fixed(_) | CoreClass::Table(_) => self.tbar_coeff(k, z) * x.powi(k as i32),
        }
    }

    /// Dominant singularity `ρ_T(z)` of `T̄(·, z)`; `+∞` for polynomials.
    pub fn rho_t(&self, z: f64) -> f64 {
        match self {
            CoreClass::Wheels => 1.0 / (z * z),
            CoreClass::Synthetic(s) => s.radius / (z * z),
            CoreClass::Fixed(_) | CoreClass::Table(_) => f64::INFINITY,
            CoreClass::Union(members) => members
                .iter()
                .map(|m| m.rho_t(z))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Whether `T̄` stays finite at `x = ρ_T(z)` (then the boundary belongs
    /// to the domain).
    pub fn finite_at_boundary(&self) -> bool {
        match self {
            CoreClass::Wheels => false,
            CoreClass::Synthetic(_) | CoreClass::Fixed(_) | CoreClass::Table(_) => true,
            CoreClass::Union(m) => m.iter().all(CoreClass::finite_at_boundary),
        }
    }

    /// True when `(x, z)` is inside the domain of analyticity (or on a
    /// boundary where `T̄` is still finite).
    pub fn in_domain(&self, x: f64, z: f64) -> bool {
        let rho = self.rho_t(z);
        x >= 0.0 && z > 0.0 && (x < rho || (x <= rho * (1.0 + 1e-13) && self.finite_at_boundary()))
    }

    /// `T̄` with `∂/∂x`, `∂/∂z`, `∂²/∂z²`.
    pub fn tbar_eval(&self, x: f64, z: f64) -> Result<TbarValue> {
        if !self.in_domain(x, z) {
            return Err(Error::OutsideDomain { x, z });
        }
        Ok(match self {
            CoreClass::Wheels => wheels_eval(x, z),
            CoreClass::Fixed(c) => monomial_eval(c.term(), x, z),
            CoreClass::Table(t) => t
                .terms()
                .into_iter()
                .map(|term| monomial_eval(term, x, z))
                .fold(TbarValue::default(), |a, b| a + b),
            CoreClass::Union(members) => {
                let mut acc = TbarValue::default();
                for m in members {
                    acc = acc + m.tbar_eval(x, z)?;
                }
                acc
            }
            CoreClass::Synthetic(s) => synthetic_eval(s, x, z),
        })
    }

    /// `Σ_{k ≥ from} [x^k]T̄(x, z) · x^k`.
    pub fn tail_sum(&self, from: usize, x: f64, z: f64) -> f64 {
        match self {
            CoreClass::Wheels => {
                let w = x * z * z;
                let k4 = if from <= 2 {
                    x * x * z.powi(5) / 2.0
                } else {
                    0.0
                };
                let k0 = from.max(3) as i32;
                k4 + 2.0 * z * w.powi(k0) / (1.0 - w)
            }
            CoreClass::Synthetic(s) => {
                let w = s.reduced(x, z);
                s.lambda * polylog_tail(s.order(), w, from.max(s.min_size) as u64)
            }
            CoreClass::Union(members) => members.iter().map(|m| m.tail_sum(from, x, z)).sum(),
            CoreClass::Fixed(_) | CoreClass::Table(_) => self
                .terms(usize::MAX / 2)
                .into_iter()
                .filter(|t| t.k >= from)
                .map(|t| t.coeff * x.powi(t.k as i32) * z.powi(t.m as i32))
                .sum(),
        }
    }

    /// Smallest labeled size with a nonzero coefficient.
    pub fn min_labeled(&self) -> usize {
        self.terms(64)
            .iter()
            .map(|t| t.k)
            .min()
            .unwrap_or(usize::MAX)
    }

    /// Membership of a 3-connected graph (pole edge included); `None` when
    /// the class cannot decide (size-only classes, tables without graphs).
    pub fn contains_core(&self, g: &Graph) -> Option<bool> {
        match self {
            CoreClass::Wheels => Some(g.is_wheel()),
            CoreClass::Fixed(c) => Some(g.is_isomorphic(&c.graph)),
            CoreClass::Synthetic(_) => None,
            CoreClass::Table(t) => {
                if !t.has_all_graphs() {
                    return None;
                }
                let set = t.members.get_or_init(|| {
                    t.table
                        .graphs
                        .iter()
                        .flat_map(|(&(n, _), list)| {
                            list.iter().map(move |e| Graph::from_edges(n, e))
                        })
                        .collect()
                });
                Some(set.contains(g))
            }
            CoreClass::Union(members) => {
                let mut undecided = false;
                for m in members {
                    match m.contains_core(g) {
                        Some(true) => return Some(true),
                        None => undecided = true,
                        Some(false) => {}
                    }
                }
                if undecided {
                    None
                } else {
                    Some(false)
                }
            }
        }
    }

    /// Draws one core from the Boltzmann distribution of `T̄` at `(x, z)`.
    pub fn sample_core<R: Rng + ?Sized>(&self, x: f64, z: f64, rng: &mut R) -> Result<CoreSample> {
        let sampler = CoreSampler::new(self, x, z, None)?;
        if self.size_only() {
            let (k, m) = sampler.draw_size(rng, usize::MAX).expect("uncapped draw");
            Ok(CoreSample::SizeOnly { k, m })
        } else {
            Ok(CoreSample::Graph(sampler.draw_graph(rng)?))
        }
    }
}

fn monomial_eval(t: TbarTerm, x: f64, z: f64) -> TbarValue {
    let (k, m) = (t.k as i32, t.m as i32);
    let xk = x.powi(k);
    let zm = z.powi(m);
    let xk1 = if k >= 1 { x.powi(k - 1) } else { 0.0 };
    let zm1 = if m >= 1 { z.powi(m - 1) } else { 0.0 };
    let zm2 = if m >= 2 { z.powi(m - 2) } else { 0.0 };
    TbarValue {
        value: t.coeff * xk * zm,
        dx: t.coeff * k as f64 * xk1 * zm,
        dz: t.coeff * m as f64 * xk * zm1,
        dzz: t.coeff * (m * (m - 1)) as f64 * xk * zm2,
    }
}

/// `T̄ = x²z⁵/2 + 2x³z⁷/(1 - xz²)`: `K₄` plus wheels with rim at least 4.
fn wheels_eval(x: f64, z: f64) -> TbarValue {
    let w = x * z * z;
    let q = 1.0 - w;
    let k4 = TbarValue {
        value: x * x * z.powi(5) / 2.0,
        dx: x * z.powi(5),
        dz: 2.5 * x * x * z.powi(4),
        dzz: 10.0 * x * x * z.powi(3),
    };
    let x3 = x * x * x;
    let rim = TbarValue {
        value: 2.0 * x3 * z.powi(7) / q,
        dx: 2.0 * x * x * z.powi(7) * (3.0 - 2.0 * w) / (q * q),
        dz: 2.0 * x3 * z.powi(6) * (7.0 - 5.0 * w) / (q * q),
        dzz: 2.0 * x3 * z.powi(5) * (42.0 / q + 30.0 * w / (q * q) + 8.0 * w * w / (q * q * q)),
    };
    k4 + rim
}

fn synthetic_eval(s: &SyntheticCore, x: f64, z: f64) -> TbarValue {
    let w = s.reduced(x, z);
    let from = s.min_size as u64;
    let order = s.order();
    let l0 = polylog_tail(order, w, from);
    let l1 = polylog_tail(order - 1.0, w, from);
    // the second z-derivative diverges at w = 1 when alpha <= 2
    let l2 = if w < 1.0 || order - 2.0 > 1.0 {
        polylog_tail(order - 2.0, w, from)
    } else {
        f64::INFINITY
    };
    let dx = if x > 0.0 {
        s.lambda * l1 / x
    } else if s.min_size == 1 {
        s.lambda * z * z / s.radius
    } else {
        0.0
    };
    TbarValue {
        value: s.lambda * l0,
        dx,
        dz: 2.0 * s.lambda * l1 / z,
        dzz: s.lambda * (4.0 * l2 - 2.0 * l1) / (z * z),
    }
}

/// Assembles a core network from a 3-connected graph by deleting a
/// uniformly chosen oriented edge, making its endpoints the poles and
/// labeling the remaining vertices uniformly at random.
pub fn core_network_from_graph<R: Rng + ?Sized>(g: &Graph, origin: &str, rng: &mut R) -> CoreGraph {
    let edges = g.edges();
    let (mut left, mut right) = edges[rng.random_range(0..edges.len())];
    if rng.random_bool(0.5) {
        std::mem::swap(&mut left, &mut right);
    }
    let n = g.vertex_count();
    let mut rest: Vec<u32> = (2..n as u32).collect();
    rest.shuffle(rng);
    let mut map = vec![0u32; n];
    map[left] = 0;
    map[right] = 1;
    let mut it = rest.into_iter();
    for (v, slot) in map.iter_mut().enumerate() {
        if v != left && v != right {
            *slot = it.next().unwrap();
        }
    }
    let mut out: Vec<(u32, u32)> = edges
        .into_iter()
        .filter(|&(u, v)| !((u == left && v == right) || (u == right && v == left)))
        .map(|(u, v)| (map[u].min(map[v]), map[u].max(map[v])))
        .collect();
    out.sort_unstable();
    CoreGraph {
        labeled: n - 2,
        edges: out,
        origin: origin.to_string(),
    }
}

#[derive(Clone, Debug)]
enum SamplerKind {
    Wheels {
        p_k4: f64,
        w: f64,
    },
    Fixed(FixedCore),
    Table {
        cum: Vec<f64>,
        keys: Vec<(usize, usize)>,
        core: TableCore,
    },
    Union {
        cum: Vec<f64>,
        members: Vec<CoreSampler>,
    },
    Synthetic {
        cum: Vec<f64>,
        first: usize,
        core: SyntheticCore,
        w: f64,
        total: f64,
    },
}

/// Precomputed Boltzmann sampler for `T̄` at a fixed `(x, z)`.
#[derive(Clone, Debug)]
pub struct CoreSampler {
    kind: SamplerKind,
}

fn pick(cum: &[f64], u: f64) -> usize {
    cum.partition_point(|&c| c < u).min(cum.len() - 1)
}

impl CoreSampler {
    /// `size_hint` bounds the largest core size tabulated for classes with
    /// infinite support; draws beyond the table are still exact but slower.
    pub fn new(class: &CoreClass, x: f64, z: f64, size_hint: Option<usize>) -> Result<Self> {
        if !class.in_domain(x, z) || x <= 0.0 {
            return Err(Error::OutsideDomain { x, z });
        }
        let kind = match class {
            CoreClass::Wheels => {
                let total = wheels_eval(x, z).value;
                SamplerKind::Wheels {
                    p_k4: x * x * z.powi(5) / 2.0 / total,
                    w: x * z * z,
                }
            }
            CoreClass::Fixed(c) => SamplerKind::Fixed(c.clone()),
            CoreClass::Table(t) => {
                let mut keys = Vec::new();
                let mut cum = Vec::new();
                let mut acc = 0.0;
                for (&(n, m), count) in &t.table.entries {
                    if count.is_zero() {
                        continue;
                    }
                    acc += t.table.tbar_term(n, m) * x.powi(n as i32 - 2) * z.powi(m as i32 - 1);
                    keys.push((n, m));
                    cum.push(acc);
                }
                if keys.is_empty() {
                    return Err(Error::Validation(
                        "empty table class cannot be sampled".into(),
                    ));
                }
                cum.iter_mut().for_each(|c| *c /= acc);
                SamplerKind::Table {
                    cum,
                    keys,
                    core: t.clone(),
                }
            }
            CoreClass::Union(members) => {
                let mut cum = Vec::new();
                let mut acc = 0.0;
                let mut samplers = Vec::new();
                for m in members {
                    acc += m.tbar_eval(x, z)?.value;
                    cum.push(acc);
                    samplers.push(CoreSampler::new(m, x, z, size_hint)?);
                }
                cum.iter_mut().for_each(|c| *c /= acc);
                SamplerKind::Union {
                    cum,
                    members: samplers,
                }
            }
            CoreClass::Synthetic(s) => {
                let w = s.reduced(x, z);
                let total = polylog_tail(s.order(), w, s.min_size as u64);
                let limit = size_hint.unwrap_or(1 << 20).clamp(s.min_size + 1, 1 << 22);
                let mut cum = Vec::new();
                let mut acc = 0.0;
                let mut wk = w.powi(s.min_size as i32);
                for k in s.min_size..=limit {
                    acc += (k as f64).powf(-s.order()) * wk / total;
                    cum.push(acc);
                    wk *= w;
                    if acc >= 1.0 - 1e-15 {
                        break;
                    }
                }
                SamplerKind::Synthetic {
                    cum,
                    first: s.min_size,
                    core: *s,
                    w,
                    total,
                }
            }
        };
        Ok(CoreSampler { kind })
    }

    /// Draws `(k, m)`, or `None` when the drawn core has more than `cap`
    /// labeled vertices (the exact value is then not resolved).
    pub fn draw_size<R: Rng + ?Sized>(&self, rng: &mut R, cap: usize) -> Option<(usize, usize)> {
        let drawn = match &self.kind {
            SamplerKind::Wheels { p_k4, w } => {
                if rng.random::<f64>() < *p_k4 {
                    (2, 5)
                } else {
                    // geometric on k >= 3 with ratio w
                    let u: f64 = 1.0 - rng.random::<f64>();
                    let extra = (u.ln() / w.ln()).floor();
                    if !extra.is_finite() || extra > (cap as f64) {
                        return None;
                    }
                    let k = 3 + extra as usize;
                    (k, 2 * k + 1)
                }
            }
            SamplerKind::Fixed(c) => {
                let t = c.term();
                (t.k, t.m)
            }
            SamplerKind::Table { cum, keys, .. } => {
                let (n, m) = keys[pick(cum, rng.random::<f64>())];
                (n - 2, m - 1)
            }
            SamplerKind::Union { cum, members } => {
                return members[pick(cum, rng.random::<f64>())].draw_size(rng, cap);
            }
            SamplerKind::Synthetic {
                cum,
                first,
                core,
                w,
                total,
            } => {
                let u: f64 = rng.random();
                let last = *cum.last().unwrap();
                if u <= last {
                    let k = first + pick(cum, u);
                    (k, 2 * k)
                } else {
                    let mut k = first + cum.len() - 1;
                    if k >= cap {
                        return None;
                    }
                    let mut acc = last;
                    loop {
                        k += 1;
                        if k > cap {
                            return None;
                        }
                        acc += (k as f64).powf(-core.order()) * w.powi(k as i32) / total;
                        if u <= acc || k as u64 > 1 << 40 {
                            break;
                        }
                    }
                    (k, 2 * k)
                }
            }
        };
        if drawn.0 > cap {
            None
        } else {
            Some(drawn)
        }
    }

    pub fn draw_graph<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<CoreGraph> {
        match &self.kind {
            SamplerKind::Wheels { .. } => {
                let (k, _) = self.draw_size(rng, usize::MAX).expect("uncapped");
                let g = if k == 2 {
                    named::complete(4)
                } else {
                    named::wheel(k + 1)
                };
                Ok(core_network_from_graph(&g, "wheels", rng))
            }
            SamplerKind::Fixed(c) => Ok(core_network_from_graph(&c.graph, &c.name, rng)),
            SamplerKind::Table { cum, keys, core } => {
                let (n, m) = keys[pick(cum, rng.random::<f64>())];
                let list =
                    core.table
                        .graphs
                        .get(&(n, m))
                        .ok_or_else(|| Error::MissingGraphList {
                            n,
                            m,
                            count: core.table.count(n, m).to_string(),
                        })?;
                let edges = &list[rng.random_range(0..list.len())];
                let g = Graph::from_edges(n, edges);
                Ok(core_network_from_graph(&g, "table", rng))
            }
            SamplerKind::Union { cum, members } => {
                members[pick(cum, rng.random::<f64>())].draw_graph(rng)
            }
            SamplerKind::Synthetic { core, .. } => Err(Error::SizeOnlyClass(
                CoreClass::Synthetic(*core).to_string(),
            )),
        }
    }
}

/// Exact `T̄` coefficient from table counts, as a rational `2m·count / n!`
/// returned as `(numerator, denominator)`.
pub fn exact_table_term(table: &CoefficientTable, n: usize, m: usize) -> (BigUint, BigUint) {
    let num = table.count(n, m) * BigUint::from(2 * m);
    let den: BigUint = (1..=n).map(BigUint::from).product();
    (num, den)
}

/// Lossy conversion used in reports.
pub fn big_to_f64(b: &BigUint) -> f64 {
    b.to_f64().unwrap_or(f64::INFINITY)
}
