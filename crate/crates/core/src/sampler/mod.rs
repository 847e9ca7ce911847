//! Boltzmann samplers `Γ_N, Γ_S, Γ_P, Γ_H` for networks, with trace
//! recording, exact-size rejection and a size-only mode.
//!
//! Recursion is run on an explicit work stack. Vertex `0` is the left pole,
//! `1` the right pole, and vertex `i + 1` carries label `i`.

mod poisson;

pub use poisson::{draw_truncated_poisson, TruncatedPoisson};

use crate::analysis::{solve_gf_values, GfValues, SingularityReport};
use crate::census::CensusReport;
use crate::classes::{CoreClass, CoreSampler};
use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::Serialize;

const DEFAULT_STEP_BUDGET: u64 = 1 << 36;

/// Immutable sampling parameters at one point `(x, y)`.
#[derive(Clone, Debug)]
pub struct SamplerContext {
    class: CoreClass,
    gf: GfValues,
    net_cum: [f64; 3],
    ser_cum: [f64; 2],
    q_par: f64,
    sh_s: f64,
    po1: TruncatedPoisson,
    po2: TruncatedPoisson,
    core: CoreSampler,
    abort_size: Option<usize>,
    size_only: bool,
    step_budget: u64,
}

impl SamplerContext {
    /// Solves the system at `(x, y)` and prepares the sampler there.
    pub fn new(class: &CoreClass, x: f64, y: f64) -> Result<Self> {
        Self::from_gf(class, solve_gf_values(class, x, y)?, None)
    }

    /// The singular sampler, at `x = ρ_N(y)`.
    pub fn singular(
        class: &CoreClass,
        report: &SingularityReport,
        size_hint: Option<usize>,
    ) -> Result<Self> {
        Self::from_gf(class, report.gf, size_hint)
    }

    /// `size_hint` bounds the tabulated core sizes (see [`CoreSampler::new`]).
    pub fn from_gf(class: &CoreClass, gf: GfValues, size_hint: Option<usize>) -> Result<Self> {
        let GfValues { x, y, n, s, p, h } = gf;
        if !(x > 0.0 && y > 0.0 && s > 0.0 && p > 0.0 && h > 0.0) {
            return Err(Error::Validation(format!(
                "sampler needs positive x, y, S, P, H, got {gf:?}"
            )));
        }
        let u = s + h;
        let net_cum = [y / n, (y + s) / n, (y + s + p) / n];
        let ser_total = y + p + h;
        let ser_cum = [y / ser_total, (y + p) / ser_total];
        let q_par = (u.exp_m1() - u) / p;
        let core = CoreSampler::new(class, x, n, size_hint)?;
        Ok(SamplerContext {
            class: class.clone(),
            gf,
            net_cum,
            ser_cum,
            q_par,
            sh_s: s / u,
            po1: TruncatedPoisson::new(u, 1),
            po2: TruncatedPoisson::new(u, 2),
            core,
            abort_size: None,
            size_only: class.size_only(),
            step_budget: DEFAULT_STEP_BUDGET,
        })
    }

    pub fn with_abort_size(mut self, abort: Option<usize>) -> Self {
        self.abort_size = abort;
        self
    }

    /// Size-only output; forced for classes without a graph-level sampler.
    pub fn with_size_only(mut self, size_only: bool) -> Self {
        self.size_only = size_only || self.class.size_only();
        self
    }

    pub fn with_step_budget(mut self, budget: u64) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn class(&self) -> &CoreClass {
        &self.class
    }

    pub fn gf(&self) -> &GfValues {
        &self.gf
    }

    pub fn abort_size(&self) -> Option<usize> {
        self.abort_size
    }

    pub fn size_only(&self) -> bool {
        self.size_only
    }

    /// `Net` over `(e, S, P, H)`.
    pub fn p_net(&self) -> [f64; 4] {
        let c = self.net_cum;
        [c[0], c[1] - c[0], c[2] - c[1], 1.0 - c[2]]
    }

    /// `Ser` over `(e, P, H)`.
    pub fn p_ser(&self) -> [f64; 3] {
        let c = self.ser_cum;
        [c[0], c[1] - c[0], 1.0 - c[1]]
    }

    /// Probability that `Par = 2`, i.e. no direct pole edge.
    pub fn q_par(&self) -> f64 {
        self.q_par
    }

    /// `sh` over `(S, H)`.
    pub fn p_sh(&self) -> [f64; 2] {
        [self.sh_s, 1.0 - self.sh_s]
    }

    pub fn poisson_rate(&self) -> f64 {
        self.gf.s + self.gf.h
    }
}

/// Counters and lists consumed by one run of `Γ_N`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SamplerTrace {
    pub a_net: u64,
    pub a_ser: u64,
    pub a_par: u64,
    pub a_sh: u64,
    pub a1: u64,
    pub a2: u64,
    pub a_t: u64,
    /// labeled-vertex count of each core drawn
    pub core_sizes: Vec<u32>,
    pub core_edges: Vec<u32>,
    /// draws of `Net` equal to `e, S, P, H`
    pub net_symbols: [u64; 4],
    /// draws of `Ser` equal to `e, P, H`
    pub ser_symbols: [u64; 3],
    /// draws of `Par` equal to `1, 2`
    pub par_values: [u64; 2],
    /// draws of `sh` equal to `S, H`
    pub sh_symbols: [u64; 2],
    /// sum of all truncated-Poisson draws
    pub poisson_total: u64,
}

impl SamplerTrace {
    pub fn clear(&mut self) {
        let (mut sizes, mut edges) = (
            std::mem::take(&mut self.core_sizes),
            std::mem::take(&mut self.core_edges),
        );
        sizes.clear();
        edges.clear();
        *self = SamplerTrace {
            core_sizes: sizes,
            core_edges: edges,
            ..Default::default()
        };
    }

    /// `V_T`, labeled vertices inside cores.
    pub fn v_t(&self) -> u64 {
        self.core_sizes.iter().map(|&k| k as u64).sum()
    }

    /// `E_T`, edges of the drawn core networks.
    pub fn e_t(&self) -> u64 {
        self.core_edges.iter().map(|&m| m as u64).sum()
    }

    /// Identities relating the counters to the output; returns the violated
    /// ones (empty when all hold).
    pub fn identity_violations(&self, vertices: u64, edges: u64) -> Vec<String> {
        let checks: [(&str, u64, u64); 10] = [
            ("v(N) = aSer + V_T", vertices, self.a_ser + self.v_t()),
            (
                "e(N) = #Net(e) + #Ser(e) + #Par(1)",
                edges,
                self.net_symbols[0] + self.ser_symbols[0] + self.par_values[0],
            ),
            (
                "aNet = 1 + aSer + E_T",
                self.a_net,
                1 + self.a_ser + self.e_t(),
            ),
            ("a1 + a2 = aPar", self.a1 + self.a2, self.a_par),
            ("a1 = #Par(1)", self.a1, self.par_values[0]),
            ("a2 = #Par(2)", self.a2, self.par_values[1]),
            (
                "aPar = #Net(P) + #Ser(P)",
                self.a_par,
                self.net_symbols[2] + self.ser_symbols[1],
            ),
            ("aSh = sum of Poisson draws", self.a_sh, self.poisson_total),
            (
                "aSer = #Net(S) + #sh(S)",
                self.a_ser,
                self.net_symbols[1] + self.sh_symbols[0],
            ),
            (
                "aT = #Net(H) + #Ser(H) + #sh(H)",
                self.a_t,
                self.net_symbols[3] + self.ser_symbols[2] + self.sh_symbols[1],
            ),
        ];
        checks
            .iter()
            .filter(|(_, l, r)| l != r)
            .map(|(name, l, r)| format!("{name}: {l} != {r}"))
            .collect()
    }

    pub fn identities_hold(&self, vertices: u64, edges: u64) -> bool {
        self.identity_violations(vertices, edges).is_empty()
    }
}

/// Census over total core vertex counts `k = coreSize + 2`.
pub fn core_census_from_trace(trace: &SamplerTrace) -> CensusReport {
    trace.core_sizes.iter().map(|&k| k as usize + 2).collect()
}

/// A sampled network. In size-only mode only the counts are kept.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    labeled: usize,
    edge_count: usize,
    edges: Option<Vec<(u32, u32)>>,
}

impl Network {
    /// Network on `labeled` labeled vertices; vertices `0`, `1` are the poles.
    pub fn from_edges(labeled: usize, mut edges: Vec<(u32, u32)>) -> Self {
        for e in edges.iter_mut() {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        edges.sort_unstable();
        Network {
            labeled,
            edge_count: edges.len(),
            edges: Some(edges),
        }
    }

    pub fn size_only(labeled: usize, edge_count: usize) -> Self {
        Network {
            labeled,
            edge_count,
            edges: None,
        }
    }

    pub fn labeled_vertex_count(&self) -> usize {
        self.labeled
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn is_size_only(&self) -> bool {
        self.edges.is_none()
    }

    pub fn edges(&self) -> Option<&[(u32, u32)]> {
        self.edges.as_deref()
    }

    /// The network as a graph on `labeled + 2` vertices, poles `0` and `1`.
    /// `None` in size-only mode or beyond [`MAX_VERTICES`].
    pub fn to_graph(&self) -> Option<Graph> {
        let edges = self.edges.as_ref()?;
        if self.labeled + 2 > MAX_VERTICES {
            return None;
        }
        let mut g = Graph::new(self.labeled + 2);
        for &(u, v) in edges {
            g.add_edge(u as usize, v as usize);
        }
        Some(g)
    }
}

#[derive(Clone, Copy, Debug)]
enum Task {
    Net(u32, u32),
    Ser(u32, u32),
    Par(u32, u32),
    Core(u32, u32),
}

/// Reusable buffers for repeated runs.
#[derive(Debug, Default)]
pub struct Scratch {
    stack: Vec<Task>,
    edges: Vec<(u32, u32)>,
    local: Vec<u32>,
}

struct Run<'a> {
    ctx: &'a SamplerContext,
    trace: &'a mut SamplerTrace,
    graph: bool,
    abort: usize,
    labeled: usize,
    edge_count: usize,
    // uniform used for the root symbol instead of a fresh draw
    root_u: Option<f64>,
}

impl Run<'_> {
    fn grow(&mut self, by: usize) -> Result<()> {
        self.labeled += by;
        if self.labeled > self.abort {
            return Err(Error::Aborted(self.abort));
        }
        Ok(())
    }

    fn edge(&mut self, scratch: &mut Scratch, l: u32, r: u32) {
        self.edge_count += 1;
        if self.graph {
            scratch.edges.push((l, r));
        }
    }

    fn fresh(&self) -> u32 {
        // vertex carrying the label just allocated
        self.labeled as u32 + 1
    }

    fn go<R: Rng + ?Sized>(&mut self, rng: &mut R, scratch: &mut Scratch) -> Result<()> {
        let ctx = self.ctx;
        let mut steps = 0u64;
        scratch.stack.push(Task::Net(0, 1));
        while let Some(task) = scratch.stack.pop() {
            steps += 1;
            if steps > ctx.step_budget {
                return Err(Error::RecursionBudgetExceeded(ctx.step_budget));
            }
            match task {
                Task::Net(l, r) => {
                    self.trace.a_net += 1;
                    let u: f64 = self.root_u.take().unwrap_or_else(|| rng.random());
                    let sym = ctx.net_cum.iter().take_while(|&&c| u >= c).count();
                    self.trace.net_symbols[sym] += 1;
                    match sym {
                        0 => self.edge(scratch, l, r),
                        1 => scratch.stack.push(Task::Ser(l, r)),
                        2 => scratch.stack.push(Task::Par(l, r)),
                        _ => scratch.stack.push(Task::Core(l, r)),
                    }
                }
                Task::Ser(l, r) => {
                    self.trace.a_ser += 1;
                    self.grow(1)?;
                    let v = self.fresh();
                    let u: f64 = rng.random();
                    let sym = ctx.ser_cum.iter().take_while(|&&c| u >= c).count();
                    self.trace.ser_symbols[sym] += 1;
                    match sym {
                        0 => self.edge(scratch, l, v),
                        1 => scratch.stack.push(Task::Par(l, v)),
                        _ => scratch.stack.push(Task::Core(l, v)),
                    }
                    scratch.stack.push(Task::Net(v, r));
                }
                Task::Par(l, r) => {
                    self.trace.a_par += 1;
                    let two = rng.random::<f64>() < ctx.q_par;
                    let k = if two {
                        self.trace.par_values[1] += 1;
                        self.trace.a2 += 1;
                        ctx.po2.sample(rng)
                    } else {
                        self.trace.par_values[0] += 1;
                        self.trace.a1 += 1;
                        self.edge(scratch, l, r);
                        ctx.po1.sample(rng)
                    };
                    self.trace.poisson_total += k;
                    for _ in 0..k {
                        self.trace.a_sh += 1;
                        if rng.random::<f64>() < ctx.sh_s {
                            self.trace.sh_symbols[0] += 1;
                            scratch.stack.push(Task::Ser(l, r));
                        } else {
                            self.trace.sh_symbols[1] += 1;
                            scratch.stack.push(Task::Core(l, r));
                        }
                    }
                }
                Task::Core(l, r) => {
                    self.trace.a_t += 1;
                    if self.graph {
                        let core = ctx.core.draw_graph(rng)?;
                        let base = self.labeled as u32;
                        self.grow(core.labeled)?;
                        scratch.local.clear();
                        scratch.local.extend([l, r]);
                        scratch
                            .local
                            .extend((1..=core.labeled as u32).map(|i| base + i + 1));
                        for &(a, b) in &core.edges {
                            // canonical orientation: the smaller endpoint is the left pole
                            scratch.stack.push(Task::Net(
                                scratch.local[a as usize],
                                scratch.local[b as usize],
                            ));
                        }
                        self.trace.core_sizes.push(core.labeled as u32);
                        self.trace.core_edges.push(core.edges.len() as u32);
                    } else {
                        let cap = self.abort.saturating_sub(self.labeled);
                        let (k, m) = ctx
                            .core
                            .draw_size(rng, cap)
                            .ok_or(Error::Aborted(self.abort))?;
                        self.grow(k)?;
                        scratch
                            .stack
                            .extend(std::iter::repeat_n(Task::Net(0, 0), m));
                        self.trace.core_sizes.push(k as u32);
                        self.trace.core_edges.push(m as u32);
                    }
                }
            }
        }
        Ok(())
    }
}

fn run<R: Rng + ?Sized>(
    ctx: &SamplerContext,
    rng: &mut R,
    trace: &mut SamplerTrace,
    scratch: &mut Scratch,
    abort: Option<usize>,
    root_u: Option<f64>,
) -> Result<Network> {
    trace.clear();
    scratch.stack.clear();
    scratch.edges.clear();
    let graph = !ctx.size_only;
    let mut state = Run {
        ctx,
        trace,
        graph,
        abort: abort.or(ctx.abort_size).unwrap_or(usize::MAX),
        labeled: 0,
        edge_count: 0,
        root_u,
    };
    state.go(rng, scratch)?;
    let (labeled, edge_count) = (state.labeled, state.edge_count);
    if !graph {
        return Ok(Network::size_only(labeled, edge_count));
    }
    // one uniform relabeling of the labeled vertices
    let mut perm: Vec<u32> = (2..labeled as u32 + 2).collect();
    perm.shuffle(rng);
    let map = |v: u32| if v < 2 { v } else { perm[v as usize - 2] };
    let edges: Vec<(u32, u32)> = scratch
        .edges
        .iter()
        .map(|&(a, b)| (map(a), map(b)))
        .collect();
    let net = Network::from_edges(labeled, edges);
    let list = net.edges().unwrap();
    if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::Assembly(format!("edge {:?} produced twice", w[0])));
    }
    if list.iter().any(|&(a, b)| a == b) {
        return Err(Error::Assembly("loop produced".into()));
    }
    Ok(net)
}

/// One run of `Γ_N`. The trace is reset and then filled by the run.
pub fn gamma_n<R: Rng + ?Sized>(
    ctx: &SamplerContext,
    rng: &mut R,
    trace: &mut SamplerTrace,
) -> Result<Network> {
    run(ctx, rng, trace, &mut Scratch::default(), None, None)
}

/// Like [`gamma_n`], reusing `scratch` between calls.
pub fn gamma_n_with<R: Rng + ?Sized>(
    ctx: &SamplerContext,
    rng: &mut R,
    trace: &mut SamplerTrace,
    scratch: &mut Scratch,
) -> Result<Network> {
    run(ctx, rng, trace, scratch, None, None)
}

/// Rejection sampler for networks with `n ≤ v(N) ≤ (1+ε)n`, keeping
/// acceptance statistics across draws.
#[derive(Debug)]
pub struct ExactSizeSampler<'a> {
    ctx: &'a SamplerContext,
    lower: usize,
    upper: usize,
    scratch: Scratch,
    pub attempts: u64,
    pub aborted: u64,
    pub accepted: u64,
}

/// The accepted size range `[n, ⌈(1+ε)n⌉]`.
pub fn exact_window(n: usize, eps: f64) -> Result<(usize, usize)> {
    if !(eps >= 0.0) {
        return Err(Error::Validation(format!(
            "window must be non-negative, got {eps}"
        )));
    }
    // the small offset keeps an exact product such as 1.02 * 10000 from rounding up
    let upper = ((1.0 + eps) * n as f64 - 1e-9).ceil().max(n as f64) as usize;
    Ok((n, upper))
}

impl<'a> ExactSizeSampler<'a> {
    pub fn new(ctx: &'a SamplerContext, n: usize, eps: f64) -> Result<Self> {
        let (lower, upper) = exact_window(n, eps)?;
        Ok(ExactSizeSampler {
            ctx,
            lower,
            upper,
            scratch: Scratch::default(),
            attempts: 0,
            aborted: 0,
            accepted: 0,
        })
    }

    pub fn window(&self) -> (usize, usize) {
        (self.lower, self.upper)
    }

    pub fn acceptance_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.accepted as f64 / self.attempts as f64
        }
    }

    /// Next accepted network; fails after `max_attempts` further attempts.
    pub fn next<R: Rng + ?Sized>(
        &mut self,
        rng: &mut R,
        trace: &mut SamplerTrace,
        max_attempts: u64,
    ) -> Result<Network> {
        let start = self.attempts;
        let p_edge = self.ctx.net_cum[0];
        // a lone edge has no labeled vertex, so when n >= 1 the runs that stop
        // at the root are skipped in one geometric draw
        let skip = (self.lower >= 1 && p_edge > 0.0 && p_edge < 1.0)
            .then(|| Geometric::new(1.0 - p_edge).expect("probability in (0, 1)"));
        while self.attempts - start < max_attempts {
            let root_u = match &skip {
                Some(g) => {
                    let lone = g.sample(rng);
                    self.attempts = self.attempts.saturating_add(lone);
                    if self.attempts - start >= max_attempts {
                        self.attempts = start + max_attempts;
                        break;
                    }
                    Some(p_edge + (1.0 - p_edge) * rng.random::<f64>())
                }
                None => None,
            };
            self.attempts += 1;
            match run(
                self.ctx,
                rng,
                trace,
                &mut self.scratch,
                Some(self.upper),
                root_u,
            ) {
                Ok(net) if net.labeled_vertex_count() >= self.lower => {
                    self.accepted += 1;
                    return Ok(net);
                }
                Ok(_) => {}
                Err(Error::Aborted(_)) => self.aborted += 1,
                Err(e) => return Err(e),
            }
        }
        Err(Error::AttemptsExhausted {
            attempts: self.attempts,
            accepted: self.accepted,
        })
    }
}

/// First network with `n ≤ v(N) ≤ ⌈(1+ε)n⌉`, with its trace.
pub fn sample_exact_size<R: Rng + ?Sized>(
    ctx: &SamplerContext,
    n: usize,
    eps: f64,
    rng: &mut R,
    max_attempts: u64,
) -> Result<(Network, SamplerTrace)> {
    let mut sampler = ExactSizeSampler::new(ctx, n, eps)?;
    let mut trace = SamplerTrace::default();
    let net = sampler.next(rng, &mut trace, max_attempts)?;
    Ok((net, trace))
}

/// Labels the poles as ordinary vertices, placed uniformly among the
/// `n + 2` positions, and optionally adds the pole edge.
pub fn network_to_biconnected<R: Rng + ?Sized>(
    net: &Network,
    add_pole_edge: bool,
    rng: &mut R,
) -> Result<Graph> {
    let edges = net
        .edges()
        .ok_or_else(|| Error::Validation("size-only network has no edges to convert".into()))?;
    let total = net.labeled_vertex_count() + 2;
    if total > MAX_VERTICES {
        return Err(Error::Validation(format!(
            "{total} vertices exceed the graph size limit"
        )));
    }
    let mut positions: Vec<usize> = (0..total).collect();
    positions.partial_shuffle(rng, 2);
    let (pl, pr) = (positions[0], positions[1]);
    let mut rest = (0..total).filter(|&p| p != pl && p != pr);
    let mut map = vec![0usize; total];
    map[0] = pl;
    map[1] = pr;
    for slot in map.iter_mut().skip(2) {
        *slot = rest.next().unwrap();
    }
    let mut g = Graph::new(total);
    for &(a, b) in edges {
        g.add_edge(map[a as usize], map[b as usize]);
    }
    if add_pole_edge {
        if g.has_edge(pl, pr) {
            return Err(Error::PoleEdgeConflict);
        }
        g.add_edge(pl, pr);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::network_constants;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn wheels_ctx(x: f64) -> SamplerContext {
        SamplerContext::new(&CoreClass::Wheels, x, 1.0).unwrap()
    }

    #[test]
    fn probability_vectors_sum_to_one() {
        for class in ["wheels", "k4+k33", "synthetic:alpha=1.5,lambda=0.5"] {
            let class = CoreClass::parse(class).unwrap();
            let ctx = SamplerContext::new(&class, 0.02, 1.3).unwrap();
            let par_one = ctx.gf.y * ctx.poisson_rate().exp_m1() / ctx.gf.p;
            for sum in [
                ctx.p_net().iter().sum::<f64>(),
                ctx.p_ser().iter().sum(),
                ctx.p_sh().iter().sum(),
                par_one + ctx.q_par(),
            ] {
                assert!((sum - 1.0).abs() < 1e-12, "{sum}");
            }
        }
    }

    #[test]
    fn trace_identities_on_graph_samples() {
        let ctx = wheels_ctx(0.08);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut trace = SamplerTrace::default();
        for _ in 0..2000 {
            let net = gamma_n(&ctx, &mut rng, &mut trace).unwrap();
            let v = net.labeled_vertex_count() as u64;
            assert!(
                trace.identities_hold(v, net.edge_count() as u64),
                "{:?}",
                trace.identity_violations(v, net.edge_count() as u64)
            );
        }
    }

    #[test]
    fn labels_are_exactly_one_to_n() {
        let ctx = wheels_ctx(0.08);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut trace = SamplerTrace::default();
        for _ in 0..500 {
            let net = gamma_n(&ctx, &mut rng, &mut trace).unwrap();
            let n = net.labeled_vertex_count();
            let mut degree = vec![0; n + 2];
            for &(a, b) in net.edges().unwrap() {
                degree[a as usize] += 1;
                degree[b as usize] += 1;
            }
            assert!(degree[2..].iter().all(|&d| d >= 2));
            assert!(degree[0] >= 1 && degree[1] >= 1);
        }
    }

    #[test]
    fn small_x_gives_single_edge() {
        let ctx = wheels_ctx(1e-6);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut trace = SamplerTrace::default();
        let singles = (0..1000)
            .filter(|_| {
                gamma_n(&ctx, &mut rng, &mut trace)
                    .unwrap()
                    .labeled_vertex_count()
                    == 0
            })
            .count();
        assert!(singles >= 995);
    }

    #[test]
    fn abort_is_reported() {
        let ctx = wheels_ctx(0.0852).with_abort_size(Some(3));
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut trace = SamplerTrace::default();
        let mut aborted = 0;
        for _ in 0..2000 {
            match gamma_n(&ctx, &mut rng, &mut trace) {
                Ok(net) => assert!(net.labeled_vertex_count() <= 3),
                Err(Error::Aborted(3)) => aborted += 1,
                Err(e) => panic!("{e}"),
            }
        }
        assert!(aborted > 0);
    }

    #[test]
    fn step_budget_is_enforced() {
        let ctx = wheels_ctx(0.0852).with_step_budget(1);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut trace = SamplerTrace::default();
        let failed = (0..200)
            .filter(|_| {
                matches!(
                    gamma_n(&ctx, &mut rng, &mut trace),
                    Err(Error::RecursionBudgetExceeded(1))
                )
            })
            .count();
        assert!(failed > 0);
    }

    #[test]
    fn size_only_matches_graph_mode_counts() {
        let graph = wheels_ctx(0.08);
        let sizes = graph.clone().with_size_only(true);
        let mut r1 = ChaCha8Rng::seed_from_u64(4);
        let mut r2 = ChaCha8Rng::seed_from_u64(4);
        let mut t1 = SamplerTrace::default();
        let mut t2 = SamplerTrace::default();
        let n = 20_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..n {
            s1 += gamma_n(&graph, &mut r1, &mut t1)
                .unwrap()
                .labeled_vertex_count() as f64;
            let net = gamma_n(&sizes, &mut r2, &mut t2).unwrap();
            assert!(net.is_size_only());
            assert!(t2.identities_hold(net.labeled_vertex_count() as u64, net.edge_count() as u64));
            s2 += net.labeled_vertex_count() as f64;
        }
        // same distribution of v(N); compare means loosely
        assert!((s1 - s2).abs() / n as f64 <= 0.1 * (s1 / n as f64).max(0.2));
    }

    #[test]
    fn synthetic_class_forces_size_only() {
        let class = CoreClass::parse("synthetic:alpha=1.5,lambda=0.5").unwrap();
        let ctx = SamplerContext::new(&class, 0.05, 1.0)
            .unwrap()
            .with_size_only(false);
        assert!(ctx.size_only());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut trace = SamplerTrace::default();
        for _ in 0..1000 {
            let net = gamma_n(&ctx, &mut rng, &mut trace).unwrap();
            assert!(
                trace.identities_hold(net.labeled_vertex_count() as u64, net.edge_count() as u64)
            );
        }
    }

    #[test]
    fn exact_size_hits_window() {
        let report = network_constants(&CoreClass::Wheels, 1.0, 200).unwrap();
        let ctx = SamplerContext::singular(&CoreClass::Wheels, &report, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for n in [1, 5, 20] {
            let (net, trace) = sample_exact_size(&ctx, n, 0.1, &mut rng, 1_000_000).unwrap();
            let v = net.labeled_vertex_count();
            assert!(v >= n && v <= ((1.1 * n as f64).ceil() as usize));
            assert!(trace.identities_hold(v as u64, net.edge_count() as u64));
        }
    }

    #[test]
    fn exhausted_attempts_report_counts() {
        let ctx = wheels_ctx(1e-4);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        match sample_exact_size(&ctx, 50, 0.0, &mut rng, 100) {
            Err(Error::AttemptsExhausted {
                attempts: 100,
                accepted: 0,
            }) => {}
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn census_from_trace() {
        assert_eq!(
            core_census_from_trace(&SamplerTrace::default()),
            CensusReport::default()
        );
        let trace = SamplerTrace {
            core_sizes: vec![2, 2, 3],
            ..Default::default()
        };
        let c = core_census_from_trace(&trace);
        assert_eq!(
            c.counts.into_iter().collect::<Vec<_>>(),
            vec![(4, 2), (5, 1)]
        );
        assert_eq!(c.c1, 5);
    }

    #[test]
    fn biconnected_conversion() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let single = Network::from_edges(0, vec![(0, 1)]);
        let g = network_to_biconnected(&single, false, &mut rng).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (2, 1));
        assert!(matches!(
            network_to_biconnected(&single, true, &mut rng),
            Err(Error::PoleEdgeConflict)
        ));
        let path = Network::from_edges(1, vec![(0, 2), (1, 2)]);
        let g = network_to_biconnected(&path, true, &mut rng).unwrap();
        assert!(g.is_isomorphic(&crate::graph::named::complete(3)));
        assert!(network_to_biconnected(&Network::size_only(3, 5), false, &mut rng).is_err());
    }
}
