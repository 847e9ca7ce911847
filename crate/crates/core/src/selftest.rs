//! Oracle suites run by `netcore selftest`.

use crate::analysis::{locate_singularity, phi_eval, phi_y, solve_gf_values};
use crate::classes::{brute_force_three_connected, load_table, CoefficientTable, CoreClass};
use crate::error::Result;
use crate::oracle::{decompose_network, enumerate_networks};
use crate::sampler::{
    core_census_from_trace, gamma_n, ExactSizeSampler, SamplerContext, SamplerTrace,
};
use crate::series::solve_network_series;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::path::PathBuf;

#[derive(Clone, Debug, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn suite(name: &str, body: impl FnOnce() -> Result<(bool, String)>) -> SuiteResult {
    let (passed, detail) = body().unwrap_or_else(|e| (false, format!("error: {e}")));
    SuiteResult {
        name: name.into(),
        passed,
        detail,
    }
}

/// Counts `n!·[xⁿ]N(x,1)` from the series against exhaustive enumeration.
pub fn series_vs_enumeration(class: &CoreClass, n_max: usize) -> Result<(bool, String)> {
    let e = enumerate_networks(class, n_max)?;
    let s = solve_network_series(class, 1.0, n_max + 2)?;
    let mut bad = Vec::new();
    for n in 0..=n_max {
        let series = s.network_count(n);
        let exact = e.total(n);
        if (series - exact as f64).abs() > 1e-6 * (exact as f64).max(1.0)
            || series.round() as u64 != exact
        {
            bad.push(format!("n = {n}: series {series} vs enumeration {exact}"));
        }
    }
    let detail = if bad.is_empty() {
        format!(
            "counts agree for n <= {n_max}: {:?}",
            (0..=n_max).map(|n| e.total(n)).collect::<Vec<_>>()
        )
    } else {
        bad.join("; ")
    };
    Ok((bad.is_empty(), detail))
}

/// Identity failures over `runs` draws of `Γ_N`.
pub fn trace_identity_failures(ctx: &SamplerContext, runs: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = SamplerTrace::default();
    let mut failures = 0;
    for _ in 0..runs {
        let net = gamma_n(ctx, &mut rng, &mut trace)?;
        if !trace.identities_hold(net.labeled_vertex_count() as u64, net.edge_count() as u64) {
            failures += 1;
        }
    }
    Ok(failures)
}

/// `(agreements, mismatches, cores seen)` between the trace census and the
/// structural decomposition over `runs` networks with `n_min..=n_max`
/// labeled vertices.
pub fn census_cross_validation(
    ctx: &SamplerContext,
    runs: usize,
    n_min: usize,
    n_max: usize,
    seed: u64,
) -> Result<(usize, usize, u64)> {
    let eps = n_max as f64 / n_min as f64 - 1.0;
    let mut sampler = ExactSizeSampler::new(ctx, n_min, eps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = SamplerTrace::default();
    let (mut ok, mut bad, mut cores) = (0, 0, 0);
    for _ in 0..runs {
        let net = sampler.next(&mut rng, &mut trace, 100_000_000)?;
        let from_trace = core_census_from_trace(&trace);
        cores += from_trace.total_cores;
        if decompose_network(&net)? == from_trace {
            ok += 1;
        } else {
            bad += 1;
        }
    }
    Ok((ok, bad, cores))
}

/// Frequencies of the networks with at most one labeled vertex against
/// their Boltzmann probabilities; returns the largest deviation in units
/// of the binomial standard error.
pub fn boltzmann_exactness(
    class: &CoreClass,
    x: f64,
    y: f64,
    runs: usize,
    seed: u64,
) -> Result<(f64, String)> {
    let ctx = SamplerContext::new(class, x, y)?;
    let big_n = ctx.gf().n;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut trace = SamplerTrace::default();
    let mut counts = [0usize; 3];
    for _ in 0..runs {
        let net = gamma_n(&ctx, &mut rng, &mut trace)?;
        let slot = match (net.labeled_vertex_count(), net.edge_count()) {
            (0, 1) => 0,
            (1, 2) => 1,
            (1, 3) => 2,
            _ => continue,
        };
        counts[slot] += 1;
    }
    let probs = [y / big_n, x * y * y / big_n, x * y * y * y / big_n];
    let names = ["single edge", "path", "path with pole edge"];
    let mut worst = 0.0f64;
    let mut detail = Vec::new();
    for i in 0..3 {
        let p = probs[i];
        let f = counts[i] as f64 / runs as f64;
        let z = (f - p).abs() / (p * (1.0 - p) / runs as f64).sqrt();
        worst = worst.max(z);
        detail.push(format!("{}: {f:.5} vs {p:.5} ({z:.2} sigma)", names[i]));
    }
    Ok((worst, detail.join("; ")))
}

fn phi_identities() -> Result<(bool, String)> {
    let mut worst = 0.0f64;
    for class in [
        CoreClass::Wheels,
        CoreClass::wheels_k33_prism(),
        CoreClass::parse("synthetic:alpha=1.5,lambda=0.5")?,
    ] {
        for &(x, y) in &[(0.005, 1.0), (0.01, 0.5), (0.02, 2.0)] {
            let gf = solve_gf_values(&class, x, y)?;
            worst = worst.max(phi_eval(&class, x, y, gf.n)?.phi.abs());
            worst = worst.max(gf.residual());
            // Φ(0, y, y) = 0
            worst = worst.max(phi_eval(&class, 0.0, y, y)?.phi.abs());
            // Φ_y by central difference
            let h = 1e-5;
            let fd = (phi_eval(&class, x, y + h, gf.n)?.phi
                - phi_eval(&class, x, y - h, gf.n)?.phi)
                / (2.0 * h);
            worst = worst.max((fd - phi_y(y)).abs() * 1e-3);
        }
    }
    Ok((worst < 1e-9, format!("largest residual {worst:e}")))
}

fn table_validation(extra: &[PathBuf]) -> Result<(bool, String)> {
    let t = brute_force_three_connected(6);
    let round = CoefficientTable::parse(&t.to_text())?;
    if round != t {
        return Ok((
            false,
            "brute-force table does not survive a text round trip".into(),
        ));
    }
    let mut notes = vec!["built-in table round trip ok".to_string()];
    let mut ok = true;
    for path in extra {
        match load_table(path) {
            Ok(t) => notes.push(format!("{}: {} records", path.display(), t.entries.len())),
            Err(e) => {
                ok = false;
                notes.push(format!("{}: {e}", path.display()));
            }
        }
    }
    Ok((ok, notes.join("; ")))
}

/// Runs every suite; `tables` are extra coefficient-table files to validate.
pub fn run_selftest(tables: &[PathBuf]) -> Vec<SuiteResult> {
    let union = CoreClass::wheels_k33_prism();
    vec![
        suite("series vs enumeration", || series_vs_enumeration(&union, 5)),
        suite("trace identities", || {
            let graph = SamplerContext::new(&union, 0.08, 1.0)?;
            let sizes = SamplerContext::new(
                &CoreClass::parse("synthetic:alpha=1.5,lambda=0.05,radius=0.1")?,
                0.009,
                1.0,
            )?;
            let f = trace_identity_failures(&graph, 3000, 1)?
                + trace_identity_failures(&sizes, 3000, 2)?;
            Ok((f == 0, format!("{f} failures in 6000 runs")))
        }),
        suite("census cross-validation", || {
            let rho = locate_singularity(&union, 1.0)?.rho_n;
            let ctx = SamplerContext::new(&union, 0.99 * rho, 1.0)?;
            let (ok, bad, cores) = census_cross_validation(&ctx, 500, 5, 15, 3)?;
            Ok((bad == 0, format!("{ok} agree, {bad} differ, {cores} cores")))
        }),
        suite("Boltzmann exactness", || {
            let (worst, detail) = boltzmann_exactness(&CoreClass::Wheels, 0.05, 1.0, 100_000, 4)?;
            Ok((worst <= 3.0, detail))
        }),
        suite("generating-function identities", phi_identities),
        suite("table validation", || table_validation(tables)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_table_fails_only_its_suite() {
        let dir = tempfile::tempdir().unwrap();
        let bad = dir.path().join("bad.tsv");
        std::fs::write(&bad, "4\t6\tone\n").unwrap();
        let (ok, detail) = table_validation(&[bad]).unwrap();
        assert!(!ok, "{detail}");
        assert!(phi_identities().unwrap().0);
    }
}
