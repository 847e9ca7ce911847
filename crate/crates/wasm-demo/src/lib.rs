//! Browser bindings: singularity constants, one sampled network, and a
//! small core-census campaign. Each operation returns a JSON string.

use netcore::analysis::predicted_core_density;
use netcore::experiment::{campaign_constants, run_experiment_with, ExperimentConfig};
use netcore::sampler::{core_census_from_trace, sample_exact_size, SamplerContext};
use netcore::CoreClass;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use wasm_bindgen::prelude::*;

const MAX_DEMO_SAMPLES: usize = 2000;

fn parse(spec: &str) -> Result<CoreClass, String> {
    CoreClass::parse(spec).map_err(|e| e.to_string())
}

pub fn constants_json(spec: &str, y: f64) -> Result<String, String> {
    let class = parse(spec)?;
    let r = campaign_constants(&class, y).map_err(|e| e.to_string())?;
    let pk: Vec<_> = (4..=30)
        .filter(|&k| r.p(k) > 0.0)
        .map(|k| json!([k, r.p(k)]))
        .collect();
    Ok(json!({
        "class": r.class,
        "regime": format!("{:?}", r.lambda_sign),
        "rhoN": r.rho_n,
        "N0": r.n0,
        "tau": r.tau,
        "mu": r.mu,
        "aT": r.a_t,
        "gammaT": r.gamma_t,
        "pk": pk,
        "warnings": r.warnings,
    })
    .to_string())
}

/// One network with `n ≤ v ≤ ⌈(1+eps)n⌉` labeled vertices from the
/// singular sampler.
pub fn sample_network_json(spec: &str, n: usize, eps: f64, seed: u64) -> Result<String, String> {
    let class = parse(spec)?;
    if class.size_only() {
        return Err(format!("class `{class}` only samples sizes"));
    }
    if n > 60 {
        return Err("the demo draws networks with at most 60 labeled vertices".into());
    }
    let r = campaign_constants(&class, 1.0).map_err(|e| e.to_string())?;
    let ctx = SamplerContext::singular(&class, &r, None).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (net, trace) =
        sample_exact_size(&ctx, n, eps, &mut rng, 50_000_000).map_err(|e| e.to_string())?;
    let census = core_census_from_trace(&trace);
    Ok(json!({
        "labeled": net.labeled_vertex_count(),
        "edges": net.edges().unwrap_or(&[]),
        "census": census.counts,
        "C1": census.c1,
    })
    .to_string())
}

/// Empirical core census of a size-only campaign next to `a_T p_k`.
pub fn core_census_json(
    spec: &str,
    n: usize,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<String, String> {
    let class = parse(spec)?;
    let r = campaign_constants(&class, 1.0).map_err(|e| e.to_string())?;
    let mut cfg = ExperimentConfig::new(spec, n, eps, samples.clamp(1, MAX_DEMO_SAMPLES));
    cfg.size_only = true;
    cfg.seed = seed;
    cfg.max_attempts = 100_000_000;
    let rep = run_experiment_with(&cfg, &class, r).map_err(|e| e.to_string())?;
    let rows: Vec<_> = rep
        .empirical
        .census_rates
        .iter()
        .filter(|(&k, _)| k <= 40)
        .map(|(&k, &rate)| json!({"k": k, "empirical": rate, "predicted": predicted_core_density(&rep.constants, k)}))
        .collect();
    Ok(json!({
        "samples": rep.samples.len(),
        "acceptance": rep.acceptance.rate,
        "meanC1OverN": rep.empirical.c1_over_n.mean,
        "rows": rows,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn constants(spec: &str, y: f64) -> Result<String, JsValue> {
    constants_json(spec, y).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sample_network(spec: &str, n: usize, eps: f64, seed: u64) -> Result<String, JsValue> {
    sample_network_json(spec, n, eps, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn core_census(
    spec: &str,
    n: usize,
    eps: f64,
    samples: usize,
    seed: u64,
) -> Result<String, JsValue> {
    core_census_json(spec, n, eps, samples, seed).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_for_wheels() {
        let v: serde_json::Value =
            serde_json::from_str(&constants_json("wheels", 1.0).unwrap()).unwrap();
        assert_eq!(v["regime"], "Subcritical");
        assert!(v["tau"].as_f64().unwrap() < 1.0);
    }

    #[test]
    fn sampled_network_is_in_window() {
        let v: serde_json::Value =
            serde_json::from_str(&sample_network_json("wheels", 12, 0.25, 3).unwrap()).unwrap();
        let n = v["labeled"].as_u64().unwrap();
        assert!((12..=15).contains(&n));
        assert!(v["edges"].as_array().unwrap().len() as u64 >= n + 1);
        assert!(sample_network_json("synthetic:alpha=1.5,lambda=0.5", 10, 0.1, 1).is_err());
    }

    #[test]
    fn census_rows_are_reported() {
        let v: serde_json::Value =
            serde_json::from_str(&core_census_json("wheels", 50, 0.2, 20, 1).unwrap()).unwrap();
        assert_eq!(v["samples"], 20);
        assert!(!v["rows"].as_array().unwrap().is_empty());
    }

    #[test]
    fn bad_spec_is_an_error() {
        assert!(constants_json("nonsense", 1.0).is_err());
    }
}
