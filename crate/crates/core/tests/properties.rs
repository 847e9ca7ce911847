use netcore::analysis::locate_singularity;
use netcore::oracle::{decompose_network, validate_network};
use netcore::sampler::{
    core_census_from_trace, exact_window, gamma_n, SamplerContext, SamplerTrace,
};
use netcore::{CensusReport, CoreClass};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SPECS: [&str; 4] = [
    "wheels",
    "wheels+k33+prism",
    "k4",
    "synthetic:alpha=1.5,lambda=0.5",
];

fn context(spec: usize, frac: f64, y: f64) -> SamplerContext {
    let class = CoreClass::parse(SPECS[spec]).unwrap();
    let rho = locate_singularity(&class, y).unwrap().rho_n;
    SamplerContext::new(&class, frac * rho, y).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_identities_hold(spec in 0usize..4, frac in 0.05f64..1.0, y in 0.3f64..3.0, seed in any::<u64>()) {
        let ctx = context(spec, frac, y);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut trace = SamplerTrace::default();
        for _ in 0..20 {
            let net = gamma_n(&ctx, &mut rng, &mut trace).unwrap();
            let bad = trace.identity_violations(net.labeled_vertex_count() as u64, net.edge_count() as u64);
            prop_assert!(bad.is_empty(), "{:?}", bad);
        }
    }

    #[test]
    fn census_accounts_for_labeled_vertices(spec in 0usize..4, frac in 0.5f64..1.0, seed in any::<u64>()) {
        let ctx = context(spec, frac, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut trace = SamplerTrace::default();
        for _ in 0..20 {
            let net = gamma_n(&ctx, &mut rng, &mut trace).unwrap();
            let c = core_census_from_trace(&trace);
            prop_assert_eq!(c.total_cores, c.counts.values().sum::<u64>());
            prop_assert_eq!(c.c1, c.counts.keys().next_back().copied().unwrap_or(0));
            // the non-pole vertices of distinct cores are distinct labeled vertices
            let inner: u64 = c.counts.iter().map(|(&k, &n)| (k as u64 - 2) * n).sum();
            prop_assert!(inner <= net.labeled_vertex_count() as u64);
            // e(N) ≥ v(N) + 1 for every network
            prop_assert!(net.edge_count() > net.labeled_vertex_count());
        }
    }

    #[test]
    fn sampled_networks_decompose_to_their_trace(spec in 0usize..3, seed in any::<u64>()) {
        let ctx = context(spec, 0.9, 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut trace = SamplerTrace::default();
        for _ in 0..10 {
            let net = gamma_n(&ctx, &mut rng, &mut trace).unwrap();
            if net.labeled_vertex_count() > 40 {
                continue;
            }
            prop_assert!(validate_network(&net));
            prop_assert_eq!(decompose_network(&net).unwrap(), core_census_from_trace(&trace));
        }
    }

    #[test]
    fn census_merge_is_additive(a in proptest::collection::vec(4usize..40, 0..30), b in proptest::collection::vec(4usize..40, 0..30)) {
        let mut left: CensusReport = a.iter().copied().collect();
        let right: CensusReport = b.iter().copied().collect();
        left.merge(&right);
        let both: CensusReport = a.iter().chain(&b).copied().collect();
        prop_assert_eq!(&left, &both);
        prop_assert!(both.c2() <= both.c1);
    }

    #[test]
    fn window_contains_target(n in 1usize..100_000, eps in 0.0f64..0.5) {
        let (lo, hi) = exact_window(n, eps).unwrap();
        prop_assert_eq!(lo, n);
        prop_assert!(hi >= n);
        prop_assert!(hi as f64 <= (1.0 + eps) * n as f64 + 1.0);
    }
}
