use netcore::analysis::{locate_singularity, network_constants};
use netcore::classes::CoreSampler;
use netcore::CoreClass;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Core sizes drawn at the singular point follow the analyzer's `p_k`, bin by bin.
fn sizes_follow_pk(spec: &str, edges: &[usize]) {
    let class = CoreClass::parse(spec).unwrap();
    let s = locate_singularity(&class, 1.0).unwrap();
    let rep = network_constants(&class, 1.0, *edges.last().unwrap()).unwrap();
    let cs = CoreSampler::new(&class, s.rho_n, s.n0, Some(20_000)).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let draws = 4_000_000u64;
    let mut counts = vec![0u64; edges.len() - 1];
    for _ in 0..draws {
        let (k, _) = cs.draw_size(&mut rng, usize::MAX).unwrap();
        if let Some(i) = edges.windows(2).position(|w| w[0] <= k + 2 && k + 2 < w[1]) {
            counts[i] += 1;
        }
    }
    for (i, w) in edges.windows(2).enumerate() {
        let e = (w[0]..w[1]).map(|k| rep.p(k)).sum::<f64>() * draws as f64;
        let z = (counts[i] as f64 - e) / e.sqrt();
        assert!(
            z.abs() < 4.0,
            "{spec} [{}, {}): {} vs {e:.0}",
            w[0],
            w[1],
            counts[i]
        );
    }
}

#[test]
fn supercritical_synthetic_sizes() {
    sizes_follow_pk(
        "synthetic:alpha=1.5,lambda=0.05,radius=0.1",
        &[4, 5, 6, 10, 30, 100, 300, 1000, 4001],
    );
}

#[test]
fn subcritical_synthetic_sizes() {
    sizes_follow_pk("synthetic:alpha=1.5,lambda=0.5", &[4, 5, 6, 10, 30, 101]);
}

#[test]
fn wheel_sizes() {
    sizes_follow_pk("wheels", &[4, 5, 6, 8, 12, 30, 61]);
}
