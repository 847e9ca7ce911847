//! Poisson variables conditioned on `K ≥ j`.

use rand::Rng;
use rand_distr::{Distribution, Poisson};

const REJECTION_RATE: f64 = 30.0;
const TABLE_LEN: usize = 96;

/// `Σ_{k ≥ j} rate^k / k!`.
fn normalizer(rate: f64, j: u32) -> f64 {
    if rate < 1.0 {
        // direct series, avoids the cancellation in e^r - 1 - r
        let mut term = (1..=j).fold(1.0, |t, i| t * rate / i as f64);
        let mut sum = 0.0;
        let mut k = j;
        while term > sum * 1e-18 {
            sum += term;
            k += 1;
            term *= rate / k as f64;
        }
        sum
    } else {
        let head: f64 = (0..j)
            .scan(1.0, |t, i| {
                let cur = *t;
                *t *= rate / (i + 1) as f64;
                Some(cur)
            })
            .sum();
        rate.exp() - head
    }
}

/// Precomputed sampler for `Po_{≥j}(rate)`.
#[derive(Clone, Debug)]
pub struct TruncatedPoisson {
    rate: f64,
    j: u32,
    cdf: Vec<f64>,
    fallback: Option<Poisson<f64>>,
}

impl TruncatedPoisson {
    pub fn new(rate: f64, j: u32) -> Self {
        assert!(
            rate > 0.0 && rate.is_finite(),
            "rate must be positive, got {rate}"
        );
        if rate > REJECTION_RATE {
            return TruncatedPoisson {
                rate,
                j,
                cdf: Vec::new(),
                fallback: Some(Poisson::new(rate).unwrap()),
            };
        }
        let z = normalizer(rate, j);
        let mut p = (1..=j).fold(1.0, |t, i| t * rate / i as f64) / z;
        let mut acc = 0.0;
        let mut cdf = Vec::with_capacity(TABLE_LEN);
        for k in j as usize.. {
            acc += p;
            cdf.push(acc);
            p *= rate / (k + 1) as f64;
            if cdf.len() == TABLE_LEN || acc >= 1.0 - 1e-17 {
                break;
            }
        }
        TruncatedPoisson {
            rate,
            j,
            cdf,
            fallback: None,
        }
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// `P(K = k)`.
    pub fn pmf(&self, k: u64) -> f64 {
        if k < self.j as u64 {
            return 0.0;
        }
        let ln = k as f64 * self.rate.ln() - statrs::function::gamma::ln_gamma(k as f64 + 1.0);
        ln.exp() / normalizer(self.rate, self.j)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        if let Some(po) = &self.fallback {
            loop {
                let k = po.sample(rng) as u64;
                if k >= self.j as u64 {
                    return k;
                }
            }
        }
        let u: f64 = rng.random();
        if let Some(i) = self.cdf.iter().position(|&c| u < c) {
            return self.j as u64 + i as u64;
        }
        // beyond the table, continue the inversion term by term
        let mut k = self.j as u64 + self.cdf.len() as u64 - 1;
        let mut acc = *self.cdf.last().unwrap();
        let mut p = self.pmf(k);
        loop {
            k += 1;
            p *= self.rate / k as f64;
            acc += p;
            if u < acc || p == 0.0 {
                return k;
            }
        }
    }
}

/// One draw of `Po_{≥j}(rate)` without precomputation.
pub fn draw_truncated_poisson<R: Rng + ?Sized>(rate: f64, j: u32, rng: &mut R) -> u64 {
    TruncatedPoisson::new(rate, j).sample(rng)
}
