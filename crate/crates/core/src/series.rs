//! Truncated power series in `x` (egf normalization, `y` fixed) and the
//! order-by-order solver for the network series `N, S, P, H`.

use crate::classes::CoreClass;
use crate::error::{Error, Result};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![0.0; order + 1],
        }
    }

    pub fn constant(c: f64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least the constant term"
        );
        TruncatedSeries { coeffs }
    }

    /// `x` truncated at `order` (`order ≥ 1`), or `0` at order 0.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = 1.0;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> f64 {
        self.coeffs.get(n).copied().unwrap_or(0.0)
    }

    pub fn truncate(&self, order: usize) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=k).map(|n| self.coeffs[n] + other.coeffs[n]).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=k).map(|n| self.coeffs[n] - other.coeffs[n]).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn add_constant(&self, c: f64) -> Self {
        let mut s = self.clone();
        s.coeffs[0] += c;
        s
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let k = self.order().min(other.order());
        let mut out = vec![0.0; k + 1];
        for (i, &a) in self.coeffs[..=k].iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.coeffs[..=k - i].iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn pow(&self, m: u32) -> Self {
        let mut acc = Self::constant(1.0, self.order());
        for _ in 0..m {
            acc = acc.mul(self);
        }
        acc
    }

    /// `exp(a)` from `(exp a)' = a' exp a`; the constant term enters as a
    /// scalar factor `e^{a₀}`.
    pub fn exp(&self) -> Self {
        let k = self.order();
        let mut out = vec![0.0; k + 1];
        out[0] = self.coeffs[0].exp();
        for n in 1..=k {
            let mut acc = 0.0;
            for j in 1..=n {
                acc += j as f64 * self.coeffs[j] * out[n - j];
            }
            out[n] = acc / n as f64;
        }
        TruncatedSeries { coeffs: out }
    }

    /// `log(a)` for `a₀ > 0`, from `a · (log a)' = a'`.
    pub fn log(&self) -> Self {
        let a0 = self.coeffs[0];
        assert!(a0 > 0.0, "log needs a positive constant term");
        let k = self.order();
        let mut out = vec![0.0; k + 1];
        out[0] = a0.ln();
        for n in 1..=k {
            let mut acc = n as f64 * self.coeffs[n];
            for j in 1..n {
                acc -= j as f64 * out[j] * self.coeffs[n - j];
            }
            out[n] = acc / (n as f64 * a0);
        }
        TruncatedSeries { coeffs: out }
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    /// Coefficients of `F(σx)`.
    pub fn rescale(&self, sigma: f64) -> Self {
        let mut p = 1.0;
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|&c| {
                    let v = c * p;
                    p *= sigma;
                    v
                })
                .collect(),
        }
    }
}

/// The network series at fixed `y`, possibly in the rescaled variable:
/// coefficient `n` of each series is `σⁿ [xⁿ]F`.
#[derive(Clone, Debug, Serialize)]
pub struct NetworkSeries {
    pub y: f64,
    pub scale: f64,
    pub n: TruncatedSeries,
    pub s: TruncatedSeries,
    pub p: TruncatedSeries,
    pub h: TruncatedSeries,
    pub sweeps: usize,
}

impl NetworkSeries {
    /// `n! [xⁿ] N` for unscaled series.
    pub fn network_count(&self, n: usize) -> f64 {
        let fact: f64 = (1..=n).map(|k| k as f64).product();
        fact * self.n.coeff(n) / self.scale.powi(n as i32)
    }
}

/// Coefficients of `N, S, P, H` up to order `k` at fixed `y`.
pub fn solve_network_series(class: &CoreClass, y: f64, k: usize) -> Result<NetworkSeries> {
    solve_network_series_scaled(class, y, k, 1.0)
}

/// Same as [`solve_network_series`], for `N(σx, y)`. Choosing `σ` near the
/// radius of convergence keeps high-order coefficients within `f64` range.
pub fn solve_network_series_scaled(
    class: &CoreClass,
    y: f64,
    order: usize,
    sigma: f64,
) -> Result<NetworkSeries> {
    if !(y > 0.0) || !(sigma > 0.0) {
        return Err(Error::Validation(
            "series solve needs y > 0 and a positive scale".into(),
        ));
    }
    // T̄ terms grouped by their x-power, with σ^k folded in
    let mut by_k: Vec<Vec<(usize, f64)>> = vec![Vec::new(); order + 1];
    let mut max_m = 0;
    for t in class.scaled_terms(order, sigma) {
        if t.coeff != 0.0 {
            by_k[t.k].push((t.m, t.coeff));
            max_m = max_m.max(t.m);
        }
    }
    // powers[m][j] = [x^j] N^m
    let mut powers: Vec<Vec<f64>> = vec![vec![0.0; order + 1]; max_m + 1];
    for (m, row) in powers.iter_mut().enumerate() {
        row[0] = y.powi(m as i32);
    }
    let mut n = vec![0.0; order + 1];
    let mut s = vec![0.0; order + 1];
    let mut p = vec![0.0; order + 1];
    let mut h = vec![0.0; order + 1];
    let mut e = vec![0.0; order + 1];
    n[0] = y;
    e[0] = 1.0;
    let cap = 10 * order.max(1);
    let mut sweeps = 0;
    for deg in 1..=order {
        let mut prev = [f64::NAN; 4];
        loop {
            sweeps += 1;
            if sweeps > cap {
                return Err(Error::NonConvergence(format!(
                    "series coefficients unstable at order {deg}"
                )));
            }
            // S = σ x N (y + P + H)
            let mut sn = 0.0;
            for i in 0..deg {
                let rest = if deg - 1 - i == 0 {
                    y
                } else {
                    p[deg - 1 - i] + h[deg - 1 - i]
                };
                sn += n[i] * rest;
            }
            sn *= sigma;
            // H = Σ_k σ^k x^k Σ_m c_{k,m} N^m
            let mut hn = 0.0;
            for (kk, terms) in by_k.iter().enumerate().take(deg + 1) {
                for &(m, c) in terms {
                    hn += c * powers[m][deg - kk];
                }
            }
            s[deg] = sn;
            h[deg] = hn;
            // exp(S + H) at this order
            let mut acc = 0.0;
            for j in 1..=deg {
                acc += j as f64 * (s[j] + h[j]) * e[deg - j];
            }
            e[deg] = acc / deg as f64;
            let pn = (1.0 + y) * e[deg] - (sn + hn);
            p[deg] = pn;
            let nn = sn + pn + hn;
            n[deg] = nn;
            let now = [sn, pn, hn, nn];
            if now == prev {
                break;
            }
            prev = now;
        }
        for m in 1..=max_m {
            let mut acc = 0.0;
            for i in 0..=deg {
                acc += n[i] * powers[m - 1][deg - i];
            }
            powers[m][deg] = acc;
        }
    }
    Ok(NetworkSeries {
        y,
        scale: sigma,
        n: TruncatedSeries::from_coeffs(n),
        s: TruncatedSeries::from_coeffs(s),
        p: TruncatedSeries::from_coeffs(p),
        h: TruncatedSeries::from_coeffs(h),
        sweeps,
    })
}

/// Fits `log(cₙ ρⁿ) ≈ const − β log n` over the upper half of the orders
/// and returns `β`. Coefficients that are not positive are skipped.
pub fn estimate_singular_exponent(series: &TruncatedSeries, rho: f64) -> f64 {
    let k = series.order();
    let lo = (k / 2).max(1);
    let mut pts = Vec::new();
    let mut log_rho_pow = lo as f64 * rho.ln();
    for n in lo..=k {
        let c = series.coeff(n);
        if c > 0.0 {
            pts.push(((n as f64).ln(), c.ln() + log_rho_pow));
        }
        log_rho_pow += rho.ln();
    }
    -least_squares_slope(&pts)
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let m = pts.len() as f64;
    let (sx, sy) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(n, d), &(x, y)| {
        (n + (x - mx) * (y - my), d + (x - mx) * (x - mx))
    });
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factorial(n: usize) -> f64 {
        (1..=n).map(|k| k as f64).product()
    }

    #[test]
    fn binomial_square() {
        let a = TruncatedSeries::from_coeffs(vec![1.0, 1.0, 0.0]);
        assert_eq!(a.mul(&a).coeffs(), &[1.0, 2.0, 1.0]);
        assert_eq!(a.mul(&TruncatedSeries::constant(1.0, 2)), a);
    }

    #[test]
    fn product_of_exponentials() {
        let e = TruncatedSeries::from_coeffs((0..=8).map(|n| 1.0 / factorial(n)).collect());
        let sq = e.mul(&e);
        for n in 0..=8 {
            assert!((sq.coeff(n) - 2f64.powi(n as i32) / factorial(n)).abs() < 1e-14);
        }
    }

    #[test]
    fn exp_of_zero_and_of_x() {
        assert_eq!(
            TruncatedSeries::zero(5).exp(),
            TruncatedSeries::constant(1.0, 5)
        );
        let e = TruncatedSeries::variable(10).exp();
        for n in 0..=10 {
            assert!((e.coeff(n) - 1.0 / factorial(n)).abs() < 1e-16);
        }
    }

    #[test]
    fn exp_inverts_log() {
        let one_plus_x = TruncatedSeries::from_coeffs(vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let back = one_plus_x.log().exp();
        for n in 0..=6 {
            assert!((back.coeff(n) - one_plus_x.coeff(n)).abs() < 1e-14);
        }
        // log(1 + x) = x - x²/2 + x³/3 - ...
        let l = one_plus_x.log();
        assert!((l.coeff(3) - 1.0 / 3.0).abs() < 1e-15);
        assert!((l.coeff(4) + 0.25).abs() < 1e-15);
    }

    #[test]
    fn network_series_constant_term_is_y() {
        let s = solve_network_series(&CoreClass::Wheels, 1.0, 6).unwrap();
        assert_eq!(s.n.coeff(0), 1.0);
        let s = solve_network_series(&CoreClass::Wheels, 0.7, 6).unwrap();
        assert_eq!(s.n.coeff(0), 0.7);
    }

    #[test]
    fn one_labeled_vertex_gives_two_networks() {
        let s = solve_network_series(&CoreClass::Wheels, 1.0, 4).unwrap();
        assert!((s.network_count(1) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn solved_series_satisfy_the_system() {
        for spec in [
            "wheels",
            "wheels+k33+prism",
            "synthetic:alpha=1.5,lambda=1.3",
        ] {
            let class = CoreClass::parse(spec).unwrap();
            let y = 1.2;
            let k = 30;
            let sol = solve_network_series(&class, y, k).unwrap();
            let (n, s, p, h) = (&sol.n, &sol.s, &sol.p, &sol.h);
            // N = y + S + P + H
            let r1 = n.sub(&s.add(p).add(h).add_constant(y));
            // S = x N (y + P + H)
            let r2 = s.sub(
                &TruncatedSeries::variable(k)
                    .mul(n)
                    .mul(&p.add(h).add_constant(y)),
            );
            // P = (1 + y)(e^{S+H} - 1) - S - H
            let u = s.add(h);
            let r3 = p.sub(&u.exp().add_constant(-1.0).scale(1.0 + y).sub(&u));
            // H = T̄(x, N) by direct substitution of the term list
            let mut hh = TruncatedSeries::zero(k);
            for t in class.terms(k) {
                let mut mono = TruncatedSeries::constant(t.coeff, k);
                for _ in 0..t.k {
                    mono = mono.mul(&TruncatedSeries::variable(k));
                }
                hh = hh.add(&mono.mul(&n.pow(t.m as u32)));
            }
            let r4 = h.sub(&hh);
            for r in [r1, r2, r3, r4] {
                for (j, c) in r.coeffs().iter().enumerate() {
                    let size = n.coeff(j).max(1.0);
                    assert!(c.abs() < 1e-9 * size, "{spec}: residual {c} at order {j}");
                }
            }
        }
    }

    #[test]
    fn network_coefficients_dominate_parts() {
        let sol = solve_network_series(&CoreClass::wheels_k33_prism(), 1.0, 25).unwrap();
        for j in 0..=25 {
            let nj = sol.n.coeff(j);
            for part in [&sol.s, &sol.p, &sol.h] {
                assert!(nj >= part.coeff(j));
                assert!(part.coeff(j) >= 0.0);
            }
        }
    }

    #[test]
    fn integer_counts_up_to_twelve() {
        let sol = solve_network_series(&CoreClass::wheels_k33_prism(), 1.0, 12).unwrap();
        for n in 0..=12 {
            let c = sol.network_count(n);
            assert!((c - c.round()).abs() < 1e-6 * c.max(1.0), "n = {n}: {c}");
            assert!(c.round() >= 1.0);
        }
    }

    #[test]
    fn rescaled_solution_matches_rescaled_coefficients() {
        let plain = solve_network_series(&CoreClass::Wheels, 1.0, 20).unwrap();
        let scaled = solve_network_series_scaled(&CoreClass::Wheels, 1.0, 20, 0.3).unwrap();
        let expected = plain.n.rescale(0.3);
        for n in 0..=20 {
            assert!(
                (scaled.n.coeff(n) - expected.coeff(n)).abs()
                    < 1e-12 * expected.coeff(n).max(1e-300)
            );
        }
    }

    #[test]
    fn exponent_fit_on_known_laws() {
        let geometric = TruncatedSeries::from_coeffs((0..=200).map(|n| 2f64.powi(n)).collect());
        assert!(estimate_singular_exponent(&geometric, 0.5).abs() < 1e-9);
        let law = TruncatedSeries::from_coeffs(
            (0..=200)
                .map(|n| {
                    if n == 0 {
                        1.0
                    } else {
                        (n as f64).powf(-2.5) * 3f64.powi(n)
                    }
                })
                .collect(),
        );
        assert!((estimate_singular_exponent(&law, 1.0 / 3.0) - 2.5).abs() < 0.1);
    }
}
