//! Values of the network egfs on the positive axis, the dominant
//! singularity `(ρ_N, N₀)`, the sub/supercritical classification, and the
//! limiting constants that govern core counts.

use crate::classes::CoreClass;
use crate::error::{Error, Result};
use crate::series::{estimate_singular_exponent, solve_network_series_scaled};
use nalgebra::{Matrix5, Vector5};
use serde::Serialize;
use std::collections::BTreeMap;

/// `Φ(x, y, z) = T̄(x, z) − log((1+z)/(1+y)) + xz²/(1+xz)` with partials.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhiValue {
    pub phi: f64,
    pub phi_x: f64,
    pub phi_z: f64,
    pub phi_zz: f64,
}

pub fn phi_eval(class: &CoreClass, x: f64, y: f64, z: f64) -> Result<PhiValue> {
    if z <= -1.0 || (x * z + 1.0).abs() < f64::EPSILON {
        return Err(Error::OutsideDomain { x, z });
    }
    let t = class.tbar_eval(x, z)?;
    let q = 1.0 + x * z;
    Ok(PhiValue {
        phi: t.value - ((1.0 + z) / (1.0 + y)).ln() + x * z * z / q,
        phi_x: t.dx + z * z / (q * q),
        phi_z: t.dz - (1.0 - x * z * z * (2.0 + x * z)) / ((1.0 + z) * q * q),
        phi_zz: t.dzz + 1.0 / ((1.0 + z) * (1.0 + z)) + 2.0 * x / (q * q * q),
    })
}

/// `Φ_y = 1/(1+y)`.
pub fn phi_y(y: f64) -> f64 {
    1.0 / (1.0 + y)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GfValues {
    pub x: f64,
    pub y: f64,
    #[serde(rename = "N")]
    pub n: f64,
    #[serde(rename = "S")]
    pub s: f64,
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "H")]
    pub h: f64,
}

impl GfValues {
    /// Fills in `S, P, H` from a known value `z = N(x, y)`.
    pub fn from_network_value(class: &CoreClass, x: f64, y: f64, z: f64) -> Result<Self> {
        let s = x * z * z / (1.0 + x * z);
        let h = class.tbar_eval(x, z)?.value;
        Ok(GfValues {
            x,
            y,
            n: z,
            s,
            p: z - y - s - h,
            h,
        })
    }

    /// Largest residual of the two scalar identities of the system.
    pub fn residual(&self) -> f64 {
        let r1 = self.n - (self.y + self.s + self.p + self.h);
        let u = self.s + self.h;
        let r2 = self.p - ((1.0 + self.y) * u.exp_m1() - u);
        r1.abs().max(r2.abs())
    }
}

/// Boundary value `z` with `ρ_T(z) = x`, by bisection on the decreasing `ρ_T`.
fn boundary_z(class: &CoreClass, x: f64) -> Option<f64> {
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while class.rho_t(hi) > x {
        hi *= 2.0;
        if hi > 1e150 {
            return None;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if class.rho_t(mid) > x {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

/// Smallest root `z ≥ y` of `G(z) = z`, `G(z) = (1+y)exp(T̄(x,z) + xz²/(1+xz)) − 1`.
///
/// `G` is convex, so Newton from `z = y` increases monotonically to the root
/// when it exists. `NonConvergence` means there is no root in the domain,
/// i.e. `x > ρ_N(y)`.
pub fn solve_network_value(class: &CoreClass, x: f64, y: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(y);
    }
    let mut z = y;
    for _ in 0..1000 {
        if !class.in_domain(x, z) {
            if class.finite_at_boundary() {
                if let Some(zb) = boundary_z(class, x) {
                    let t = class.tbar_eval(x, zb)?;
                    let f = (1.0 + y) * (t.value + x * zb * zb / (1.0 + x * zb)).exp() - 1.0 - zb;
                    if f.abs() <= 1e-12 * (1.0 + zb) {
                        return Ok(zb);
                    }
                }
            }
            return Err(Error::NonConvergence(format!(
                "no network value at x = {x}: left the domain"
            )));
        }
        let t = class.tbar_eval(x, z)?;
        let q = 1.0 + x * z;
        let g1 = (1.0 + y) * (t.value + x * z * z / q).exp();
        let f = g1 - 1.0 - z;
        let fp = g1 * (t.dz + 1.0 - 1.0 / (q * q)) - 1.0;
        let tiny = 1e-14 * (1.0 + z);
        if f <= tiny {
            return Ok(z);
        }
        if fp >= 0.0 || !fp.is_finite() {
            return Err(Error::NonConvergence(format!(
                "no network value at x = {x}: f = {f:e} > 0, f' ≥ 0"
            )));
        }
        let step = -f / fp;
        z += step;
        if step <= 1e-16 * z {
            return Ok(z);
        }
    }
    Err(Error::NonConvergence(format!(
        "network value at x = {x} did not settle"
    )))
}

pub fn solve_gf_values(class: &CoreClass, x: f64, y: f64) -> Result<GfValues> {
    let z = solve_network_value(class, x, y)?;
    GfValues::from_network_value(class, x, y, z)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    Subcritical,
    Supercritical,
}

impl Regime {
    pub fn sign(self) -> &'static str {
        match self {
            Regime::Subcritical => "+",
            Regime::Supercritical => "-",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Singularity {
    pub rho_n: f64,
    pub n0: f64,
    pub regime: Regime,
    /// `Φ_z` at the root of `Φ(ρ_T(z), y, z) = 0`, when that root exists.
    /// It equals `Φ_z(ρ_N, y, N₀)` in the supercritical case; in the
    /// subcritical case it is positive (the root lies beyond the branch
    /// point, where `Φ_z(ρ_N, y, N₀) = 0` itself).
    pub lambda: Option<f64>,
    /// `Φ_z(ρ_N, y, N₀)`.
    pub phi_z_at_root: f64,
    pub phi_residual: f64,
}

const NEAR_CRITICAL: f64 = 1e-8;

/// Smallest `z ≥ y` with `Φ(ρ_T(z), y, z) = 0`.
fn boundary_root(class: &CoreClass, y: f64) -> Result<Option<f64>> {
    let g = |z: f64| -> Result<f64> { Ok(phi_eval(class, class.rho_t(z), y, z)?.phi) };
    let mut lo = y;
    if g(lo)? <= 0.0 {
        return Ok(Some(lo));
    }
    let mut hi = y;
    loop {
        hi *= 1.25;
        if hi > 1e12 {
            return Ok(None);
        }
        if g(hi)? <= 0.0 {
            break;
        }
        lo = hi;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(if g(hi)?.abs() < g(lo)?.abs() { hi } else { lo }))
}

/// Locates `ρ_N(y)` and `N₀(y) = N(ρ_N, y)` and classifies the regime.
pub fn locate_singularity(class: &CoreClass, y: f64) -> Result<Singularity> {
    if !(y > 0.0) {
        return Err(Error::Validation(format!("y must be positive, got {y}")));
    }
    let mut lambda = None;
    let has_boundary = class.rho_t(1.0).is_finite() && class.finite_at_boundary();
    if has_boundary {
        if let Some(zc) = boundary_root(class, y)? {
            let xc = class.rho_t(zc);
            let v = phi_eval(class, xc, y, zc)?;
            if v.phi_z.abs() < NEAR_CRITICAL {
                return Err(Error::NearCritical(v.phi_z.abs()));
            }
            lambda = Some(v.phi_z);
            if v.phi_z < 0.0 {
                return Ok(Singularity {
                    rho_n: xc,
                    n0: zc,
                    regime: Regime::Supercritical,
                    lambda,
                    phi_z_at_root: v.phi_z,
                    phi_residual: v.phi.abs(),
                });
            }
        }
    }
    // subcritical: bracket ρ_N by solvability, then polish the branch point
    let solvable = |x: f64| solve_network_value(class, x, y).ok();
    let mut lo = 0.0;
    let mut hi = class.rho_t(y);
    if !hi.is_finite() {
        hi = 1.0;
        while solvable(hi).is_some() {
            lo = hi;
            hi *= 2.0;
            if hi > 1e12 {
                return Err(Error::NoSingularityFound(
                    "network value exists for every x".into(),
                ));
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if solvable(mid).is_some() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = lo;
    let mut z = solvable(lo)
        .ok_or_else(|| Error::NoSingularityFound("no solvable point below ρ_T(y)".into()))?;
    for _ in 0..100 {
        let v = phi_eval(class, x, y, z)?;
        let h = 1e-7 * x.max(1e-12);
        let dp = phi_eval(class, x + h, y, z)?.phi_z;
        let dm = phi_eval(class, x - h, y, z)?.phi_z;
        let phi_xz = (dp - dm) / (2.0 * h);
        // [φ_x φ_z; φ_xz φ_zz] (dx, dz) = -(φ, φ_z)
        let det = v.phi_x * v.phi_zz - v.phi_z * phi_xz;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let dx = (-v.phi * v.phi_zz + v.phi_z * v.phi_z) / det;
        let dz = (-v.phi_x * v.phi_z + phi_xz * v.phi) / det;
        let (nx, nz) = (x + dx, z + dz);
        if !class.in_domain(nx, nz) || nx <= 0.0 {
            break;
        }
        x = nx;
        z = nz;
        if dx.abs() <= 1e-16 * x && dz.abs() <= 1e-16 * z {
            break;
        }
    }
    let v = phi_eval(class, x, y, z)?;
    if v.phi.abs() > 1e-9 || v.phi_z.abs() > 1e-9 || x >= class.rho_t(z) {
        return Err(Error::NoSingularityFound(format!(
            "branch-point polish failed: |Φ| = {:e}, |Φ_z| = {:e}",
            v.phi.abs(),
            v.phi_z.abs()
        )));
    }
    if let Some(l) = lambda {
        assert!(
            l > 0.0,
            "regime classification inconsistent with the branch taken"
        );
    }
    Ok(Singularity {
        rho_n: x,
        n0: z,
        regime: Regime::Subcritical,
        lambda,
        phi_z_at_root: v.phi_z,
        phi_residual: v.phi.abs(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct AlphaVector {
    #[serde(rename = "aNet")]
    pub a_net: f64,
    #[serde(rename = "aSer")]
    pub a_ser: f64,
    #[serde(rename = "aPar")]
    pub a_par: f64,
    #[serde(rename = "vT")]
    pub v_t: f64,
    #[serde(rename = "eT")]
    pub e_t: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularityReport {
    pub class: String,
    pub y: f64,
    #[serde(rename = "rhoN")]
    pub rho_n: f64,
    #[serde(rename = "N0")]
    pub n0: f64,
    pub gf: GfValues,
    #[serde(rename = "lambdaSign")]
    pub lambda_sign: Regime,
    /// `Φ_z` at the boundary root, see [`Singularity::lambda`].
    pub lambda: Option<f64>,
    #[serde(rename = "phiZAtRoot")]
    pub phi_z_at_root: f64,
    pub tau: f64,
    pub mu: f64,
    #[serde(rename = "alphaVec")]
    pub alpha_vec: AlphaVector,
    #[serde(rename = "aT")]
    pub a_t: f64,
    #[serde(rename = "gammaT")]
    pub gamma_t: f64,
    /// Exponent fitted to the coefficients of `N(x, y)`.
    pub beta: Option<f64>,
    /// Exponent stated for the acceptance probability of the singular sampler.
    #[serde(rename = "betaStated")]
    pub beta_stated: Option<f64>,
    /// Coefficient decay exponent implied by the singularity type
    /// (`3/2` for a square-root branch point, `α+1` otherwise).
    #[serde(rename = "betaTransfer")]
    pub beta_transfer: Option<f64>,
    #[serde(rename = "conditionB")]
    pub condition_b: f64,
    #[serde(rename = "detM")]
    pub det_m: f64,
    #[serde(rename = "detStated")]
    pub det_stated: f64,
    #[serde(rename = "tbarAtRoot")]
    pub tbar_at_root: f64,
    #[serde(rename = "tbarXAtRoot")]
    pub tbar_x_at_root: f64,
    pub pk: BTreeMap<usize, f64>,
    #[serde(rename = "pkTail")]
    pub pk_tail: f64,
    #[serde(rename = "kMax")]
    pub k_max: usize,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, Debug)]
pub struct ConstantsOptions {
    pub k_max: usize,
    pub step: f64,
    /// Order of the series used to fit `beta`; `None` skips the fit.
    pub series_order: Option<usize>,
}

impl Default for ConstantsOptions {
    fn default() -> Self {
        ConstantsOptions {
            k_max: 2000,
            step: 1e-4,
            series_order: Some(400),
        }
    }
}

/// The linear system `M α = r` for the limiting per-vertex counts of sampler
/// draws, written for general `y` (it reduces to the usual `y = 1` form).
pub fn alpha_system(gf: &GfValues, mu: f64) -> (Matrix5<f64>, Vector5<f64>) {
    let GfValues {
        x: rho,
        y,
        n,
        s,
        p,
        h,
    } = *gf;
    let u = s + h;
    #[rustfmt::skip]
    let m = Matrix5::new(
        y / n,  y * rho * n / s,  y * u.exp_m1() / p,  0.0, 0.0,
        0.0,    1.0,              0.0,                 1.0, 0.0,
        s / n,  -1.0,             s * n / p,           0.0, 0.0,
        p / n,  rho * p * n / s,  -1.0,                0.0, 0.0,
        -1.0,   1.0,              0.0,                 0.0, 1.0,
    );
    (m, Vector5::new(mu, 1.0, 0.0, 0.0, 0.0))
}

pub fn network_constants(class: &CoreClass, y: f64, k_max: usize) -> Result<SingularityReport> {
    network_constants_with(
        class,
        y,
        &ConstantsOptions {
            k_max,
            ..Default::default()
        },
    )
}

pub fn network_constants_with(
    class: &CoreClass,
    y: f64,
    opts: &ConstantsOptions,
) -> Result<SingularityReport> {
    let sing = locate_singularity(class, y)?;
    let h = opts.step;
    let rho = |yy: f64| -> Result<f64> {
        let s = locate_singularity(class, yy)?;
        if s.regime != sing.regime {
            return Err(Error::NearCritical(s.lambda.unwrap_or(0.0).abs()));
        }
        Ok(s.rho_n)
    };
    let r0 = sing.rho_n;
    let (rp, rm) = (rho(y + h)?, rho(y - h)?);
    let (rp2, rm2) = (rho(y + h / 2.0)?, rho(y - h / 2.0)?);
    let d1 = |a: f64, b: f64, step: f64| (a - b) / (2.0 * step);
    let d2 = |a: f64, b: f64, step: f64| (a - 2.0 * r0 + b) / (step * step);
    let rho_p = (4.0 * d1(rp2, rm2, h / 2.0) - d1(rp, rm, h)) / 3.0;
    let rho_pp = (4.0 * d2(rp2, rm2, h / 2.0) - d2(rp, rm, h)) / 3.0;
    let mu = -y * rho_p / r0;
    let condition_b = -rho_pp / r0 - rho_p / r0 + (rho_p / r0).powi(2);

    let gf = GfValues::from_network_value(class, r0, y, sing.n0)?;
    let (m, r) = alpha_system(&gf, mu);
    let det_m = m.determinant();
    if !(det_m.abs() > 1e-14) {
        return Err(Error::SingularSystem(det_m.abs()));
    }
    let a = m.lu().solve(&r).ok_or(Error::SingularSystem(det_m.abs()))?;
    let alpha_vec = AlphaVector {
        a_net: a[0],
        a_ser: a[1],
        a_par: a[2],
        v_t: a[3],
        e_t: a[4],
    };

    let t = class.tbar_eval(r0, sing.n0)?;
    let a_t = 2.0 * mu * t.value;
    let gamma_t = alpha_vec.v_t - a_t * r0 * t.dx / t.value;

    let mut pk = BTreeMap::new();
    for k in 4..=opts.k_max.max(4) {
        pk.insert(k, class.term_value(k - 2, r0, sing.n0) / t.value);
    }
    let pk_tail = class.tail_sum(opts.k_max.max(4) - 1, r0, sing.n0) / t.value;

    let rho_t = class.rho_t(sing.n0);
    let tau = if rho_t.is_finite() { r0 / rho_t } else { 0.0 };

    let mut warnings = Vec::new();
    if class.is_entire() {
        warnings.push("core egf is entire (finite class): the regime is always subcritical".into());
    }
    if class.has_pole_singularity() {
        warnings.push("core egf has a pole rather than a fractional singular exponent".into());
    }
    if condition_b.abs() < 1e-8 {
        warnings.push(format!(
            "variance condition is numerically zero ({condition_b:e})"
        ));
    }
    let beta_stated = match sing.regime {
        Regime::Subcritical => Some(2.5),
        Regime::Supercritical => class.singular_exponent(),
    };
    let beta_transfer = match sing.regime {
        Regime::Subcritical => Some(1.5),
        Regime::Supercritical => class.singular_exponent().map(|a| a + 1.0),
    };
    let beta = match opts.series_order {
        Some(order) => {
            let series = solve_network_series_scaled(class, y, order, r0)?;
            Some(estimate_singular_exponent(&series.n, 1.0))
        }
        None => None,
    };

    Ok(SingularityReport {
        class: class.to_string(),
        y,
        rho_n: r0,
        n0: sing.n0,
        gf,
        lambda_sign: sing.regime,
        lambda: sing.lambda,
        phi_z_at_root: sing.phi_z_at_root,
        tau,
        mu,
        alpha_vec,
        a_t,
        gamma_t,
        beta,
        beta_stated,
        beta_transfer,
        condition_b,
        det_m,
        det_stated: r0 * sing.n0 * sing.n0 + (r0 + 1.0) * sing.n0 + 1.0,
        tbar_at_root: t.value,
        tbar_x_at_root: t.dx,
        pk,
        pk_tail,
        k_max: opts.k_max.max(4),
        warnings,
    })
}

impl SingularityReport {
    pub fn p(&self, k: usize) -> f64 {
        self.pk.get(&k).copied().unwrap_or(0.0)
    }

    /// Sum of `p_ℓ` for `k ≤ ℓ ≤ ⌊ξk⌋`, within the tabulated range.
    pub fn p_range(&self, k: usize, xi: f64) -> f64 {
        let upper = (xi * k as f64).floor() as usize;
        self.pk.range(k..=upper.max(k)).map(|(_, p)| p).sum()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// `a_T p_k`, the limiting number of cores with `k` vertices per vertex.
pub fn predicted_core_density(report: &SingularityReport, k: usize) -> f64 {
    report.a_t * report.p(k)
}

/// `a_T Σ_{k ≤ ℓ ≤ ξk} p_ℓ`.
pub fn predicted_range_density(report: &SingularityReport, k: usize, xi: f64) -> f64 {
    report.a_t * report.p_range(k, xi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::solve_network_series;

    const SUPER: &str = "synthetic:alpha=1.5,lambda=0.01,radius=0.1";

    #[test]
    fn phi_trivial_identities() {
        for y in [0.5, 1.0, 2.0] {
            let v = phi_eval(&CoreClass::Wheels, 0.0, y, y).unwrap();
            assert!(v.phi.abs() < 1e-15);
            assert!((v.phi_z + 1.0 / (1.0 + y)).abs() < 1e-15);
        }
    }

    #[test]
    fn phi_partials_match_finite_differences() {
        let c = CoreClass::wheels_k33_prism();
        let (x, y, z) = (0.05, 1.0, 1.2);
        let h = 1e-6;
        let v = phi_eval(&c, x, y, z).unwrap();
        let fx = (phi_eval(&c, x + h, y, z).unwrap().phi - phi_eval(&c, x - h, y, z).unwrap().phi)
            / (2.0 * h);
        let fz = (phi_eval(&c, x, y, z + h).unwrap().phi - phi_eval(&c, x, y, z - h).unwrap().phi)
            / (2.0 * h);
        let fzz = (phi_eval(&c, x, y, z + h).unwrap().phi_z
            - phi_eval(&c, x, y, z - h).unwrap().phi_z)
            / (2.0 * h);
        assert!((v.phi_x - fx).abs() < 1e-6);
        assert!((v.phi_z - fz).abs() < 1e-6);
        assert!((v.phi_zz - fzz).abs() < 1e-6);
        let fy = (phi_eval(&c, x, y + h, z).unwrap().phi - phi_eval(&c, x, y - h, z).unwrap().phi)
            / (2.0 * h);
        assert!((phi_y(y) - fy).abs() < 1e-6);
    }

    #[test]
    fn gf_values_at_origin() {
        let g = solve_gf_values(&CoreClass::Wheels, 0.0, 1.3).unwrap();
        assert_eq!((g.n, g.s, g.p, g.h), (1.3, 0.0, 0.0, 0.0));
    }

    #[test]
    fn gf_values_solve_phi_and_the_system() {
        let c = CoreClass::Wheels;
        let g = solve_gf_values(&c, 0.05, 1.0).unwrap();
        assert!(phi_eval(&c, 0.05, 1.0, g.n).unwrap().phi.abs() < 1e-12);
        assert!(g.residual() < 1e-12);
        assert!(g.s >= 0.0 && g.p >= 0.0 && g.h >= 0.0);
    }

    #[test]
    fn gf_values_agree_with_series() {
        for spec in ["wheels", "wheels+k33+prism", "synthetic:alpha=1.5,lambda=1"] {
            let c = CoreClass::parse(spec).unwrap();
            let series = solve_network_series(&c, 1.0, 60).unwrap();
            let x = 0.03;
            let g = solve_gf_values(&c, x, 1.0).unwrap();
            assert!((series.n.eval(x) - g.n).abs() < 1e-8, "{spec}");
            assert!((series.h.eval(x) - g.h).abs() < 1e-8, "{spec}");
        }
    }

    #[test]
    fn wheels_are_subcritical() {
        let s = locate_singularity(&CoreClass::Wheels, 1.0).unwrap();
        assert_eq!(s.regime, Regime::Subcritical);
        let v = phi_eval(&CoreClass::Wheels, s.rho_n, 1.0, s.n0).unwrap();
        assert!(v.phi.abs() < 1e-9 && v.phi_z.abs() < 1e-9);
        assert!(s.rho_n < 1.0 / (s.n0 * s.n0));
        assert!(solve_network_value(&CoreClass::Wheels, s.rho_n * 1.001, 1.0).is_err());
    }

    #[test]
    fn synthetic_regimes_at_both_ends() {
        let small = locate_singularity(&CoreClass::synthetic(1.5, 1e-3).unwrap(), 1.0).unwrap();
        assert_eq!(small.regime, Regime::Subcritical);
        // with the default radius the boundary always has Φ_z > 0
        let big = CoreClass::synthetic(1.5, 50.0).unwrap();
        assert_eq!(
            locate_singularity(&big, 1.0).unwrap().regime,
            Regime::Subcritical
        );
        let thin = CoreClass::parse(SUPER).unwrap();
        let s = locate_singularity(&thin, 1.0).unwrap();
        assert_eq!(s.regime, Regime::Supercritical);
        let v = phi_eval(&thin, s.rho_n, 1.0, s.n0).unwrap();
        assert!(v.phi_z < 0.0);
        assert!(v.phi.abs() < 1e-12);
        assert!((s.rho_n * s.n0 * s.n0 / 0.1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rho_decreases_in_y() {
        let mut last = f64::INFINITY;
        for i in 0..9 {
            let y = 0.8 + 0.05 * i as f64;
            let r = locate_singularity(&CoreClass::Wheels, y).unwrap().rho_n;
            assert!(r < last);
            last = r;
        }
    }

    fn check_report(report: &SingularityReport) {
        let a = report.alpha_vec;
        assert!((a.a_ser + a.v_t - 1.0).abs() < 1e-12);
        assert!((a.a_net - a.a_ser - a.e_t).abs() < 1e-12);
        for v in [a.a_net, a.a_ser, a.a_par, a.v_t, a.e_t] {
            assert!(v >= 0.0);
        }
        let total: f64 = report.pk.values().sum::<f64>() + report.pk_tail;
        assert!((total - 1.0).abs() < 1e-8, "Σ p_k = {total}");
        let (m, r) = alpha_system(&report.gf, report.mu);
        let resid = m * Vector5::new(a.a_net, a.a_ser, a.a_par, a.v_t, a.e_t) - r;
        assert!(resid.amax() < 1e-8);
        assert!(report.det_m.abs() > 0.0);
        assert!(report.mu >= 1.0);
    }

    /// `a_T` recomputed from the expected number of core draws per sampler
    /// step (network, series and shared draws landing on H).
    fn a_t_from_draws(report: &SingularityReport) -> f64 {
        let g = report.gf;
        let a = report.alpha_vec;
        let u = g.s + g.h;
        let a_sh = a.a_par * u * g.n / g.p;
        a.a_net * g.h / g.n + a.a_ser * g.x * g.n * g.h / g.s + a_sh * g.h / u
    }

    #[test]
    fn wheels_constants() {
        let report = network_constants(&CoreClass::Wheels, 1.0, 400).unwrap();
        check_report(&report);
        assert!(report.tau < 1.0);
        assert!((a_t_from_draws(&report) - report.a_t).abs() < 1e-6 * report.a_t);
        for k in 5..30 {
            let ratio = report.p(k) / report.p(k + 1);
            assert!((ratio - 1.0 / report.tau).abs() < 1e-9 / report.tau);
        }
        let beta = report.beta.unwrap();
        assert!((beta - 1.5).abs() < 0.15, "fitted exponent {beta}");
    }

    #[test]
    fn supercritical_constants() {
        let c = CoreClass::parse(SUPER).unwrap();
        let report = network_constants(&c, 1.0, 2000).unwrap();
        check_report(&report);
        assert_eq!(report.lambda_sign, Regime::Supercritical);
        assert!((report.tau - 1.0).abs() < 1e-12);
        assert!(report.gamma_t > 0.0 && report.gamma_t < 1.0);
        assert!((a_t_from_draws(&report) - report.a_t).abs() < 1e-6 * report.a_t);
    }

    #[test]
    fn range_density_shape() {
        let c = CoreClass::parse(SUPER).unwrap();
        let report = network_constants_with(
            &c,
            1.0,
            &ConstantsOptions {
                k_max: 2000,
                series_order: None,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(
            predicted_range_density(&report, 10, 1.0),
            predicted_core_density(&report, 10)
        );
        let xi = 2.0;
        let pts: Vec<(f64, f64)> = (50..=500)
            .step_by(10)
            .map(|k| ((k as f64).ln(), report.p_range(k, xi).ln()))
            .collect();
        let slope = crate::series::least_squares_slope(&pts);
        assert!((slope + 1.5).abs() < 0.075, "slope {slope}");
    }
}
