//! Clique lower bounds and the scalar machinery behind them.
//!
//! Notation follows the clique kernels
//! `A_d(x, y) = d(d-1)xy + d(x+y) + 1` (ordered disjoint pairs of independent
//! sets in `K_d`) and `B_d(x) = dx + 1` (independent sets in `K_d`). The surface
//! `A_{D+1}(x, y)^{1/(D+1)}` is concave on the nonnegative quadrant; a triple
//! `(a0, a1, a2)` belongs to the dual set `S_D` when the plane
//! `a0 + a1 x + a2 y` dominates that surface there.
//!
//! Everything here is `f64`. Bound comparisons are made in the log domain.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{NamedKind, SimpleGraph};
use crate::partition::hom_count;
use crate::scalar::Scalar;
use crate::spectral::WeightedModel;

/// Uniform acceptance slack for floating-point bound comparisons.
pub const SLACK_TOL: f64 = 1e-9;

pub fn a_kernel(d: u32, x: f64, y: f64) -> f64 {
    let d = d as f64;
    d * (d - 1.0) * x * y + d * (x + y) + 1.0
}

pub fn b_kernel(d: u32, x: f64) -> f64 {
    d as f64 * x + 1.0
}

pub fn a_kernel_exact<S: Scalar>(d: u64, x: &S, y: &S) -> S {
    let dd = S::from_u64(d);
    let dm1 = S::from_u64(d.saturating_sub(1));
    dd.clone() * dm1 * x.clone() * y.clone() + dd * (x.clone() + y.clone()) + S::one()
}

pub fn b_kernel_exact<S: Scalar>(d: u64, x: &S) -> S {
    S::from_u64(d) * x.clone() + S::one()
}

/// `A_{d+1}(x, y)^{1/(d+1)}`.
pub fn surface(d: u32, x: f64, y: f64) -> f64 {
    a_kernel(d + 1, x, y).powf(1.0 / (d as f64 + 1.0))
}

fn require_nonnegative(values: &[f64], what: &str) -> Result<()> {
    match values.iter().find(|x| !x.is_finite() || **x < 0.0) {
        Some(x) => Err(invalid(format!("{what}: value {x} must be finite and >= 0"))),
        None => Ok(()),
    }
}

/// The kernels attached to one vertex of degree `d`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CliqueKernels {
    pub d: u32,
    pub lambda: f64,
    pub mu: f64,
    /// `A_d(lambda, mu)`
    pub a: f64,
    /// `B_d(mu)`
    pub b_mu: f64,
    /// `B_d(lambda)`
    pub b_lambda: f64,
    /// `A_{d+1}(lambda, mu)`
    pub d_next: f64,
}

impl CliqueKernels {
    pub fn new(d: u32, lambda: f64, mu: f64) -> Self {
        CliqueKernels {
            d,
            lambda,
            mu,
            a: a_kernel(d, lambda, mu),
            b_mu: b_kernel(d, mu),
            b_lambda: b_kernel(d, lambda),
            d_next: a_kernel(d + 1, lambda, mu),
        }
    }

    /// `d * A_{d+1} - ((d+1) B_d(lambda) B_d(mu) - 1)`, zero up to rounding.
    pub fn identity_residual(&self) -> f64 {
        let d = self.d as f64;
        d * self.d_next - ((d + 1.0) * self.b_lambda * self.b_mu - 1.0)
    }
}

/// `sum_v log(1 + (d_v+1) lambda_v) / (d_v+1)`.
pub fn clique_bound_log(g: &SimpleGraph, acts: &[f64]) -> Result<f64> {
    if acts.len() != g.vertex_count() {
        return Err(Error::LengthMismatch { expected: g.vertex_count(), got: acts.len() });
    }
    require_nonnegative(acts, "clique bound")?;
    Ok(g.degrees()
        .iter()
        .zip(acts)
        .map(|(&d, &lam)| {
            let k = d as f64 + 1.0;
            (k * lam).ln_1p() / k
        })
        .sum())
}

/// `sum_v log A_{d_v+1}(lambda_v, mu_v) / (d_v+1)`.
pub fn clique_bound_z2_log(g: &SimpleGraph, lam: &[f64], mu: &[f64]) -> Result<f64> {
    for acts in [lam, mu] {
        if acts.len() != g.vertex_count() {
            return Err(Error::LengthMismatch { expected: g.vertex_count(), got: acts.len() });
        }
        require_nonnegative(acts, "semiproper clique bound")?;
    }
    Ok(g.degrees()
        .iter()
        .enumerate()
        .map(|(v, &d)| {
            let k = d as f64 + 1.0;
            let excess = k * d as f64 * lam[v] * mu[v] + k * (lam[v] + mu[v]);
            excess.ln_1p() / k
        })
        .sum())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomCliqueBound {
    /// `sum_v log hom(K_{d_v+1}, H) / (d_v+1)`, or `-inf` when degenerate.
    pub log_value: f64,
    /// Some `hom(K_{d+1}, H)` vanished; the inequality then holds trivially.
    pub degenerate: bool,
    /// `(d, hom(K_{d+1}, H))` per distinct degree.
    pub clique_homs: Vec<(usize, f64)>,
}

pub fn hom_clique_bound_log(g: &SimpleGraph, model: &WeightedModel) -> Result<HomCliqueBound> {
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in g.degrees() {
        *counts.entry(d).or_default() += 1;
    }
    let mut clique_homs = Vec::with_capacity(counts.len());
    let mut log_value = 0.0;
    let mut degenerate = false;
    for (&d, &mult) in &counts {
        let clique = SimpleGraph::make_named(NamedKind::Clique, d + 1)?;
        let h = hom_count(&clique, model)?;
        clique_homs.push((d, h));
        if h > 0.0 {
            log_value += mult as f64 * h.ln() / (d as f64 + 1.0);
        } else {
            degenerate = true;
        }
    }
    if degenerate {
        log_value = f64::NEG_INFINITY;
    }
    Ok(HomCliqueBound { log_value, degenerate, clique_homs })
}

/// Elementary symmetric polynomials `e_0..e_q` via `prod (1 + x_i t)`.
fn elementary_symmetric<S: Scalar>(xs: &[S]) -> Vec<S> {
    let mut e = vec![S::zero(); xs.len() + 1];
    e[0] = S::one();
    for (i, x) in xs.iter().enumerate() {
        for k in (1..=i + 1).rev() {
            e[k] = e[k].clone() + x.clone() * e[k - 1].clone();
        }
    }
    e
}

/// `F_d(x) = sum_k (d)_k e_k(x)` with `(d)_k` the falling factorial.
pub fn falling_factorial_kernel_exact<S: Scalar>(d: u64, xs: &[S]) -> S {
    let e = elementary_symmetric(xs);
    let mut total = S::zero();
    let mut falling = S::one();
    for (k, ek) in e.iter().enumerate() {
        if k as u64 > d {
            break;
        }
        total = total + falling.clone() * ek.clone();
        falling = falling * S::from_u64(d - k as u64);
    }
    total
}

pub fn falling_factorial_kernel(d: u32, xs: &[f64]) -> Result<f64> {
    if xs.is_empty() {
        return Err(invalid("falling-factorial kernel needs q >= 1 arguments"));
    }
    require_nonnegative(xs, "falling-factorial kernel")?;
    Ok(falling_factorial_kernel_exact(d as u64, xs))
}

fn validate_delta(delta: u32) -> Result<()> {
    if delta < 2 {
        return Err(invalid(format!("degree bound {delta} < 2")));
    }
    Ok(())
}

/// `f(X) = (D+1) s X^{2D} - D X^{D+1} - 1`.
pub fn xi_polynomial(delta: u32, s: f64, x: f64) -> f64 {
    let dl = delta as f64;
    let xd = x.powi(delta as i32);
    (dl + 1.0) * s * xd * xd - dl * xd * x - 1.0
}

/// Unique zero of [`xi_polynomial`] on `(1, inf)` for `0 < s < 1`, by bisection.
pub fn xi_delta(delta: u32, s: f64) -> Result<f64> {
    validate_delta(delta)?;
    if !(s > 0.0 && s < 1.0) {
        return Err(invalid(format!("xi needs 0 < s < 1, got {s}")));
    }
    let f = |x: f64| xi_polynomial(delta, s, x);
    let mut lo = 1.0;
    let mut hi = 2.0;
    while f(hi) <= 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NumericalFailure(format!("no sign change for xi(s = {s})")));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo < 1e-15 * hi {
            break;
        }
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let xi = if f(lo).abs() <= f(hi).abs() { lo } else { hi };
    let scale = ((delta as f64 + 1.0) * s * xi.powi(2 * delta as i32)).max(1.0);
    if f(xi).abs() > 1e-12 * scale {
        return Err(Error::NumericalFailure(format!("xi residual {:e} too large", f(xi))));
    }
    Ok(xi)
}

/// `Psi_D(s) = xi - (2/D) s xi^D`.
pub fn psi_delta(delta: u32, s: f64) -> Result<f64> {
    let xi = xi_delta(delta, s)?;
    Ok(xi - 2.0 / delta as f64 * s * xi.powi(delta as i32))
}

/// Psi loses digits to cancellation as `s -> 1`.
pub fn psi_low_confidence(s: f64) -> bool {
    (1.0 - s).abs() < 1e-6
}

const ASCENT_LIMIT: f64 = 1e6;
const PHI_AGREEMENT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiResult {
    /// `sup_{x,y >= 0} A_{D+1}(x,y)^{1/(D+1)} - a1 x - a2 y`
    pub value: f64,
    pub argmax: (f64, f64),
    /// Value at the interior stationary point, when it lies in the quadrant.
    pub closed_form: Option<f64>,
    /// Best value found by coordinate ascent and axis searches.
    pub numeric: f64,
    /// The numeric search confirmed the closed form.
    pub certified: bool,
}

fn phi_objective(delta: u32, a1: f64, a2: f64, x: f64, y: f64) -> f64 {
    surface(delta, x, y) - a1 * x - a2 * y
}

/// Exact maximiser in `x >= 0` for fixed `y`: the surface is
/// `(alpha x + beta)^{1/(D+1)}` with `alpha = (D+1)(D y + 1)`, `beta = (D+1) y + 1`.
fn best_coordinate(delta: u32, a: f64, other: f64) -> f64 {
    let dl = delta as f64;
    let alpha = (dl + 1.0) * (dl * other + 1.0);
    let beta = (dl + 1.0) * other + 1.0;
    let target = ((dl * other + 1.0) / a).powf((dl + 1.0) / dl);
    ((target - beta) / alpha).max(0.0)
}

fn golden_section_max<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = hi - inv_phi * (hi - lo);
    let mut d = lo + inv_phi * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if fc >= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    let candidates = [(0.0, f(0.0)), (x, f(x))];
    candidates.into_iter().max_by(|a, b| a.1.total_cmp(&b.1)).unwrap()
}

/// Smallest power of two `X` with `a1 X` and `a2 X` both above `2 A_{D+1}(X,X)^{1/(D+1)}`.
pub fn scan_limit(delta: u32, a1: f64, a2: f64) -> Result<f64> {
    let mut x = 1.0f64;
    loop {
        let s2 = 2.0 * surface(delta, x, x);
        if a1 * x > s2 && a2 * x > s2 {
            return Ok(x);
        }
        x *= 2.0;
        if !x.is_finite() {
            return Err(Error::NumericalFailure("no finite scan limit".into()));
        }
    }
}

/// `Phi_D(a1, a2)`, the least `a0` with `(a0, a1, a2)` in `S_D`.
pub fn phi_delta(delta: u32, a1: f64, a2: f64) -> Result<PhiResult> {
    validate_delta(delta)?;
    if !(a1 > 0.0 && a2 > 0.0 && a1.is_finite() && a2.is_finite()) {
        return Err(invalid(format!("phi needs a1, a2 > 0, got ({a1}, {a2})")));
    }
    let dl = delta as f64;
    let obj = |x: f64, y: f64| phi_objective(delta, a1, a2, x, y);

    let mut closed = None;
    if a1 * a2 < 1.0 {
        let s = a1 * a2;
        let xi = xi_delta(delta, s)?;
        let xid = xi.powi(delta as i32);
        let xs = (a2 * xid - 1.0) / dl;
        let ys = (a1 * xid - 1.0) / dl;
        if xs >= 0.0 && ys >= 0.0 {
            let value = xi - 2.0 / dl * s * xid + (a1 + a2) / dl;
            closed = Some((value, (xs, ys)));
        }
    }

    // projected coordinate ascent from the origin
    let (mut x, mut y) = (0.0f64, 0.0f64);
    let mut diverged = false;
    for _ in 0..100_000 {
        let nx = best_coordinate(delta, a1, y);
        let ny = best_coordinate(delta, a2, nx);
        if nx + ny > ASCENT_LIMIT || !(nx + ny).is_finite() {
            diverged = true;
            break;
        }
        let step = (nx - x).abs() + (ny - y).abs();
        x = nx;
        y = ny;
        if step <= 1e-15 * (1.0 + x + y) {
            break;
        }
    }

    let mut best = (obj(0.0, 0.0), (0.0, 0.0));
    if !diverged {
        let v = obj(x, y);
        if v > best.0 {
            best = (v, (x, y));
        }
    }
    let limit = scan_limit(delta, a1, a2)?.min(ASCENT_LIMIT);
    let (ax, vx) = golden_section_max(|t| obj(t, 0.0), 0.0, limit);
    if vx > best.0 {
        best = (vx, (ax, 0.0));
    }
    let (ay, vy) = golden_section_max(|t| obj(0.0, t), 0.0, limit);
    if vy > best.0 {
        best = (vy, (0.0, ay));
    }
    let numeric = best.0;

    match closed {
        Some((c, at)) => {
            if diverged {
                return Ok(PhiResult { value: c, argmax: at, closed_form: Some(c), numeric, certified: false });
            }
            if (c - numeric).abs() > PHI_AGREEMENT {
                return Err(Error::InternalInconsistency(format!(
                    "phi closed form {c} disagrees with numeric {numeric} at ({a1}, {a2})"
                )));
            }
            let (value, argmax) = if c >= numeric { (c, at) } else { (numeric, best.1) };
            Ok(PhiResult { value, argmax, closed_form: Some(c), numeric, certified: true })
        }
        None if diverged => Err(Error::DivergenceSuspected(ASCENT_LIMIT)),
        None => Ok(PhiResult { value: numeric, argmax: best.1, closed_form: None, numeric, certified: true }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualPoint {
    pub delta: u32,
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

impl DualPoint {
    pub fn new(delta: u32, a0: f64, a1: f64, a2: f64) -> Result<Self> {
        validate_delta(delta)?;
        if [a0, a1, a2].iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(invalid(format!("dual point coordinates must be positive: ({a0}, {a1}, {a2})")));
        }
        Ok(DualPoint { delta, a0, a1, a2 })
    }

    /// `a0 + a1 x + a2 y - A_{D+1}(x,y)^{1/(D+1)}`.
    pub fn margin(&self, x: f64, y: f64) -> f64 {
        self.a0 + self.a1 * x + self.a2 * y - surface(self.delta, x, y)
    }

    /// Tangent plane to the surface at `(lambda, mu)`, scaled to `S_d` coordinates.
    pub fn tangent_plane(d: u32, lambda: f64, mu: f64) -> Result<Self> {
        require_nonnegative(&[lambda, mu], "tangent plane")?;
        let k = CliqueKernels::new(d, lambda, mu);
        let scale = (-(d as f64) / (d as f64 + 1.0) * k.d_next.ln()).exp();
        DualPoint::new(d, k.a * scale, k.b_mu * scale, k.b_lambda * scale)
    }

    /// Single-neighbour factor `(A_d^{D/d}, B_d(mu)^{D/d}, B_d(lambda)^{D/d}) / A_{d+1}^{D/(d+1)}`.
    pub fn separate_factor(delta: u32, d: u32, lambda: f64, mu: f64) -> Result<Self> {
        if d < 1 || d > delta {
            return Err(invalid(format!("need 1 <= d <= delta, got d = {d}, delta = {delta}")));
        }
        require_nonnegative(&[lambda, mu], "separate factor")?;
        let k = CliqueKernels::new(d, lambda, mu);
        let p = delta as f64 / d as f64;
        let log_den = delta as f64 / (d as f64 + 1.0) * k.d_next.ln();
        let coord = |base: f64| (p * base.ln() - log_den).exp();
        DualPoint::new(delta, coord(k.a), coord(k.b_mu), coord(k.b_lambda))
    }

    pub fn geometric_mean(&self, other: &DualPoint) -> Result<Self> {
        if self.delta != other.delta {
            return Err(invalid("geometric mean of dual points with different degrees"));
        }
        DualPoint::new(
            self.delta,
            (self.a0 * other.a0).sqrt(),
            (self.a1 * other.a1).sqrt(),
            (self.a2 * other.a2).sqrt(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub phi: Option<PhiResult>,
    /// Smallest margin seen on the scan, and where.
    pub min_margin: f64,
    pub witness: (f64, f64),
    pub scan_limit: f64,
}

/// Decides `p in S_D`: `a0 >= Phi_D(a1, a2) - tol`, cross-checked by a scan
/// of the margin over a uniform-plus-logarithmic grid on `[0, X]^2`.
pub fn s_membership(p: &DualPoint, grid: usize) -> Result<Membership> {
    let p = DualPoint::new(p.delta, p.a0, p.a1, p.a2)?;
    if p.a0 < 1.0 - SLACK_TOL {
        return Ok(Membership { member: false, phi: None, min_margin: p.a0 - 1.0, witness: (0.0, 0.0), scan_limit: 0.0 });
    }
    let phi = phi_delta(p.delta, p.a1, p.a2)?;
    let limit = scan_limit(p.delta, p.a1, p.a2)?;
    let grid = grid.max(2);
    let mut axis = vec![0.0];
    axis.extend((1..=grid).map(|k| limit * k as f64 / grid as f64));
    axis.extend((0..=grid).map(|k| limit * 10f64.powf(-8.0 + 8.0 * k as f64 / grid as f64)));
    let mut min_margin = p.margin(phi.argmax.0, phi.argmax.1);
    let mut witness = phi.argmax;
    for &x in &axis {
        for &y in &axis {
            let m = p.margin(x, y);
            if m < min_margin {
                min_margin = m;
                witness = (x, y);
            }
        }
    }
    let member = p.a0 >= phi.value - SLACK_TOL && min_margin >= -SLACK_TOL;
    Ok(Membership { member, phi: Some(phi), min_margin, witness, scan_limit: limit })
}

/// `log[(D+1)(1 + d lambda)^{D/d}] - log[1 + D (1 + (d+1) lambda)^{(D+1)/(d+1)}]`.
pub fn component_slack(delta: u32, d: u32, lambda: f64) -> f64 {
    let (dl, df) = (delta as f64, d as f64);
    let lhs = (dl + 1.0).ln() + dl / df * (df * lambda).ln_1p();
    let rhs = (dl * ((dl + 1.0) / (df + 1.0) * ((df + 1.0) * lambda).ln_1p()).exp()).ln_1p();
    lhs - rhs
}

/// Log-domain pieces of the key vertex-deletion lemma.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeyLemmaTerms {
    /// `log(prod (1 + d_i l_i)^{1/d_i} + l_0)`
    pub lhs_log: f64,
    /// `log[(1 + (D+1) l_0)^{1/(D+1)} prod (1 + (d_i+1) l_i)^{1/(d_i+1)}]`
    pub rhs_log: f64,
    /// Per-neighbour Bernoulli-type inequality, smallest slack.
    pub component_min: f64,
    /// `log prod (1 + y_i)^{1/D} - log(1 + prod y_i^{1/D})`, `y_i = D B_i^{D+1}`.
    pub am_gm: f64,
    /// `log[(D+1) A] - log[D B^{(D+1)/D} + 1]`
    pub reduced: f64,
}

pub fn key_lemma_terms(delta: u32, ds: &[u32], lambda0: f64, lambdas: &[f64]) -> Result<KeyLemmaTerms> {
    if delta < 1 {
        return Err(invalid("key lemma needs delta >= 1"));
    }
    if ds.len() != delta as usize || lambdas.len() != ds.len() {
        return Err(Error::LengthMismatch { expected: delta as usize, got: ds.len().min(lambdas.len()) });
    }
    if let Some(d) = ds.iter().find(|&&d| d < 1 || d > delta) {
        return Err(invalid(format!("degree {d} outside [1, {delta}]")));
    }
    require_nonnegative(lambdas, "key lemma")?;
    require_nonnegative(&[lambda0], "key lemma")?;
    let dl = delta as f64;
    let log_a: f64 = ds.iter().zip(lambdas).map(|(&d, &l)| (d as f64 * l).ln_1p() / d as f64).sum();
    let log_bs: Vec<f64> = ds
        .iter()
        .zip(lambdas)
        .map(|(&d, &l)| ((d as f64 + 1.0) * l).ln_1p() / (d as f64 + 1.0))
        .collect();
    let log_b: f64 = log_bs.iter().sum();
    let lhs_log = (log_a.exp() + lambda0).ln();
    let rhs_log = ((dl + 1.0) * lambda0).ln_1p() / (dl + 1.0) + log_b;
    let component_min = ds
        .iter()
        .zip(lambdas)
        .map(|(&d, &l)| component_slack(delta, d, l))
        .fold(f64::INFINITY, f64::min);
    // y_i = D B_i^{D+1}
    let log_ys: Vec<f64> = log_bs.iter().map(|lb| dl.ln() + (dl + 1.0) * lb).collect();
    let am_gm_lhs: f64 = log_ys.iter().map(|ly| ly.exp().ln_1p() / dl).sum();
    let am_gm_rhs = (log_ys.iter().sum::<f64>() / dl).exp().ln_1p();
    let reduced = (dl + 1.0).ln() + log_a - (dl * ((dl + 1.0) / dl * log_b).exp()).ln_1p();
    Ok(KeyLemmaTerms { lhs_log, rhs_log, component_min, am_gm: am_gm_lhs - am_gm_rhs, reduced })
}

/// Maximum-degree-one step for semiproper colourings:
/// `A_1(l_v, m_v) + l_w B_1(m_v) + m_w B_1(l_v) >= sqrt(A_2(l_w, m_w) A_2(l_v, m_v))`,
/// returned as a log-domain slack.
pub fn degree_one_slack(lw: f64, mw: f64, lv: f64, mv: f64) -> f64 {
    let lhs = a_kernel(1, lv, mv) + lw * b_kernel(1, mv) + mw * b_kernel(1, lv);
    let rhs = 0.5 * (a_kernel(2, lw, mw).ln() + a_kernel(2, lv, mv).ln());
    lhs.ln() - rhs
}

/// `2d log A_{d+1}(x,y) - (d+1) [log(dx+1) + log(dy+1)]`; nonnegative, zero only at the origin.
pub fn basic_inequality_slack(d: u32, x: f64, y: f64) -> f64 {
    let df = d as f64;
    let t = x + y + df * x * y;
    2.0 * df * ((df + 1.0) * t).ln_1p() - (df + 1.0) * ((df * x).ln_1p() + (df * y).ln_1p())
}

/// `H_k(x) = A_k(x,x) / B_k(x)`.
pub fn h_ratio(k: u32, x: f64) -> f64 {
    a_kernel(k, x, x) / b_kernel(k, x)
}

/// Unique `x >= 0` with `H_k(x)^{1/k} = s`. For `k = 1` the ratio is bounded
/// by 2, so only `1 <= s < 2` is solvable.
pub fn chain_root(k: u32, s: f64) -> Result<f64> {
    if k < 1 {
        return Err(invalid("chain index k must be >= 1"));
    }
    if !s.is_finite() || s < 1.0 {
        return Err(invalid(format!("chain needs s >= 1, got {s}")));
    }
    if k == 1 && s >= 2.0 {
        return Err(invalid(format!("H_1 < 2, so s = {s} is out of range")));
    }
    if s == 1.0 {
        return Ok(0.0);
    }
    let target = s.powi(k as i32);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    while h_ratio(k, hi) < target {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(Error::NumericalFailure(format!("no bracket for x_{k}({s})")));
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if h_ratio(k, mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let resid = |x: f64| (h_ratio(k, x).powf(1.0 / k as f64) - s).abs();
    let x = if resid(lo) <= resid(hi) { lo } else { hi };
    if resid(x) > 1e-12 * s {
        return Err(Error::NumericalFailure(format!("x_{k}({s}) residual {:e}", resid(x))));
    }
    Ok(x)
}

/// `Phi_k = B_k(x)^{1/k} / A_{k+1}(x,x)^{1/(k+1)}` at `x = x_k(s)`.
pub fn chain_phi(k: u32, x: f64) -> f64 {
    let kf = k as f64;
    (b_kernel(k, x).ln() / kf - a_kernel(k + 1, x, x).ln() / (kf + 1.0)).exp()
}

/// Closed form of `d/ds log Phi_k(s)`: `-s^{k-1} / (s^k + 2 x_k(s))`.
pub fn chain_log_phi_derivative(k: u32, s: f64, x: f64) -> f64 {
    -s.powi(k as i32 - 1) / (s.powi(k as i32) + 2.0 * x)
}

/// The quadratic whose nonnegativity on `x >= s - 1` gives `H_{d+1}(s x_d) >= s^{d+1}`.
pub fn chain_quadratic(d: u32, s: f64, x: f64) -> f64 {
    let df = d as f64;
    2.0 * df * s * x * x + (2.0 * s + df - s * s * df - s * s) * x - (s - 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricChainState {
    pub d: u32,
    pub s: f64,
    pub x_d: f64,
    pub x_d1: f64,
    pub phi_d: f64,
    pub phi_d1: f64,
}

impl SymmetricChainState {
    /// `s x_d - x_{d+1}`
    pub fn ratio_slack(&self) -> f64 {
        self.s * self.x_d - self.x_d1
    }

    /// `Phi_d - Phi_{d+1}`
    pub fn phi_slack(&self) -> f64 {
        self.phi_d - self.phi_d1
    }

    /// `x_d - (s - 1)`
    pub fn lower_slack(&self) -> f64 {
        self.x_d - (self.s - 1.0)
    }

    pub fn quadratic(&self) -> f64 {
        chain_quadratic(self.d, self.s, self.x_d)
    }

    /// `H_{d+1}(s x_d) - s^{d+1}`
    pub fn h_slack(&self) -> f64 {
        h_ratio(self.d + 1, self.s * self.x_d) - self.s.powi(self.d as i32 + 1)
    }
}

pub fn symmetric_chain(d: u32, s: f64) -> Result<SymmetricChainState> {
    if d < 1 {
        return Err(invalid("chain needs d >= 1"));
    }
    let x_d = chain_root(d, s)?;
    let x_d1 = chain_root(d + 1, s)?;
    Ok(SymmetricChainState { d, s, x_d, x_d1, phi_d: chain_phi(d, x_d), phi_d1: chain_phi(d + 1, x_d1) })
}

/// `(D+1) A - D B^{(D+1)/D} - 1` with `A = prod (1 + d_i l_i)^{1/d_i}`,
/// `B = prod (1 + (d_i+1) l_i)^{1/(d_i+1)}`. `None` outside the domain
/// where all bases are positive.
pub fn reduced_key_expression(delta: u32, ds: &[u32], lambdas: &[f64]) -> Option<(f64, f64)> {
    let dl = delta as f64;
    let mut log_a = 0.0;
    let mut log_b = 0.0;
    for (&d, &l) in ds.iter().zip(lambdas) {
        let (df, lo, hi) = (d as f64, 1.0 + d as f64 * l, 1.0 + (d as f64 + 1.0) * l);
        if !(lo > 0.0 && hi > 0.0) {
            return None;
        }
        log_a += lo.ln() / df;
        log_b += hi.ln() / (df + 1.0);
    }
    let a_term = (dl + 1.0) * log_a.exp();
    let b_term = dl * ((dl + 1.0) / dl * log_b).exp();
    // magnitude of the cancelling terms, for a rounding floor
    Some((a_term - b_term - 1.0, a_term + b_term + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NegativeWitness {
    pub lambda: f64,
    pub value: f64,
}

/// Scans uniform `lambda = -step, -2 step, ...` down to `-0.5` for a point
/// where the reduced key expression is negative beyond rounding noise.
pub fn negative_fugacity_probe(delta: u32, ds: &[u32], step: f64) -> Result<Option<NegativeWitness>> {
    validate_delta(delta)?;
    if ds.is_empty() {
        return Err(invalid("probe needs at least one neighbour degree"));
    }
    if let Some(d) = ds.iter().find(|&&d| d < 1 || d > delta) {
        return Err(invalid(format!("degree {d} outside [1, {delta}]")));
    }
    if !(step > 0.0 && step < 0.5) {
        return Err(invalid(format!("probe step {step} must lie in (0, 0.5)")));
    }
    let mut k = 1u64;
    loop {
        let lambda = -(k as f64) * step;
        if lambda <= -0.5 {
            return Ok(None);
        }
        let lambdas = vec![lambda; ds.len()];
        let Some((value, magnitude)) = reduced_key_expression(delta, ds, &lambdas) else {
            return Ok(None);
        };
        if value < -64.0 * f64::EPSILON * magnitude {
            return Ok(Some(NegativeWitness { lambda, value }));
        }
        k += 1;
    }
}
