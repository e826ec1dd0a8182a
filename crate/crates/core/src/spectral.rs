//! Spin models as symmetric weight matrices: eigenvalues, the
//! antiferromagnetic test, canonical model constructors, and walk counts.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub const MAX_SPINS: usize = 32;

const JACOBI_MAX_SWEEPS: usize = 100;
const JACOBI_REL_TOL: f64 = 1e-12;

/// Symmetric nonnegative `q x q` weight matrix. Diagonal entries are loop weights.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedModel {
    q: usize,
    weights: Vec<f64>,
}

impl WeightedModel {
    /// Builds a model from row-major weights; requires exact symmetry.
    pub fn new(q: usize, weights: Vec<f64>) -> Result<Self> {
        Self::with_symmetry_tolerance(q, weights, 0.0)
    }

    /// Accepts `|M - M^T| <= tol` entrywise, then stores `(M + M^T) / 2`.
    pub fn with_symmetry_tolerance(q: usize, mut weights: Vec<f64>, tol: f64) -> Result<Self> {
        if q < 1 {
            return Err(invalid("model needs at least one spin"));
        }
        if q > MAX_SPINS {
            return Err(Error::TooLarge { what: "spin count", size: q as u128, limit: MAX_SPINS as u128 });
        }
        if weights.len() != q * q {
            return Err(Error::LengthMismatch { expected: q * q, got: weights.len() });
        }
        for i in 0..q {
            for j in 0..q {
                let w = weights[i * q + j];
                if !w.is_finite() {
                    return Err(invalid(format!("non-finite weight at ({i},{j})")));
                }
                if w < 0.0 {
                    return Err(Error::NegativeWeight { i, j, value: w });
                }
            }
        }
        for i in 0..q {
            for j in i + 1..q {
                let (a, b) = (weights[i * q + j], weights[j * q + i]);
                let diff = (a - b).abs();
                if diff > tol {
                    return Err(Error::Asymmetry { i, j, diff });
                }
                let mean = 0.5 * (a + b);
                weights[i * q + j] = mean;
                weights[j * q + i] = mean;
            }
        }
        Ok(WeightedModel { q, weights })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let q = rows.len();
        let mut flat = Vec::with_capacity(q * q);
        for row in rows {
            if row.len() != q {
                return Err(Error::LengthMismatch { expected: q, got: row.len() });
            }
            flat.extend_from_slice(row);
        }
        Self::new(q, flat)
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.q + j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.weights.chunks(self.q).map(<[f64]>::to_vec).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.q).map(|i| self.weight(i, i)).sum()
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.weights.iter().map(|w| w * w).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.weights.iter().fold(0.0, |m, w| m.max(w.abs()))
    }

    pub fn has_zero_row(&self) -> bool {
        self.weights.chunks(self.q).any(|row| row.iter().all(|&w| w == 0.0))
    }

    /// Eigenvalue sign-banding threshold, proportional to `q * max|entry|`.
    pub fn zero_tolerance(&self) -> f64 {
        1e-10 * self.q as f64 * self.max_abs_entry()
    }
}

/// Eigenvalues in descending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub zero_tolerance: f64,
}

impl Spectrum {
    pub fn positive_count(&self) -> usize {
        self.eigenvalues.iter().filter(|&&mu| mu > self.zero_tolerance).count()
    }

    pub fn has_near_zero(&self) -> bool {
        self.eigenvalues.iter().any(|mu| mu.abs() < 10.0 * self.zero_tolerance)
    }

    pub fn power_sum(&self, exp: u32) -> f64 {
        self.eigenvalues.iter().map(|mu| mu.powi(exp as i32)).sum()
    }
}

/// Cyclic Jacobi rotations on a copy of the weight matrix.
pub fn eigenvalues(model: &WeightedModel) -> Result<Spectrum> {
    let q = model.q();
    let mut a = model.weights().to_vec();
    let frob = model.frobenius_sq().sqrt();
    let off_norm = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..q {
            for j in 0..q {
                if i != j {
                    s += a[i * q + j] * a[i * q + j];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off_norm(&a) <= JACOBI_REL_TOL * frob;
    let mut sweep = 0;
    while !converged && sweep < JACOBI_MAX_SWEEPS {
        for p in 0..q {
            for r in p + 1..q {
                let apr = a[p * q + r];
                if apr == 0.0 {
                    continue;
                }
                let app = a[p * q + p];
                let arr = a[r * q + r];
                let theta = (arr - app) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                a[p * q + p] = app - t * apr;
                a[r * q + r] = arr + t * apr;
                a[p * q + r] = 0.0;
                a[r * q + p] = 0.0;
                for k in 0..q {
                    if k == p || k == r {
                        continue;
                    }
                    let akp = a[k * q + p];
                    let akr = a[k * q + r];
                    let new_kp = c * akp - s * akr;
                    let new_kr = s * akp + c * akr;
                    a[k * q + p] = new_kp;
                    a[p * q + k] = new_kp;
                    a[k * q + r] = new_kr;
                    a[r * q + k] = new_kr;
                }
            }
        }
        sweep += 1;
        converged = off_norm(&a) <= JACOBI_REL_TOL * frob;
    }
    if !converged {
        return Err(Error::NumericalFailure(format!("Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")));
    }
    let mut eigenvalues: Vec<f64> = (0..q).map(|i| a[i * q + i]).collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(Spectrum { eigenvalues, zero_tolerance: model.zero_tolerance() })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AfmClassification {
    pub antiferromagnetic: bool,
    pub spectrum: Spectrum,
    /// Some eigenvalue lies within ten times the zero tolerance.
    pub near_zero: bool,
}

/// Exactly one eigenvalue above `+tau`; values in `[-tau, tau]` count as zero.
pub fn is_antiferromagnetic(model: &WeightedModel) -> Result<AfmClassification> {
    let spectrum = eigenvalues(model)?;
    let antiferromagnetic = spectrum.positive_count() == 1;
    let near_zero = spectrum.has_near_zero();
    Ok(AfmClassification { antiferromagnetic, spectrum, near_zero })
}

/// Hard-core blow-up realising fugacity `r / p`: `p` looped, mutually adjacent
/// vertices, `r` unlooped independent ones, complete bipartite in between.
pub fn blow_up_hardcore(p: usize, r: usize) -> Result<WeightedModel> {
    if p < 1 || r < 1 {
        return Err(invalid("blow-up needs p >= 1 and r >= 1"));
    }
    let q = p + r;
    if q > MAX_SPINS {
        return Err(Error::TooLarge { what: "blow-up size", size: q as u128, limit: MAX_SPINS as u128 });
    }
    let mut w = vec![0.0; q * q];
    for i in 0..q {
        for j in 0..q {
            if i < p || j < p {
                w[i * q + j] = 1.0;
            }
        }
    }
    WeightedModel::new(q, w)
}

/// `K_{q+1}` with one unit loop at vertex 0.
pub fn looped_clique(q: usize) -> Result<WeightedModel> {
    if q < 1 {
        return Err(invalid("looped clique needs q >= 1"));
    }
    let m = q + 1;
    if m > MAX_SPINS {
        return Err(Error::TooLarge { what: "looped clique size", size: m as u128, limit: MAX_SPINS as u128 });
    }
    let mut w = vec![1.0; m * m];
    for i in 1..m {
        w[i * m + i] = 0.0;
    }
    WeightedModel::new(m, w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WalkKind {
    PathEdges,
    Cycle,
}

/// `hom(P_len, H) = 1^T H^len 1` or `hom(C_len, H) = tr(H^len)`.
pub fn walk_homomorphisms(kind: WalkKind, len: usize, model: &WeightedModel) -> Result<f64> {
    let q = model.q();
    match kind {
        WalkKind::PathEdges => {
            if len < 1 {
                return Err(invalid("path needs at least one edge"));
            }
            let mut v = vec![1.0; q];
            for _ in 0..len {
                v = mat_vec(model.weights(), &v, q);
            }
            Ok(v.iter().sum())
        }
        WalkKind::Cycle => {
            if len < 3 {
                return Err(invalid(format!("cycle length {len} < 3")));
            }
            let mut m = model.weights().to_vec();
            for _ in 1..len {
                m = mat_mul(&m, model.weights(), q);
            }
            Ok((0..q).map(|i| m[i * q + i]).sum())
        }
    }
}

fn mat_vec(m: &[f64], v: &[f64], q: usize) -> Vec<f64> {
    (0..q).map(|i| (0..q).map(|j| m[i * q + j] * v[j]).sum()).collect()
}

fn mat_mul(a: &[f64], b: &[f64], q: usize) -> Vec<f64> {
    let mut out = vec![0.0; q * q];
    for i in 0..q {
        for k in 0..q {
            let aik = a[i * q + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..q {
                out[i * q + j] += aik * b[k * q + j];
            }
        }
    }
    out
}
