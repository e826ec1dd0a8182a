//! Exact partition functions: the multivariate independence polynomial,
//! its semiproper-colouring generalisations, weighted homomorphism counts,
//! and hard-core vertex marginals.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::graph::{components_of, Bits, SimpleGraph};
use crate::scalar::Scalar;
use crate::spectral::{walk_homomorphisms, WalkKind, WeightedModel};

/// Default cap on memoised subproblems per recurrence evaluation.
pub const MEMO_CAPACITY: usize = 1 << 26;

/// Direct `q`-tuple enumeration is only offered up to this many vertices.
pub const TUPLE_ENUMERATION_LIMIT: usize = 16;

/// Brute-force homomorphism counting is refused when `q^n` exceeds this.
pub const HOM_BRUTE_FORCE_LIMIT: u128 = 1_000_000_000;

fn check_len<S>(g: &SimpleGraph, acts: &[S]) -> Result<()> {
    if acts.len() != g.vertex_count() {
        return Err(Error::LengthMismatch { expected: g.vertex_count(), got: acts.len() });
    }
    Ok(())
}

/// `q` rows of per-vertex activities, row `i` holding `lambda^(i)_v`.
#[derive(Clone, Debug, PartialEq)]
pub struct ActivityMatrix<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> ActivityMatrix<S> {
    pub fn new(rows: Vec<Vec<S>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("activity matrix needs q >= 1 rows"));
        }
        let n = rows[0].len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::LengthMismatch { expected: n, got: bad.len() });
        }
        Ok(ActivityMatrix { rows })
    }

    pub fn uniform(q: usize, n: usize, value: S) -> Result<Self> {
        Self::new(vec![vec![value; n]; q])
    }

    pub fn q(&self) -> usize {
        self.rows.len()
    }

    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    /// Activities for `G □ K_q` under the `(v, i) -> i * n + v` labelling.
    pub fn stacked(&self) -> Vec<S> {
        self.rows.iter().flatten().cloned().collect()
    }

    pub fn column(&self, v: usize) -> Vec<S> {
        self.rows.iter().map(|r| r[v].clone()).collect()
    }
}

/// `Z_G` as the defining sum over all independent sets.
pub fn z_bruteforce<S: Scalar>(g: &SimpleGraph, acts: &[S]) -> Result<S> {
    check_len(g, acts)?;
    let mut total = S::zero();
    for set in g.enumerate_independent_sets()? {
        let term = set.iter().fold(S::one(), |acc, v| acc * acts[v].clone());
        total = total + term;
    }
    Ok(total)
}

/// Vertex-deletion recurrence `Z_G = Z_{G-w} + lambda_w Z_{G-N[w]}`, memoised on
/// the mask of remaining vertices, factoring over components at every step.
struct Recurrence<'a, S> {
    adj: &'a [u64],
    acts: &'a [S],
    active: u64,
    memo: HashMap<u64, S>,
    capacity: usize,
}

impl<'a, S: Scalar> Recurrence<'a, S> {
    fn new(g: &'a SimpleGraph, acts: &'a [S], capacity: usize) -> Self {
        // zero-activity vertices contribute nothing and constrain nothing
        let active = (0..acts.len()).filter(|&v| !acts[v].is_zero()).fold(0u64, |m, v| m | 1 << v);
        Recurrence { adj: g.adjacency(), acts, active, memo: HashMap::new(), capacity }
    }

    fn eval(&mut self, mask: u64) -> Result<S> {
        self.eval_active(mask & self.active)
    }

    fn eval_active(&mut self, mask: u64) -> Result<S> {
        if mask == 0 {
            return Ok(S::one());
        }
        if mask.count_ones() == 1 {
            let v = mask.trailing_zeros() as usize;
            return Ok(S::one() + self.acts[v].clone());
        }
        if let Some(z) = self.memo.get(&mask) {
            return Ok(z.clone());
        }
        let comps = components_of(self.adj, mask);
        let value = if comps.len() > 1 {
            let mut acc = S::one();
            for c in comps {
                acc = acc * self.eval_active(c)?;
            }
            acc
        } else {
            let mut pivot = 0;
            let mut best = 0;
            for v in Bits(mask) {
                let d = (self.adj[v] & mask).count_ones();
                if d > best {
                    best = d;
                    pivot = v;
                }
            }
            let without = self.eval_active(mask & !(1 << pivot))?;
            let closed = mask & !(1 << pivot) & !self.adj[pivot];
            without + self.acts[pivot].clone() * self.eval_active(closed)?
        };
        if self.memo.len() >= self.capacity {
            return Err(Error::ResourceExhausted(self.capacity));
        }
        self.memo.insert(mask, value.clone());
        Ok(value)
    }
}

pub fn z_recurrence<S: Scalar>(g: &SimpleGraph, acts: &[S]) -> Result<S> {
    z_recurrence_with_capacity(g, acts, MEMO_CAPACITY)
}

pub fn z_recurrence_with_capacity<S: Scalar>(g: &SimpleGraph, acts: &[S], capacity: usize) -> Result<S> {
    check_len(g, acts)?;
    Recurrence::new(g, acts, capacity).eval(g.full_mask().0)
}

/// `log Z_G` accumulated per connected component.
pub fn z_log(g: &SimpleGraph, acts: &[f64]) -> Result<f64> {
    check_len(g, acts)?;
    let mut rec = Recurrence::new(g, acts, MEMO_CAPACITY);
    let mut total = 0.0;
    for comp in g.components_within(g.full_mask().0) {
        total += rec.eval(comp)?.ln();
    }
    Ok(total)
}

/// `Z_G(lambda; alpha) = sum_I lambda^|I| alpha^e(I, complement)`, via
/// the per-vertex substitution `lambda_v = lambda * alpha^d_v`.
pub fn z_alpha<S: Scalar>(g: &SimpleGraph, lambda: &S, alpha: &S) -> Result<S> {
    if lambda.is_negative() || alpha.is_negative() {
        return Err(invalid("z_alpha needs lambda, alpha >= 0"));
    }
    let acts: Vec<S> = g.degrees().iter().map(|&d| lambda.clone() * alpha.pow_u32(d as u32)).collect();
    z_recurrence(g, &acts)
}

/// Same quantity as [`z_alpha`] by enumeration, counting crossing edges explicitly.
pub fn z_alpha_direct<S: Scalar>(g: &SimpleGraph, lambda: &S, alpha: &S) -> Result<S> {
    if lambda.is_negative() || alpha.is_negative() {
        return Err(invalid("z_alpha needs lambda, alpha >= 0"));
    }
    let edges = g.edges();
    let mut total = S::zero();
    for set in g.enumerate_independent_sets()? {
        let crossing = edges.iter().filter(|&&(u, v)| set.contains(u) != set.contains(v)).count();
        total = total + lambda.pow_u32(set.len() as u32) * alpha.pow_u32(crossing as u32);
    }
    Ok(total)
}

/// `Z^(2)_G(lambda, mu)`: ordered pairs of disjoint independent sets.
pub fn z2<S: Scalar>(g: &SimpleGraph, lam: &[S], mu: &[S]) -> Result<S> {
    check_len(g, lam)?;
    check_len(g, mu)?;
    zq(g, &ActivityMatrix::new(vec![lam.to_vec(), mu.to_vec()])?)
}

/// `Z^(q)_G` evaluated as `Z_{G □ K_q}` on stacked activities.
pub fn zq<S: Scalar>(g: &SimpleGraph, acts: &ActivityMatrix<S>) -> Result<S> {
    if acts.n() != g.vertex_count() {
        return Err(Error::LengthMismatch { expected: g.vertex_count(), got: acts.n() });
    }
    let product = g.cartesian_with_clique(acts.q())?;
    z_recurrence(&product, &acts.stacked())
}

/// `Z^(q)_G` by enumerating semiproper colourings directly: each vertex is
/// left free or gets one of `q` proper colours no earlier neighbour uses.
pub fn zq_enumerate<S: Scalar>(g: &SimpleGraph, acts: &ActivityMatrix<S>) -> Result<S> {
    let n = g.vertex_count();
    if acts.n() != n {
        return Err(Error::LengthMismatch { expected: n, got: acts.n() });
    }
    if n > TUPLE_ENUMERATION_LIMIT {
        return Err(Error::TooLarge {
            what: "q-tuple enumeration",
            size: n as u128,
            limit: TUPLE_ENUMERATION_LIMIT as u128,
        });
    }
    fn go<S: Scalar>(g: &SimpleGraph, acts: &ActivityMatrix<S>, v: usize, classes: &mut [u64]) -> S {
        if v == g.vertex_count() {
            return S::one();
        }
        let mut total = go(g, acts, v + 1, classes);
        let nb = g.neighbours(v).0;
        for c in 0..acts.q() {
            if classes[c] & nb == 0 {
                classes[c] |= 1 << v;
                total = total + acts.rows()[c][v].clone() * go(g, acts, v + 1, classes);
                classes[c] &= !(1 << v);
            }
        }
        total
    }
    let mut classes = vec![0u64; acts.q()];
    Ok(go(g, acts, 0, &mut classes))
}

/// `hom(G, H)` by depth-first assignment with zero-weight pruning.
pub fn hom_bruteforce<S: Scalar>(g: &SimpleGraph, q: usize, weights: &[S]) -> Result<S> {
    if weights.len() != q * q {
        return Err(Error::LengthMismatch { expected: q * q, got: weights.len() });
    }
    let n = g.vertex_count();
    let work = (q as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if work > HOM_BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { what: "hom brute force q^n", size: work, limit: HOM_BRUTE_FORCE_LIMIT });
    }
    // breadth-first order from each component keeps earlier neighbours dense
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    for comp in g.connected_components() {
        let start = comp.iter().max_by_key(|&v| (g.degree(v), usize::MAX - v)).unwrap();
        let mut frontier = vec![start];
        placed |= 1 << start;
        while let Some(v) = frontier.first().copied() {
            frontier.remove(0);
            order.push(v);
            for u in g.neighbours(v).iter() {
                if placed >> u & 1 == 0 {
                    placed |= 1 << u;
                    frontier.push(u);
                }
            }
        }
    }
    let mut position = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }
    let earlier: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(i, &v)| g.neighbours(v).iter().filter(|&u| position[u] < i).collect())
        .collect();

    struct Dfs<'a, S> {
        order: &'a [usize],
        earlier: &'a [Vec<usize>],
        q: usize,
        weights: &'a [S],
        assign: Vec<usize>,
    }
    impl<S: Scalar> Dfs<'_, S> {
        fn go(&mut self, pos: usize) -> S {
            if pos == self.order.len() {
                return S::one();
            }
            let v = self.order[pos];
            let mut total = S::zero();
            'colour: for c in 0..self.q {
                let mut factor = S::one();
                for &u in &self.earlier[pos] {
                    let w = &self.weights[c * self.q + self.assign[u]];
                    if w.is_zero() {
                        continue 'colour;
                    }
                    factor = factor * w.clone();
                }
                self.assign[v] = c;
                total = total + factor * self.go(pos + 1);
            }
            total
        }
    }
    let mut dfs = Dfs { order: &order, earlier: &earlier, q, weights, assign: vec![0; n] };
    Ok(dfs.go(0))
}

/// `hom(G, H)`, factored over components. Isolated vertices give `q`,
/// path and cycle components use walk counts, the rest brute force.
pub fn hom_count(g: &SimpleGraph, model: &WeightedModel) -> Result<f64> {
    let mut total = 1.0;
    for comp in g.connected_components() {
        let sub = g.induced_subgraph(comp)?;
        let n = sub.vertex_count();
        let m = sub.edge_count();
        let value = if n == 1 {
            model.q() as f64
        } else if sub.max_degree() <= 2 && m + 1 == n {
            walk_homomorphisms(WalkKind::PathEdges, m, model)?
        } else if sub.max_degree() <= 2 && m == n {
            walk_homomorphisms(WalkKind::Cycle, m, model)?
        } else {
            hom_bruteforce(&sub, model.q(), model.weights())?
        };
        total *= value;
    }
    Ok(total)
}

/// Per-vertex occupation probabilities under the hard-core measure.
#[derive(Clone, Debug, PartialEq)]
pub struct OccupancyProfile {
    pub marginals: Vec<f64>,
    pub occupancy_fraction: f64,
    pub t: f64,
}

fn require_nonnegative(acts: &[f64], what: &str) -> Result<()> {
    if let Some((v, x)) = acts.iter().enumerate().find(|(_, x)| x.is_nan() || **x < 0.0) {
        return Err(invalid(format!("{what}: activity {x} at vertex {v} must be >= 0")));
    }
    Ok(())
}

/// `p_v = lambda_v Z_{G - N[v]} / Z_G`.
pub fn vertex_marginals(g: &SimpleGraph, acts: &[f64]) -> Result<OccupancyProfile> {
    check_len(g, acts)?;
    require_nonnegative(acts, "vertex marginals")?;
    let mut rec = Recurrence::new(g, acts, MEMO_CAPACITY);
    let full = g.full_mask().0;
    let z = rec.eval(full)?;
    let mut marginals = Vec::with_capacity(acts.len());
    for (v, &a) in acts.iter().enumerate() {
        let p = if a == 0.0 {
            0.0
        } else {
            let outside = full & !(1 << v) & !g.neighbours(v).0;
            a * rec.eval(outside)? / z
        };
        marginals.push(p);
    }
    let n = marginals.len();
    let occupancy_fraction = if n == 0 { 0.0 } else { marginals.iter().sum::<f64>() / n as f64 };
    Ok(OccupancyProfile { marginals, occupancy_fraction, t: 1.0 })
}

/// `alpha_G(t; lambda) = (1/n) sum_v p_v(t lambda)`.
pub fn occupancy_fraction(g: &SimpleGraph, t: f64, acts: &[f64]) -> Result<f64> {
    Ok(occupancy_profile(g, t, acts)?.occupancy_fraction)
}

pub fn occupancy_profile(g: &SimpleGraph, t: f64, acts: &[f64]) -> Result<OccupancyProfile> {
    if t.is_nan() || t < 0.0 {
        return Err(invalid(format!("occupancy needs t >= 0, got {t}")));
    }
    require_nonnegative(acts, "occupancy fraction")?;
    let scaled: Vec<f64> = acts.iter().map(|x| t * x).collect();
    let mut profile = vertex_marginals(g, &scaled)?;
    profile.t = t;
    Ok(profile)
}
