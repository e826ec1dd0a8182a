//! Checkers for the clique lower bounds and their supporting lemmas,
//! parameter sweeps over those lemmas, and a seeded random search for
//! counterexamples to the homomorphism version of the bound.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{
    self, basic_inequality_slack, clique_bound_log, clique_bound_z2_log, degree_one_slack,
    falling_factorial_kernel, hom_clique_bound_log, key_lemma_terms, reduced_key_expression,
    s_membership, symmetric_chain, DualPoint,
};
use crate::error::{invalid, Error, Result};
use crate::graph::{EdgeList, NamedKind, SimpleGraph};
use crate::partition::{self, hom_count, z2, z_log, z_recurrence, zq, zq_enumerate, ActivityMatrix};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar};
use crate::spectral::{is_antiferromagnetic, looped_clique, walk_homomorphisms, WalkKind, WeightedModel};

/// A check passes when `slack >= -PASS_TOL`.
pub const PASS_TOL: f64 = 1e-9;

/// Explorer trials with slack below this count as near-tight.
pub const NEAR_TIGHT: f64 = 1e-6;

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "AFMLAB_THREADS";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubCheck {
    pub name: String,
    pub slack: f64,
    pub pass: bool,
    /// Informational sub-checks (conjectured forms) never fail a report.
    pub asserted: bool,
}

/// Replayable inputs of a single check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    ThmMain { graph: EdgeList, acts: Vec<f64> },
    Thm2spin { graph: EdgeList, lambda: f64, alpha: f64 },
    ThmSemiproper { graph: EdgeList, lam: Vec<f64>, mu: Vec<f64> },
    LemmaKey { delta: u32, ds: Vec<u32>, lambda0: f64, lambdas: Vec<f64> },
    Deg2 { walk: WalkKind, length: usize, model: WeightedModel },
    WeakQ { graph: EdgeList, acts: Vec<Vec<f64>> },
    Bijection { graph: EdgeList, acts: Vec<Vec<String>> },
    DaviesKang { graph: EdgeList, lambda: f64 },
    Chain { d: u32, s: f64 },
    DualSet { point: DualPoint, grid: usize },
    BasicIneq { d: u32, x: f64, y: f64 },
    NegFugacity { delta: u32, ds: Vec<u32>, step: f64 },
    ExploreTrial { config: ExploreConfig, trial_index: u64 },
}

impl Witness {
    /// Re-runs the single check this witness describes.
    pub fn replay(&self) -> Result<VerificationReport> {
        match self {
            Witness::ThmMain { graph, acts } => check_thm_main(&graph.to_graph()?, acts),
            Witness::Thm2spin { graph, lambda, alpha } => check_thm_2spin(&graph.to_graph()?, *lambda, *alpha),
            Witness::ThmSemiproper { graph, lam, mu } => check_thm_semiproper(&graph.to_graph()?, lam, mu),
            Witness::LemmaKey { delta, ds, lambda0, lambdas } => check_lemma_key(*delta, ds, *lambda0, lambdas),
            Witness::Deg2 { walk, length, model } => check_deg2_conjecture(*walk, *length, model),
            Witness::WeakQ { graph, acts } => {
                check_weak_semiproper(&graph.to_graph()?, &ActivityMatrix::new(acts.clone())?)
            }
            Witness::Bijection { graph, acts } => {
                let rows = acts
                    .iter()
                    .map(|row| row.iter().map(|x| parse_rational(x)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()?;
                check_bijection(&graph.to_graph()?, &ActivityMatrix::new(rows)?)
            }
            Witness::DaviesKang { graph, lambda } => check_davies_kang(&graph.to_graph()?, *lambda),
            Witness::Chain { d, s } => check_chain_point(*d, *s),
            Witness::DualSet { point, grid } => check_dual_point(point, *grid),
            Witness::BasicIneq { d, x, y } => check_basic_ineq(*d, *x, *y),
            Witness::NegFugacity { delta, ds, step } => check_neg_fugacity(*delta, ds, *step),
            Witness::ExploreTrial { config, trial_index } => Ok(run_trial(config, *trial_index)?.report()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub check: String,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub slack: f64,
    pub pass: bool,
    /// Whether a failure of this record counts as a failed run.
    pub asserted: bool,
    pub sub_checks: Vec<SubCheck>,
    pub witness: Witness,
    pub flags: Vec<String>,
    pub tolerance: f64,
}

fn log_difference(lhs: f64, rhs: f64) -> f64 {
    if lhs == rhs {
        0.0
    } else {
        lhs - rhs
    }
}

impl VerificationReport {
    fn new(check: &str, lhs_log: f64, rhs_log: f64, witness: Witness) -> Self {
        let slack = log_difference(lhs_log, rhs_log);
        VerificationReport {
            check: check.to_string(),
            lhs_log,
            rhs_log,
            slack,
            pass: slack >= -PASS_TOL,
            asserted: true,
            sub_checks: Vec::new(),
            witness,
            flags: Vec::new(),
            tolerance: PASS_TOL,
        }
    }

    fn set_slack(&mut self, slack: f64) {
        self.slack = slack;
        self.pass = slack >= -self.tolerance;
    }

    fn add_sub(&mut self, name: &str, slack: f64, asserted: bool) {
        let pass = slack >= -self.tolerance;
        self.sub_checks.push(SubCheck { name: name.to_string(), slack, pass, asserted });
    }

    fn flag(&mut self, flag: &str) {
        self.flags.push(flag.to_string());
    }

    /// Re-evaluates every pass field against a different tolerance.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = tol;
        self.pass = self.slack >= -tol;
        for s in &mut self.sub_checks {
            s.pass = s.slack >= -tol;
        }
        self
    }

    /// Main check and every asserted sub-check pass.
    pub fn holds(&self) -> bool {
        self.pass && self.sub_checks.iter().filter(|s| s.asserted).all(|s| s.pass)
    }

    /// Smallest slack among the main check and asserted sub-checks.
    pub fn min_asserted_slack(&self) -> f64 {
        self.sub_checks
            .iter()
            .filter(|s| s.asserted)
            .map(|s| s.slack)
            .fold(self.slack, |a, b| if b < a || b.is_nan() { b } else { a })
    }

    pub fn sub_check(&self, name: &str) -> Option<&SubCheck> {
        self.sub_checks.iter().find(|s| s.name == name)
    }
}

fn require_finite_nonnegative(values: &[f64], what: &str) -> Result<()> {
    match values.iter().find(|x| !x.is_finite() || **x < 0.0) {
        Some(x) => Err(invalid(format!("{what}: {x} must be finite and >= 0"))),
        None => Ok(()),
    }
}

/// `log Z_G(lambda)` against the clique bound.
pub fn check_thm_main(g: &SimpleGraph, acts: &[f64]) -> Result<VerificationReport> {
    require_finite_nonnegative(acts, "activity")?;
    let rhs = clique_bound_log(g, acts)?;
    let lhs = z_log(g, acts)?;
    Ok(VerificationReport::new("thm-main", lhs, rhs, Witness::ThmMain { graph: g.into(), acts: acts.to_vec() }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EqualityLabel {
    Zero,
    ConstantClique,
    Strict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EqualityClassification {
    pub components: Vec<Vec<usize>>,
    pub labels: Vec<EqualityLabel>,
    pub slack: f64,
    /// `|slack| <= 1e-12` exactly when no component is strict.
    pub consistent: bool,
}

/// Labels each component by which equality case of the clique bound it meets.
pub fn classify_equality(g: &SimpleGraph, acts: &[f64]) -> Result<EqualityClassification> {
    let report = check_thm_main(g, acts)?;
    let mut components = Vec::new();
    let mut labels = Vec::new();
    for comp in g.connected_components() {
        let vs: Vec<usize> = comp.iter().collect();
        let vals: Vec<f64> = vs.iter().map(|&v| acts[v]).collect();
        let max = vals.iter().cloned().fold(0.0, f64::max);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let label = if max <= 1e-12 {
            EqualityLabel::Zero
        } else if max - min <= 1e-12 * max && g.induced_subgraph(comp)?.is_clique() {
            EqualityLabel::ConstantClique
        } else {
            EqualityLabel::Strict
        };
        components.push(vs);
        labels.push(label);
    }
    let tight = report.slack.abs() <= 1e-12;
    let consistent = tight == !labels.contains(&EqualityLabel::Strict);
    Ok(EqualityClassification { components, labels, slack: report.slack, consistent })
}

/// Two-spin form: the main bound at `lambda_v = lambda alpha^{d_v}`.
pub fn check_thm_2spin(g: &SimpleGraph, lambda: f64, alpha: f64) -> Result<VerificationReport> {
    require_finite_nonnegative(&[lambda, alpha], "two-spin parameter")?;
    let acts: Vec<f64> = g.degrees().iter().map(|&d| lambda * alpha.powi(d as i32)).collect();
    let mut report = check_thm_main(g, &acts)?;
    report.check = "thm-2spin".into();
    report.witness = Witness::Thm2spin { graph: g.into(), lambda, alpha };
    Ok(report)
}

/// `log Z^(2)_G(lambda, mu)` against its clique bound.
pub fn check_thm_semiproper(g: &SimpleGraph, lam: &[f64], mu: &[f64]) -> Result<VerificationReport> {
    require_finite_nonnegative(lam, "activity")?;
    require_finite_nonnegative(mu, "activity")?;
    let rhs = clique_bound_z2_log(g, lam, mu)?;
    let lhs = z2(g, lam, mu)?.ln();
    let witness = Witness::ThmSemiproper { graph: g.into(), lam: lam.to_vec(), mu: mu.to_vec() };
    let mut report = VerificationReport::new("thm-semiproper", lhs, rhs, witness);
    if g.max_degree() == 1 {
        let worst = g
            .edges()
            .iter()
            .flat_map(|&(u, v)| [(u, v), (v, u)])
            .map(|(w, v)| degree_one_slack(lam[w], mu[w], lam[v], mu[v]))
            .fold(f64::INFINITY, f64::min);
        report.add_sub("degree-one", worst, true);
        report.flag("degree-one-branch");
    }
    Ok(report)
}

/// Key vertex-deletion inequality with its per-neighbour and AM-GM steps.
pub fn check_lemma_key(delta: u32, ds: &[u32], lambda0: f64, lambdas: &[f64]) -> Result<VerificationReport> {
    let t = key_lemma_terms(delta, ds, lambda0, lambdas)?;
    let witness = Witness::LemmaKey { delta, ds: ds.to_vec(), lambda0, lambdas: lambdas.to_vec() };
    let mut report = VerificationReport::new("lemma-key", t.lhs_log, t.rhs_log, witness);
    report.add_sub("component", t.component_min, true);
    report.add_sub("am-gm", t.am_gm, true);
    report.add_sub("reduced", t.reduced, true);
    Ok(report)
}

/// Paths and cycles against the clique bound for an antiferromagnetic model.
pub fn check_deg2_conjecture(walk: WalkKind, length: usize, model: &WeightedModel) -> Result<VerificationReport> {
    let afm = is_antiferromagnetic(model)?;
    if !afm.antiferromagnetic {
        return Err(Error::NotAntiferromagnetic { positive: afm.spectrum.positive_count() });
    }
    let kind = match walk {
        WalkKind::PathEdges => NamedKind::PathEdges,
        WalkKind::Cycle => NamedKind::Cycle,
    };
    let g = SimpleGraph::make_named(kind, length)?;
    let hom = walk_homomorphisms(walk, length, model)?;
    let bound = hom_clique_bound_log(&g, model)?;
    let witness = Witness::Deg2 { walk, length, model: model.clone() };
    let mut report = VerificationReport::new("deg2", hom.ln(), bound.log_value, witness);
    if bound.degenerate {
        report.set_slack(f64::INFINITY);
        report.flag("degenerate-rhs");
    }
    if afm.near_zero {
        report.flag("near-zero-eigenvalue");
    }
    Ok(report)
}

/// `log Z^(q)_G` against the per-colour clique bound; the stronger
/// falling-factorial bound is reported but not asserted.
pub fn check_weak_semiproper(g: &SimpleGraph, acts: &ActivityMatrix<f64>) -> Result<VerificationReport> {
    if acts.n() != g.vertex_count() {
        return Err(Error::LengthMismatch { expected: g.vertex_count(), got: acts.n() });
    }
    for row in acts.rows() {
        require_finite_nonnegative(row, "activity")?;
    }
    let q = acts.q();
    let lhs = zq(g, acts)?.ln();
    let mut weak = 0.0;
    let mut conjectured = 0.0;
    for (v, &d) in g.degrees().iter().enumerate() {
        let k = (d + q) as f64;
        weak += acts.rows().iter().map(|row| (k * row[v]).ln_1p() / k).sum::<f64>();
        conjectured += falling_factorial_kernel(d as u32 + 1, &acts.column(v))?.ln() / (d as f64 + 1.0);
    }
    let witness = Witness::WeakQ { graph: g.into(), acts: acts.rows().to_vec() };
    let mut report = VerificationReport::new("weak-q", lhs, weak, witness);
    report.add_sub("conjectured", log_difference(lhs, conjectured), false);
    report.add_sub("conjectured-above-weak", log_difference(conjectured, weak), false);
    Ok(report)
}

/// Exact `Z^(q)_G = Z_{G □ K_q}` on rational activities. Slack is `0` on
/// equality and `-1` otherwise.
pub fn check_bijection(g: &SimpleGraph, acts: &ActivityMatrix<Rational>) -> Result<VerificationReport> {
    let product = g.cartesian_with_clique(acts.q())?;
    let lhs = zq_enumerate(g, acts)?;
    let rhs = z_recurrence(&product, &acts.stacked())?;
    let rows = acts.rows().iter().map(|r| r.iter().map(format_rational).collect()).collect();
    let witness = Witness::Bijection { graph: g.into(), acts: rows };
    let mut report = VerificationReport::new("bijection", lhs.to_f64().ln(), rhs.to_f64().ln(), witness);
    report.set_slack(if lhs == rhs { 0.0 } else { -1.0 });
    report.flag("exact");
    Ok(report)
}

/// Occupancy fraction against the average clique occupancy. Asserted only
/// for regular graphs. Values are probabilities, not logarithms.
pub fn check_davies_kang(g: &SimpleGraph, lambda: f64) -> Result<VerificationReport> {
    require_finite_nonnegative(&[lambda], "fugacity")?;
    let n = g.vertex_count();
    let lhs = partition::occupancy_fraction(g, lambda, &vec![1.0; n])?;
    let rhs = g.degrees().iter().map(|&d| lambda / (1.0 + (d as f64 + 1.0) * lambda)).sum::<f64>() / n as f64;
    let mut report = VerificationReport::new("davies-kang", lhs, rhs, Witness::DaviesKang { graph: g.into(), lambda });
    report.flag("linear-domain");
    if !g.is_regular() {
        report.asserted = false;
        report.flag("reported-only");
    }
    Ok(report)
}

/// Chain inequalities at one `(d, s)`: main is `Phi_{d+1} <= Phi_d`.
pub fn check_chain_point(d: u32, s: f64) -> Result<VerificationReport> {
    let st = symmetric_chain(d, s)?;
    let mut report = VerificationReport::new("chain", st.phi_d.ln(), st.phi_d1.ln(), Witness::Chain { d, s });
    report.add_sub("ratio", st.ratio_slack(), true);
    report.add_sub("lower", st.lower_slack(), true);
    report.add_sub("quadratic", st.quadratic(), true);
    report.add_sub("h-monotone", st.h_slack(), true);
    Ok(report)
}

/// Dual-set membership: `log a0` against the least admissible `a0` found.
pub fn check_dual_point(point: &DualPoint, grid: usize) -> Result<VerificationReport> {
    let m = s_membership(point, grid)?;
    let needed = match &m.phi {
        Some(phi) => phi.value.max(point.a0 - m.min_margin),
        None => point.a0 - m.min_margin,
    };
    let witness = Witness::DualSet { point: *point, grid };
    let mut report = VerificationReport::new("dual-set", point.a0.ln(), needed.ln(), witness);
    report.add_sub("grid-margin", m.min_margin, true);
    if let Some(phi) = &m.phi {
        if !phi.certified {
            report.flag("uncertified-phi");
        }
        let s = point.a1 * point.a2;
        if bounds::psi_low_confidence(s) && phi.closed_form.is_some() {
            report.flag("low-confidence-psi");
        }
    }
    Ok(report)
}

/// `(dx+1)^{d+1}(dy+1)^{d+1} <= A_{d+1}(x,y)^{2d}`, strict off the origin.
pub fn check_basic_ineq(d: u32, x: f64, y: f64) -> Result<VerificationReport> {
    if d < 1 {
        return Err(invalid("basic inequality needs d >= 1"));
    }
    require_finite_nonnegative(&[x, y], "basic inequality")?;
    let df = d as f64;
    let lhs = 2.0 * df * bounds::a_kernel(d + 1, x, y).ln();
    let rhs = (df + 1.0) * ((df * x).ln_1p() + (df * y).ln_1p());
    let mut report = VerificationReport::new("basic-ineq", lhs, rhs, Witness::BasicIneq { d, x, y });
    report.set_slack(basic_inequality_slack(d, x, y));
    if x > 0.0 || y > 0.0 {
        report.add_sub("strict-off-origin", report.slack - 1e-12, true);
    }
    Ok(report)
}

/// Scans uniform negative fugacities for a point where the reduced key
/// expression turns negative. Exploratory, never asserted.
pub fn check_neg_fugacity(delta: u32, ds: &[u32], step: f64) -> Result<VerificationReport> {
    let found = bounds::negative_fugacity_probe(delta, ds, step)?;
    let witness = Witness::NegFugacity { delta, ds: ds.to_vec(), step };
    let terms = |lambda: f64| {
        let (value, _) = reduced_key_expression(delta, ds, &vec![lambda; ds.len()])?;
        let mut log_a = 0.0;
        for &d in ds {
            log_a += (d as f64 * lambda).ln_1p() / d as f64;
        }
        let lhs = (delta as f64 + 1.0).ln() + log_a;
        Some((lhs, (lhs.exp() - value).ln(), value))
    };
    let lambda = match found {
        Some(w) => w.lambda,
        None => {
            // most negative point of the same grid
            let mut best = (-step, f64::INFINITY);
            let mut k = 1u64;
            loop {
                let l = -(k as f64) * step;
                if l <= -0.5 {
                    break;
                }
                match terms(l) {
                    Some((_, _, v)) if v < best.1 => best = (l, v),
                    Some(_) => {}
                    None => break,
                }
                k += 1;
            }
            best.0
        }
    };
    let (lhs, rhs, _) = terms(lambda).ok_or_else(|| invalid("probe grid is empty"))?;
    let mut report = VerificationReport::new("neg-fugacity", lhs, rhs, witness);
    report.asserted = false;
    report.flag(if found.is_some() { "witness-found" } else { "no-witness" });
    report.flag(&format!("lambda={lambda:e}"));
    Ok(report)
}

/// Aggregate of a parameter sweep: the worst record and failure counts.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub name: String,
    pub points: usize,
    pub failures: usize,
    pub worst: VerificationReport,
}

struct SweepAcc {
    points: usize,
    failures: usize,
    worst: Option<(f64, usize, VerificationReport)>,
}

impl SweepAcc {
    fn merge(self, other: SweepAcc) -> SweepAcc {
        let worst = match (self.worst, other.worst) {
            (Some(a), Some(b)) => {
                if b.0.total_cmp(&a.0).then(b.1.cmp(&a.1)).is_lt() {
                    Some(b)
                } else {
                    Some(a)
                }
            }
            (a, b) => a.or(b),
        };
        SweepAcc { points: self.points + other.points, failures: self.failures + other.failures, worst }
    }
}

fn run_sweep<P, F>(name: &str, points: &[P], tol: f64, check: F) -> Result<SweepSummary>
where
    P: Sync,
    F: Fn(&P) -> Result<VerificationReport> + Sync,
{
    let acc = points
        .par_iter()
        .enumerate()
        .map(|(i, p)| {
            let r = check(p)?.with_tolerance(tol);
            // NaN slack sorts first so it surfaces as the worst record
            let key = r.min_asserted_slack();
            let key = if key.is_nan() { f64::NEG_INFINITY } else { key };
            Ok::<_, Error>(SweepAcc { points: 1, failures: usize::from(!r.holds()), worst: Some((key, i, r)) })
        })
        .try_reduce(|| SweepAcc { points: 0, failures: 0, worst: None }, |a, b| Ok(a.merge(b)))?;
    let worst = acc.worst.ok_or_else(|| invalid(format!("sweep {name} has no points")))?.2;
    Ok(SweepSummary { name: name.to_string(), points: acc.points, failures: acc.failures, worst })
}

fn point_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

#[derive(Clone, Debug, PartialEq)]
pub struct LemmaPoint {
    pub delta: u32,
    pub ds: Vec<u32>,
    pub lambda0: f64,
    pub lambdas: Vec<f64>,
}

const LAMBDA_GRID: [f64; 10] = [0.0, 0.01, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0];

/// `count` points with `delta <= delta_max`; every eighth point is the
/// equality configuration (all degrees `delta`, all activities equal).
pub fn lemma_key_points(count: usize, delta_max: u32, seed: u64) -> Vec<LemmaPoint> {
    let mut rng = point_rng(seed, 1);
    let draw = |rng: &mut ChaCha8Rng| {
        if rng.random_bool(0.5) {
            LAMBDA_GRID[rng.random_range(0..LAMBDA_GRID.len())]
        } else {
            rng.random_range(0.0..=10.0)
        }
    };
    (0..count)
        .map(|i| {
            let delta = 1 + (i as u32) % delta_max;
            if i % 8 == 7 {
                let l = draw(&mut rng);
                return LemmaPoint { delta, ds: vec![delta; delta as usize], lambda0: l, lambdas: vec![l; delta as usize] };
            }
            let ds = (0..delta).map(|_| rng.random_range(1..=delta)).collect();
            let lambda0 = draw(&mut rng);
            let lambdas = (0..delta).map(|_| draw(&mut rng)).collect();
            LemmaPoint { delta, ds, lambda0, lambdas }
        })
        .collect()
}

pub fn sweep_lemma_key(count: usize, delta_max: u32, seed: u64, tol: f64) -> Result<SweepSummary> {
    let points = lemma_key_points(count, delta_max, seed);
    run_sweep("lemma-key", &points, tol, |p| check_lemma_key(p.delta, &p.ds, p.lambda0, &p.lambdas))
}

/// `(d, s)` for `d <= d_max`, `s = 1 + 2k/steps` on `(1, 3]`; `d = 1` stops below `s = 2`.
pub fn chain_points(d_max: u32, steps: usize) -> Vec<(u32, f64)> {
    let mut out = Vec::new();
    for d in 1..=d_max {
        for k in 1..=steps {
            let s = 1.0 + 2.0 * k as f64 / steps as f64;
            if d == 1 && s >= 2.0 {
                continue;
            }
            out.push((d, s));
        }
    }
    out
}

pub fn sweep_chain(d_max: u32, steps: usize, tol: f64) -> Result<SweepSummary> {
    run_sweep("chain", &chain_points(d_max, steps), tol, |&(d, s)| check_chain_point(d, s))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DualFamily {
    /// Tangent planes at random `(lambda, mu)`.
    Tangent,
    /// Single-neighbour factors for every `1 <= d <= delta`.
    SeparateFactor,
    /// Coordinatewise geometric means of two tangent planes.
    GeometricMean,
}

/// `per_case` random `(lambda, mu)` in `[0, 10]^2` for each degree case with `2 <= delta <= delta_max`.
pub fn dual_points(family: DualFamily, per_case: usize, delta_max: u32, seed: u64) -> Result<Vec<DualPoint>> {
    let mut rng = point_rng(seed, 2);
    let pair = |rng: &mut ChaCha8Rng| (rng.random_range(0.0..=10.0), rng.random_range(0.0..=10.0));
    let mut out = Vec::new();
    for delta in 2..=delta_max {
        match family {
            DualFamily::Tangent => {
                for _ in 0..per_case {
                    let (l, m) = pair(&mut rng);
                    out.push(DualPoint::tangent_plane(delta, l, m)?);
                }
            }
            DualFamily::SeparateFactor => {
                for d in 1..=delta {
                    for _ in 0..per_case {
                        let (l, m) = pair(&mut rng);
                        out.push(DualPoint::separate_factor(delta, d, l, m)?);
                    }
                }
            }
            DualFamily::GeometricMean => {
                for _ in 0..per_case {
                    let (l1, m1) = pair(&mut rng);
                    let (l2, m2) = pair(&mut rng);
                    let a = DualPoint::tangent_plane(delta, l1, m1)?;
                    let b = DualPoint::tangent_plane(delta, l2, m2)?;
                    out.push(a.geometric_mean(&b)?);
                }
            }
        }
    }
    Ok(out)
}

pub fn sweep_dual_set(
    family: DualFamily,
    per_case: usize,
    delta_max: u32,
    grid: usize,
    seed: u64,
    tol: f64,
) -> Result<SweepSummary> {
    let points = dual_points(family, per_case, delta_max, seed)?;
    run_sweep("dual-set", &points, tol, |p| check_dual_point(p, grid))
}

pub fn sweep_basic_ineq(d_max: u32, steps: usize, tol: f64) -> Result<SweepSummary> {
    let axis: Vec<f64> = (0..=steps).map(|k| 10.0 * k as f64 / steps as f64).collect();
    let mut points = Vec::new();
    for d in 1..=d_max {
        for &x in &axis {
            for &y in &axis {
                points.push((d, x, y));
            }
        }
    }
    run_sweep("basic-ineq", &points, tol, |&(d, x, y)| check_basic_ineq(d, x, y))
}

/// Worker count from `AFMLAB_THREADS`, if set to a positive integer.
pub fn configured_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

/// Sizes the global pool from `AFMLAB_THREADS`; returns the active worker count.
pub fn init_worker_pool() -> usize {
    if let Some(n) = configured_threads() {
        // a pool built earlier in the process wins
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    rayon::current_num_threads()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExploreConfig {
    pub trials: u64,
    pub seed: u64,
    pub n_max: usize,
    /// Models have at most `q_max + 1` spins.
    pub q_max: usize,
    /// Lifts the `q_max <= 5` cap.
    pub allow_large_q: bool,
    /// Number of worst witnesses kept.
    pub keep: usize,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig { trials: 1000, seed: 0xA1E7, n_max: 8, q_max: 3, allow_large_q: false, keep: 10 }
    }
}

impl ExploreConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=10).contains(&self.n_max) {
            return Err(invalid(format!("n_max = {} outside [2, 10]", self.n_max)));
        }
        if self.q_max < 1 || (self.q_max > 5 && !self.allow_large_q) {
            return Err(invalid(format!("q_max = {} outside [1, 5]", self.q_max)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    BlowUpClique,
    BlowUpLoopedClique,
    Rejection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationWitness {
    pub seed: u64,
    pub trial_index: u64,
    pub graph: EdgeList,
    pub model: WeightedModel,
    pub sampler: SamplerKind,
    pub lhs_log: f64,
    pub rhs_log: f64,
    pub slack: f64,
    /// Some clique count vanished, so the bound is trivially satisfied.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialOutcome {
    pub witness: ExplorationWitness,
    pub config: ExploreConfig,
    /// Rejected non-antiferromagnetic draws.
    pub rejections: u64,
    /// Draws discarded for an all-zero row.
    pub zero_row_exclusions: u64,
}

impl TrialOutcome {
    pub fn report(&self) -> VerificationReport {
        let w = &self.witness;
        let witness = Witness::ExploreTrial { config: self.config.clone(), trial_index: w.trial_index };
        let mut r = VerificationReport::new("explore-trial", w.lhs_log, w.rhs_log, witness);
        r.set_slack(w.slack);
        r.asserted = false;
        if w.degenerate {
            r.flag("degenerate-rhs");
        }
        r
    }
}

/// Random graph with independent edges of probability `p`.
pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Result<SimpleGraph> {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edge_list(n, &edges)
}

fn log_uniform<R: Rng>(rng: &mut R) -> f64 {
    10f64.powf(rng.random_range(-1.0..=1.0))
}

/// Blow-up of `K_{k+1}` (or its looped form) into `m` spins: each spin picks
/// a class, every class is used, and `H_uv = s_u s_v M[c_u][c_v]` with
/// log-uniform scales. Congruence preserves the single positive eigenvalue.
pub fn random_blow_up<R: Rng>(rng: &mut R, k: usize, m: usize, looped: bool) -> Result<WeightedModel> {
    if m < k + 1 {
        return Err(invalid(format!("blow-up of {} classes needs at least that many spins, got {m}", k + 1)));
    }
    let base = if looped {
        looped_clique(k)?
    } else {
        let mut w = vec![1.0; (k + 1) * (k + 1)];
        for i in 0..=k {
            w[i * (k + 1) + i] = 0.0;
        }
        WeightedModel::new(k + 1, w)?
    };
    let mut class: Vec<usize> = (0..=k).collect();
    class.extend((k + 1..m).map(|_| rng.random_range(0..=k)));
    let scale: Vec<f64> = (0..m).map(|_| log_uniform(rng)).collect();
    let mut w = vec![0.0; m * m];
    for u in 0..m {
        for v in u..m {
            let x = scale[u] * scale[v] * base.weight(class[u], class[v]);
            w[u * m + v] = x;
            w[v * m + u] = x;
        }
    }
    WeightedModel::new(m, w)
}

struct Rejected {
    model: Option<WeightedModel>,
    rejections: u64,
    zero_rows: u64,
}

const REJECTION_ATTEMPTS: u64 = 1000;

fn rejection_model<R: Rng>(rng: &mut R, m: usize) -> Result<Rejected> {
    let mut out = Rejected { model: None, rejections: 0, zero_rows: 0 };
    for _ in 0..REJECTION_ATTEMPTS {
        let mut w = vec![0.0; m * m];
        for u in 0..m {
            for v in u..m {
                let x = if rng.random_bool(0.3) { 0.0 } else { log_uniform(rng) };
                w[u * m + v] = x;
                w[v * m + u] = x;
            }
        }
        let model = WeightedModel::new(m, w)?;
        if model.has_zero_row() {
            out.zero_rows += 1;
            continue;
        }
        if !is_antiferromagnetic(&model)?.antiferromagnetic {
            out.rejections += 1;
            continue;
        }
        out.model = Some(model);
        break;
    }
    Ok(out)
}

/// One explorer trial. The stream for trial `i` is fixed by `(seed, i)`.
pub fn run_trial(config: &ExploreConfig, trial_index: u64) -> Result<TrialOutcome> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial_index);
    let p = [0.2, 0.5, 0.8][(trial_index % 3) as usize];
    let n = rng.random_range(2..=config.n_max);
    let g = random_graph(&mut rng, n, p)?;

    let mut rejections = 0;
    let mut zero_row_exclusions = 0;
    let k = rng.random_range(1..=config.q_max);
    let m = rng.random_range(k + 1..=config.q_max + 1);
    let looped = rng.random_bool(0.5);
    let mut choice = None;
    if rng.random_bool(0.5) {
        let r = rejection_model(&mut rng, m.max(2))?;
        rejections = r.rejections;
        zero_row_exclusions = r.zero_rows;
        choice = r.model.map(|model| (model, SamplerKind::Rejection));
    }
    let (model, sampler) = match choice {
        Some(c) => c,
        None => {
            let kind = if looped { SamplerKind::BlowUpLoopedClique } else { SamplerKind::BlowUpClique };
            (random_blow_up(&mut rng, k, m, looped)?, kind)
        }
    };

    let lhs_log = hom_count(&g, &model)?.ln();
    let bound = hom_clique_bound_log(&g, &model)?;
    let slack = if bound.degenerate { f64::INFINITY } else { log_difference(lhs_log, bound.log_value) };
    let witness = ExplorationWitness {
        seed: config.seed,
        trial_index,
        graph: (&g).into(),
        model,
        sampler,
        lhs_log,
        rhs_log: bound.log_value,
        slack,
        degenerate: bound.degenerate,
    };
    Ok(TrialOutcome { witness, config: config.clone(), rejections, zero_row_exclusions })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplorationSummary {
    pub config: ExploreConfig,
    pub trials: u64,
    pub min_slack: f64,
    /// Worst trials by slack, ties broken by trial index.
    pub worst: Vec<ExplorationWitness>,
    pub near_tight: u64,
    pub degenerate: u64,
    pub rejections: u64,
    pub zero_row_exclusions: u64,
    pub rejection_trials: u64,
}

/// Runs all trials in parallel and merges them in trial order.
pub fn explore_conjecture(config: &ExploreConfig) -> Result<ExplorationSummary> {
    config.validate()?;
    let outcomes: Vec<TrialOutcome> =
        (0..config.trials).into_par_iter().map(|i| run_trial(config, i)).collect::<Result<_>>()?;
    let mut summary = ExplorationSummary {
        config: config.clone(),
        trials: config.trials,
        min_slack: f64::INFINITY,
        worst: Vec::new(),
        near_tight: 0,
        degenerate: 0,
        rejections: 0,
        zero_row_exclusions: 0,
        rejection_trials: 0,
    };
    for o in &outcomes {
        let w = &o.witness;
        summary.min_slack = summary.min_slack.min(w.slack);
        summary.near_tight += u64::from(w.slack < NEAR_TIGHT);
        summary.degenerate += u64::from(w.degenerate);
        summary.rejections += o.rejections;
        summary.zero_row_exclusions += o.zero_row_exclusions;
        summary.rejection_trials += u64::from(w.sampler == SamplerKind::Rejection);
    }
    let mut ranked: Vec<&ExplorationWitness> = outcomes.iter().map(|o| &o.witness).collect();
    ranked.sort_by(|a, b| a.slack.total_cmp(&b.slack).then(a.trial_index.cmp(&b.trial_index)));
    summary.worst = ranked.into_iter().take(config.keep).cloned().collect();
    Ok(summary)
}
