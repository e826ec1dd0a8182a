//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line.

mod common;

use std::time::{Duration, Instant};

use afmlab::bounds::{
    a_kernel_exact, b_kernel_exact, negative_fugacity_probe, phi_delta, psi_delta, reduced_key_expression,
    xi_delta,
};
use afmlab::graph::NamedKind;
use afmlab::partition::{hom_count, z2, z_bruteforce, z_recurrence, zq};
use afmlab::scalar::ratio;
use afmlab::spectral::{blow_up_hardcore, eigenvalues, is_antiferromagnetic, looped_clique, WalkKind};
use afmlab::verify::{
    self, check_basic_ineq, check_bijection, check_chain_point, check_davies_kang, check_deg2_conjecture,
    check_lemma_key, check_thm_main, check_thm_semiproper, check_weak_semiproper, classify_equality,
    explore_conjecture, lemma_key_points, random_blow_up, EqualityLabel, ExploreConfig,
};
use afmlab::{ActivityMatrix, Rational, SimpleGraph, WeightedModel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = 1e-9;

fn criterion(id: u32, title: &str, body: impl FnOnce() -> Result<String, String>) {
    let start = Instant::now();
    let outcome = body();
    let secs = start.elapsed().as_secs_f64();
    match &outcome {
        Ok(detail) => println!("criterion {id:>2}: PASS  {title} ({detail}; {secs:.2}s)"),
        Err(detail) => println!("criterion {id:>2}: FAIL  {title} ({detail}; {secs:.2}s)"),
    }
    if let Err(detail) = outcome {
        panic!("criterion {id} failed: {detail}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit_secs: f64, what: &str) -> Result<(), String> {
    ensure(elapsed.as_secs_f64() < limit_secs, || format!("{what} took {elapsed:?}, limit {limit_secs}s"))
}

fn named(kind: NamedKind, size: usize) -> SimpleGraph {
    SimpleGraph::make_named(kind, size).unwrap()
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

#[test]
fn criterion_01_oracle_equivalence() {
    criterion(1, "recurrence equals enumeration exactly", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        for i in 0..200 {
            let n = rng.random_range(1..=14);
            let g = common::random_graph(&mut rng, n, [0.15, 0.3, 0.6][i % 3]);
            let acts: Vec<Rational> = (0..n).map(|_| common::random_rational(&mut rng)).collect();
            let rec = z_recurrence(&g, &acts).map_err(e)?;
            let brute = z_bruteforce(&g, &acts).map_err(e)?;
            let naive = common::z_subsets_exact(&g, &acts);
            ensure(rec == brute && rec == naive, || format!("graph {i}: {rec} vs {brute} vs {naive}"))?;
        }
        within(start.elapsed(), 30.0, "200 graphs")?;
        Ok("200 graphs, n <= 14".into())
    });
}

#[test]
fn criterion_02_main_bound_smoke_values() {
    criterion(2, "P3 and C5 at unit activity", || {
        let p3 = named(NamedKind::PathEdges, 2);
        let c5 = named(NamedKind::Cycle, 5);
        let z = z_recurrence(&p3, &vec![ratio(1, 1); 3]).map_err(e)?;
        ensure(z == ratio(5, 1), || format!("Z(P3) = {z}"))?;
        let z = z_recurrence(&c5, &vec![ratio(1, 1); 5]).map_err(e)?;
        ensure(z == ratio(11, 1), || format!("Z(C5) = {z}"))?;

        let r = check_thm_main(&p3, &[1.0; 3]).map_err(e)?;
        let bound = 3.0 * 4f64.powf(1.0 / 3.0);
        ensure((bound - 4.762203156).abs() < 1e-9, || format!("oracle bound {bound}"))?;
        ensure((r.rhs_log - bound.ln()).abs() < TOL, || format!("P3 rhs {}", r.rhs_log))?;
        ensure((r.lhs_log - 5f64.ln()).abs() < TOL && r.slack > 0.0, || format!("P3 slack {}", r.slack))?;

        let r = check_thm_main(&c5, &[1.0; 5]).map_err(e)?;
        let bound = 4f64.powf(5.0 / 3.0);
        ensure((bound - 10.0794).abs() < 1e-4, || format!("oracle bound {bound}"))?;
        ensure((r.rhs_log - bound.ln()).abs() < TOL, || format!("C5 rhs {}", r.rhs_log))?;
        ensure((r.lhs_log - 11f64.ln()).abs() < TOL && r.slack > 0.0, || format!("C5 slack {}", r.slack))?;

        let reps = 200;
        let start = Instant::now();
        for _ in 0..reps {
            check_thm_main(&p3, &[1.0; 3]).map_err(e)?;
            check_thm_main(&c5, &[1.0; 5]).map_err(e)?;
        }
        let each = start.elapsed() / (2 * reps);
        ensure(each < Duration::from_millis(1), || format!("{each:?} per check"))?;
        Ok(format!("C5 slack {:.6}; {each:?} per check", r.slack))
    });
}

#[test]
fn criterion_03_equality_characterisation() {
    criterion(3, "cliques are tight, P3 is strict", || {
        let mut worst = 0.0f64;
        for d in 0..=6 {
            let g = named(NamedKind::Clique, d + 1);
            for lambda in [0.1, 1.0, 5.0] {
                let acts = vec![lambda; d + 1];
                let r = check_thm_main(&g, &acts).map_err(e)?;
                worst = worst.max(r.slack.abs());
                ensure(r.slack.abs() <= 1e-12, || format!("K{} at {lambda}: slack {:e}", d + 1, r.slack))?;
                let c = classify_equality(&g, &acts).map_err(e)?;
                ensure(c.labels == vec![EqualityLabel::ConstantClique], || format!("K{} labels {:?}", d + 1, c.labels))?;
            }
        }
        let c = classify_equality(&named(NamedKind::PathEdges, 2), &[1.0; 3]).map_err(e)?;
        ensure(c.labels == vec![EqualityLabel::Strict], || format!("P3 labels {:?}", c.labels))?;
        Ok(format!("max |slack| {worst:.1e} over 21 cliques"))
    });
}

#[test]
fn criterion_04_semiproper_bound() {
    criterion(4, "two-colour bound: smoke values and 500 samples", || {
        let start = Instant::now();
        let p3 = named(NamedKind::PathEdges, 2);
        let one = vec![ratio(1, 1); 3];
        let z = z2(&p3, &one, &one).map_err(e)?;
        ensure(z == ratio(17, 1), || format!("Z2(P3) = {z}"))?;
        let r = check_thm_semiproper(&p3, &[1.0; 3], &[1.0; 3]).map_err(e)?;
        // A_2(1,1) = 7 on the degree-one ends, A_3(1,1) = 13 on the middle
        let a = |d: f64| d * (d - 1.0) + 2.0 * d + 1.0;
        let bound = a(2.0) * a(3.0).powf(1.0 / 3.0);
        ensure(a(2.0) == 7.0 && a(3.0) == 13.0 && (bound - 16.45934).abs() < 1e-5, || format!("oracle bound {bound}"))?;
        ensure((r.rhs_log - bound.ln()).abs() < TOL && r.slack > 0.0, || format!("P3 slack {}", r.slack))?;

        let mut rng = ChaCha8Rng::seed_from_u64(404);
        let mut min = f64::INFINITY;
        for i in 0..500 {
            let n = rng.random_range(1..=9);
            let g = common::random_graph(&mut rng, n, [0.2, 0.5, 0.8][i % 3]);
            let lam: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=10.0)).collect();
            let mu: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..=10.0)).collect();
            let r = check_thm_semiproper(&g, &lam, &mu).map_err(e)?;
            min = min.min(r.min_asserted_slack());
            ensure(r.holds(), || format!("sample {i}: slack {:e}", r.slack))?;
        }
        within(start.elapsed(), 60.0, "suite")?;
        Ok(format!("min slack {min:.3e} over 500 samples"))
    });
}

#[test]
fn criterion_05_key_lemma_sweep() {
    criterion(5, "key lemma over 1e5 points", || {
        let start = Instant::now();
        let s = verify::sweep_lemma_key(100_000, 6, 0xA1E7, TOL).map_err(e)?;
        ensure(s.points >= 100_000 && s.failures == 0, || format!("{} failures, worst {:?}", s.failures, s.worst))?;
        let mut tight = 0.0f64;
        let mut count = 0;
        for p in lemma_key_points(20_000, 6, 5) {
            let equal = p.ds.iter().all(|&d| d == p.delta) && p.lambdas.iter().all(|&l| l == p.lambda0);
            if equal {
                let r = check_lemma_key(p.delta, &p.ds, p.lambda0, &p.lambdas).map_err(e)?;
                tight = tight.max(r.slack.abs());
                count += 1;
            }
        }
        ensure(count > 0 && tight <= 1e-10, || format!("equality slack {tight:e} over {count} points"))?;
        within(start.elapsed(), 60.0, "sweep")?;
        Ok(format!("{} points, worst slack {:.3e}; {count} equality points within {tight:.1e}", s.points, s.worst.min_asserted_slack()))
    });
}

#[test]
fn criterion_06_dual_set_machinery() {
    criterion(6, "kernels, basic inequality, xi, Phi, chain, log-convexity", || {
        let start = Instant::now();
        // kernel identity in exact arithmetic
        let mut rng = ChaCha8Rng::seed_from_u64(606);
        for _ in 0..200 {
            let d: u64 = rng.random_range(1..=8);
            let (l, m) = (common::random_rational(&mut rng), common::random_rational(&mut rng));
            let int = |k: u64| Rational::from_integer(k.into());
            let one = int(1);
            // kernels written out directly
            let a = int((d + 1) * d) * &l * &m + int(d + 1) * (&l + &m) + &one;
            let (bl, bm) = (int(d) * &l + &one, int(d) * &m + &one);
            ensure(a_kernel_exact(d + 1, &l, &m) == a && b_kernel_exact(d, &l) == bl, || format!("kernels at d={d}"))?;
            let lhs = int(d) * a;
            let rhs = int(d + 1) * bl * bm - one;
            ensure(lhs == rhs, || format!("identity fails at d={d}, {l}, {m}"))?;
        }
        // basic inequality: holds everywhere, strict off the origin
        for d in 1..=6 {
            for i in 0..=40 {
                for j in 0..=40 {
                    let (x, y) = (0.25 * i as f64, 0.25 * j as f64);
                    let r = check_basic_ineq(d, x, y).map_err(e)?;
                    ensure(r.slack >= -1e-12, || format!("d={d} ({x},{y}) slack {:e}", r.slack))?;
                    if i + j > 0 {
                        ensure(r.slack > 1e-12, || format!("d={d} ({x},{y}) not strict: {:e}", r.slack))?;
                    } else {
                        ensure(r.slack.abs() <= 1e-12, || "origin not tight".into())?;
                    }
                }
            }
        }
        // xi_2(0.5), with the bracket checked on the polynomial itself
        let f = |x: f64| 3.0 * 0.5 * x.powi(4) - 2.0 * x.powi(3) - 1.0;
        ensure(f(1.52) < 0.0 && f(1.53) > 0.0, || "oracle bracket".into())?;
        let xi = xi_delta(2, 0.5).map_err(e)?;
        ensure(xi > 1.52 && xi < 1.53 && f(xi).abs() <= 1e-12, || format!("xi {xi}, residual {:e}", f(xi)))?;
        // symmetric Phi against Psi
        let mut phi_err = 0.0f64;
        for delta in 2..=5 {
            for k in 1..=9 {
                let s = k as f64 / 10.0;
                let phi = phi_delta(delta, s.sqrt(), s.sqrt()).map_err(e)?.value;
                let expect = psi_delta(delta, s).map_err(e)? + 2.0 * s.sqrt() / delta as f64;
                phi_err = phi_err.max((phi - expect).abs());
            }
        }
        ensure(phi_err <= 1e-8, || format!("Phi vs Psi error {phi_err:e}"))?;
        // chain inequalities on (1, 3]
        let mut chain_min = f64::INFINITY;
        for (d, s) in verify::chain_points(5, 200) {
            let r = check_chain_point(d, s).map_err(e)?;
            let m = r.sub_checks.iter().map(|c| c.slack).fold(r.slack, f64::min);
            chain_min = chain_min.min(m);
            ensure(m >= -1e-10, || format!("chain d={d} s={s}: {:?}", r.sub_checks))?;
        }
        // geometric means of tangent-plane pairs
        let s = verify::sweep_dual_set(verify::DualFamily::GeometricMean, 250, 5, 48, 66, TOL).map_err(e)?;
        ensure(s.points == 1000 && s.failures == 0, || format!("{} of {} means outside", s.failures, s.points))?;
        within(start.elapsed(), 120.0, "machinery")?;
        Ok(format!("xi_2(0.5) = {xi:.12}, Phi error {phi_err:.1e}, chain min {chain_min:.2e}, 1000 means inside"))
    });
}

#[test]
fn criterion_07_single_factor_membership() {
    criterion(7, "single-factor points lie in the dual set", || {
        let s = verify::sweep_dual_set(verify::DualFamily::SeparateFactor, 1000, 5, 48, 77, TOL).map_err(e)?;
        ensure(s.failures == 0, || format!("{} failures, worst {:?}", s.failures, s.worst))?;
        let margin = s.worst.sub_check("grid-margin").map(|c| c.slack).unwrap_or(f64::NAN);
        ensure(margin >= -TOL, || format!("grid violation {margin:e}"))?;
        Ok(format!("{} points over 2 <= delta <= 5, 1 <= d <= delta; worst slack {:.3e}", s.points, s.worst.slack))
    });
}

#[test]
fn criterion_08_spectral() {
    criterion(8, "looped triangle spectrum, AFM models, cycle counts", || {
        let spec = eigenvalues(&looped_clique(2).map_err(e)?).map_err(e)?;
        let r2 = 2f64.sqrt();
        let expect = [1.0 + r2, 1.0 - r2, -1.0];
        for (a, b) in spec.eigenvalues.iter().zip(expect) {
            ensure((a - b).abs() < 1e-10, || format!("eigenvalues {:?}", spec.eigenvalues))?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(808);
        let mut count = 0;
        for i in 0..1000 {
            let model = match i % 3 {
                0 => blow_up_hardcore(rng.random_range(1..=6), rng.random_range(1..=6)),
                1 => looped_clique(rng.random_range(1..=8)),
                _ => {
                    let k = rng.random_range(1..=4);
                    let m = rng.random_range(k + 1..=8);
                    let looped = rng.random_bool(0.5);
                    random_blow_up(&mut rng, k, m, looped)
                }
            }
            .map_err(e)?;
            ensure(is_antiferromagnetic(&model).map_err(e)?.antiferromagnetic, || format!("instance {i} not AFM"))?;
            count += 1;
        }
        let k3 = WeightedModel::new(3, vec![0., 1., 1., 1., 0., 1., 1., 1., 0.]).map_err(e)?;
        for l in 3..=12usize {
            let expect = 2f64.powi(l as i32) + 2.0 * (-1f64).powi(l as i32);
            let got = hom_count(&named(NamedKind::Cycle, l), &k3).map_err(e)?;
            ensure(got == expect, || format!("hom(C{l}, K3) = {got}, expected {expect}"))?;
        }
        Ok(format!("{count} AFM instances; hom(C_l, K3) exact for l <= 12"))
    });
}

fn random_afm_model(rng: &mut ChaCha8Rng) -> WeightedModel {
    if rng.random_bool(0.5) {
        let k = rng.random_range(1..=4);
        let m = rng.random_range(k + 1..=5);
        let looped = rng.random_bool(0.5);
        return random_blow_up(rng, k, m, looped).unwrap();
    }
    loop {
        let q = rng.random_range(2..=5);
        let mut w = vec![0.0; q * q];
        for u in 0..q {
            for v in u..q {
                let x = if rng.random_bool(0.3) { 0.0 } else { 10f64.powf(rng.random_range(-1.0..=1.0)) };
                w[u * q + v] = x;
                w[v * q + u] = x;
            }
        }
        let m = WeightedModel::new(q, w).unwrap();
        if is_antiferromagnetic(&m).unwrap().antiferromagnetic {
            return m;
        }
    }
}

#[test]
fn criterion_09_max_degree_two() {
    criterion(9, "paths and cycles against clique homomorphisms", || {
        let k3 = WeightedModel::new(3, vec![0., 1., 1., 1., 0., 1., 1., 1., 0.]).map_err(e)?;
        let r = check_deg2_conjecture(WalkKind::Cycle, 5, &k3).map_err(e)?;
        let expect = 30f64.ln() - 5.0 / 3.0 * 6f64.ln();
        ensure((r.slack - expect).abs() < TOL, || format!("C5 -> K3 slack {}", r.slack))?;
        let mut rng = ChaCha8Rng::seed_from_u64(909);
        let mut min = f64::INFINITY;
        let mut checks = 0;
        for _ in 0..50 {
            let model = random_afm_model(&mut rng);
            for l in 1..=12 {
                let mut runs = vec![WalkKind::PathEdges];
                if l >= 3 {
                    runs.push(WalkKind::Cycle);
                }
                for walk in runs {
                    let r = check_deg2_conjecture(walk, l, &model).map_err(e)?;
                    min = min.min(r.slack);
                    checks += 1;
                    ensure(r.holds(), || format!("{walk:?} {l}: slack {:e} for {model:?}", r.slack))?;
                }
            }
        }
        Ok(format!("C5 slack {expect:.6}; {checks} checks, min slack {min:.3e}"))
    });
}

#[test]
fn criterion_10_product_bijection() {
    criterion(10, "q-tuple partition function equals the product graph's", || {
        let start = Instant::now();
        let mut rng = ChaCha8Rng::seed_from_u64(1010);
        for i in 0..100 {
            let n = rng.random_range(1..=7);
            let q = rng.random_range(1..=4);
            let g = common::random_graph(&mut rng, n, 0.45);
            let rows: Vec<Vec<Rational>> =
                (0..q).map(|_| (0..n).map(|_| common::random_rational(&mut rng)).collect()).collect();
            let acts = ActivityMatrix::new(rows.clone()).map_err(e)?;
            let r = check_bijection(&g, &acts).map_err(e)?;
            ensure(r.slack == 0.0, || format!("instance {i} mismatch"))?;
            let via_product = zq(&g, &acts).map_err(e)?;
            let naive = common::zq_colourings(&g, &rows);
            ensure(via_product == naive, || format!("instance {i}: {via_product} vs oracle {naive}"))?;
        }
        within(start.elapsed(), 30.0, "100 instances")?;
        Ok("100 instances exact".into())
    });
}

#[test]
fn criterion_11_weak_semiproper_bound() {
    criterion(11, "weak bound below conjectured bound below Z", || {
        let p3 = named(NamedKind::PathEdges, 2);
        let r = check_weak_semiproper(&p3, &ActivityMatrix::uniform(2, 3, 1.0).map_err(e)?).map_err(e)?;
        let weak = 4f64.powf(4.0 / 3.0) * 5f64.sqrt();
        let conj = 7.0 * 13f64.powf(1.0 / 3.0);
        ensure((weak - 14.198).abs() < 1e-3, || format!("oracle weak {weak}"))?;
        ensure((r.rhs_log - weak.ln()).abs() < TOL, || format!("weak rhs {}", r.rhs_log.exp()))?;
        let conj_log = r.lhs_log - r.sub_check("conjectured").unwrap().slack;
        ensure((conj_log - conj.ln()).abs() < TOL, || format!("conjectured rhs {}", conj_log.exp()))?;
        ensure(r.rhs_log <= conj_log && conj_log <= r.lhs_log && (r.lhs_log - 17f64.ln()).abs() < TOL, || {
            format!("ordering {} {} {}", r.rhs_log.exp(), conj_log.exp(), r.lhs_log.exp())
        })?;
        let mut rng = ChaCha8Rng::seed_from_u64(1111);
        let mut min = f64::INFINITY;
        for i in 0..300 {
            let q = rng.random_range(1..=3);
            let n = rng.random_range(1..=7);
            let g = common::random_graph(&mut rng, n, [0.2, 0.5, 0.8][i % 3]);
            let rows = (0..q).map(|_| (0..n).map(|_| rng.random_range(0.0..=10.0)).collect()).collect();
            let r = check_weak_semiproper(&g, &ActivityMatrix::new(rows).map_err(e)?).map_err(e)?;
            min = min.min(r.slack);
            ensure(r.holds(), || format!("sample {i}: slack {:e}", r.slack))?;
        }
        Ok(format!("14.198 <= 16.459 <= 17; 300 samples, min slack {min:.3e}"))
    });
}

#[test]
fn criterion_12_occupancy() {
    criterion(12, "occupancy fraction against the clique average", || {
        let k3 = named(NamedKind::Clique, 3);
        let oracle = common::marginals_subsets(&k3, &[1.0; 3]);
        let alpha = oracle.iter().sum::<f64>() / 3.0;
        ensure((alpha - 0.25).abs() < 1e-15, || format!("oracle alpha {alpha}"))?;
        let r = check_davies_kang(&k3, 1.0).map_err(e)?;
        ensure((r.lhs_log - 0.25).abs() < 1e-15 && (r.rhs_log - 0.25).abs() < 1e-15 && r.asserted, || {
            format!("K3 report {r:?}")
        })?;

        let mut rng = ChaCha8Rng::seed_from_u64(1212);
        let mut regular = Vec::new();
        for d in 1..=5 {
            regular.push(named(NamedKind::Clique, d + 1));
            regular.push(common::complete_bipartite(d, d));
        }
        for l in 3..=10 {
            regular.push(named(NamedKind::Cycle, l));
        }
        for n in [4, 6, 8, 10, 12, 14] {
            regular.push(common::random_cubic(&mut rng, n));
        }
        let mut min = f64::INFINITY;
        for g in &regular {
            for lambda in [0.1, 0.5, 1.0, 2.0, 10.0] {
                let r = check_davies_kang(g, lambda).map_err(e)?;
                let oracle = common::marginals_subsets(g, &vec![lambda; g.vertex_count()]);
                let alpha = oracle.iter().sum::<f64>() / oracle.len() as f64;
                ensure((alpha - r.lhs_log).abs() < 1e-12, || format!("occupancy {} vs oracle {alpha}", r.lhs_log))?;
                ensure(r.asserted && r.holds(), || format!("{:?} at {lambda}: slack {:e}", g.edges(), r.slack))?;
                min = min.min(r.slack);
            }
        }
        let mut reported = 0;
        for i in 0..30 {
            let n = rng.random_range(3..=10);
            let g = common::random_graph(&mut rng, n, 0.4);
            if !g.is_regular() {
                let r = check_davies_kang(&g, [0.5, 1.0, 2.0][i % 3]).map_err(e)?;
                ensure(!r.asserted, || "irregular graph asserted".into())?;
                reported += 1;
            }
        }
        Ok(format!("{} regular graphs x 5 fugacities, min slack {min:.3e}; {reported} irregular reported only", regular.len()))
    });
}

#[test]
fn criterion_13_negative_fugacity_probe() {
    criterion(13, "negative-fugacity witness for delta = 2, ds = (2, 2)", || {
        let found = negative_fugacity_probe(2, &[2, 2], 1e-4).map_err(e)?;
        // oracle: the same grid, scanned directly
        let mut most_negative = (0.0, 0.0f64);
        for k in 1..2000 {
            let l = -(k as f64) * 1e-4;
            if let Some((v, _)) = reduced_key_expression(2, &[2, 2], &[l, l]) {
                if v < most_negative.1 {
                    most_negative = (l, v);
                }
            }
        }
        match found {
            Some(w) if w.lambda > -0.2 && w.lambda < 0.0 && w.value < 0.0 => {
                Ok(format!("witness lambda {} value {:e}", w.lambda, w.value))
            }
            other => Err(format!(
                "no witness ({other:?}); expression is 3(1+2l) - 2(1+3l) - 1 = 0 identically, \
                 grid minimum {:e} at {} is rounding",
                most_negative.1, most_negative.0
            )),
        }
    });
}

#[test]
fn criterion_14_explorer() {
    criterion(14, "explorer: 1e4 trials, deterministic", || {
        let start = Instant::now();
        let cfg = ExploreConfig { trials: 10_000, seed: 0xA1E7, n_max: 10, q_max: 3, ..ExploreConfig::default() };
        let a = explore_conjecture(&cfg).map_err(e)?;
        let first = start.elapsed();
        let b = explore_conjecture(&cfg).map_err(e)?;
        let ja = serde_json::to_string(&a).map_err(e)?;
        let jb = serde_json::to_string(&b).map_err(e)?;
        ensure(ja == jb, || "rerun differs".into())?;
        ensure(a.min_slack >= -TOL, || format!("min slack {:e} at {:?}", a.min_slack, a.worst.first()))?;
        within(first, 300.0, "exploration")?;
        let w = &a.worst[0];
        let replay = verify::run_trial(&cfg, w.trial_index).map_err(e)?;
        ensure(replay.witness.slack.to_bits() == w.slack.to_bits(), || "witness replay differs".into())?;
        Ok(format!(
            "min slack {:.3e}, {} near-tight, {} degenerate, {} rejected draws, {} zero-row exclusions",
            a.min_slack, a.near_tight, a.degenerate, a.rejections, a.zero_row_exclusions
        ))
    });
}
