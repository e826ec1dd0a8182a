//! Naive reference evaluators, written independently of the library's
//! recurrences and search orders.
#![allow(dead_code)]

use afmlab::{Rational, SimpleGraph};
use num_traits::{One, Zero};
use rand::Rng;

pub fn adjacency(g: &SimpleGraph) -> Vec<Vec<bool>> {
    let n = g.vertex_count();
    let mut a = vec![vec![false; n]; n];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

fn independent(a: &[Vec<bool>], set: u64) -> bool {
    let n = a.len();
    (0..n).all(|u| set >> u & 1 == 0 || (u + 1..n).all(|v| set >> v & 1 == 0 || !a[u][v]))
}

/// Sum over all `2^n` subsets, keeping the independent ones.
pub fn z_subsets_f64(g: &SimpleGraph, acts: &[f64]) -> f64 {
    let a = adjacency(g);
    let n = a.len();
    let mut total = 0.0;
    for set in 0u64..1 << n {
        if independent(&a, set) {
            total += (0..n).filter(|&v| set >> v & 1 == 1).map(|v| acts[v]).product::<f64>();
        }
    }
    total
}

pub fn z_subsets_exact(g: &SimpleGraph, acts: &[Rational]) -> Rational {
    let a = adjacency(g);
    let n = a.len();
    let mut total = Rational::zero();
    for set in 0u64..1 << n {
        if independent(&a, set) {
            let mut term = Rational::one();
            for v in (0..n).filter(|&v| set >> v & 1 == 1) {
                term *= &acts[v];
            }
            total += term;
        }
    }
    total
}

/// Occupation probability of each vertex by subset enumeration.
pub fn marginals_subsets(g: &SimpleGraph, acts: &[f64]) -> Vec<f64> {
    let a = adjacency(g);
    let n = a.len();
    let mut z = 0.0;
    let mut occ = vec![0.0; n];
    for set in 0u64..1 << n {
        if independent(&a, set) {
            let w: f64 = (0..n).filter(|&v| set >> v & 1 == 1).map(|v| acts[v]).product();
            z += w;
            for (v, o) in occ.iter_mut().enumerate() {
                if set >> v & 1 == 1 {
                    *o += w;
                }
            }
        }
    }
    occ.iter().map(|o| o / z).collect()
}

/// Odometer over all `q^n` maps.
pub fn hom_all_maps(g: &SimpleGraph, q: usize, weights: &[f64]) -> f64 {
    let n = g.vertex_count();
    let edges = g.edges();
    let mut colour = vec![0usize; n];
    let mut total = 0.0;
    loop {
        total += edges.iter().map(|&(u, v)| weights[colour[u] * q + colour[v]]).product::<f64>();
        let mut i = 0;
        loop {
            if i == n {
                return total;
            }
            colour[i] += 1;
            if colour[i] < q {
                break;
            }
            colour[i] = 0;
            i += 1;
        }
    }
}

/// Semiproper colourings: each vertex gets colour `0` (free) or `1..=q`,
/// adjacent vertices never share a nonzero colour.
pub fn zq_colourings(g: &SimpleGraph, rows: &[Vec<Rational>]) -> Rational {
    let a = adjacency(g);
    let n = a.len();
    let q = rows.len();
    let mut colour = vec![0usize; n];
    let mut total = Rational::zero();
    loop {
        let proper = (0..n).all(|u| colour[u] == 0 || (u + 1..n).all(|v| !a[u][v] || colour[u] != colour[v]));
        if proper {
            let mut term = Rational::one();
            for v in 0..n {
                if colour[v] > 0 {
                    term *= &rows[colour[v] - 1][v];
                }
            }
            total += term;
        }
        let mut i = 0;
        loop {
            if i == n {
                return total;
            }
            colour[i] += 1;
            if colour[i] <= q {
                break;
            }
            colour[i] = 0;
            i += 1;
        }
    }
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> SimpleGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                edges.push((u, v));
            }
        }
    }
    SimpleGraph::from_edge_list(n, &edges).unwrap()
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let num: i64 = rng.random_range(0..=12);
    let den: i64 = rng.random_range(1..=7);
    Rational::new(num.into(), den.into())
}

/// Random cubic graph by repeated perfect matchings of half-edges.
pub fn random_cubic<R: Rng>(rng: &mut R, n: usize) -> SimpleGraph {
    assert!(n.is_multiple_of(2) && n >= 4);
    loop {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
        for i in (1..stubs.len()).rev() {
            let j = rng.random_range(0..=i);
            stubs.swap(i, j);
        }
        let edges: Vec<(usize, usize)> = stubs.chunks(2).map(|c| (c[0], c[1])).collect();
        if let Ok(g) = SimpleGraph::from_edge_list(n, &edges) {
            return g;
        }
    }
}

pub fn complete_bipartite(a: usize, b: usize) -> SimpleGraph {
    let edges: Vec<(usize, usize)> = (0..a).flat_map(|u| (0..b).map(move |v| (u, a + v))).collect();
    SimpleGraph::from_edge_list(a + b, &edges).unwrap()
}
