#![allow(dead_code)]

use compspec::families::FamilySpec;
use compspec::Digraph;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn cycle(n: usize) -> Digraph {
    Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Each of the `n(n-1)` possible arcs present independently with probability `p`.
pub fn random_digraph(rng: &mut impl Rng, n: usize, p: f64) -> Digraph {
    let mut arcs = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::from_arcs(n, arcs).unwrap()
}

/// A random digraph of order `1..=max_n` with a random arc density.
pub fn random_any(rng: &mut impl Rng, max_n: usize) -> Digraph {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.05..0.6);
    random_digraph(rng, n, p)
}

/// A random strongly connected digraph: a shuffled Hamiltonian cycle plus chords.
pub fn random_strong(rng: &mut impl Rng, n: usize, p: f64) -> Digraph {
    let mut order: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        order.swap(i, rng.gen_range(0..=i));
    }
    let mut arcs: Vec<(usize, usize)> = if n > 1 {
        (0..n).map(|i| (order[i], order[(i + 1) % n])).collect()
    } else {
        Vec::new()
    };
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.gen_bool(p) {
                arcs.push((u, v));
            }
        }
    }
    Digraph::from_arcs(n, arcs).unwrap()
}

/// Strategy for digraphs on `min_n..=max_n` vertices.
pub fn digraphs(min_n: usize, max_n: usize) -> impl Strategy<Value = Digraph> {
    (min_n..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let arcs = (0..n * n)
                .filter(|&k| bits[k] && k / n != k % n)
                .map(|k| (k / n, k % n));
            Digraph::from_arcs(n, arcs).unwrap()
        })
    })
}

/// Strategy for strongly connected digraphs on `min_n..=max_n` vertices.
pub fn strong_digraphs(min_n: usize, max_n: usize) -> impl Strategy<Value = Digraph> {
    (min_n..=max_n, any::<u64>(), 0.0f64..0.5)
        .prop_map(|(n, seed, p)| random_strong(&mut rng(seed), n, p))
}

/// Strategy for a digraph together with a permutation of its vertices.
pub fn relabeled(min_n: usize, max_n: usize) -> impl Strategy<Value = (Digraph, Vec<usize>)> {
    digraphs(min_n, max_n).prop_flat_map(|d| {
        let n = d.order();
        (Just(d), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

/// Largest real root of `p` (coefficients low-first, monic, `p(hi) > 0` past
/// the Cauchy bound) by plain float bisection; independent of the library.
pub fn bisect_largest_root(coeffs: &[f64]) -> f64 {
    let eval = |x: f64| coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c);
    let lead = *coeffs.last().unwrap();
    let mut hi = 1.0 + coeffs.iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    // Walk down until the sign flips, then bisect that bracket.
    let step = hi / 4096.0;
    let mut lo = hi;
    while lo > -1.0 && eval(lo) > 0.0 {
        lo -= step;
    }
    hi = lo + step;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Perron root of a strongly connected digraph from a dense Schur solver:
/// the largest real eigenvalue of `A + sI`, minus `s`. Shifting sidesteps
/// the stalls of unshifted QR on permutation-like 0/1 matrices.
pub fn dense_radius(d: &Digraph) -> f64 {
    let n = d.order();
    let m = nalgebra::DMatrix::from_fn(n, n, |i, j| if d.has_arc(i, j) { 1.0 } else { 0.0 });
    (0..8)
        .find_map(|k| {
            let s = 0.5 + 0.75 * k as f64;
            let schur =
                (&m + nalgebra::DMatrix::identity(n, n) * s).try_schur(f64::EPSILON, 100_000)?;
            let top = schur
                .complex_eigenvalues()
                .iter()
                .filter(|z| z.im.abs() < 1e-9)
                .map(|z| z.re)
                .fold(f64::NEG_INFINITY, f64::max);
            Some(top - s)
        })
        .expect("Schur form converges for some shift")
}

/// Every valid family instance with at most `max_order` vertices.
pub fn family_grid(max_order: usize) -> Vec<FamilySpec> {
    let mut specs = Vec::new();
    for n in 2..=max_order {
        specs.push(FamilySpec::Cycle { n });
        for j in 2..n {
            specs.push(FamilySpec::DJ { n, j });
        }
    }
    for r in 2..=max_order {
        for s in 2..=max_order {
            specs.push(FamilySpec::Infinity { r, s });
            if r != s {
                specs.push(FamilySpec::InfinityHat { r, s });
            }
        }
    }
    for a in 0..max_order {
        for b in 1..max_order {
            for c in 0..max_order {
                specs.push(FamilySpec::Theta { a, b, c });
            }
        }
    }
    specs.retain(|s| s.validate().is_ok() && s.order() <= max_order);
    specs
}
