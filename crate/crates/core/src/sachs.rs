//! Characteristic polynomials from linear subdigraphs.
//!
//! A linear subdigraph is a set of pairwise vertex-disjoint directed cycles.
//! The coefficient of `x^(n-i)` in the characteristic polynomial is the sum
//! of `(-1)^c` over all linear subdigraphs covering exactly `i` vertices,
//! where `c` is the number of cycles. This gives a route to the polynomial
//! that shares nothing with the determinant expansion in [`crate::spectral`].

use num_bigint::BigInt;
use rayon::prelude::*;

use crate::digraph::{Digraph, VertexSet};
use crate::error::{Error, Result};
use crate::poly::Polynomial;

pub const DEFAULT_SACHS_CAP: usize = 14;

/// A disjoint union of directed cycles of a host digraph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSubdigraph {
    /// Each cycle as a vertex sequence starting at its smallest vertex.
    pub cycles: Vec<Vec<usize>>,
}

impl LinearSubdigraph {
    pub fn size(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn component_count(&self) -> usize {
        self.cycles.len()
    }

    pub fn vertex_set(&self) -> VertexSet {
        let all: Vec<usize> = self.cycles.iter().flatten().copied().collect();
        let n = all.iter().max().map_or(0, |m| m + 1);
        VertexSet::new(all, n).expect("cycle vertices are in range")
    }
}

/// Every simple directed cycle with at most `max_len` vertices, each once,
/// listed as a vertex sequence starting at its smallest vertex.
pub fn enumerate_cycles(d: &Digraph, max_len: usize) -> Vec<Vec<usize>> {
    let n = d.order();
    let mut cycles = Vec::new();
    let mut on_path = vec![false; n];
    let mut path = Vec::new();
    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        extend_cycles(d, start, max_len, &mut path, &mut on_path, &mut cycles);
        on_path[start] = false;
        path.pop();
    }
    cycles
}

fn extend_cycles(
    d: &Digraph,
    start: usize,
    max_len: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let v = *path.last().expect("path starts at start");
    for &w in d.out_neighbors(v) {
        if w == start {
            if path.len() >= 2 {
                out.push(path.clone());
            }
        } else if w > start && !on_path[w] && path.len() < max_len {
            path.push(w);
            on_path[w] = true;
            extend_cycles(d, start, max_len, path, on_path, out);
            on_path[w] = false;
            path.pop();
        }
    }
}

fn cycle_mask(cycle: &[usize]) -> u64 {
    cycle.iter().fold(0, |m, &v| m | 1 << v)
}

/// Characteristic polynomial by signed counting of linear subdigraphs,
/// with the default order cap.
pub fn sachs_char_poly(d: &Digraph) -> Result<Polynomial> {
    sachs_char_poly_with_cap(d, DEFAULT_SACHS_CAP)
}

pub fn sachs_char_poly_with_cap(d: &Digraph, cap: usize) -> Result<Polynomial> {
    let n = d.order();
    if n > cap.min(64) {
        return Err(Error::SizeLimitExceeded {
            what: "linear subdigraph enumeration",
            n,
            cap: cap.min(64),
        });
    }
    let cycles: Vec<(u64, usize)> = enumerate_cycles(d, n)
        .iter()
        .map(|c| (cycle_mask(c), c.len()))
        .collect();

    // signed[i] accumulates sum of (-1)^(cycle count) over packings covering i vertices
    let signed = (0..cycles.len())
        .into_par_iter()
        .map(|first| {
            let mut acc = vec![0i128; n + 1];
            let (mask, len) = cycles[first];
            pack(&cycles, first + 1, mask, len, -1, &mut acc);
            acc
        })
        .reduce(
            || vec![0i128; n + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = x.checked_add(y).expect("signed packing count fits in i128");
                }
                a
            },
        );

    // x^n + sum_i a_i x^(n-i), with a_0 = 1 for the empty packing
    let mut coeffs = vec![BigInt::from(0); n + 1];
    coeffs[n] = BigInt::from(1);
    for (i, &a) in signed.iter().enumerate().skip(1) {
        coeffs[n - i] = BigInt::from(a);
    }
    Ok(Polynomial::new(coeffs))
}

/// Adds every packing extending the current one with cycles from `next..`.
fn pack(
    cycles: &[(u64, usize)],
    next: usize,
    used: u64,
    covered: usize,
    sign: i128,
    acc: &mut [i128],
) {
    acc[covered] += sign;
    for (k, &(mask, len)) in cycles.iter().enumerate().skip(next) {
        if mask & used == 0 {
            pack(cycles, k + 1, used | mask, covered + len, -sign, acc);
        }
    }
}

/// All linear subdigraphs (including the empty one), for small digraphs.
pub fn linear_subdigraphs(d: &Digraph) -> Result<Vec<LinearSubdigraph>> {
    let n = d.order();
    if n > DEFAULT_SACHS_CAP {
        return Err(Error::SizeLimitExceeded {
            what: "linear subdigraph enumeration",
            n,
            cap: DEFAULT_SACHS_CAP,
        });
    }
    let cycles = enumerate_cycles(d, n);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    collect_packings(&cycles, 0, 0, &mut chosen, &mut out);
    Ok(out)
}

fn collect_packings(
    cycles: &[Vec<usize>],
    next: usize,
    used: u64,
    chosen: &mut Vec<usize>,
    out: &mut Vec<LinearSubdigraph>,
) {
    out.push(LinearSubdigraph {
        cycles: chosen.iter().map(|&k| cycles[k].clone()).collect(),
    });
    for k in next..cycles.len() {
        let mask = cycle_mask(&cycles[k]);
        if mask & used == 0 {
            chosen.push(k);
            collect_packings(cycles, k + 1, used | mask, chosen, out);
            chosen.pop();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::char_poly_exact;

    fn cycle(n: usize) -> Digraph {
        Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cycle_has_one_cycle() {
        let cs = enumerate_cycles(&cycle(5), 5);
        assert_eq!(cs, vec![vec![0, 1, 2, 3, 4]]);
        assert!(enumerate_cycles(&cycle(5), 4).is_empty());
        let path = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(enumerate_cycles(&path, 4).is_empty());
    }

    #[test]
    fn complete_digraph_cycle_count() {
        // K4 with both orientations: C(4,2)*1 + C(4,3)*2 + 3! = 6 + 8 + 6
        let arcs = (0..4).flat_map(|u| (0..4).filter(move |&v| v != u).map(move |v| (u, v)));
        let k4 = Digraph::from_arcs(4, arcs).unwrap();
        assert_eq!(enumerate_cycles(&k4, 4).len(), 20);
    }

    #[test]
    fn cycle_polynomial() {
        for n in 2..10 {
            let expected = &Polynomial::monomial(n) - &Polynomial::monomial(0);
            assert_eq!(sachs_char_poly(&cycle(n)).unwrap(), expected);
        }
    }

    #[test]
    fn disjoint_two_cycles_sign_convention() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        let p = sachs_char_poly(&d).unwrap();
        assert_eq!(p, Polynomial::from_i64(&[1, 0, -2, 0, 1]));
        assert_eq!(p, char_poly_exact(&d));
        let linear = linear_subdigraphs(&d).unwrap();
        assert_eq!(linear.len(), 4);
        let full: Vec<_> = linear.iter().filter(|l| l.size() == 4).collect();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].component_count(), 2);
        assert_eq!(full[0].vertex_set().as_slice(), &[0, 1, 2, 3]);
    }

    #[test]
    fn acyclic_gives_monomial() {
        let d = Digraph::from_arcs(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]).unwrap();
        assert_eq!(sachs_char_poly(&d).unwrap(), Polynomial::monomial(5));
    }

    #[test]
    fn enforces_cap() {
        assert!(matches!(
            sachs_char_poly(&cycle(15)),
            Err(Error::SizeLimitExceeded { .. })
        ));
        assert!(sachs_char_poly_with_cap(&cycle(15), 20).is_ok());
    }
}
