//! Direct check of the eigenvalue complementarity conditions.
//!
//! A real `lambda` is a complementarity eigenvalue of `A` when some nonzero
//! `x >= 0` has `Ax >= lambda x` and `<x, Ax - lambda x> = 0`. Any solution's
//! support `J` carries a positive eigenvector of the principal submatrix
//! `A[J, J]`, which may be taken irreducible or null. This oracle walks all
//! supports, takes the Perron pair of each such submatrix from a dense
//! eigen-solver, pads the vector with zeros, and checks the conditions on
//! the full matrix. It deliberately avoids the subset enumeration and power
//! iteration used by [`super::complementarity_spectrum`].

use nalgebra::DMatrix;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::spectral::check_tol;

pub const EICP_ORACLE_CAP: usize = 12;

pub fn verify_eicp_definition(d: &Digraph, lambda: f64, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    let n = d.order();
    if n > EICP_ORACLE_CAP {
        return Err(Error::SizeLimitExceeded {
            what: "complementarity definition oracle",
            n,
            cap: EICP_ORACLE_CAP,
        });
    }
    let a = DMatrix::from_fn(n, n, |i, j| if d.has_arc(i, j) { 1.0 } else { 0.0 });
    for support in 1u32..1 << n {
        let members: Vec<usize> = (0..n).filter(|&i| support >> i & 1 == 1).collect();
        let Some(local) = perron_pair(&a, &members) else {
            continue;
        };
        let (rho, vec) = local;
        if (rho - lambda).abs() > tol {
            continue;
        }
        let mut x = nalgebra::DVector::zeros(n);
        for (k, &i) in members.iter().enumerate() {
            x[i] = vec[k];
        }
        if satisfies_conditions(&a, &x, lambda, tol) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Perron value and positive unit eigenvector of `A[J, J]` when that block
/// is null or irreducible; `None` otherwise.
fn perron_pair(a: &DMatrix<f64>, members: &[usize]) -> Option<(f64, Vec<f64>)> {
    let k = members.len();
    let b = DMatrix::from_fn(k, k, |i, j| a[(members[i], members[j])]);
    if b.iter().all(|&v| v == 0.0) {
        return Some((0.0, vec![1.0; k]));
    }
    if !irreducible(&b) {
        return None;
    }
    let rho = largest_real_eigenvalue(&b)?;
    let shifted = &b - DMatrix::identity(k, k) * rho;
    let svd = shifted.try_svd(false, true, f64::EPSILON, 10_000)?;
    let v_t = svd.v_t?;
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("nonempty block");
    let mut v: Vec<f64> = v_t.row(idx).iter().copied().collect();
    if v.iter().sum::<f64>() < 0.0 {
        v.iter_mut().for_each(|c| *c = -*c);
    }
    if v.iter().any(|&c| c <= 0.0) {
        return None;
    }
    let top = v.iter().copied().fold(0.0, f64::max);
    Some((rho, v.into_iter().map(|c| c / top).collect()))
}

/// Largest real eigenvalue from a real Schur form. The unshifted QR
/// iteration can stall on permutation-like 0/1 blocks, so a few diagonal
/// shifts are tried before giving up.
fn largest_real_eigenvalue(b: &DMatrix<f64>) -> Option<f64> {
    let k = b.nrows();
    (0..4).find_map(|shift| {
        let shifted = b + DMatrix::identity(k, k) * (0.5 + shift as f64);
        let schur = shifted.try_schur(f64::EPSILON, 10_000)?;
        let top = schur
            .complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() < 1e-9)
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max);
        Some(top - (0.5 + shift as f64))
    })
}

/// Transitive closure test: every vertex reaches every other.
fn irreducible(b: &DMatrix<f64>) -> bool {
    let k = b.nrows();
    let mut reach: Vec<Vec<bool>> = (0..k)
        .map(|i| (0..k).map(|j| i == j || b[(i, j)] != 0.0).collect())
        .collect();
    for m in 0..k {
        let via = reach[m].clone();
        for row in reach.iter_mut().filter(|row| row[m]) {
            for (r, &v) in row.iter_mut().zip(&via) {
                *r |= v;
            }
        }
    }
    reach.iter().all(|row| row.iter().all(|&r| r))
}

fn satisfies_conditions(
    a: &DMatrix<f64>,
    x: &nalgebra::DVector<f64>,
    lambda: f64,
    tol: f64,
) -> bool {
    let slack = tol * (1.0 + a.nrows() as f64);
    let w = a * x - x * lambda;
    x.iter().all(|&c| c >= 0.0)
        && x.iter().any(|&c| c > 0.0)
        && w.iter().all(|&c| c >= -slack)
        && x.dot(&w).abs() <= slack
}
