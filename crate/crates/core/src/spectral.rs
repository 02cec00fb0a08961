//! Certified spectral radii, exact characteristic polynomials and
//! largest-real-root isolation.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scc;

/// Default iteration budget for power iteration.
pub const DEFAULT_MAX_ITERATIONS: usize = 1_000_000;

/// A real number bracketed by certified bounds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadiusEstimate {
    pub lower: f64,
    pub upper: f64,
    pub value: f64,
    pub iterations: usize,
}

impl RadiusEstimate {
    pub fn exact(value: f64) -> Self {
        RadiusEstimate {
            lower: value,
            upper: value,
            value,
            iterations: 0,
        }
    }

    fn from_bounds(lower: f64, upper: f64, iterations: usize) -> Self {
        RadiusEstimate {
            lower,
            upper,
            value: lower + (upper - lower) / 2.0,
            iterations,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lower <= x && x <= self.upper
    }

    /// Whether the two brackets come within `slack` of each other.
    pub fn overlaps(&self, other: &RadiusEstimate, slack: f64) -> bool {
        self.lower - slack <= other.upper && other.lower - slack <= self.upper
    }
}

pub(crate) fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tol))
    }
}

/// Spectral radius of a strongly connected (or edgeless) digraph.
pub fn spectral_radius(d: &Digraph, tol: f64) -> Result<RadiusEstimate> {
    spectral_radius_with_limit(d, tol, DEFAULT_MAX_ITERATIONS)
}

pub fn spectral_radius_with_limit(
    d: &Digraph,
    tol: f64,
    max_iterations: usize,
) -> Result<RadiusEstimate> {
    check_tol(tol)?;
    if d.size() == 0 {
        return Ok(RadiusEstimate::exact(0.0));
    }
    if !scc::is_strongly_connected(d) {
        return Err(Error::NotStronglyConnected);
    }
    let out: Vec<&[usize]> = (0..d.order()).map(|v| d.out_neighbors(v)).collect();
    perron_root(&out, tol, max_iterations)
}

/// Power iteration on `A + I` for an irreducible nonnegative 0/1 matrix given
/// by its row supports.
///
/// After every step the Collatz-Wielandt ratios `min (Bx)_i/x_i` and
/// `max (Bx)_i/x_i` bracket `rho(B) = rho(A) + 1`. The shift makes the matrix
/// primitive, so the bracket closes even for periodic `A`. Bounds are widened
/// by a few ulps to absorb floating-point rounding in the ratios.
pub(crate) fn perron_root<R: AsRef<[usize]>>(
    out: &[R],
    tol: f64,
    max_iterations: usize,
) -> Result<RadiusEstimate> {
    let n = out.len();
    let max_deg = out.iter().map(|r| r.as_ref().len()).max().unwrap_or(0);
    let rounding = 4.0 * (max_deg as f64 + 2.0) * f64::EPSILON;
    let mut x = vec![1.0f64; n];
    let mut y = vec![0.0f64; n];
    let mut gap = f64::INFINITY;
    for it in 1..=max_iterations {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        let mut top = 0.0f64;
        for i in 0..n {
            let s = x[i] + out[i].as_ref().iter().map(|&j| x[j]).sum::<f64>();
            y[i] = s;
            let r = s / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
            top = top.max(s);
        }
        let slack = rounding * hi;
        let lower = (lo - slack - 1.0).max(0.0);
        let upper = hi + slack - 1.0;
        gap = upper - lower;
        if gap <= tol {
            return Ok(RadiusEstimate::from_bounds(lower, upper, it));
        }
        for i in 0..n {
            x[i] = y[i] / top;
        }
    }
    Err(Error::NonConvergence {
        iterations: max_iterations,
        gap,
    })
}

/// Exact characteristic polynomial `det(xI - A)` by Berkowitz's
/// division-free algorithm.
pub fn char_poly_exact(d: &Digraph) -> Polynomial {
    let n = d.order();
    let a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if d.has_arc(i, j) {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut high_first = berkowitz(&a);
    high_first.reverse();
    Polynomial::new(high_first)
}

/// Coefficients of `det(xI - A)`, leading coefficient first.
fn berkowitz(a: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = a.len();
    let mut poly = vec![BigInt::one()];
    for r in 0..n {
        // Leading (r+1)x(r+1) block = [[M, c], [row, a_rr]] with M the r x r block.
        // Toeplitz column: 1, -a_rr, -row.c, -row.M.c, ..., -row.M^(r-1).c
        let mut t = Vec::with_capacity(r + 2);
        t.push(BigInt::one());
        t.push(-a[r][r].clone());
        let mut v: Vec<BigInt> = (0..r).map(|i| a[i][r].clone()).collect();
        for k in 0..r {
            let dot: BigInt = (0..r).map(|j| &a[r][j] * &v[j]).sum();
            t.push(-dot);
            if k + 1 < r {
                v = (0..r)
                    .map(|i| (0..r).map(|j| &a[i][j] * &v[j]).sum())
                    .collect();
            }
        }
        let next: Vec<BigInt> = (0..r + 2)
            .map(|i| {
                (0..=i.min(r))
                    .filter(|&k| i - k < t.len())
                    .map(|k| &t[i - k] * &poly[k])
                    .sum()
            })
            .collect();
        poly = next;
    }
    poly
}

/// Exact polynomial value at a rational point.
pub fn eval_poly(p: &Polynomial, x: &BigRational) -> BigRational {
    p.eval(x)
}

/// Largest real root of `p`, bracketed to width at most `tol`.
///
/// The search starts from `[0, 1 + max |c_i|]` and bisects at dyadic
/// midpoints. Each step decides which half holds the largest root by a Sturm
/// root count on the square-free part of `p`, so the bracket is exact even
/// for roots of even multiplicity; the final bounds are rounded outward to
/// `f64`.
pub fn largest_real_root(p: &Polynomial, tol: f64) -> Result<RadiusEstimate> {
    check_tol(tol)?;
    if p.degree() == 0 {
        return Err(Error::NoRealRootAtOrAboveZero);
    }
    let bound: BigInt = BigInt::one()
        + p.coeffs()[..p.degree()]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
    let sturm = SturmChain::new(p);
    let bound_q = BigRational::from_integer(bound.clone());
    let v_bound = sturm.variations(&bound_q);
    let count_above = |x: &BigRational| sturm.variations(x) - v_bound;

    let zero = BigRational::zero();
    if count_above(&zero) == 0 {
        return if sturm.is_root(&zero) {
            Ok(RadiusEstimate::exact(0.0))
        } else {
            Err(Error::NoRealRootAtOrAboveZero)
        };
    }

    let tol_q = BigRational::from_float(tol).expect("finite tolerance");
    let mut lo = zero;
    let mut hi = bound_q;
    let two = BigRational::from_integer(BigInt::from(2));
    for step in 1.. {
        let (lower, upper) = (round_down(&lo), round_up(&hi));
        if upper - lower <= tol && &hi - &lo <= tol_q {
            return Ok(RadiusEstimate::from_bounds(lower, upper, step));
        }
        if step > 4096 {
            return Err(Error::NonConvergence {
                iterations: step,
                gap: upper - lower,
            });
        }
        let mid = (&lo + &hi) / &two;
        let above = count_above(&mid);
        if above == 0 && sturm.is_root(&mid) {
            let v = round_down(&mid);
            return Ok(RadiusEstimate::from_bounds(v, round_up(&mid), step));
        }
        if above > 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    unreachable!("bisection loop returns")
}

fn round_down(q: &BigRational) -> f64 {
    let mut f = q.to_f64().expect("finite rational");
    while BigRational::from_float(f).is_some_and(|g| &g > q) {
        f = f.next_down();
    }
    f
}

fn round_up(q: &BigRational) -> f64 {
    let mut f = q.to_f64().expect("finite rational");
    while BigRational::from_float(f).is_some_and(|g| &g < q) {
        f = f.next_up();
    }
    f
}

/// Sturm sequence of the square-free part of a polynomial.
struct SturmChain {
    chain: Vec<Vec<BigRational>>,
}

impl SturmChain {
    fn new(p: &Polynomial) -> Self {
        let p: Vec<BigRational> = p
            .coeffs()
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let dp = rderiv(&p);
        let g = rgcd(p.clone(), dp);
        let q = rdiv_exact(&p, &g);
        let mut chain = vec![q.clone(), rderiv(&q)];
        loop {
            let k = chain.len();
            if chain[k - 1].is_empty() {
                chain.pop();
                break;
            }
            let r = rrem(&chain[k - 2], &chain[k - 1]);
            chain.push(r.into_iter().map(|c| -c).collect());
        }
        SturmChain { chain }
    }

    fn is_root(&self, x: &BigRational) -> bool {
        reval(&self.chain[0], x).is_zero()
    }

    /// Sign changes along the chain at `x`, zeros skipped.
    fn variations(&self, x: &BigRational) -> i64 {
        let mut count = 0;
        let mut prev = 0i8;
        for f in &self.chain {
            let v = reval(f, x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                continue;
            };
            if prev != 0 && s != prev {
                count += 1;
            }
            prev = s;
        }
        count
    }
}

fn rtrim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn reval(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter()
        .rev()
        .fold(BigRational::zero(), |acc, c| acc * x + c)
}

fn rderiv(p: &[BigRational]) -> Vec<BigRational> {
    rtrim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect(),
    )
}

/// Quotient and remainder of rational polynomial division.
fn rdivmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = rtrim(b.to_vec());
    let mut r = rtrim(a.to_vec());
    let lead = b.last().expect("nonzero divisor").clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let factor = r.last().expect("nonempty") / &lead;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &factor * c;
        }
        q[shift] = factor;
        r.pop();
        r = rtrim(r);
    }
    (q, r)
}

fn rrem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    rdivmod(a, b).1
}

fn rdiv_exact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (q, r) = rdivmod(a, b);
    debug_assert!(r.is_empty(), "division by a gcd is exact");
    rtrim(q)
}

fn rgcd(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> Vec<BigRational> {
    a = rtrim(a);
    b = rtrim(b);
    while !b.is_empty() {
        let r = rrem(&a, &b);
        a = b;
        b = r;
    }
    let lead = a.last().cloned().unwrap_or_else(BigRational::one);
    a.into_iter().map(|c| c / &lead).collect()
}
