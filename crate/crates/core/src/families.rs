//! Parameterized digraph families and their cospectral constructions.
//!
//! Labeling conventions (0-based):
//!
//! * `Cycle{n}`: `0 -> 1 -> ... -> n-1 -> 0`.
//! * `Infinity{r,s}`: two cycles sharing the hub `0`; the first is
//!   `0 -> 1 -> ... -> r-1 -> 0`, the second `0 -> r -> ... -> r+s-2 -> 0`.
//! * `InfinityHat{r,s}`: `Infinity{r,s}` plus the arc `r-1 -> r`, from the
//!   last vertex of the first cycle to the first non-hub vertex of the second.
//! * `Theta{a,b,c}`: junctions `0` and `1`. Path `0 -> 2 -> ... -> a+1 -> 1`
//!   has `a` inner vertices, path `0 -> a+2 -> ... -> a+b+1 -> 1` has `b`,
//!   and the return path `1 -> a+b+2 -> ... -> a+b+c+1 -> 0` has `c`.
//! * `DJ{n,j}`: the cycle on `n` vertices plus the back-arcs `1 -> 0` and
//!   `j -> j-1`.

use std::fmt;
use std::str::FromStr;

use crate::digraph::Digraph;
use crate::error::{Error, Result};
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilySpec {
    Cycle { n: usize },
    Infinity { r: usize, s: usize },
    Theta { a: usize, b: usize, c: usize },
    InfinityHat { r: usize, s: usize },
    DJ { n: usize, j: usize },
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidFamilyParameters(msg.into())
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FamilySpec::Cycle { n } if n < 2 => {
                Err(invalid(format!("cycle needs n >= 2, got {n}")))
            }
            FamilySpec::Infinity { r, s } | FamilySpec::InfinityHat { r, s } if r < 2 || s < 2 => {
                Err(invalid(format!(
                    "coalesced cycles need r, s >= 2, got r={r}, s={s}"
                )))
            }
            FamilySpec::Theta { a, b, .. } if a > b => {
                Err(invalid(format!("theta needs a <= b, got a={a}, b={b}")))
            }
            FamilySpec::Theta { b: 0, .. } => {
                Err(invalid("theta needs b > 0 (b = 0 forces parallel arcs)"))
            }
            FamilySpec::DJ { n, .. } if n < 4 => {
                Err(invalid(format!("D(j) needs n >= 4, got {n}")))
            }
            FamilySpec::DJ { n, j } if j < 2 || j > n - 1 => Err(invalid(format!(
                "D(j) needs 2 <= j <= n-1, got n={n}, j={j}"
            ))),
            _ => Ok(()),
        }
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        match *self {
            FamilySpec::Cycle { n } | FamilySpec::DJ { n, .. } => n,
            FamilySpec::Infinity { r, s } | FamilySpec::InfinityHat { r, s } => r + s - 1,
            FamilySpec::Theta { a, b, c } => a + b + c + 2,
        }
    }

    pub fn generate(&self) -> Result<Digraph> {
        self.validate()?;
        let n = self.order();
        let mut arcs: Vec<(usize, usize)> = Vec::new();
        let mut cycle_through = |verts: &[usize]| {
            for (k, &u) in verts.iter().enumerate() {
                arcs.push((u, verts[(k + 1) % verts.len()]));
            }
        };
        match *self {
            FamilySpec::Cycle { n } => cycle_through(&(0..n).collect::<Vec<_>>()),
            FamilySpec::Infinity { r, s } | FamilySpec::InfinityHat { r, s } => {
                cycle_through(&(0..r).collect::<Vec<_>>());
                let second: Vec<usize> = std::iter::once(0).chain(r..r + s - 1).collect();
                cycle_through(&second);
                if matches!(self, FamilySpec::InfinityHat { .. }) {
                    arcs.push((r - 1, r));
                }
            }
            FamilySpec::Theta { a, b, c } => {
                let mut path = |inner: std::ops::Range<usize>, from: usize, to: usize| {
                    let verts: Vec<usize> = std::iter::once(from)
                        .chain(inner)
                        .chain(std::iter::once(to))
                        .collect();
                    arcs.extend(verts.windows(2).map(|w| (w[0], w[1])));
                };
                path(2..a + 2, 0, 1);
                path(a + 2..a + b + 2, 0, 1);
                path(a + b + 2..a + b + c + 2, 1, 0);
            }
            FamilySpec::DJ { n, j } => {
                cycle_through(&(0..n).collect::<Vec<_>>());
                arcs.push((1, 0));
                arcs.push((j, j - 1));
            }
        }
        Digraph::from_arcs(n, arcs)
    }

    /// The family's characteristic polynomial in closed form.
    pub fn closed_form_charpoly(&self) -> Result<Polynomial> {
        self.validate()?;
        let n = self.order();
        let terms: Vec<(usize, i64)> = match *self {
            FamilySpec::Cycle { n } => vec![(n, 1), (0, -1)],
            FamilySpec::Infinity { r, s } => vec![(n, 1), (n - r, -1), (n - s, -1)],
            FamilySpec::Theta { a, b, .. } => vec![(n, 1), (b, -1), (a, -1)],
            FamilySpec::InfinityHat { r, s } => {
                vec![(n, 1), (n - r, -1), (n - s, -1), (0, -1)]
            }
            FamilySpec::DJ { n, .. } => vec![(n, 1), (n - 2, -2), (n - 4, 1), (0, -1)],
        };
        Ok(Polynomial::from_terms(&terms))
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FamilySpec::Cycle { n } => write!(f, "cycle:{n}"),
            FamilySpec::Infinity { r, s } => write!(f, "inf:{r},{s}"),
            FamilySpec::Theta { a, b, c } => write!(f, "theta:{a},{b},{c}"),
            FamilySpec::InfinityHat { r, s } => write!(f, "infhat:{r},{s}"),
            FamilySpec::DJ { n, j } => write!(f, "dj:{n},{j}"),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Parses `cycle:n`, `inf:r,s`, `theta:a,b,c`, `infhat:r,s` or `dj:n,j`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("family spec `{s}` lacks a `name:` prefix")))?;
        let nums = args
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::Parse(format!("family spec `{s}`: `{t}`: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let arity = |k: usize| {
            if nums.len() == k {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "family `{name}` takes {k} parameter(s), got {}",
                    nums.len()
                )))
            }
        };
        let spec = match name {
            "cycle" => {
                arity(1)?;
                FamilySpec::Cycle { n: nums[0] }
            }
            "inf" => {
                arity(2)?;
                FamilySpec::Infinity {
                    r: nums[0],
                    s: nums[1],
                }
            }
            "theta" => {
                arity(3)?;
                FamilySpec::Theta {
                    a: nums[0],
                    b: nums[1],
                    c: nums[2],
                }
            }
            "infhat" => {
                arity(2)?;
                FamilySpec::InfinityHat {
                    r: nums[0],
                    s: nums[1],
                }
            }
            "dj" => {
                arity(2)?;
                FamilySpec::DJ {
                    n: nums[0],
                    j: nums[1],
                }
            }
            other => return Err(Error::Parse(format!("unknown family `{other}`"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// The coalescence cospectral with `Theta{a,b,c}`: `x^(1+c) P_theta = P_inf`.
pub fn infinity_for_theta(a: usize, b: usize, c: usize) -> Result<FamilySpec> {
    FamilySpec::Theta { a, b, c }.validate()?;
    Ok(FamilySpec::Infinity {
        r: a + c + 2,
        s: b + c + 2,
    })
}

/// The `r - 1` theta digraphs with `P_inf(r,s) = x^i P_theta(r-i-1, s-i-1, i-1)`.
///
/// Fails when one of them is not a simple digraph, which happens exactly
/// when `r == s` (the last one has `a = b = 0`).
pub fn thetas_for_infinity(r: usize, s: usize) -> Result<Vec<FamilySpec>> {
    if r < 2 || r > s {
        return Err(invalid(format!("need 2 <= r <= s, got r={r}, s={s}")));
    }
    (1..r)
        .map(|i| {
            let spec = FamilySpec::Theta {
                a: r - i - 1,
                b: s - i - 1,
                c: i - 1,
            };
            spec.validate()
                .map(|_| spec)
                .map_err(|e| invalid(format!("i={i} gives {spec}: {e}")))
        })
        .collect()
}

/// `(Infinity{r,5r}, Infinity{2r,3r})`, which share their spectral radius.
pub fn prop12_pair(r: usize) -> Result<(FamilySpec, FamilySpec)> {
    if r < 2 {
        return Err(invalid(format!("need r >= 2, got {r}")));
    }
    Ok((
        FamilySpec::Infinity { r, s: 5 * r },
        FamilySpec::Infinity { r: 2 * r, s: 3 * r },
    ))
}

/// Families of same-order, same-size digraphs with equal spectra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NotDcsFamily {
    /// `InfinityHat{r,s}` and `InfinityHat{s,r}` for `2 <= r < s`.
    InfinityHat { r: usize, s: usize },
    /// `DJ{n,j}` for every `j` in `2..=n-1`.
    DJ { n: usize },
}

pub fn notdcs_specs(kind: NotDcsFamily) -> Result<Vec<FamilySpec>> {
    match kind {
        NotDcsFamily::InfinityHat { r, s } => {
            if r < 2 || r >= s {
                return Err(invalid(format!("need 2 <= r < s, got r={r}, s={s}")));
            }
            Ok(vec![
                FamilySpec::InfinityHat { r, s },
                FamilySpec::InfinityHat { r: s, s: r },
            ])
        }
        NotDcsFamily::DJ { n } => {
            if n < 4 {
                return Err(invalid(format!("D(j) needs n >= 4, got {n}")));
            }
            Ok((2..n).map(|j| FamilySpec::DJ { n, j }).collect())
        }
    }
}

pub fn notdcs_pairs(kind: NotDcsFamily) -> Result<Vec<Digraph>> {
    notdcs_specs(kind)?
        .iter()
        .map(FamilySpec::generate)
        .collect()
}
