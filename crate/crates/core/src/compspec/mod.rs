//! Complementarity spectra of digraphs.
//!
//! The complementarity spectrum of a digraph is `{0}` together with the
//! spectral radius of every induced strongly connected subdigraph on at least
//! two vertices. Such a subdigraph always lies inside a single strongly
//! connected component of the host, so the work splits per component.

mod eicp;
mod enumerate;

use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::digraph::{Digraph, VertexSet};
use crate::error::{Error, Result};
use crate::scc;
use crate::spectral::{check_tol, RadiusEstimate, DEFAULT_MAX_ITERATIONS};

pub use eicp::{verify_eicp_definition, EICP_ORACLE_CAP};

/// Default cap on the order of a single strongly connected component.
pub const DEFAULT_MAX_SCC: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumOptions {
    pub radius_tol: f64,
    pub merge_tol: f64,
    pub max_scc: usize,
    pub max_iterations: usize,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            radius_tol: crate::DEFAULT_RADIUS_TOL,
            merge_tol: crate::DEFAULT_MERGE_TOL,
            max_scc: DEFAULT_MAX_SCC,
            max_iterations: DEFAULT_MAX_ITERATIONS,
        }
    }
}

impl SpectrumOptions {
    pub fn with_radius_tol(mut self, tol: f64) -> Self {
        self.radius_tol = tol;
        self
    }
}

/// One complementarity eigenvalue with a vertex set whose induced
/// subdigraph attains it.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumValue {
    pub estimate: RadiusEstimate,
    pub witness: VertexSet,
}

/// Distinct complementarity eigenvalues in increasing order.
#[derive(Clone, Debug, PartialEq)]
pub struct CompSpectrum {
    pub values: Vec<SpectrumValue>,
    pub merge_tol: f64,
    pub radius_tol: f64,
}

impl CompSpectrum {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Midpoints of the certified brackets.
    pub fn midpoints(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.estimate.value).collect()
    }

    /// Whether some bracket, widened by `slack`, contains `x`.
    pub fn contains(&self, x: f64, slack: f64) -> bool {
        self.values
            .iter()
            .any(|v| v.estimate.lower - slack <= x && x <= v.estimate.upper + slack)
    }

    /// Merges the values of several spectra, identifying overlapping brackets.
    pub fn union<'a>(parts: impl IntoIterator<Item = &'a CompSpectrum>, merge_tol: f64) -> Self {
        let mut radius_tol: f64 = 0.0;
        let mut raw = Vec::new();
        for p in parts {
            radius_tol = radius_tol.max(p.radius_tol);
            raw.extend(p.values.iter().cloned());
        }
        CompSpectrum {
            values: merge(raw, merge_tol),
            merge_tol,
            radius_tol,
        }
    }
}

fn float_raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(format!("{x:.16e}")).expect("scientific notation is valid JSON")
}

struct ValueJson<'a>(&'a SpectrumValue);

impl Serialize for ValueJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SpectrumValue", 3)?;
        st.serialize_field("lower", &float_raw(self.0.estimate.lower))?;
        st.serialize_field("upper", &float_raw(self.0.estimate.upper))?;
        st.serialize_field("witness", &self.0.witness)?;
        st.end()
    }
}

impl Serialize for CompSpectrum {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let values: Vec<ValueJson<'_>> = self.values.iter().map(ValueJson).collect();
        let mut st = s.serialize_struct("CompSpectrum", 2)?;
        st.serialize_field("values", &values)?;
        st.serialize_field("merge_tol", &float_raw(self.merge_tol))?;
        st.end()
    }
}

/// Complementarity spectrum with default merge tolerance and component cap.
pub fn complementarity_spectrum(d: &Digraph, tol: f64) -> Result<CompSpectrum> {
    complementarity_spectrum_with(d, &SpectrumOptions::default().with_radius_tol(tol))
}

pub fn complementarity_spectrum_with(d: &Digraph, opts: &SpectrumOptions) -> Result<CompSpectrum> {
    check_tol(opts.radius_tol)?;
    check_tol(opts.merge_tol)?;
    let dec = scc::decompose(d);
    let mut raw = vec![SpectrumValue {
        estimate: RadiusEstimate::exact(0.0),
        witness: VertexSet::singleton(0),
    }];
    for comp in dec.components.iter().filter(|c| c.len() >= 2) {
        if comp.len() > opts.max_scc.min(64) {
            return Err(Error::SizeLimitExceeded {
                what: "strongly connected component",
                n: comp.len(),
                cap: opts.max_scc.min(64),
            });
        }
        raw.extend(enumerate::component_radii(d, comp, opts)?);
    }
    Ok(CompSpectrum {
        values: merge(raw, opts.merge_tol),
        merge_tol: opts.merge_tol,
        radius_tol: opts.radius_tol,
    })
}

/// Sorts values and collapses runs whose brackets overlap after widening
/// by `merge_tol`. A merged bracket is the intersection of its members when
/// that is nonempty, else their hull; the witness is the smallest one.
fn merge(mut raw: Vec<SpectrumValue>, merge_tol: f64) -> Vec<SpectrumValue> {
    raw.sort_by(|a, b| {
        a.estimate
            .value
            .total_cmp(&b.estimate.value)
            .then_with(|| a.witness.cmp(&b.witness))
    });
    let mut out: Vec<SpectrumValue> = Vec::new();
    for v in raw {
        match out.last_mut() {
            Some(last) if last.estimate.overlaps(&v.estimate, merge_tol) => {
                let (a, b) = (last.estimate, v.estimate);
                let (lo, hi) = if a.lower.max(b.lower) <= a.upper.min(b.upper) {
                    (a.lower.max(b.lower), a.upper.min(b.upper))
                } else {
                    (a.lower.min(b.lower), a.upper.max(b.upper))
                };
                last.estimate = RadiusEstimate {
                    lower: lo,
                    upper: hi,
                    value: lo + (hi - lo) / 2.0,
                    iterations: a.iterations.max(b.iterations),
                };
                if v.witness < last.witness {
                    last.witness = v.witness;
                }
            }
            _ => out.push(v),
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Cardinality {
    One,
    Two,
    ThreePlus,
}

impl Cardinality {
    /// Bucket of a spectrum size.
    pub fn of_count(count: usize) -> Self {
        match count {
            0 | 1 => Cardinality::One,
            2 => Cardinality::Two,
            _ => Cardinality::ThreePlus,
        }
    }
}

/// Structural evidence for a [`Cardinality`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CardinalityReason {
    Acyclic,
    CyclesOrIsolated,
    /// A strongly connected component that is not a directed cycle; its
    /// radius exceeds 1, giving a third value.
    NonCycleComponent(VertexSet),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CardinalityClass {
    pub tag: Cardinality,
    pub reason: CardinalityReason,
}

impl fmt::Display for CardinalityClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            CardinalityReason::Acyclic => write!(f, "{:?}: acyclic", self.tag),
            CardinalityReason::CyclesOrIsolated => write!(
                f,
                "{:?}: every strongly connected component is a cycle or an isolated vertex",
                self.tag
            ),
            CardinalityReason::NonCycleComponent(c) => write!(
                f,
                "{:?}: component {:?} is strongly connected but not a cycle",
                self.tag,
                c.as_slice()
            ),
        }
    }
}

/// Bucket of the spectrum size read off the component structure alone.
pub fn classify_cardinality(d: &Digraph) -> CardinalityClass {
    let dec = scc::decompose(d);
    if dec.len() == d.order() {
        return CardinalityClass {
            tag: Cardinality::One,
            reason: CardinalityReason::Acyclic,
        };
    }
    for comp in dec.components.iter().filter(|c| c.len() >= 2) {
        let arcs_inside: usize = comp
            .iter()
            .map(|&u| {
                d.out_neighbors(u)
                    .iter()
                    .filter(|&&v| dec.component_of[v] == dec.component_of[u])
                    .count()
            })
            .sum();
        // strongly connected with as many arcs as vertices means a cycle
        if arcs_inside != comp.len() {
            return CardinalityClass {
                tag: Cardinality::ThreePlus,
                reason: CardinalityReason::NonCycleComponent(comp.clone()),
            };
        }
    }
    CardinalityClass {
        tag: Cardinality::Two,
        reason: CardinalityReason::CyclesOrIsolated,
    }
}

/// True iff the digraph has a directed cycle, i.e. iff `1` is a
/// complementarity eigenvalue.
pub fn contains_cycle(d: &Digraph) -> bool {
    !scc::is_acyclic(d)
}

/// Value-by-value comparison of two spectra at tolerance `tol`.
///
/// Both inputs must have been computed with radius tolerance at most `tol / 4`.
pub fn spectra_equal(a: &CompSpectrum, b: &CompSpectrum, tol: f64) -> Result<bool> {
    check_tol(tol)?;
    for s in [a, b] {
        if s.radius_tol > tol / 4.0 {
            return Err(Error::IncomparableTolerances {
                computed: s.radius_tol,
                requested: tol,
            });
        }
    }
    Ok(a.len() == b.len()
        && a.values
            .iter()
            .zip(&b.values)
            .all(|(x, y)| x.estimate.overlaps(&y.estimate, tol)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::spectral_radius;

    fn cycle(n: usize) -> Digraph {
        Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn spectrum(d: &Digraph) -> CompSpectrum {
        complementarity_spectrum(d, 1e-12).unwrap()
    }

    #[test]
    fn cycle_spectrum_is_zero_one() {
        for n in 2..10 {
            let s = spectrum(&cycle(n));
            assert_eq!(s.len(), 2);
            assert!(s.values[0].estimate.contains(0.0));
            assert!(s.values[1].estimate.contains(1.0));
            assert_eq!(s.values[1].witness, cycle(n).full_vertex_set());
        }
    }

    #[test]
    fn edgeless_spectrum_is_zero() {
        let s = spectrum(&Digraph::edgeless(4).unwrap());
        assert_eq!(s.len(), 1);
        assert_eq!(s.values[0].witness.as_slice(), &[0]);
    }

    #[test]
    fn coalescence_has_three_values() {
        // 2-cycle 0<->1 and 3-cycle 0->2->3->0
        let d = Digraph::from_arcs(4, [(0, 1), (1, 0), (0, 2), (2, 3), (3, 0)]).unwrap();
        let s = spectrum(&d);
        assert_eq!(s.len(), 3);
        assert!(s.values[1].estimate.contains(1.0));
        assert_eq!(s.values[1].witness.as_slice(), &[0, 1]);
        let rho = spectral_radius(&d, 1e-12).unwrap();
        assert!(s.values[2].estimate.overlaps(&rho, 0.0));
        assert!(s.values[2].estimate.lower > 1.0);
    }

    #[test]
    fn witnesses_attain_their_values() {
        let d = Digraph::from_arcs(
            5,
            [
                (0, 1),
                (1, 0),
                (1, 2),
                (2, 0),
                (2, 3),
                (3, 4),
                (4, 2),
                (4, 1),
            ],
        )
        .unwrap();
        let s = spectrum(&d);
        for v in &s.values {
            let sub = d.induced(&v.witness).unwrap();
            assert!(scc::is_strongly_connected(&sub));
            let r = spectral_radius(&sub, 1e-12).unwrap();
            assert!(r.overlaps(&v.estimate, 1e-9));
        }
        for w in s.values.windows(2) {
            assert!(w[1].estimate.lower - w[0].estimate.upper > s.merge_tol);
        }
    }

    #[test]
    fn classifier_examples() {
        let path = Digraph::from_arcs(5, (0..4).map(|i| (i, i + 1))).unwrap();
        assert_eq!(classify_cardinality(&path).tag, Cardinality::One);
        let c3_c4 = Digraph::from_arcs(8, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 6), (6, 3)])
            .unwrap();
        let class = classify_cardinality(&c3_c4);
        assert_eq!(class.tag, Cardinality::Two);
        assert_eq!(class.reason, CardinalityReason::CyclesOrIsolated);
        let d = Digraph::from_arcs(3, [(0, 1), (1, 0), (1, 2), (2, 1)]).unwrap();
        let class = classify_cardinality(&d);
        assert_eq!(class.tag, Cardinality::ThreePlus);
        assert!(class.to_string().contains("not a cycle"));
    }

    #[test]
    fn cycle_detection() {
        assert!(contains_cycle(&cycle(2)));
        let tree = Digraph::from_arcs(4, [(0, 1), (0, 2), (2, 3)]).unwrap();
        assert!(!contains_cycle(&tree));
    }

    #[test]
    fn spectra_equal_checks_tolerances_and_cardinality() {
        let a = spectrum(&cycle(3));
        let b = spectrum(&cycle(5));
        assert!(spectra_equal(&a, &b, 1e-9).unwrap());
        let c = spectrum(&Digraph::from_arcs(4, [(0, 1), (1, 0), (0, 2), (2, 3), (3, 0)]).unwrap());
        assert!(!spectra_equal(&a, &c, 1e-9).unwrap());
        let coarse = complementarity_spectrum(&cycle(3), 1e-6).unwrap();
        assert!(matches!(
            spectra_equal(&coarse, &b, 1e-9),
            Err(Error::IncomparableTolerances { .. })
        ));
    }

    #[test]
    fn component_cap_is_enforced() {
        let opts = SpectrumOptions {
            max_scc: 4,
            ..SpectrumOptions::default()
        };
        assert!(matches!(
            complementarity_spectrum_with(&cycle(5), &opts),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn json_rendering() {
        let s = spectrum(&cycle(3));
        let json = serde_json::to_string(&s).unwrap();
        let head = r#"{"values":[{"lower":0.0000000000000000e0,"upper":0.0000000000000000e0,"witness":[0]}"#;
        assert!(json.starts_with(head), "{json}");
        // 1e-9 is not a double; 17 significant digits expose the rounding.
        assert!(
            json.ends_with(r#""merge_tol":1.0000000000000001e-9}"#),
            "{json}"
        );
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["values"][1]["witness"], serde_json::json!([0, 1, 2]));
    }
}
