//! Exhaustive search over small digraphs for complementarity-cospectral mates.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::compspec::{complementarity_spectrum, spectra_equal, CompSpectrum};
use crate::digraph::{canonical_form, is_isomorphic, Digraph};
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scc;
use crate::spectral::char_poly_exact;
use crate::{DEFAULT_MERGE_TOL, DEFAULT_RADIUS_TOL};

/// Largest order enumerated for [`Universe::All`].
pub const MAX_ORDER_ALL: usize = 5;
/// Largest order enumerated for [`Universe::StronglyConnected`].
pub const MAX_ORDER_SCC: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Universe {
    All,
    StronglyConnected,
}

impl Universe {
    pub fn cap(self) -> usize {
        match self {
            Universe::All => MAX_ORDER_ALL,
            Universe::StronglyConnected => MAX_ORDER_SCC,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Universe::All => "all",
            Universe::StronglyConnected => "strongly_connected",
        }
    }
}

type Cache = Mutex<HashMap<usize, Arc<Vec<(Vec<u8>, Digraph)>>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// One representative per isomorphism class of digraphs of order `n`,
/// paired with its canonical form and sorted by it.
///
/// Order `k + 1` is built from the classes of order `k` by attaching a new
/// vertex in every possible way and deduplicating by canonical form; every
/// digraph arises this way from the class of any vertex-deleted subdigraph.
fn all_classes(n: usize) -> Arc<Vec<(Vec<u8>, Digraph)>> {
    if let Some(hit) = cache().lock().expect("cache lock").get(&n) {
        return Arc::clone(hit);
    }
    let classes = if n == 1 {
        let d = Digraph::edgeless(1).expect("one vertex");
        vec![(canonical_form(&d).expect("tiny"), d)]
    } else {
        let smaller = all_classes(n - 1);
        let k = n - 1;
        let mut found: Vec<(Vec<u8>, Digraph)> = smaller
            .par_iter()
            .flat_map_iter(|(_, base)| {
                let base_arcs: Vec<(usize, usize)> = base.arcs().collect();
                (0u32..1 << (2 * k)).map(move |bits| {
                    let extra = (0..k).flat_map(|i| {
                        let out = (bits >> i & 1 == 1).then_some((k, i));
                        let inn = (bits >> (k + i) & 1 == 1).then_some((i, k));
                        out.into_iter().chain(inn)
                    });
                    let d = Digraph::from_arcs(n, base_arcs.iter().copied().chain(extra))
                        .expect("valid extension");
                    (canonical_form(&d).expect("within cap"), d)
                })
            })
            .collect();
        found.par_sort_unstable_by(|a, b| a.0.cmp(&b.0));
        found.dedup_by(|a, b| a.0 == b.0);
        found
    };
    let classes = Arc::new(classes);
    cache()
        .lock()
        .expect("cache lock")
        .insert(n, Arc::clone(&classes));
    classes
}

/// One digraph per isomorphism class of order `n` in `universe`.
pub fn enumerate_digraphs(n: usize, universe: Universe) -> Result<Vec<Digraph>> {
    Ok(enumerate_with_forms(n, universe)?
        .into_iter()
        .map(|(_, d)| d)
        .collect())
}

fn enumerate_with_forms(n: usize, universe: Universe) -> Result<Vec<(Vec<u8>, Digraph)>> {
    if n == 0 {
        return Err(Error::EmptyDigraph);
    }
    if n > universe.cap() {
        return Err(Error::SizeLimitExceeded {
            what: "digraph enumeration",
            n,
            cap: universe.cap(),
        });
    }
    let classes = all_classes(n);
    Ok(classes
        .iter()
        .filter(|(_, d)| universe == Universe::All || scc::is_strongly_connected(d))
        .cloned()
        .collect())
}

#[derive(Clone, Debug)]
pub struct ClassMember {
    pub canonical: Vec<u8>,
    pub digraph: Digraph,
}

/// Digraphs sharing one complementarity spectrum.
#[derive(Clone, Debug)]
pub struct CospectralClass {
    pub spectrum: CompSpectrum,
    pub members: Vec<ClassMember>,
}

impl CospectralClass {
    /// Whether two members share their arc count.
    pub fn has_equal_size_pair(&self) -> bool {
        let mut sizes: Vec<usize> = self.members.iter().map(|m| m.digraph.size()).collect();
        sizes.sort_unstable();
        sizes.windows(2).any(|w| w[0] == w[1])
    }
}

#[derive(Clone, Debug)]
pub struct SearchReport {
    pub order: usize,
    pub universe: Universe,
    pub require_equal_size: bool,
    pub classes: Vec<CospectralClass>,
    /// Indices into `classes` of classes with two non-isomorphic members of
    /// equal order and size.
    pub nontrivial_classes: Vec<usize>,
}

impl SearchReport {
    pub fn nontrivial(&self) -> impl Iterator<Item = &CospectralClass> + '_ {
        self.nontrivial_classes.iter().map(|&i| &self.classes[i])
    }

    /// Class holding a digraph isomorphic to `d`, if any.
    pub fn class_of(&self, d: &Digraph) -> Result<Option<&CospectralClass>> {
        let code = canonical_form(d)?;
        Ok(self
            .classes
            .iter()
            .find(|c| c.members.iter().any(|m| m.canonical == code)))
    }
}

/// Cardinality, values rounded to six decimals, and arc count (or 0).
type BucketKey = (usize, Vec<i64>, usize);

/// Groups the isomorphism classes of order `n` by complementarity spectrum.
///
/// Spectra are bucketed by cardinality and values rounded to six decimals
/// (and arc count when `require_equal_size`), then split inside each bucket
/// by pairwise certified comparison at the default merge tolerance.
pub fn find_cospectral_classes(
    n: usize,
    universe: Universe,
    require_equal_size: bool,
) -> Result<SearchReport> {
    let reps = enumerate_with_forms(n, universe)?;
    let spectra: Vec<CompSpectrum> = reps
        .par_iter()
        .map(|(_, d)| complementarity_spectrum(d, DEFAULT_RADIUS_TOL))
        .collect::<Result<_>>()?;

    let mut buckets: BTreeMap<BucketKey, Vec<usize>> = BTreeMap::new();
    for (i, s) in spectra.iter().enumerate() {
        let rounded = s
            .midpoints()
            .iter()
            .map(|v| (v * 1e6).round() as i64)
            .collect();
        let size = if require_equal_size {
            reps[i].1.size()
        } else {
            0
        };
        buckets.entry((s.len(), rounded, size)).or_default().push(i);
    }

    let mut keyed: Vec<(BucketKey, CospectralClass)> = Vec::new();
    for (key, members) in buckets {
        let mut local: Vec<CospectralClass> = Vec::new();
        for i in members {
            let member = ClassMember {
                canonical: reps[i].0.clone(),
                digraph: reps[i].1.clone(),
            };
            let mut placed = false;
            for class in &mut local {
                if spectra_equal(&class.spectrum, &spectra[i], DEFAULT_MERGE_TOL)? {
                    class.members.push(member.clone());
                    placed = true;
                    break;
                }
            }
            if !placed {
                local.push(CospectralClass {
                    spectrum: spectra[i].clone(),
                    members: vec![member],
                });
            }
        }
        keyed.extend(local.into_iter().map(|c| (key.clone(), c)));
    }

    // Equal spectra whose values straddle a rounding boundary land in
    // neighboring buckets; reunite them.
    let mut i = 0;
    while i < keyed.len() {
        let mut j = i + 1;
        while j < keyed.len() {
            let (ka, kb) = (&keyed[i].0, &keyed[j].0);
            let near = ka.0 == kb.0
                && ka.2 == kb.2
                && ka.1.iter().zip(&kb.1).all(|(x, y)| (x - y).abs() <= 1);
            if near
                && spectra_equal(
                    &keyed[i].1.spectrum,
                    &keyed[j].1.spectrum,
                    DEFAULT_MERGE_TOL,
                )?
            {
                let (_, absorbed) = keyed.remove(j);
                keyed[i].1.members.extend(absorbed.members);
            } else {
                j += 1;
            }
        }
        i += 1;
    }
    let mut classes: Vec<CospectralClass> = keyed.into_iter().map(|(_, c)| c).collect();
    for class in &mut classes {
        class.members.sort_by(|a, b| a.canonical.cmp(&b.canonical));
    }
    let nontrivial_classes = classes
        .iter()
        .enumerate()
        .filter(|(_, c)| c.has_equal_size_pair())
        .map(|(i, _)| i)
        .collect();
    Ok(SearchReport {
        order: n,
        universe,
        require_equal_size,
        classes,
        nontrivial_classes,
    })
}

/// Recomputes every member spectrum of every nontrivial class at a ten
/// times tighter radius tolerance and checks the class still agrees.
pub fn confirm_nontrivial(report: &SearchReport) -> Result<bool> {
    let tight = DEFAULT_RADIUS_TOL / 10.0;
    for class in report.nontrivial() {
        let spectra: Vec<CompSpectrum> = class
            .members
            .iter()
            .map(|m| complementarity_spectrum(&m.digraph, tight))
            .collect::<Result<_>>()?;
        for s in &spectra[1..] {
            if !spectra_equal(&spectra[0], s, DEFAULT_MERGE_TOL)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether every strongly connected digraph of the same order sharing the
/// spectrum of `d` is isomorphic to `d`.
pub fn is_dcs(d: &Digraph) -> Result<bool> {
    if !scc::is_strongly_connected(d) {
        return Err(Error::NotStronglyConnected);
    }
    let own = complementarity_spectrum(d, DEFAULT_RADIUS_TOL)?;
    let reps = enumerate_digraphs(d.order(), Universe::StronglyConnected)?;
    for other in &reps {
        let s = complementarity_spectrum(other, DEFAULT_RADIUS_TOL)?;
        if spectra_equal(&own, &s, DEFAULT_MERGE_TOL)? && !is_isomorphic(d, other)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Class representatives of order `n` whose characteristic polynomial is `p`.
pub fn find_by_charpoly(n: usize, p: &Polynomial, universe: Universe) -> Result<Vec<Digraph>> {
    Ok(enumerate_digraphs(n, universe)?
        .into_par_iter()
        .filter(|d| char_poly_exact(d) == *p)
        .collect())
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

struct MemberJson<'a>(&'a ClassMember);

impl Serialize for MemberJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let d = &self.0.digraph;
        let arcs: Vec<[usize; 2]> = d.arcs().map(|(u, v)| [u, v]).collect();
        let mut st = s.serialize_struct("ClassMember", 4)?;
        st.serialize_field("canonical", &hex(&self.0.canonical))?;
        st.serialize_field("arcs", &arcs)?;
        st.serialize_field("order", &d.order())?;
        st.serialize_field("size", &d.size())?;
        st.end()
    }
}

impl Serialize for CospectralClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let members: Vec<MemberJson<'_>> = self.members.iter().map(MemberJson).collect();
        let mut st = s.serialize_struct("CospectralClass", 2)?;
        st.serialize_field("spectrum", &self.spectrum)?;
        st.serialize_field("members", &members)?;
        st.end()
    }
}

impl Serialize for SearchReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SearchReport", 5)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("universe", self.universe.name())?;
        st.serialize_field("require_equal_size", &self.require_equal_size)?;
        st.serialize_field("classes", &self.classes)?;
        st.serialize_field("nontrivial_classes", &self.nontrivial_classes)?;
        st.end()
    }
}
