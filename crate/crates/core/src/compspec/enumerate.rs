//! Induced strongly connected subdigraphs of one component.
//!
//! Candidate vertex sets are the connected sets of the underlying undirected
//! graph, grown from their smallest vertex so each is produced once. A set is
//! kept when every member has an in- and out-arc inside it and forward and
//! backward reachability from one member cover it.

use rayon::prelude::*;

use super::{SpectrumOptions, SpectrumValue};
use crate::digraph::{Digraph, VertexSet};
use crate::error::Result;
use crate::spectral::perron_root;

/// Bitmask view of a component with at most 64 vertices.
struct Local {
    out: Vec<u64>,
    inn: Vec<u64>,
    undirected: Vec<u64>,
}

impl Local {
    fn new(d: &Digraph, comp: &VertexSet) -> Self {
        let k = comp.len();
        let host = comp.as_slice();
        let local_of = |v: usize| host.binary_search(&v).ok();
        let mut out = vec![0u64; k];
        let mut inn = vec![0u64; k];
        for (i, &u) in host.iter().enumerate() {
            for &v in d.out_neighbors(u) {
                if let Some(j) = local_of(v) {
                    out[i] |= 1 << j;
                    inn[j] |= 1 << i;
                }
            }
        }
        let undirected = out.iter().zip(&inn).map(|(a, b)| a | b).collect();
        Local {
            out,
            inn,
            undirected,
        }
    }

    fn strongly_connected(&self, set: u64) -> bool {
        let mut rest = set;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.out[v] & set == 0 || self.inn[v] & set == 0 {
                return false;
            }
        }
        let root = set & set.wrapping_neg();
        reach(&self.out, set, root) == set && reach(&self.inn, set, root) == set
    }
}

fn reach(adj: &[u64], within: u64, start: u64) -> u64 {
    let mut seen = start;
    let mut frontier = start;
    while frontier != 0 {
        let v = frontier.trailing_zeros() as usize;
        frontier &= frontier - 1;
        let new = adj[v] & within & !seen;
        seen |= new;
        frontier |= new;
    }
    seen
}

/// Radii of all induced strongly connected subdigraphs with at least two
/// vertices inside `comp`, witnesses in host labels.
pub(super) fn component_radii(
    d: &Digraph,
    comp: &VertexSet,
    opts: &SpectrumOptions,
) -> Result<Vec<SpectrumValue>> {
    let local = Local::new(d, comp);
    let k = comp.len();
    let per_root: Vec<Vec<SpectrumValue>> = (0..k)
        .into_par_iter()
        .map(|root| {
            let mut found = Vec::new();
            let allowed = !0u64 << root;
            let start = 1u64 << root;
            let candidates = local.undirected[root] & allowed;
            let mut visit = |set: u64| -> Result<()> {
                if set.count_ones() >= 2 && local.strongly_connected(set) {
                    found.push(radius_of(&local, set, comp, opts)?);
                }
                Ok(())
            };
            grow(&local, allowed, start, candidates, 0, &mut visit)?;
            Ok(found)
        })
        .collect::<Result<_>>()?;
    Ok(per_root.into_iter().flatten().collect())
}

/// Visits `set` and every connected superset reachable by adding vertices
/// from `candidates` (and their neighbors), never touching `excluded`.
fn grow(
    local: &Local,
    allowed: u64,
    set: u64,
    candidates: u64,
    excluded: u64,
    visit: &mut impl FnMut(u64) -> Result<()>,
) -> Result<()> {
    visit(set)?;
    let mut rest = candidates;
    let mut excluded = excluded;
    while rest != 0 {
        let bit = rest & rest.wrapping_neg();
        rest &= !bit;
        let w = bit.trailing_zeros() as usize;
        let fresh = local.undirected[w] & allowed & !set & !excluded & !rest & !bit;
        grow(local, allowed, set | bit, rest | fresh, excluded, visit)?;
        excluded |= bit;
    }
    Ok(())
}

fn radius_of(
    local: &Local,
    set: u64,
    comp: &VertexSet,
    opts: &SpectrumOptions,
) -> Result<SpectrumValue> {
    let members: Vec<usize> = VertexSet::from_mask(set).as_slice().to_vec();
    let mut index = [usize::MAX; 64];
    for (i, &v) in members.iter().enumerate() {
        index[v] = i;
    }
    let rows: Vec<Vec<usize>> = members
        .iter()
        .map(|&v| {
            VertexSet::from_mask(local.out[v] & set)
                .iter()
                .map(|&w| index[w])
                .collect()
        })
        .collect();
    let estimate = perron_root(&rows, opts.radius_tol, opts.max_iterations)?;
    let host = comp.as_slice();
    let witness = VertexSet::from_mask(set).map(|v| host[v]);
    Ok(SpectrumValue { estimate, witness })
}
