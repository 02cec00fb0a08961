//! Simple digraphs, induced subdigraphs, converses and exact isomorphism.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default order above which exact isomorphism and canonical labeling refuse to run.
pub const DEFAULT_ISO_CAP: usize = 16;

/// A finite simple digraph on vertices `0..n`.
///
/// Adjacency lists are the source of truth; both lists are kept sorted and
/// mutually consistent. Values are immutable after construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Digraph {
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
    arc_count: usize,
}

impl Digraph {
    /// Builds a digraph from an arc list. Repeated arcs collapse to one.
    pub fn from_arcs<I>(n: usize, arcs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if n == 0 {
            return Err(Error::EmptyDigraph);
        }
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            set.insert((u, v));
        }
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = vec![Vec::new(); n];
        // BTreeSet order keeps out lists sorted; in lists are sorted below.
        for &(u, v) in &set {
            out_adj[u].push(v);
            in_adj[v].push(u);
        }
        for list in &mut in_adj {
            list.sort_unstable();
        }
        Ok(Digraph {
            out_adj,
            in_adj,
            arc_count: set.len(),
        })
    }

    /// The digraph on `n` vertices with no arcs.
    pub fn edgeless(n: usize) -> Result<Self> {
        Self::from_arcs(n, std::iter::empty())
    }

    pub fn order(&self) -> usize {
        self.out_adj.len()
    }

    pub fn size(&self) -> usize {
        self.arc_count
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_adj[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_adj[v]
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_adj[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_adj[v].len()
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.order() && self.out_adj[u].binary_search(&v).is_ok()
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.out_adj
            .iter()
            .enumerate()
            .flat_map(|(u, outs)| outs.iter().map(move |&v| (u, v)))
    }

    /// Dense adjacency view: entry `(i, j)` is set iff `i -> j` is an arc.
    pub fn bit_matrix(&self) -> BitMatrix {
        let mut m = BitMatrix::new(self.order());
        for (u, v) in self.arcs() {
            m.set(u, v);
        }
        m
    }

    /// The subdigraph induced by `set`, relabeled `0..|set|` in set order.
    pub fn induced(&self, set: &VertexSet) -> Result<Digraph> {
        let n = self.order();
        if let Some(&bad) = set.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        let mut local = vec![usize::MAX; n];
        for (i, &v) in set.iter().enumerate() {
            local[v] = i;
        }
        let arcs = set.iter().flat_map(|&u| {
            let local = &local;
            self.out_adj[u]
                .iter()
                .filter(move |&&v| local[v] != usize::MAX)
                .map(move |&v| (local[u], local[v]))
        });
        Digraph::from_arcs(set.len(), arcs)
    }

    /// The converse digraph: every arc reversed.
    pub fn converse(&self) -> Digraph {
        Digraph {
            out_adj: self.in_adj.clone(),
            in_adj: self.out_adj.clone(),
            arc_count: self.arc_count,
        }
    }

    /// Applies the vertex relabeling `v -> perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Digraph> {
        let n = self.order();
        let mut seen = vec![false; n];
        if perm.len() != n {
            return Err(Error::Parse(format!(
                "relabeling has length {}, expected {n}",
                perm.len()
            )));
        }
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::Parse("relabeling is not a permutation".into()));
            }
        }
        Digraph::from_arcs(n, self.arcs().map(|(u, v)| (perm[u], perm[v])))
    }

    pub fn full_vertex_set(&self) -> VertexSet {
        VertexSet((0..self.order()).collect())
    }
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digraph(n={}, arcs=[", self.order())?;
        for (i, (u, v)) in self.arcs().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}->{v}")?;
        }
        f.write_str("])")
    }
}

/// A sorted, duplicate-free set of vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<usize>);

impl VertexSet {
    /// Normalizes `members` and checks every index against the host order `n`.
    pub fn new(mut members: Vec<usize>, n: usize) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&bad) = members.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: bad, n });
        }
        Ok(VertexSet(members))
    }

    /// Members of a bitmask, lowest bit first.
    pub fn from_mask(mut mask: u64) -> Self {
        let mut members = Vec::with_capacity(mask.count_ones() as usize);
        while mask != 0 {
            members.push(mask.trailing_zeros() as usize);
            mask &= mask - 1;
        }
        VertexSet(members)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(vec![v])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, usize> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Maps every member through `f`, e.g. to translate local labels to host labels.
    pub fn map(&self, f: impl Fn(usize) -> usize) -> VertexSet {
        let mut members: Vec<usize> = self.0.iter().map(|&v| f(v)).collect();
        members.sort_unstable();
        members.dedup();
        VertexSet(members)
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = &'a usize;
    type IntoIter = std::slice::Iter<'a, usize>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Row-major square bit matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    n: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BitMatrix {
            n,
            words,
            bits: vec![0; n * words],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words + j / 64] |= 1 << (j % 64);
    }
}

/// Exact isomorphism test with the default order cap.
pub fn is_isomorphic(d: &Digraph, h: &Digraph) -> Result<bool> {
    is_isomorphic_with_cap(d, h, DEFAULT_ISO_CAP)
}

/// Exact isomorphism test by backtracking over degree-compatible assignments.
///
/// Refuses digraphs of order above `cap` instead of answering heuristically.
pub fn is_isomorphic_with_cap(d: &Digraph, h: &Digraph, cap: usize) -> Result<bool> {
    let n = d.order();
    for g in [d, h] {
        if g.order() > cap {
            return Err(Error::SizeLimitExceeded {
                what: "isomorphism test",
                n: g.order(),
                cap,
            });
        }
    }
    if n != h.order() || d.size() != h.size() {
        return Ok(false);
    }
    let inv_d = vertex_invariants(d);
    let inv_h = vertex_invariants(h);
    let mut sd = inv_d.clone();
    let mut sh = inv_h.clone();
    sd.sort();
    sh.sort();
    if sd != sh {
        return Ok(false);
    }

    // Match vertices of d in an order that keeps each new vertex adjacent to
    // already-matched ones where possible, rarest invariant first.
    let rarity = |v: usize| inv_h.iter().filter(|x| **x == inv_d[v]).count();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let links = order
                    .iter()
                    .filter(|&&u| d.has_arc(u, v) || d.has_arc(v, u))
                    .count();
                (links, std::cmp::Reverse(rarity(v)), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex exists");
        placed[next] = true;
        order.push(next);
    }

    let bd = d.bit_matrix();
    let bh = h.bit_matrix();
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(extend_match(
        0, &order, &inv_d, &inv_h, &bd, &bh, &mut map, &mut used,
    ))
}

#[allow(clippy::too_many_arguments)]
fn extend_match(
    depth: usize,
    order: &[usize],
    inv_d: &[VertexInvariant],
    inv_h: &[VertexInvariant],
    bd: &BitMatrix,
    bh: &BitMatrix,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..inv_h.len() {
        if used[w] || inv_h[w] != inv_d[v] {
            continue;
        }
        let consistent = order[..depth].iter().all(|&u| {
            let mu = map[u];
            bd.get(u, v) == bh.get(mu, w) && bd.get(v, u) == bh.get(w, mu)
        });
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if extend_match(depth + 1, order, inv_d, inv_h, bd, bh, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Out-degree, in-degree, and the degree multisets of both neighborhoods.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct VertexInvariant {
    out_deg: usize,
    in_deg: usize,
    out_nbr_degs: Vec<(usize, usize)>,
    in_nbr_degs: Vec<(usize, usize)>,
}

fn vertex_invariants(g: &Digraph) -> Vec<VertexInvariant> {
    let deg = |u: usize| (g.out_degree(u), g.in_degree(u));
    (0..g.order())
        .map(|v| {
            let mut out_nbr_degs: Vec<_> = g.out_neighbors(v).iter().map(|&u| deg(u)).collect();
            let mut in_nbr_degs: Vec<_> = g.in_neighbors(v).iter().map(|&u| deg(u)).collect();
            out_nbr_degs.sort_unstable();
            in_nbr_degs.sort_unstable();
            VertexInvariant {
                out_deg: g.out_degree(v),
                in_deg: g.in_degree(v),
                out_nbr_degs,
                in_nbr_degs,
            }
        })
        .collect()
}

/// Canonical byte encoding with the default order cap.
pub fn canonical_form(d: &Digraph) -> Result<Vec<u8>> {
    canonical_form_with_cap(d, DEFAULT_ISO_CAP)
}

/// Isomorphism-invariant byte encoding: equal outputs iff isomorphic inputs.
///
/// The encoding is the order as two big-endian bytes followed by the
/// row-major adjacency bits (most significant bit first) of the relabeling
/// that is lexicographically smallest among the leaves of an
/// individualization-refinement search. Color refinement is seeded by
/// out/in-degree classes; sibling branches equivalent under an automorphism
/// already discovered are skipped.
pub fn canonical_form_with_cap(d: &Digraph, cap: usize) -> Result<Vec<u8>> {
    let n = d.order();
    if n > cap {
        return Err(Error::SizeLimitExceeded {
            what: "canonical form",
            n,
            cap,
        });
    }
    let mut search = CanonSearch {
        g: d,
        bits: d.bit_matrix(),
        best: None,
        first: None,
        automorphisms: Vec::new(),
    };
    let colors = refine(d, vec![0; n]);
    let mut prefix = Vec::new();
    search.descend(colors, &mut prefix);
    Ok(search.best.expect("search visits at least one leaf").0)
}

struct CanonSearch<'a> {
    g: &'a Digraph,
    bits: BitMatrix,
    best: Option<(Vec<u8>, Vec<u32>)>,
    first: Option<(Vec<u8>, Vec<u32>)>,
    automorphisms: Vec<Vec<usize>>,
}

impl CanonSearch<'_> {
    fn descend(&mut self, colors: Vec<u32>, prefix: &mut Vec<usize>) {
        let n = colors.len();
        let mut cell_sizes = vec![0usize; n];
        for &c in &colors {
            cell_sizes[c as usize] += 1;
        }
        let target = (0..n).find(|&c| cell_sizes[c] > 1);
        let Some(target) = target else {
            self.leaf(colors);
            return;
        };
        let cell: Vec<usize> = (0..n).filter(|&v| colors[v] == target as u32).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &cell {
            if explored
                .iter()
                .any(|&w| self.same_orbit_fixing(prefix, w, v, n))
            {
                continue;
            }
            let child = refine(self.g, individualize(&colors, v));
            prefix.push(v);
            self.descend(child, prefix);
            prefix.pop();
            explored.push(v);
        }
    }

    /// Whether some composition of known automorphisms fixing `prefix`
    /// pointwise maps `a` to `b`.
    fn same_orbit_fixing(&self, prefix: &[usize], a: usize, b: usize, n: usize) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .automorphisms
            .iter()
            .filter(|g| prefix.iter().all(|&p| g[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![a];
        seen[a] = true;
        while let Some(x) = stack.pop() {
            if x == b {
                return true;
            }
            for g in &gens {
                let y = g[x];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    fn leaf(&mut self, colors: Vec<u32>) {
        let code = encode(&self.bits, &colors);
        for known in [&self.first, &self.best].into_iter().flatten() {
            if known.0 == code {
                // known^-1 . colors is an automorphism.
                let n = colors.len();
                let mut inv = vec![0usize; n];
                for (v, &c) in known.1.iter().enumerate() {
                    inv[c as usize] = v;
                }
                let aut: Vec<usize> = (0..n).map(|v| inv[colors[v] as usize]).collect();
                if aut.iter().enumerate().any(|(i, &j)| i != j) {
                    self.automorphisms.push(aut);
                }
                break;
            }
        }
        if self.first.is_none() {
            self.first = Some((code.clone(), colors.clone()));
        }
        match &self.best {
            Some((b, _)) if *b <= code => {}
            _ => self.best = Some((code, colors)),
        }
    }
}

fn encode(bits: &BitMatrix, position: &[u32]) -> Vec<u8> {
    let n = position.len();
    let mut at = vec![0usize; n];
    for (v, &p) in position.iter().enumerate() {
        at[p as usize] = v;
    }
    let mut out = Vec::with_capacity(2 + (n * n).div_ceil(8));
    out.extend_from_slice(&(n as u16).to_be_bytes());
    let mut byte = 0u8;
    let mut filled = 0;
    for i in 0..n {
        for j in 0..n {
            byte = (byte << 1) | bits.get(at[i], at[j]) as u8;
            filled += 1;
            if filled == 8 {
                out.push(byte);
                byte = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(byte << (8 - filled));
    }
    out
}

/// Gives `v` its own color, ordered just before the rest of its cell.
fn individualize(colors: &[u32], v: usize) -> Vec<u32> {
    let keys: Vec<(u32, bool)> = colors
        .iter()
        .enumerate()
        .map(|(u, &c)| (c, u != v))
        .collect();
    rank(&keys)
}

/// Iterated color refinement by counts of out- and in-neighbor colors.
fn refine(g: &Digraph, mut colors: Vec<u32>) -> Vec<u32> {
    let n = g.order();
    let mut classes = count_classes(&colors);
    loop {
        let keys: Vec<Vec<u32>> = (0..n)
            .map(|v| {
                let mut key = vec![0u32; 1 + 2 * classes];
                key[0] = colors[v];
                for &u in g.out_neighbors(v) {
                    key[1 + colors[u] as usize] += 1;
                }
                for &u in g.in_neighbors(v) {
                    key[1 + classes + colors[u] as usize] += 1;
                }
                key
            })
            .collect();
        let next = rank(&keys);
        let next_classes = count_classes(&next);
        if next_classes == classes {
            return next;
        }
        colors = next;
        classes = next_classes;
    }
}

fn count_classes(colors: &[u32]) -> usize {
    colors.iter().max().map_or(0, |&m| m as usize + 1)
}

/// Replaces each key by its rank among the distinct keys.
fn rank<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).expect("key present") as u32)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn from_arcs_builds_triangle() {
        let c3 = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(c3.order(), 3);
        assert_eq!(c3.size(), 3);
        assert_eq!(c3.out_neighbors(2), &[0]);
        assert_eq!(c3.in_neighbors(0), &[2]);
    }

    #[test]
    fn from_arcs_collapses_duplicates_and_rejects_bad_input() {
        let d = Digraph::from_arcs(2, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(d.size(), 1);
        assert_eq!(Digraph::from_arcs(1, []).unwrap().size(), 0);
        assert_eq!(
            Digraph::from_arcs(3, [(0, 0)]).unwrap_err(),
            Error::SelfLoop(0)
        );
        assert_eq!(
            Digraph::from_arcs(3, [(0, 3)]).unwrap_err(),
            Error::VertexOutOfRange { vertex: 3, n: 3 }
        );
        assert_eq!(Digraph::from_arcs(0, []).unwrap_err(), Error::EmptyDigraph);
    }

    #[test]
    fn induced_keeps_only_inner_arcs() {
        let c3 = cycle(3);
        let sub = c3.induced(&VertexSet::new(vec![0, 1], 3).unwrap()).unwrap();
        assert_eq!(sub.arcs().collect::<Vec<_>>(), vec![(0, 1)]);
        let full = c3.induced(&c3.full_vertex_set()).unwrap();
        assert_eq!(full, c3);
        let relabeled = c3.induced(&VertexSet::new(vec![2, 0], 3).unwrap()).unwrap();
        assert_eq!(relabeled.arcs().collect::<Vec<_>>(), vec![(1, 0)]);
    }

    #[test]
    fn vertex_set_validates() {
        assert!(VertexSet::new(vec![0, 5], 3).is_err());
        assert_eq!(
            VertexSet::new(vec![2, 0, 2], 3).unwrap().as_slice(),
            &[0, 2]
        );
        assert_eq!(VertexSet::from_mask(0b1011).as_slice(), &[0, 1, 3]);
    }

    #[test]
    fn converse_reverses_and_is_involution() {
        let arc = Digraph::from_arcs(2, [(0, 1)]).unwrap();
        assert_eq!(arc.converse().arcs().collect::<Vec<_>>(), vec![(1, 0)]);
        let c3 = cycle(3);
        let rev = Digraph::from_arcs(3, [(1, 0), (2, 1), (0, 2)]).unwrap();
        assert_eq!(c3.converse(), rev);
        assert_eq!(c3.converse().converse(), c3);
    }

    #[test]
    fn cycle_is_isomorphic_to_its_converse() {
        let c4 = cycle(4);
        assert!(is_isomorphic(&c4, &c4.converse()).unwrap());
    }

    #[test]
    fn path_and_cycle_are_not_isomorphic() {
        let p = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        let q = Digraph::from_arcs(3, [(0, 1), (2, 1)]).unwrap();
        assert!(!is_isomorphic(&p, &q).unwrap());
        assert!(!is_isomorphic(&p, &cycle(3)).unwrap());
    }

    #[test]
    fn caps_are_enforced() {
        let big = cycle(17);
        assert!(matches!(
            is_isomorphic(&big, &big),
            Err(Error::SizeLimitExceeded { .. })
        ));
        assert!(matches!(
            canonical_form(&big),
            Err(Error::SizeLimitExceeded { .. })
        ));
        assert!(is_isomorphic_with_cap(&big, &big, 20).unwrap());
    }

    #[test]
    fn canonical_form_of_single_vertex() {
        let d = Digraph::edgeless(1).unwrap();
        assert_eq!(canonical_form(&d).unwrap(), vec![0, 1, 0]);
    }

    #[test]
    fn canonical_form_survives_relabeling() {
        let c3 = cycle(3);
        let r = c3.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(canonical_form(&c3).unwrap(), canonical_form(&r).unwrap());
    }

    #[test]
    fn canonical_form_handles_symmetric_digraphs() {
        let n = 16;
        let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        let complete = Digraph::from_arcs(n, arcs).unwrap();
        let code = canonical_form(&complete).unwrap();
        assert_eq!(code.len(), 2 + 32);
        let c16 = cycle(16);
        let shuffled = c16
            .relabel(&[3, 5, 7, 9, 11, 13, 15, 1, 0, 2, 4, 6, 8, 10, 12, 14])
            .unwrap();
        assert_eq!(
            canonical_form(&c16).unwrap(),
            canonical_form(&shuffled).unwrap()
        );
    }
}
