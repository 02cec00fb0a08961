//! Strongly connected components (iterative Tarjan).

use crate::digraph::{Digraph, VertexSet};

/// Partition of the vertices into strongly connected components.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDecomposition {
    /// Components in the order Tarjan's algorithm completes them (sinks first).
    pub components: Vec<VertexSet>,
    pub component_of: Vec<usize>,
    /// Component indices such that every arc between components goes from an
    /// earlier entry to a later one.
    pub topological_order: Vec<usize>,
}

impl SccDecomposition {
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components in condensation (topological) order.
    pub fn in_topological_order(&self) -> impl Iterator<Item = &VertexSet> + '_ {
        self.topological_order.iter().map(|&c| &self.components[c])
    }
}

pub fn decompose(d: &Digraph) -> SccDecomposition {
    const UNVISITED: usize = usize::MAX;
    let n = d.order();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut component_of = vec![UNVISITED; n];
    let mut components: Vec<VertexSet> = Vec::new();
    let mut next_index = 0;
    // (vertex, position in its out-neighbor list)
    let mut call_stack: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call_stack.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(top) = call_stack.last_mut() {
            let (v, pos) = *top;
            let outs = d.out_neighbors(v);
            if pos < outs.len() {
                top.1 += 1;
                let w = outs[pos];
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call_stack.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call_stack.pop();
            if let Some(&(parent, _)) = call_stack.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let id = components.len();
                let mut members = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack holds the component");
                    on_stack[w] = false;
                    component_of[w] = id;
                    members.push(w);
                    if w == v {
                        break;
                    }
                }
                members.sort_unstable();
                components.push(VertexSet::new(members, n).expect("members are vertices"));
            }
        }
    }

    let topological_order = (0..components.len()).rev().collect();
    SccDecomposition {
        components,
        component_of,
        topological_order,
    }
}

pub fn is_strongly_connected(d: &Digraph) -> bool {
    decompose(d).len() == 1
}

/// True iff the digraph has no directed cycle.
pub fn is_acyclic(d: &Digraph) -> bool {
    decompose(d).len() == d.order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        Digraph::from_arcs(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cycle_is_one_component() {
        let dec = decompose(&cycle(5));
        assert_eq!(dec.len(), 1);
        assert_eq!(dec.components[0].len(), 5);
        for n in 2..10 {
            assert!(is_strongly_connected(&cycle(n)));
            assert!(!is_acyclic(&cycle(n)));
        }
    }

    #[test]
    fn path_gives_singletons_in_order() {
        let p = Digraph::from_arcs(3, [(0, 1), (1, 2)]).unwrap();
        let dec = decompose(&p);
        let ordered: Vec<&[usize]> = dec.in_topological_order().map(|c| c.as_slice()).collect();
        assert_eq!(ordered, vec![&[0][..], &[1], &[2]]);
        let p4 = Digraph::from_arcs(4, [(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(is_acyclic(&p4));
    }

    #[test]
    fn single_vertex_is_strongly_connected() {
        assert!(is_strongly_connected(&Digraph::edgeless(1).unwrap()));
    }

    #[test]
    fn disjoint_two_cycles_are_not_strongly_connected() {
        let d = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2)]).unwrap();
        assert!(!is_strongly_connected(&d));
        // a single bridging arc does not help
        let e = Digraph::from_arcs(4, [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]).unwrap();
        let dec = decompose(&e);
        assert_eq!(dec.len(), 2);
        let first = dec.in_topological_order().next().unwrap();
        assert_eq!(first.as_slice(), &[0, 1]);
    }

    #[test]
    fn long_path_does_not_overflow_the_stack() {
        let n = 20_000;
        let p = Digraph::from_arcs(n, (0..n - 1).map(|i| (i, i + 1))).unwrap();
        assert!(is_acyclic(&p));
        assert!(is_strongly_connected(&cycle(n)));
    }
}
