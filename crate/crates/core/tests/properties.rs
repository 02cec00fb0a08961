mod common;

use std::collections::BTreeSet;

use common::{dense_radius, digraphs, relabeled, strong_digraphs};
use compspec::format::{parse_edge_list, to_edge_list};
use compspec::sachs::sachs_char_poly;
use compspec::scc::{decompose, is_acyclic, is_strongly_connected};
use compspec::spectral::{char_poly_exact, largest_real_root, spectral_radius};
use compspec::{
    canonical_form, classify_cardinality, complementarity_spectrum, contains_cycle, is_isomorphic,
    spectra_equal, verify_eicp_definition, Cardinality, CompSpectrum, Digraph, VertexSet,
    DEFAULT_MERGE_TOL, DEFAULT_RADIUS_TOL,
};
use proptest::prelude::*;

fn spectrum(d: &Digraph) -> CompSpectrum {
    complementarity_spectrum(d, DEFAULT_RADIUS_TOL).unwrap()
}

/// Transitive closure by repeated squaring of a boolean matrix.
fn reachability(d: &Digraph) -> Vec<Vec<bool>> {
    let n = d.order();
    let mut r: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..n).map(|v| u == v || d.has_arc(u, v)).collect())
        .collect();
    for k in 0..n {
        for u in 0..n {
            for v in 0..n {
                r[u][v] = r[u][v] || (r[u][k] && r[k][v]);
            }
        }
    }
    r
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn induced_keeps_exactly_inner_arcs(d in digraphs(1, 8), mask in any::<u8>()) {
        let n = d.order();
        let members: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        prop_assume!(!members.is_empty());
        let set = VertexSet::new(members.clone(), n).unwrap();
        let h = d.induced(&set).unwrap();
        let inner = d.arcs().filter(|&(u, v)| set.contains(u) && set.contains(v)).count();
        prop_assert_eq!(h.size(), inner);
        for (u, v) in h.arcs() {
            prop_assert!(d.has_arc(members[u], members[v]));
        }
    }

    #[test]
    fn converse_is_an_involution(d in digraphs(1, 9)) {
        let back = d.converse().converse();
        prop_assert_eq!(back.arcs().collect::<Vec<_>>(), d.arcs().collect::<Vec<_>>());
    }

    #[test]
    fn isomorphism_respects_relabeling((d, perm) in relabeled(1, 7)) {
        let e = d.relabel(&perm).unwrap();
        prop_assert!(is_isomorphic(&d, &e).unwrap());
        prop_assert!(is_isomorphic(&e, &d).unwrap());
        prop_assert_eq!(canonical_form(&d).unwrap(), canonical_form(&e).unwrap());
    }

    #[test]
    fn isomorphism_is_symmetric_and_matches_canonical_forms(a in digraphs(4, 4), b in digraphs(4, 4)) {
        let ab = is_isomorphic(&a, &b).unwrap();
        prop_assert_eq!(ab, is_isomorphic(&b, &a).unwrap());
        prop_assert_eq!(ab, canonical_form(&a).unwrap() == canonical_form(&b).unwrap());
        if ab {
            let degrees = |d: &Digraph| {
                let mut out: Vec<_> = (0..d.order()).map(|v| d.out_degree(v)).collect();
                let mut inn: Vec<_> = (0..d.order()).map(|v| d.in_degree(v)).collect();
                out.sort_unstable();
                inn.sort_unstable();
                (out, inn)
            };
            prop_assert_eq!(degrees(&a), degrees(&b));
        }
    }

    #[test]
    fn components_match_mutual_reachability(d in digraphs(1, 6)) {
        let dec = decompose(&d);
        let r = reachability(&d);
        for u in 0..d.order() {
            for v in 0..d.order() {
                let same = dec.component_of[u] == dec.component_of[v];
                prop_assert_eq!(same, r[u][v] && r[v][u]);
            }
        }
        prop_assert_eq!(is_acyclic(&d), dec.components.iter().all(|c| c.len() == 1));
        let rank: Vec<usize> = {
            let mut rank = vec![0; dec.len()];
            for (pos, &c) in dec.topological_order.iter().enumerate() {
                rank[c] = pos;
            }
            rank
        };
        for (u, v) in d.arcs() {
            let (cu, cv) = (dec.component_of[u], dec.component_of[v]);
            if cu != cv {
                prop_assert!(rank[cu] < rank[cv]);
            }
        }
    }

    #[test]
    fn components_follow_relabeling((d, perm) in relabeled(1, 8)) {
        let e = d.relabel(&perm).unwrap();
        let (dd, de) = (decompose(&d), decompose(&e));
        let mapped: BTreeSet<VertexSet> = dd.components.iter().map(|c| c.map(|v| perm[v])).collect();
        let direct: BTreeSet<VertexSet> = de.components.iter().cloned().collect();
        prop_assert_eq!(mapped, direct);
    }

    #[test]
    fn sachs_matches_berkowitz(d in digraphs(1, 7)) {
        let p = char_poly_exact(&d);
        prop_assert_eq!(sachs_char_poly(&d).unwrap(), p.clone());
        prop_assert_eq!(p.degree(), d.order());
        prop_assert!(p.is_monic());
        prop_assert_eq!(p.coeff(d.order() - 1), 0.into());
        prop_assert_eq!(char_poly_exact(&d.converse()), p.clone());
        if is_acyclic(&d) {
            prop_assert_eq!(p, compspec::Polynomial::monomial(d.order()));
        }
    }

    #[test]
    fn radius_brackets_agree_with_root_isolation(d in strong_digraphs(2, 9)) {
        let power = spectral_radius(&d, 1e-10).unwrap();
        let root = largest_real_root(&char_poly_exact(&d), 1e-13).unwrap();
        prop_assert!(power.width() <= 1e-10);
        prop_assert!(power.lower <= root.upper && root.lower <= power.upper,
            "power [{}, {}] vs root [{}, {}]", power.lower, power.upper, root.lower, root.upper);
        prop_assert!((power.value - dense_radius(&d)).abs() < 1e-8);
    }

    #[test]
    fn zero_first_and_converse_invariant(d in digraphs(1, 8)) {
        let s = spectrum(&d);
        prop_assert_eq!(s.values[0].estimate.value, 0.0);
        prop_assert!(spectra_equal(&s, &spectrum(&d.converse()), DEFAULT_MERGE_TOL).unwrap());
    }

    #[test]
    fn spectrum_is_relabeling_invariant((d, perm) in relabeled(1, 8)) {
        let e = d.relabel(&perm).unwrap();
        prop_assert!(spectra_equal(&spectrum(&d), &spectrum(&e), DEFAULT_MERGE_TOL).unwrap());
    }

    #[test]
    fn spectrum_is_union_over_components(d in digraphs(1, 9)) {
        let parts: Vec<CompSpectrum> = decompose(&d)
            .components
            .iter()
            .map(|c| spectrum(&d.induced(c).unwrap()))
            .collect();
        let union = CompSpectrum::union(&parts, DEFAULT_MERGE_TOL);
        prop_assert!(spectra_equal(&spectrum(&d), &union, DEFAULT_MERGE_TOL).unwrap());
    }

    #[test]
    fn one_is_present_exactly_with_a_cycle(d in digraphs(1, 9)) {
        prop_assert_eq!(spectrum(&d).contains(1.0, 0.0), contains_cycle(&d));
    }

    #[test]
    fn classifier_agrees_with_count(d in digraphs(1, 9)) {
        let predicted = classify_cardinality(&d).tag;
        prop_assert_eq!(predicted, Cardinality::of_count(spectrum(&d).len()));
    }

    #[test]
    fn maximum_is_the_strict_perron_root(d in strong_digraphs(2, 8)) {
        let s = complementarity_spectrum(&d, 1e-10).unwrap();
        let top = s.values.last().unwrap();
        let rho = spectral_radius(&d, 1e-10).unwrap();
        prop_assert_eq!(&top.witness, &d.full_vertex_set());
        prop_assert!(top.estimate.overlaps(&rho, 0.0));
        for v in &s.values[..s.len() - 1] {
            // Gaps below 2e-10 cannot be resolved at this tolerance.
            if rho.value - v.estimate.value > 2e-10 {
                prop_assert!(v.estimate.upper < rho.lower);
            }
        }
    }

    #[test]
    fn edge_list_round_trip(d in digraphs(1, 10)) {
        let back = parse_edge_list(&to_edge_list(&d)).unwrap();
        prop_assert_eq!(back.order(), d.order());
        prop_assert_eq!(back.arcs().collect::<Vec<_>>(), d.arcs().collect::<Vec<_>>());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn values_satisfy_the_complementarity_conditions(d in digraphs(1, 6)) {
        let s = spectrum(&d);
        let mids = s.midpoints();
        for &v in &mids {
            prop_assert!(verify_eicp_definition(&d, v, 1e-9).unwrap(), "value {v} rejected");
        }
        for k in 0..20 {
            let lambda = -0.5 + 0.37 * k as f64;
            if mids.iter().all(|&v| (v - lambda).abs() > 1e-6) {
                prop_assert!(!verify_eicp_definition(&d, lambda, 1e-9).unwrap(), "{lambda} accepted");
            }
        }
    }

    #[test]
    fn strongly_connected_helper_is_sound(d in strong_digraphs(1, 10)) {
        prop_assert!(is_strongly_connected(&d));
    }
}
