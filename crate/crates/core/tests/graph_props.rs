mod oracle;

use std::sync::Arc;

use proptest::prelude::*;

use kgraph_core::enumerator::{enumerate_kirchhoff, CutOrder, SearchConfig};
use kgraph_core::exactalg::{build_row_system, RationalMatrix, RowSystem};
use kgraph_core::vgraph::*;

fn sys(rows: [[i64; 4]; 2]) -> Arc<RowSystem> {
    Arc::new(build_row_system(&RationalMatrix::from_integer_rows(&rows).unwrap()).unwrap())
}

fn census(rows: [[i64; 4]; 2], m: u32) -> Vec<VectorGraph> {
    enumerate_kirchhoff(&sys(rows), &SearchConfig::new(m)).unwrap().graphs.into_iter().collect()
}

const R1: [[i64; 4]; 2] = [[2, 0, 1, 1], [0, 2, 1, -1]];
const R2: [[i64; 4]; 2] = [[2, 0, 1, 1], [0, 2, 3, 1]];
const R3: [[i64; 4]; 2] = [[1, 0, 2, 1], [0, 1, 1, 2]];

fn all_graphs() -> Vec<VectorGraph> {
    let mut v = census(R1, 3);
    v.extend(census(R2, 6));
    v.extend(census(R3, 6));
    v
}

#[test]
fn cuts_are_orthogonal_to_cycles() {
    for g in all_graphs() {
        let chis = fundamental_cycle_vectors(&g);
        assert!(!chis.is_empty());
        for (v, cut) in g.all_cuts() {
            for chi in &chis {
                let dot: i64 = cut.iter().zip(chi).map(|(a, b)| a * b).sum();
                assert_eq!(dot, 0, "vertex {v} of {g:?}");
            }
        }
    }
}

#[test]
fn cuts_sum_to_zero_and_cycles_are_null() {
    for g in all_graphs() {
        let n = g.system().n();
        let mut total = vec![0i64; n];
        for cut in g.all_cuts().values() {
            assert!(oracle::in_row(g.system(), cut));
            total.iter_mut().zip(cut).for_each(|(t, c)| *t += c);
        }
        assert!(total.iter().all(|&t| t == 0));
        let chis = fundamental_cycle_vectors(&g);
        assert!(chis.iter().all(|c| oracle::in_null(g.system(), c)));
        assert_eq!(oracle::rank(&chis), n - g.system().k());
    }
}

#[test]
fn cycle_basis_walks_reproduce_their_vectors() {
    for g in census(R1, 2).iter().chain(&census(R3, 6)) {
        let walks = cycle_basis(g);
        assert_eq!(walks.len() as u64, g.edge_count() + 1 - g.vertex_count() as u64);
        for w in &walks {
            assert!(cycle_vector(g, w).is_ok());
        }
    }
}

#[test]
fn vector_2_connected_graphs_are_uniform() {
    for g in all_graphs() {
        if is_vector_2_connected(&g) {
            assert!(multiplicity(&g).uniform);
        }
    }
}

#[test]
fn chirality_is_a_closed_involution() {
    for (rows, m) in [(R1, 3), (R2, 6), (R3, 6)] {
        let graphs = census(rows, m);
        for g in &graphs {
            let c = chiral(g);
            assert!(graphs.contains(&c));
            assert_eq!(equals_up_to_translation(&chiral(&c), g), Ok(true));
            assert_eq!(is_kirchhoff(&c).is_ok(), is_kirchhoff(g).is_ok());
        }
    }
}

#[test]
fn triangle_matches_window_scan() {
    let s = Arc::new(build_row_system(&RationalMatrix::from_integer_rows(&[[1, 0, 1], [0, 1, 1]]).unwrap()).unwrap());
    let found = enumerate_kirchhoff(&s, &SearchConfig::new(1)).unwrap().graphs;
    let scan = oracle::window_graphs(&s, 2, 1);
    assert_eq!(found, scan);
    assert_eq!(found.len(), 2);
}

#[test]
fn census_is_monotone_in_m_max() {
    let mut prev = census(R1, 1);
    for m in 2..=4 {
        let next = census(R1, m);
        assert!(prev.iter().all(|g| next.contains(g)));
        prev = next;
    }
    assert_eq!(census(R1, 4).len(), 25);
}

#[test]
fn census_ignores_cut_order_and_prune_toggle() {
    let s = sys(R1);
    let base = enumerate_kirchhoff(&s, &SearchConfig::new(3)).unwrap().graphs;
    for order in [CutOrder::ReverseLexicographic, CutOrder::SmallestFirst] {
        let mut c = SearchConfig::new(3);
        c.cut_order = order;
        assert_eq!(enumerate_kirchhoff(&s, &c).unwrap().graphs, base);
    }
    let mut c = SearchConfig::new(3);
    c.prune_negative_sum = false;
    assert_eq!(enumerate_kirchhoff(&s, &c).unwrap().graphs, base);
}

fn small_graphs() -> impl Strategy<Value = VectorGraph> {
    proptest::collection::vec(((-2i64..=2, -2i64..=2), 0usize..4, 1u32..=2), 1..8).prop_map(|edges| {
        VectorGraph::from_tails(
            sys(R1),
            edges.into_iter().map(|((x, y), i, c)| (Coord(vec![x, y]), i, c)),
        )
        .unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn verdict_survives_translation_and_chirality(g in small_graphs(), dx in -5i64..=5, dy in -5i64..=5) {
        let ok = is_kirchhoff(&g).is_ok();
        prop_assert_eq!(is_kirchhoff(&g.translated(&[dx, dy])).is_ok(), ok);
        prop_assert_eq!(is_kirchhoff(&chiral(&g)).is_ok(), ok);
        prop_assert_eq!(canonicalize(&g.translated(&[dx, dy])), canonicalize(&g));
    }

    #[test]
    fn bad_vertex_verdicts_are_genuine(g in small_graphs()) {
        if let KirchhoffVerdict::BadVertex { vertex, cut } = is_kirchhoff(&g) {
            prop_assert_eq!(vertex_cut(&g, &vertex).unwrap(), cut.clone());
            prop_assert!(!oracle::in_row(g.system(), &cut));
        }
    }
}
