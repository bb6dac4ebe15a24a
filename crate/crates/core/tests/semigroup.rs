use proptest::prelude::*;

use synchrolab::catalog;
use synchrolab::experiments::grid_projection;
use synchrolab::semigroup::{self, regular_partition_sizes};
use synchrolab::sync;
use synchrolab::{Error, Partition, PointSet, Transformation};

fn map(n: usize) -> impl Strategy<Value = Transformation> {
    prop::collection::vec(0..n, n).prop_map(|v| Transformation::new(v).unwrap())
}

fn permutation(n: usize) -> impl Strategy<Value = Transformation> {
    Just((0..n).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Transformation::new(v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn idempotents_keep_the_kernel((f, g) in (2usize..10).prop_flat_map(|n| (map(n), permutation(n)))) {
        let fgf = f.then(&g).then(&f);
        match semigroup::idempotent_same_kernel(&f, &g) {
            Ok((e, k)) => {
                prop_assert_eq!(fgf.rank(), f.rank());
                prop_assert_eq!(e.then(&e), e.clone());
                prop_assert_eq!(e.kernel(), f.kernel());
                prop_assert_eq!(f.then(&g).power(k), e);
            }
            Err(Error::Hypothesis(_)) => prop_assert!(fgf.rank() < f.rank()),
            Err(other) => prop_assert!(false, "unexpected {other}"),
        }
    }
}

#[test]
fn grid_minimal_rank_structure() {
    let grid = catalog::grid(3).unwrap();
    let f = grid_projection();
    let c = semigroup::group_closure(&grid.group, &f, 1_000_000).unwrap();
    let gr = sync::gr_graph(&grid.group, &f).unwrap();
    let r = c.min_rank().unwrap();
    assert_eq!(r, 3);
    assert!(!c.rank_spectrum().unwrap().contains(&(r + 1)));
    let complement = gr.complement();
    let mut minimal = 0;
    for h in c.elements().filter(|h| h.rank() == r) {
        minimal += 1;
        assert!(h.is_uniform(), "{h}");
        assert!(semigroup::is_g_section(&grid.group, h.image_set(), &h.kernel(), 1 << 16).unwrap());
        let delta = semigroup::neumann_delta(&grid.group, &h.kernel()).unwrap();
        assert!(delta.edges().all(|(v, w)| complement.has_edge(v, w)));
    }
    assert!(minimal > 0);
}

#[test]
fn rank_preserving_search_matches_enumeration() {
    let grid = catalog::grid(3).unwrap();
    let elements = grid.group.elements(100).unwrap();
    assert_eq!(elements.len(), 72);
    let maps = ["[1,1,1,2,2,2,3,3,3]", "[1,1,3,3,5,6,7,8,9]", "[1,2,1,2,1,2,1,2,1]", "[1,1,1,5,5,5,9,9,9]"];
    for text in maps {
        let f = Transformation::parse(text, Some(9)).unwrap();
        let any = elements.iter().any(|g| f.then(g).then(&f).rank() == f.rank());
        let found = semigroup::find_rank_preserving_g(&grid.group, &f, 1 << 16).unwrap();
        assert_eq!(found.is_some(), any, "{text}");
        if let Some(g) = found {
            assert_eq!(f.then(&g).then(&f).rank(), f.rank());
        }
    }
}

#[test]
fn truncated_closures_refuse_to_answer() {
    let s6 = catalog::symmetric(6).unwrap();
    let f = Transformation::parse("[1,1,3,4,5,6]", None).unwrap();
    let c = semigroup::group_closure(&s6.group, &f, 100).unwrap();
    assert!(c.truncated());
    assert_eq!(c.len(), 100);
    assert!(matches!(c.min_rank(), Err(Error::OracleUnavailable { .. })));
    assert!(matches!(c.gr(), Err(Error::OracleUnavailable { .. })));
    let full = semigroup::group_closure(&s6.group, &f, 1_000_000).unwrap();
    assert_eq!(full.len(), 46656);
}

#[test]
fn closures_are_deterministic() {
    let c5 = catalog::cyclic(5).unwrap();
    let f = Transformation::parse("[1,1,3,4,5]", None).unwrap();
    let a = semigroup::group_closure(&c5.group, &f, 10_000).unwrap().dump();
    let b = semigroup::group_closure(&c5.group, &f, 10_000).unwrap().dump();
    assert_eq!(a, b);
    let first: Vec<&str> = a.lines().take(2).collect();
    assert_eq!(first, ["[2,3,4,5,1]", "[1,1,3,4,5]"]);
}

#[test]
fn wide_closures_agree_with_packed() {
    // Degree 17 takes the unpacked path; fixed points added to a degree-5
    // instance leave the structure unchanged.
    let c5 = catalog::cyclic(5).unwrap();
    let f = Transformation::parse("[1,1,3,4,5]", None).unwrap();
    let small = semigroup::group_closure(&c5.group, &f, 100_000).unwrap();
    let pad = |t: &Transformation| Transformation::new(t.images().chain(5..22).collect()).unwrap();
    let gens: Vec<Transformation> = c5.group.generators().iter().chain(std::iter::once(&f)).map(pad).collect();
    let wide = semigroup::closure(&gens, 100_000).unwrap();
    assert_eq!(wide.len(), small.len());
    assert_eq!(wide.min_rank().unwrap(), small.min_rank().unwrap() + 17);
}

#[test]
fn regular_partitions() {
    let grid = catalog::grid(3).unwrap();
    let r = regular_partition_sizes(&grid.group, false).unwrap();
    assert!(r.sizes.contains(&3));
    let w = &r.witnesses[r.sizes.iter().position(|&s| s == 3).unwrap()];
    assert!(semigroup::is_g_section(&grid.group, w.section, &w.partition, 1 << 16).unwrap());
    let rows = Partition::from_blocks(9, &[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 8]]).unwrap();
    let diagonal: PointSet = [0, 4, 8].into_iter().collect();
    assert!(semigroup::is_g_section(&grid.group, diagonal, &rows, 1 << 16).unwrap());

    for name in ["C5", "S5"] {
        let e = catalog::entry(name).unwrap();
        let r = regular_partition_sizes(&e.group, false).unwrap();
        assert_eq!(r.depth(), None, "{name}");
    }
    let s13 = catalog::symmetric(13).unwrap();
    assert!(matches!(
        regular_partition_sizes(&s13.group, false),
        Err(Error::BeyondExhaustiveRegime { .. })
    ));
}

#[test]
fn nonuniform_search_contains_uniform() {
    for name in ["C6", "grid-2", "C4"] {
        let e = catalog::entry(name).unwrap();
        let uniform = regular_partition_sizes(&e.group, false).unwrap();
        let all = regular_partition_sizes(&e.group, true).unwrap();
        assert!(uniform.sizes.iter().all(|s| all.sizes.contains(s)), "{name}");
        for w in &all.witnesses {
            assert!(semigroup::is_g_section(&e.group, w.section, &w.partition, 1 << 16).unwrap());
        }
    }
}
