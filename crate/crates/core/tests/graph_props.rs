use proptest::prelude::*;

use synchrolab::graph::{intersection_embedding, Graph};
use synchrolab::PointSet;

fn graph(max: usize) -> impl Strategy<Value = Graph> {
    (1..=max).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::null(n);
            let mut i = 0;
            for v in 0..n {
                for w in v + 1..n {
                    if bits[i] {
                        g.add_edge(v, w);
                    }
                    i += 1;
                }
            }
            g
        })
    })
}

/// Largest clique, by checking every vertex subset.
fn brute_clique(g: &Graph) -> usize {
    let n = g.vertex_count();
    (0u64..1 << n)
        .filter(|&s| {
            let vs: Vec<usize> = (0..n).filter(|&v| s >> v & 1 == 1).collect();
            vs.iter().enumerate().all(|(i, &v)| vs[i + 1..].iter().all(|&w| g.has_edge(v, w)))
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

/// Least k admitting a proper colouring, by trying every assignment.
fn brute_chromatic(g: &Graph) -> usize {
    let n = g.vertex_count();
    (1..=n.max(1))
        .find(|&k| {
            let total = (k as u64).pow(n as u32);
            (0..total).any(|code| {
                let mut c = vec![0; n];
                let mut x = code;
                for slot in c.iter_mut() {
                    *slot = (x % k as u64) as usize;
                    x /= k as u64;
                }
                g.edges().all(|(v, w)| c[v] != c[w])
            })
        })
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn clique_and_chromatic_are_exact(g in graph(7)) {
        let clique = g.clique_number();
        let chromatic = g.chromatic_number();
        prop_assert!(clique <= chromatic);
        prop_assert_eq!(clique, brute_clique(&g));
        prop_assert_eq!(chromatic, brute_chromatic(&g));
        let k = g.maximum_clique();
        prop_assert_eq!(k.len(), clique);
        let colours = g.colouring_with(chromatic).unwrap();
        prop_assert!(g.edges().all(|(v, w)| colours[v] != colours[w]));
    }

    #[test]
    fn clique_at_most_chromatic_larger(g in graph(14)) {
        prop_assert!(g.clique_number() <= g.chromatic_number());
    }

    #[test]
    fn intersection_embeddings_represent(g in graph(10)) {
        let e = intersection_embedding(&g);
        prop_assert!(e.ground_size > 2 * e.k);
        prop_assert!(e.sets.iter().all(|s| s.len() == e.k));
        for v in 0..g.vertex_count() {
            for w in v + 1..g.vertex_count() {
                let meet = e.sets[v].iter().any(|p| e.sets[w].contains(p));
                prop_assert_eq!(meet, g.has_edge(v, w));
            }
        }
        prop_assert!(e.represents(&g));
    }

    #[test]
    fn equal_neighbourhoods_are_exact(g in graph(10)) {
        let pairs = g.equal_neighbourhood_pairs();
        let n = g.vertex_count();
        for v in 0..n {
            for w in v + 1..n {
                let same = g.neighbours(v) == g.neighbours(w);
                prop_assert_eq!(pairs.contains(&(v, w)), same);
            }
        }
    }

    #[test]
    fn clique_plus_pendant_witnesses_check(g in graph(8), r in 2usize..4) {
        if let Some(vs) = g.has_clique_plus_pendant(r) {
            prop_assert_eq!(vs.len(), r + 1);
            let set: PointSet = vs.iter().copied().collect();
            prop_assert_eq!(g.induced(set).edge_count(), (r + 1) * r / 2 - 1);
        }
    }

    #[test]
    fn matrix_text_round_trips(g in graph(12)) {
        prop_assert_eq!(Graph::from_matrix_text(&g.to_matrix_text()).unwrap(), g);
    }
}

#[test]
fn named_graphs() {
    let mut k4e = Graph::complete(4);
    k4e.remove_edge(0, 1);
    assert_eq!((k4e.clique_number(), k4e.chromatic_number()), (3, 3));
    assert!(k4e.has_clique_plus_pendant(3).is_some());
    let c5 = Graph::cycle(5);
    assert_eq!((c5.clique_number(), c5.chromatic_number()), (2, 3));
}
