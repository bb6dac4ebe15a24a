use proptest::prelude::*;

use synchrolab::{KernelType, Partition, Transformation};

fn map(max_degree: usize) -> impl Strategy<Value = Transformation> {
    (1..=max_degree).prop_flat_map(|n| prop::collection::vec(0..n, n).prop_map(|v| Transformation::new(v).unwrap()))
}

fn pair(max_degree: usize) -> impl Strategy<Value = (Transformation, Transformation)> {
    (1..=max_degree).prop_flat_map(|n| {
        let one = prop::collection::vec(0..n, n).prop_map(|v| Transformation::new(v).unwrap());
        (one.clone(), one)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn composition_rank_is_bounded((f, g) in pair(12)) {
        prop_assert!(f.then(&g).rank() <= f.rank().min(g.rank()));
    }

    #[test]
    fn kernels_coarsen_under_composition((f, g) in pair(12)) {
        let fg = f.then(&g);
        prop_assert!(f.kernel().refines(&fg.kernel()));
        for x in 0..f.degree() {
            prop_assert_eq!(fg.apply(x), g.apply(f.apply(x)));
        }
    }

    #[test]
    fn idempotent_power_is_idempotent(f in map(12)) {
        let (e, k) = f.idempotent_power();
        prop_assert!(k >= 1);
        prop_assert_eq!(e.then(&e), e.clone());
        prop_assert_eq!(f.power(k), e);
    }

    #[test]
    fn kernel_type_sums_to_degree(f in map(16)) {
        let kt = f.kernel_type();
        prop_assert_eq!(kt.sizes().iter().sum::<usize>(), f.degree());
        prop_assert_eq!(kt.rank(), f.rank());
        prop_assert_eq!(kt.degree(), f.degree());
    }

    #[test]
    fn text_round_trips(f in map(16)) {
        let text = f.to_string();
        prop_assert_eq!(Transformation::parse(&text, Some(f.degree())).unwrap(), f.clone());
        let kt: KernelType = f.kernel_type().to_string().trim_matches(|c| c == '(' || c == ')').parse().unwrap();
        prop_assert_eq!(kt, f.kernel_type());
    }

    #[test]
    fn partitions_are_canonical(labels in prop::collection::vec(0usize..5, 1..12)) {
        let p = Partition::from_labels(&labels).unwrap();
        let blocks = p.blocks();
        for w in blocks.windows(2) {
            prop_assert!(w[0].first() < w[1].first());
        }
        for x in 0..labels.len() {
            for y in 0..labels.len() {
                prop_assert_eq!(p.same_block(x, y), labels[x] == labels[y]);
            }
        }
    }

    #[test]
    fn inverse_undoes_permutations(v in (1usize..10).prop_flat_map(|n| Just((0..n).collect::<Vec<_>>()).prop_shuffle())) {
        let p = Transformation::new(v).unwrap();
        let inv = p.inverse().unwrap();
        prop_assert!(p.then(&inv).is_identity());
        prop_assert!(inv.then(&p).is_identity());
    }
}

#[test]
fn right_action_convention() {
    let f: Transformation = "[2,3,1]".parse().unwrap();
    let g: Transformation = "[1,1,3]".parse().unwrap();
    // 1 -> 2 under f, then 2 -> 1 under g.
    assert_eq!(f.then(&g).apply(0), 0);
    assert_eq!(f.then(&g).to_string(), "[1,3,1]");
}
