use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use yexp_core::quiver::{build_mutation_loop, inverse_permutation, mutate_sequence, Quiver};
use yexp_core::yseed::{mutate_values, YSeed};
use yexp_core::{DynkinType, Family};

fn quiver_strategy() -> impl Strategy<Value = Quiver> {
    (1usize..=8).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(-3i32..=3, pairs).prop_map(move |w| {
            let mut arrows = Vec::new();
            let mut it = w.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    let x = it.next().unwrap();
                    if x > 0 {
                        arrows.push((i, j, x as u32));
                    } else if x < 0 {
                        arrows.push((j, i, (-x) as u32));
                    }
                }
            }
            Quiver::from_arrows(n, &arrows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn mutation_is_an_involution(q in quiver_strategy(), k in 0usize..8) {
        let k = k % q.n_vertices();
        prop_assert_eq!(q.mutate(k).unwrap().mutate(k).unwrap(), q);
    }

    #[test]
    fn mutation_keeps_skew_antisymmetric(q in quiver_strategy(), k in 0usize..8) {
        let k = k % q.n_vertices();
        let m = q.mutate(k).unwrap();
        for i in 0..q.n_vertices() {
            prop_assert_eq!(m.skew(i, k), -q.skew(i, k));
            prop_assert_eq!(m.arrows(i, i), 0);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn permute_then_inverse(q in quiver_strategy(), seed in any::<u64>()) {
        let n = q.n_vertices();
        let mut nu: Vec<usize> = (0..n).collect();
        nu.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let inv = inverse_permutation(&nu, n).unwrap();
        prop_assert_eq!(q.permute(&nu).unwrap().permute(&inv).unwrap(), q);
    }

    #[test]
    fn seed_mutation_is_an_involution(
        q in quiver_strategy(),
        k in 0usize..8,
        y in proptest::collection::vec(0.05f64..20.0, 8),
    ) {
        let n = q.n_vertices();
        let k = k % n;
        let s = YSeed::new(q, y[..n].to_vec()).unwrap();
        let back = s.mutate(k).unwrap().mutate(k).unwrap();
        prop_assert_eq!(&back.quiver, &s.quiver);
        for (a, b) in back.values.iter().zip(&s.values) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0));
        }
    }
}

#[test]
fn plus_phase_order_is_irrelevant() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for f in Family::ALL {
        for n in f.min_rank()..=10 {
            let lp = build_mutation_loop(DynkinType::new(f, n).unwrap()).unwrap();
            let q = &lp.labeled.quiver;
            let y0: Vec<f64> = (0..lp.n_vertices()).map(|i| 0.3 + 0.1 * i as f64).collect();
            let reference = mutate_sequence(q, &lp.plus).unwrap();
            let mut y_ref = y0.clone();
            let mut cur = q.clone();
            for (s, &k) in lp.plus.iter().enumerate() {
                mutate_values(&cur, &mut y_ref, k, s).unwrap();
                cur = cur.mutate(k).unwrap();
            }
            for _ in 0..10 {
                let mut order = lp.plus.clone();
                order.shuffle(&mut rng);
                assert_eq!(mutate_sequence(q, &order).unwrap(), reference, "{f}{n}");
                let mut y = y0.clone();
                let mut cur = q.clone();
                for (s, &k) in order.iter().enumerate() {
                    mutate_values(&cur, &mut y, k, s).unwrap();
                    cur = cur.mutate(k).unwrap();
                }
                for (a, b) in y.iter().zip(&y_ref) {
                    assert!((a - b).abs() <= 1e-12 * b.abs(), "{f}{n}");
                }
            }
        }
    }
}
