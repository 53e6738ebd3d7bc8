mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use qcalab::exactalg::rat;
use qcalab::kone::{k1_class, layer_class, split_g, swap_class};
use qcalab::qca::{Elementary, GateKind, GateSpec};
use qcalab::random;
use qcalab::{Field, MetricSpace, SpinSystem};
use rand::seq::SliceRandom;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn class_is_additive(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = common::rng(seed);
        let (a, b) = (random::invertible(&mut rng, Field::Q, n), random::invertible(&mut rng, Field::Q, n));
        let sum = k1_class(&a, n).unwrap().add(&k1_class(&b, n).unwrap()).unwrap();
        prop_assert_eq!(k1_class(&a.mul(&b), n).unwrap(), sum);
    }

    #[test]
    fn section_is_a_right_inverse(num in -500i64..=500, den in 1i64..=300, p in -4i64..=4, q in 1usize..=5) {
        prop_assume!(num != 0);
        let r = rat(num, den);
        let class = k1_class(&split_g(&r, p, q).unwrap(), q).unwrap();
        let scale = rat(p, q as i64);
        let want: BTreeMap<u64, BigRational> = common::rational_valuations(&r)
            .into_iter()
            .map(|(pr, v)| (pr, v * &scale))
            .filter(|(_, v)| !v.is_zero())
            .collect();
        prop_assert_eq!(class.exponents(), &want);
    }

    #[test]
    fn special_elementary_and_permutation_layers_are_trivial(seed in any::<u64>(), n in 2usize..=5) {
        let mut rng = common::rng(seed);
        let f = Field::Q;
        let sys = common::line(common::random_dims(&mut rng, n, 3));
        let mut layer = Vec::new();
        for x in 0..n {
            let d = sys.q(x);
            let kind = match rng.gen_range(0..3) {
                0 => {
                    let mut g = random::invertible(&mut rng, f, d);
                    let inv_det = g.det_ff().unwrap().inv().unwrap();
                    for j in 0..d {
                        let v = g.get(0, j).checked_mul(&inv_det).unwrap();
                        g.set(0, j, v);
                    }
                    GateKind::Special(g)
                }
                1 if d > 1 => GateKind::Elementary(
                    (0..4)
                        .map(|_| {
                            let i = rng.gen_range(0..d);
                            Elementary { i, j: (i + rng.gen_range(1..d)) % d, lambda: random::scalar(&mut rng, f) }
                        })
                        .collect(),
                ),
                _ => {
                    let mut perm: Vec<usize> = (0..d).collect();
                    perm.shuffle(&mut rng);
                    GateKind::Permutation(perm)
                }
            };
            layer.push(GateSpec { block: vec![x], kind });
        }
        prop_assert!(layer_class(&sys, f, &layer).unwrap().is_trivial());
    }

    #[test]
    fn swaps_are_stably_trivial(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = common::rng(seed);
        let space = Arc::new(MetricSpace::interval(n).unwrap());
        let q = SpinSystem::new(space.clone(), common::random_dims(&mut rng, n, 5)).unwrap();
        let r = SpinSystem::new(space, common::random_dims(&mut rng, n, 5)).unwrap();
        for s in swap_class(&q, &r, Field::Q).unwrap() {
            prop_assert!(s.class.is_trivial());
            prop_assert!(s.det.is_one());
        }
    }

    #[test]
    fn finite_fields_have_no_classes(seed in any::<u64>(), n in 1usize..=4, k in 0usize..4) {
        let mut rng = common::rng(seed);
        let f = Field::fp([2, 3, 5, 7][k]).unwrap();
        prop_assert!(k1_class(&random::invertible(&mut rng, f, n), n).unwrap().is_trivial());
    }
}

#[test]
fn diagonal_examples() {
    let f = Field::Q;
    let m = qcalab::Mat::from_ints(f, &[&[4, 0], &[0, 1]]);
    assert_eq!(k1_class(&m, 2).unwrap().exponent(2), rat(1, 1));
    assert!(k1_class(&m, 1).is_err());
    let big = qcalab::Mat::from_ints(f, &[&[8, 0, 0], &[0, 1, 0], &[0, 0, 9]]);
    let c = k1_class(&big, 3).unwrap();
    assert_eq!((c.exponent(2), c.exponent(3)), (rat(1, 1), rat(2, 3)));
    let singular = qcalab::Mat::from_ints(f, &[&[1, 2], &[2, 4]]);
    assert!(k1_class(&singular, 2).is_err());
}
