mod common;

use std::sync::Arc;

use proptest::prelude::*;
use qcalab::exactalg::rat;
use qcalab::index::{central_cut, index, index_all_cuts, pump, Cut};
use qcalab::qca::{circuit, circuit_single_layer, compose, inverse_layer, stabilize, stack, translation, GateSpec, Homo};
use qcalab::random;
use qcalab::{Field, MetricSpace, SpinSystem};
use rand::Rng;

fn ring(n: usize, d: usize) -> Arc<SpinSystem> {
    Arc::new(SpinSystem::uniform(Arc::new(MetricSpace::circle(n).unwrap()), d).unwrap())
}

fn onsite_layer(rng: &mut rand_chacha::ChaCha8Rng, sys: &Arc<SpinSystem>, f: Field) -> Vec<GateSpec> {
    (0..sys.len()).map(|x| GateSpec::inner(vec![x], random::invertible(rng, f, sys.q(x)))).collect()
}

/// A spread-one automorphism of a ring: a shift by ±1 dressed with on-site gates, or a layer.
fn spread_one(rng: &mut rand_chacha::ChaCha8Rng, sys: &Arc<SpinSystem>, f: Field) -> Homo {
    let dress = circuit_single_layer(sys, f, &onsite_layer(rng, sys, f)).unwrap();
    match rng.gen_range(0..3) {
        0 => compose(&dress, &translation(sys, f, 1).unwrap()).unwrap(),
        1 => compose(&dress, &translation(sys, f, -1).unwrap()).unwrap(),
        _ => circuit_single_layer(sys, f, &random::layer(rng, sys, f, 9)).unwrap(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn index_is_cut_independent(seed in any::<u64>(), d in 2usize..=3) {
        let mut rng = common::rng(seed);
        let f = [Field::Fp(2), Field::Q][seed as usize % 2];
        let sys = ring(8, d);
        let h = spread_one(&mut rng, &sys, f);
        let all = index_all_cuts(&h, 1).unwrap();
        prop_assert_eq!(all.len(), 8);
        for (_, az) in &all {
            prop_assert_eq!(&az.value, &all[0].1.value);
            prop_assert!(az.certificates.passed());
        }
    }

    #[test]
    fn boundary_dimension_matches_dense_oracle(seed in any::<u64>(), d in 2usize..=3, gamma in 0usize..8) {
        let mut rng = common::rng(seed);
        let sys = ring(8, d);
        let h = spread_one(&mut rng, &sys, Field::Fp(2));
        let az = index(&h, &Cut::new(gamma, 1)).unwrap();
        prop_assert_eq!(az.dim_b as usize, common::brute_boundary_dim(&h, gamma, 1));
    }

    #[test]
    fn conjugation_preserves_index(seed in any::<u64>(), gamma in 0usize..8) {
        let mut rng = common::rng(seed);
        let f = Field::Fp(3);
        let sys = ring(8, 2);
        let h = spread_one(&mut rng, &sys, f);
        let layer = onsite_layer(&mut rng, &sys, f);
        let c = circuit_single_layer(&sys, f, &layer).unwrap();
        let c_inv = circuit_single_layer(&sys, f, &inverse_layer(&sys, f, &layer).unwrap()).unwrap();
        let conj = compose(&c, &compose(&h, &c_inv).unwrap()).unwrap();
        let cut = Cut::new(gamma, 1);
        prop_assert_eq!(index(&conj, &cut).unwrap().value, index(&h, &cut).unwrap().value);
    }

    #[test]
    fn staggered_circuits_have_trivial_index(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let f = [Field::Fp(2), Field::Q][seed as usize % 2];
        let n = 8;
        let sys = common::line(common::random_dims(&mut rng, n, 2));
        let blocks = |start: usize| -> Vec<Vec<usize>> {
            let mut out: Vec<Vec<usize>> = if start == 1 { vec![vec![0]] } else { vec![] };
            let mut x = start;
            while x < n {
                out.push(if x + 1 < n { vec![x, x + 1] } else { vec![x] });
                x += 2;
            }
            out
        };
        let layers: Vec<Vec<GateSpec>> = [0, 1]
            .iter()
            .map(|&s| blocks(s).into_iter().map(|b| { let g = random::invertible(&mut rng, f, sys.dim(&b)); GateSpec::inner(b, g) }).collect())
            .collect();
        let c = circuit(&sys, f, &layers).unwrap();
        for gamma in 1..n - 2 {
            prop_assert_eq!(index(&c, &Cut::new(gamma, 2)).unwrap().value, rat(1, 1));
        }
    }
}

#[test]
fn stabilization_and_stacking() {
    let f = Field::Fp(2);
    let sys = ring(8, 2);
    let t = translation(&sys, f, 1).unwrap();
    let cut = Cut::new(3, 1);
    assert_eq!(index(&t, &cut).unwrap().value, rat(2, 1));
    assert_eq!(index(&stabilize(&t, &sys).unwrap(), &cut).unwrap().value, rat(2, 1));
    let back = translation(&sys, f, -1).unwrap();
    assert_eq!(index(&stack(&t, &t).unwrap(), &cut).unwrap().value, rat(4, 1));
    assert_eq!(index(&stack(&t, &back).unwrap(), &cut).unwrap().value, rat(1, 1));
}

#[test]
fn pump_indices() {
    let p21 = pump(2, 1, 8, Field::Q).unwrap();
    assert_eq!(index(&p21, &central_cut(8)).unwrap().value, rat(2, 1));
    let p12 = pump(1, 2, 8, Field::Fp(2)).unwrap();
    assert_eq!(index(&p12, &central_cut(8)).unwrap().value, rat(1, 2));
    let p23 = index(&pump(2, 3, 8, Field::Fp(5)).unwrap(), &central_cut(8)).unwrap();
    assert_eq!((p23.value, p23.dim_b), (rat(2, 3), 16));
}
