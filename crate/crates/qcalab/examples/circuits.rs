//! Single-layer circuits of every gate kind and the swap circuit, with their indices.

use std::sync::Arc;

use qcalab::exactalg::rat;
use qcalab::index::{index, Cut};
use qcalab::kone::layer_class;
use qcalab::qca::{circuit, circuit_single_layer, compose, swap_circuit, verify, Elementary, GateKind, GateSpec, Homo};
use qcalab::random;
use qcalab::{Field, Mat, MetricSpace, SpinSystem};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() -> Result<(), qcalab::Error> {
    let mut rng = StdRng::seed_from_u64(11);
    let field = Field::Q;
    let space = Arc::new(MetricSpace::circle(8)?);
    let sys = Arc::new(SpinSystem::uniform(space.clone(), 2)?);

    let special = Mat::from_ints(field, &[&[2, 1], &[1, 1]]);
    let kinds = vec![
        GateSpec { block: vec![0, 1], kind: GateKind::Inner(random::invertible(&mut rng, field, 4)) },
        GateSpec { block: vec![2], kind: GateKind::Special(special) },
        GateSpec { block: vec![3, 4], kind: GateKind::Elementary(vec![Elementary { i: 0, j: 3, lambda: field.int(5) }, Elementary { i: 2, j: 1, lambda: field.rational(&rat(-1, 2))? }]) },
        GateSpec { block: vec![5, 6], kind: GateKind::Permutation(vec![1, 0, 3, 2]) },
    ];
    let layer = circuit_single_layer(&sys, field, &kinds)?;
    println!("mixed layer: verified {} spread {}", verify(&layer).is_ok(), layer.spread());
    let specials = vec![kinds[1].clone(), kinds[2].clone()];
    println!("class of the special and elementary gates: {}", layer_class(&sys, field, &specials)?);

    let layers: Vec<Vec<GateSpec>> = (0..3).map(|_| random::layer(&mut rng, &sys, field, 4)).collect();
    let c = circuit(&sys, field, &layers)?;
    println!("three random layers: spread {} index {}", c.spread(), index(&c, &Cut::new(3, 2))?.value);

    let q = Arc::new(SpinSystem::new(space.clone(), vec![2, 3, 1, 2, 2, 3, 1, 2])?);
    let r = Arc::new(SpinSystem::new(space, vec![3, 2, 2, 1, 2, 2, 3, 1])?);
    let s = swap_circuit(&q, &r, field)?;
    let back = swap_circuit(&r, &q, field)?;
    let id = Homo::identity(s.source().clone(), field);
    println!("swap of two systems: verified {} spread {} involutive {}", verify(&s).is_ok(), s.spread(), compose(&back, &s)?.equals(&id)?);
    Ok(())
}
