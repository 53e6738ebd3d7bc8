//! Recovering the shift hidden in `circuit ∘ shift` and comparing greedy with exhaustive assignment.

use std::sync::Arc;

use qcalab::qca::{circuit_single_layer, compose};
use qcalab::random;
use qcalab::shiftnorm::{assign_exhaustive, normalize_to_shift};
use qcalab::{Field, MetricSpace, SpinSystem};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn main() -> Result<(), qcalab::Error> {
    let mut rng = StdRng::seed_from_u64(3);
    let field = Field::fp(5)?;
    let space = Arc::new(MetricSpace::interval(8)?);
    for trial in 0..5 {
        let q: Vec<usize> = (0..8).map(|_| rng.gen_range(1..=4)).collect();
        let sys = Arc::new(SpinSystem::new(space.clone(), q.clone())?);
        let s = random::shift(&mut rng, &sys, field, 1, 6)?;
        let layer = random::layer(&mut rng, s.target(), field, 16);
        let alpha = compose(&circuit_single_layer(s.target(), field, &layer)?, &s)?;
        let n = normalize_to_shift(&alpha)?;
        let agree = n.hypergraphs.iter().zip(&n.assignments).all(|(h, a)| assign_exhaustive(h).is_some() && a.is_valid(h));
        println!("trial {trial}: q {:?} -> r {:?}", q, s.target().dims());
        for m in &n.moves {
            if m.from_site != m.to_site {
                println!("    prime {} leg {}.{} -> {}.{}", m.prime, m.from_site, m.from_leg, m.to_site, m.to_leg);
            }
        }
        println!("    spread of alpha {} of f {}, assignments valid {agree}", alpha.spread(), n.f.spread());
    }
    Ok(())
}
