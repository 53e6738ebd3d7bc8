//! Kronecker stacking of elements and automorphisms, and stabilization of the index.

use std::sync::Arc;

use qcalab::index::{central_cut, index, pump};
use qcalab::qca::{stabilize, stack, verify};
use qcalab::random;
use qcalab::spin::{phi_restack, phi_stack, phi_unstack, stack_systems};
use qcalab::{Field, MetricSpace, SpinSystem};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() -> Result<(), qcalab::Error> {
    let mut rng = StdRng::seed_from_u64(13);
    let field = Field::Q;
    let space = Arc::new(MetricSpace::interval(4)?);
    let q = Arc::new(SpinSystem::new(space.clone(), vec![2, 3, 1, 2])?);
    let r = Arc::new(SpinSystem::new(space.clone(), vec![2, 1, 2, 2])?);
    let qr = Arc::new(stack_systems(&q, &r)?);
    let (a, a2) = (random::element(&mut rng, &q, field, &[0, 1]), random::element(&mut rng, &q, field, &[1]));
    let (b, b2) = (random::element(&mut rng, &r, field, &[1, 2]), random::element(&mut rng, &r, field, &[0, 2]));
    let ab = phi_stack(&a, &b, &qr)?;
    let terms = phi_unstack(&ab, &q, &r)?;
    let back = phi_restack(&terms, &q, &qr, ab.support(), field)?;
    println!("Φ⁻¹ then Φ returns the element: {}", back.equals(&ab)?);
    let lhs = phi_stack(&a.mul(&a2)?, &b.mul(&b2)?, &qr)?;
    let rhs = ab.mul(&phi_stack(&a2, &b2, &qr)?)?;
    println!("Φ is multiplicative: {}", lhs.equals(&rhs)?);

    let p = pump(1, 2, 6, field)?;
    let t = Arc::new(SpinSystem::uniform(p.source().space().clone(), 2)?);
    let st = stabilize(&p, &t)?;
    println!("pump(1,2): index {}; stabilized by 2: verified {} index {}", index(&p, &central_cut(6))?.value, verify(&st).is_ok(), index(&st, &central_cut(6))?.value);
    let pp = stack(&p, &pump(2, 1, 6, field)?)?;
    println!("stack of pump(1,2) and pump(2,1): index {}", index(&pp, &central_cut(6))?.value);
    Ok(())
}
