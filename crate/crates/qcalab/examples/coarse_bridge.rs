//! Degree chains of shifted systems with bounded homology certificates or obstructions.
//! Homologous pairs are then realised by transport shifts.

use std::sync::Arc;

use qcalab::coarse::{boundary, deg, l_homologous, transport_shift, Homology};
use qcalab::qca::{int_rat, verify};
use qcalab::random;
use qcalab::{Field, MetricSpace, SpinSystem};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn main() -> Result<(), qcalab::Error> {
    let mut rng = StdRng::seed_from_u64(5);
    let field = Field::fp(2)?;
    let space = Arc::new(MetricSpace::interval(10)?);
    for ell in [1usize, 2] {
        let q: Vec<usize> = (0..10).map(|_| rng.gen_range(1..=4)).collect();
        let sys = Arc::new(SpinSystem::new(space.clone(), q)?);
        let s = random::shift(&mut rng, &sys, field, ell, 8)?;
        let (a, b) = (deg(&sys), deg(s.target()));
        match l_homologous(&space, &a, &b, &int_rat(2 * ell))? {
            Homology::Homologous(c) => {
                println!("q {:?} r {:?}", sys.dims(), s.target().dims());
                println!("    homologous at bound {}; boundary matches {}; {} certificate terms", 2 * ell, boundary(&c) == a.sub(&b), c.terms().len());
            }
            Homology::NotHomologous(o) => println!("    unexpected obstruction {o:?}"),
        }
        if let Some(t) = transport_shift(&sys, s.target(), &int_rat(ell), field)? {
            println!("    transport shift at bound {ell}: verified {} spread {}", verify(&t).is_ok(), t.spread());
        }
    }

    let sys_a = SpinSystem::new(space.clone(), vec![4, 1, 1, 1, 1, 1, 1, 1, 1, 3])?;
    let sys_b = SpinSystem::new(space.clone(), vec![2, 1, 1, 1, 1, 1, 1, 1, 2, 3])?;
    for l in [1, 2, 8] {
        match l_homologous(&space, &deg(&sys_a), &deg(&sys_b), &int_rat(l))? {
            Homology::Homologous(c) => println!("bound {l}: homologous, {} terms", c.terms().len()),
            Homology::NotHomologous(o) => println!("bound {l}: prime {} sums {} vs {} on {:?}", o.prime, o.sum_a, o.sum_b, o.component),
        }
    }
    Ok(())
}
