//! Centralizers of conjugated full matrix subalgebras and the tensor splitting of `A ⊗ D`.

use std::sync::Arc;

use qcalab::qca::apply;
use qcalab::qca::{circuit_single_layer, GateSpec};
use qcalab::random;
use qcalab::subalg::{centralizer, generate, tensor_split, verify_tensor_pair};
use qcalab::{Element, Field, MetricSpace, SpinSystem};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn main() -> Result<(), qcalab::Error> {
    let mut rng = StdRng::seed_from_u64(7);
    let field = Field::Q;
    for (n, m) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
        let sys = Arc::new(SpinSystem::new(Arc::new(MetricSpace::interval(2)?), vec![n, m])?);
        let g = random::invertible(&mut rng, field, n * m);
        let conj = circuit_single_layer(&sys, field, &[GateSpec::inner(vec![0, 1], g)])?;
        let gens: Vec<Element> = (0..n * n)
            .map(|k| apply(&conj, &Element::matrix_unit(sys.clone(), field, 0, k / n, k % n)?))
            .collect::<Result<_, _>>()?;
        let b = generate(sys.clone(), field, &gens, &[0, 1])?;
        let c = centralizer(&b)?;
        let cert = verify_tensor_pair(&b, &c)?;
        println!("Mat({n}) inside Mat({}): dim B {} dim C {} checks {:?}", n * m, b.dim(), c.dim(), cert);
    }

    let sys = Arc::new(SpinSystem::new(Arc::new(MetricSpace::interval(2)?), vec![2, 3])?);
    let mut gens: Vec<Element> = (0..4).map(|k| Element::matrix_unit(sys.clone(), field, 0, k / 2, k % 2)).collect::<Result<_, _>>()?;
    gens.push(Element::matrix_unit(sys.clone(), field, 1, 0, 0)?);
    let b = generate(sys.clone(), field, &gens, &[0, 1])?;
    let split = tensor_split(&b, &[0], &[1])?;
    println!("B = Mat(2) ⊗ D with dim D = {} (dims match {}, products inside {})", split.d.dim(), split.dims_match, split.contains_products);
    Ok(())
}
