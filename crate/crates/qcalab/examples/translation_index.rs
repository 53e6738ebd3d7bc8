//! Index of translations on circles at every cut, checked against the brute-force boundary algebra.

use std::sync::Arc;
use std::time::Instant;

use qcalab::index::{boundary_algebra, boundary_by_intersection, index_all_cuts, Cut};
use qcalab::qca::translation;
use qcalab::{Field, MetricSpace, SpinSystem};

fn main() -> Result<(), qcalab::Error> {
    let field = Field::fp(3)?;
    let circle = Arc::new(MetricSpace::circle(8)?);
    for d in [2, 3] {
        let sys = Arc::new(SpinSystem::uniform(circle.clone(), d)?);
        for step in [1, -1] {
            let t = translation(&sys, field, step)?;
            for ell in [1, 2] {
                let start = Instant::now();
                let classes = index_all_cuts(&t, ell)?;
                let values: Vec<String> = classes.iter().map(|(_, c)| c.value.to_string()).collect();
                let ok = classes.iter().all(|(_, c)| c.certificates.passed());
                println!("q={d} step {step:+} ell={ell}: {} ({}, {:.2?})", values.join(" "), if ok { "certified" } else { "FAILED" }, start.elapsed());
            }
        }
    }

    let sys = Arc::new(SpinSystem::uniform(circle, 2)?);
    let t = translation(&sys, field, 1)?;
    let cut = Cut::new(3, 1);
    let fast = boundary_algebra(&t, &cut)?;
    let slow = boundary_by_intersection(&t, &cut)?;
    println!("brute-force boundary algebra agrees at cut 3: {} (dim {})", fast.equals(&slow)?, slow.dim());
    Ok(())
}
