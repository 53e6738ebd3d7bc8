//! Index of the pump family on interval(6) over several fields.

use std::time::Instant;

use qcalab::index::{central_cut, index, pump};
use qcalab::qca::verify;
use qcalab::Field;

fn main() -> Result<(), qcalab::Error> {
    let n = 6;
    for field in [Field::Fp(2), Field::Fp(3), Field::Q] {
        for a in 1..=4 {
            for b in 1..=4 {
                let t = Instant::now();
                let p = pump(a, b, n, field)?;
                assert!(verify(&p).is_ok());
                let c = index(&p, &central_cut(n))?;
                println!(
                    "{field} pump({a},{b}): index {} dim B {} certificates {} ({:.2?})",
                    c.value,
                    c.dim_b,
                    if c.certificates.passed() { "ok" } else { "FAILED" },
                    t.elapsed()
                );
            }
        }
    }
    Ok(())
}
