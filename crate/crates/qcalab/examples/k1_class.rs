//! Determinant classes in the rationalized `K₁`.

use qcalab::exactalg::rat;
use qcalab::kone::{check_stabilization, k1_class, split_g, swap_gate_class};
use qcalab::qca::{elementary_product, Elementary};
use qcalab::{Field, Mat};

fn main() -> Result<(), qcalab::Error> {
    let q = Field::Q;
    let a = Mat::diag(q, &[q.int(4), q.int(1)]);
    println!("f_2(diag(4,1)) = {}", k1_class(&a, 2)?);
    let m = Mat::from_ints(q, &[&[2, 1, 0], &[0, 3, 1], &[1, 0, 5]]);
    for k in 1..=4 {
        let c = check_stabilization(&m, k)?;
        println!("k={k}: f(A) = {}, f(A⊗I) = {}, f(I⊗A) = {}", c.base, c.right, c.left);
    }
    let e = elementary_product(q, 3, &[Elementary { i: 0, j: 2, lambda: q.int(7) }, Elementary { i: 1, j: 0, lambda: q.int(-3) }])?;
    println!("elementary product: {}", k1_class(&e, 3)?);
    for (r, p, n) in [(rat(6, 1), 2, 3), (rat(4, 1), 1, 2), (rat(9, 10), -3, 4)] {
        println!("f(g({r}, {p}/{n})) = {}", k1_class(&split_g(&r, p, n)?, n)?);
    }
    let f7 = Field::fp(7)?;
    println!("over F_7: {}", k1_class(&Mat::diag(f7, &[f7.int(3), f7.int(5)]), 2)?);
    for (x, y) in [(2, 2), (2, 3), (4, 4)] {
        let s = swap_gate_class(q, x, y)?;
        println!("swap Mat({x})⊗Mat({y}): odd {} det after stabilization {} class {}", s.odd, s.det, s.class);
    }
    Ok(())
}
