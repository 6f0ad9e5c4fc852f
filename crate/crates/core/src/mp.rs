//! Multiprecision helpers shared by the piecewise linear models.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rug::Float;

use crate::polyalg::IntPolynomial;

/// Working precision in bits for piecewise linear orbits.
pub const PREC: u32 = 200;

pub fn big_to_float(c: &BigInt, prec: u32) -> Float {
    match c.to_i64() {
        Some(v) => Float::with_val(prec, v),
        None => {
            let parsed = Float::parse(c.to_string()).expect("decimal integer");
            Float::with_val(prec, parsed)
        }
    }
}

/// `(P(x), P'(x))` by Horner's rule.
pub fn eval_with_derivative(p: &IntPolynomial, x: &Float) -> (Float, Float) {
    let prec = x.prec();
    let mut v = Float::with_val(prec, 0);
    let mut d = Float::with_val(prec, 0);
    for c in p.coeffs().iter().rev() {
        d = Float::with_val(prec, &d * x) + &v;
        v = Float::with_val(prec, &v * x) + big_to_float(c, prec);
    }
    (v, d)
}

/// Polish a simple real root of `p` starting from `approx` with Newton steps.
pub fn refine_real_root(p: &IntPolynomial, approx: f64, prec: u32) -> Float {
    let mut x = Float::with_val(prec, approx);
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 8));
    for _ in 0..64 {
        let (v, d) = eval_with_derivative(p, &x);
        if d.is_zero() {
            break;
        }
        let step = Float::with_val(prec, &v / &d);
        x -= &step;
        let tol = Float::with_val(prec, &eps * x.clone().abs().max(&Float::with_val(prec, 1)));
        if step.abs() <= tol {
            break;
        }
    }
    x
}
