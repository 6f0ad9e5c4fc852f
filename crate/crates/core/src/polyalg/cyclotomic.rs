use std::sync::{Mutex, OnceLock};

use super::poly::IntPolynomial;

/// The `n`-th cyclotomic polynomial, `n >= 1`, cached process-wide.
pub fn cyclotomic(n: usize) -> IntPolynomial {
    assert!(n >= 1, "cyclotomic index starts at 1");
    static CACHE: OnceLock<Mutex<Vec<IntPolynomial>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![IntPolynomial::zero()]));
    {
        let table = cache.lock().unwrap();
        if n < table.len() {
            return table[n].clone();
        }
    }
    let mut table = cache.lock().unwrap();
    while table.len() <= n {
        let m = table.len();
        // x^m - 1 divided by every Phi_d with d | m, d < m.
        let mut f = &IntPolynomial::monomial(1, m) - &IntPolynomial::one();
        for d in 1..m {
            if m.is_multiple_of(d) {
                f = f.exact_div(&table[d]).expect("cyclotomic divisor");
            }
        }
        table.push(f);
    }
    table[n].clone()
}

/// Divide out powers of `x` and every `Phi_n` with `n <= nmax` while the
/// division is exact.
pub fn strip_cyclotomic(p: &IntPolynomial, nmax: usize) -> IntPolynomial {
    assert!(!p.is_zero(), "strip_cyclotomic of the zero polynomial");
    let mut f = p.unshift(p.trailing_zeros());
    for n in 1..=nmax {
        let phi = cyclotomic(n);
        // phi_n has degree totient(n); skip when it cannot fit.
        while f.degree().unwrap_or(0) >= phi.degree().unwrap() {
            match f.exact_div(&phi) {
                Some(q) => f = q,
                None => break,
            }
        }
    }
    f
}

/// Indices `n <= nmax` with the multiplicity of `Phi_n` in `p`.
pub fn cyclotomic_factors(p: &IntPolynomial, nmax: usize) -> Vec<(usize, usize)> {
    let mut f = p.unshift(p.trailing_zeros());
    let mut out = Vec::new();
    for n in 1..=nmax {
        let phi = cyclotomic(n);
        let mut k = 0;
        while f.degree().unwrap_or(0) >= phi.degree().unwrap() {
            match f.exact_div(&phi) {
                Some(q) => f = q,
                None => break,
            }
            k += 1;
        }
        if k > 0 {
            out.push((n, k));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(2), p(&[1, 1]));
        assert_eq!(cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(15).degree(), Some(8));
    }

    #[test]
    fn strip_examples() {
        let th = p(&[0, 0, 0, 0, 0, 0, -1, -2, 0, 0, 1]);
        assert_eq!(strip_cyclotomic(&th, 40), p(&[-1, -2, 0, 0, 1]));
        let s = strip_cyclotomic(&p(&[1, 0, 0, -1]), 3);
        assert_eq!(s.degree(), Some(0));
        assert_eq!(s.coeff(0).magnitude(), &1u32.into());
        let mar = p(&[-1, -2, 0, 0, 1]);
        assert_eq!(strip_cyclotomic(&mar, 40), mar);
    }

    #[test]
    fn factor_multiplicities() {
        let f = &(&cyclotomic(3).pow(2) * &cyclotomic(1)) * &p(&[-1, -2, 0, 0, 1]);
        assert_eq!(cyclotomic_factors(&f, 10), vec![(1, 1), (3, 2)]);
    }
}
