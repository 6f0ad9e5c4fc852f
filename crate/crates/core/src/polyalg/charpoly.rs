use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::poly::IntPolynomial;

/// Exact `det(xI - M)`.
///
/// The matrix is split into strongly connected components (a block
/// triangular form), and each block's polynomial is recovered from
/// Hessenberg reductions modulo word-sized primes by Chinese remaindering.
pub fn charpoly(m: &IntMatrix) -> IntPolynomial {
    let mut out = IntPolynomial::one();
    for comp in m.strongly_connected_components() {
        let block = m.principal(&comp);
        let p = if block.dim() == 1 {
            IntPolynomial::from_i64(&[-block.get(0, 0), 1])
        } else {
            charpoly_multimodular(&block)
        };
        out = &out * &p;
    }
    out
}

/// Division-free Berkowitz algorithm over the integers; `O(n^4)` and used
/// as an independent check of [`charpoly`].
pub fn charpoly_berkowitz(m: &IntMatrix) -> IntPolynomial {
    let n = m.dim();
    let a = |i: usize, j: usize| BigInt::from(m.get(i, j));
    // Descending coefficients of the characteristic polynomial of the
    // leading r x r block.
    let mut v: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..n {
        let mut t = vec![BigInt::one(), -a(r, r)];
        let mut col: Vec<BigInt> = (0..r).map(|i| a(i, r)).collect();
        for _ in 0..r {
            let dot: BigInt = (0..r).map(|j| a(r, j) * &col[j]).sum();
            t.push(-dot);
            col = (0..r)
                .map(|i| (0..r).map(|j| a(i, j) * &col[j]).sum())
                .collect();
        }
        let next: Vec<BigInt> = (0..r + 2)
            .map(|i| (0..=i.min(r)).map(|j| &t[i - j] * &v[j]).sum())
            .collect();
        v = next;
    }
    v.reverse();
    IntPolynomial::new(v)
}

/// Exact `det(I - tM)`, the reciprocal of [`charpoly`] at the dimension.
pub fn spectral_determinant(m: &IntMatrix) -> IntPolynomial {
    charpoly(m).reciprocal(m.dim())
}

fn charpoly_multimodular(m: &IntMatrix) -> IntPolynomial {
    let n = m.dim();
    let h = m.max_row_norm();
    // Hadamard-type bound: |coefficients| <= (1 + H)^n.
    let bits = n as f64 * (1.0 + h).log2() + 2.0;
    let needed = (bits / 61.0).ceil() as usize + 1;
    let primes = primes();
    assert!(needed <= primes.len(), "matrix too large for prime table");

    let mut residues: Vec<Vec<u64>> = Vec::with_capacity(needed);
    for &p in &primes[..needed] {
        residues.push(hessenberg_charpoly_mod(m, p));
    }
    let mut coeffs = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut x = BigInt::zero();
        let mut modulus = BigInt::one();
        for (res, &p) in residues.iter().zip(&primes[..needed]) {
            let pb = BigInt::from(p);
            let xr = x.mod_floor(&pb);
            let xr = u64::try_from(xr).unwrap();
            let diff = (res[k] + p - xr) % p;
            let inv = modinv((&modulus % &pb).try_into().unwrap(), p);
            let t = mulmod(diff, inv, p);
            x += &modulus * BigInt::from(t);
            modulus *= pb;
        }
        let half = &modulus >> 1;
        if x > half {
            x -= &modulus;
        }
        coeffs.push(x);
    }
    let out = IntPolynomial::new(coeffs);
    debug_assert!(out.leading().is_some_and(|l| l.is_positive()));
    out
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

fn modinv(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Descending primes below 2^62.
fn primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::new();
        let mut c = (1u64 << 62) - 1;
        while out.len() < 256 {
            if is_prime_u64(c) {
                out.push(c);
            }
            c -= 2;
        }
        out
    })
}

/// Ascending coefficients of `det(xI - M)` over `F_p`.
fn hessenberg_charpoly_mod(m: &IntMatrix, p: u64) -> Vec<u64> {
    let n = m.dim();
    let red = |v: i64| -> u64 { v.rem_euclid(p as i64) as u64 };
    let mut h: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| red(m.get(i, j))).collect())
        .collect();

    // Similarity reduction to upper Hessenberg form.
    for col in 0..n.saturating_sub(2) {
        let Some(piv) = (col + 1..n).find(|&r| h[r][col] != 0) else {
            continue;
        };
        if piv != col + 1 {
            h.swap(piv, col + 1);
            for row in h.iter_mut() {
                row.swap(piv, col + 1);
            }
        }
        let inv = modinv(h[col + 1][col], p);
        for r in col + 2..n {
            if h[r][col] == 0 {
                continue;
            }
            let f = mulmod(h[r][col], inv, p);
            // row_r -= f * row_{col+1}
            let (upper, lower) = h.split_at_mut(r);
            for (x, &y) in lower[0].iter_mut().zip(&upper[col + 1]) {
                let t = mulmod(f, y, p);
                *x = (*x + p - t) % p;
            }
            // col_{col+1} += f * col_r
            for row in h.iter_mut() {
                let t = mulmod(f, row[r], p);
                row[col + 1] = (row[col + 1] + t) % p;
            }
        }
    }

    // p_k = (x - h_kk) p_{k-1} - sum_i h_{i,k} (prod_{j=i+1..k} h_{j,j-1}) p_{i-1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (i, &c) in prev.iter().enumerate() {
            next[i + 1] = (next[i + 1] + c) % p;
            let t = mulmod(c, h[k][k], p);
            next[i] = (next[i] + p - t) % p;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = mulmod(prod, h[i + 1][i], p);
            if prod == 0 {
                break;
            }
            let coef = mulmod(prod, h[i][k], p);
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                let t = mulmod(coef, c, p);
                next[d] = (next[d] + p - t) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn fibonacci_matrix() {
        let m = mat(&[&[0, 1], &[1, 1]]);
        assert_eq!(charpoly(&m), IntPolynomial::from_i64(&[-1, -1, 1]));
        assert_eq!(
            charpoly_berkowitz(&m),
            IntPolynomial::from_i64(&[-1, -1, 1])
        );
    }

    #[test]
    fn zero_matrix_is_power_of_x() {
        let m = IntMatrix::zeros(5);
        assert_eq!(charpoly(&m), IntPolynomial::monomial(1, 5));
        assert_eq!(spectral_determinant(&m), IntPolynomial::one());
    }

    #[test]
    fn dense_block_agrees_with_berkowitz() {
        let m = mat(&[
            &[2, -1, 0, 3],
            &[1, 0, 4, -2],
            &[0, 5, -3, 1],
            &[7, 0, 1, 1],
        ]);
        assert_eq!(charpoly(&m), charpoly_berkowitz(&m));
    }

    #[test]
    fn large_entries_need_several_primes() {
        let big = 1_000_000_007i64;
        let m = mat(&[&[big, 1, 2], &[3, -big, 5], &[7, 11, big]]);
        assert_eq!(charpoly(&m), charpoly_berkowitz(&m));
    }

    #[test]
    fn prime_table_is_prime() {
        assert!(primes().iter().take(5).all(|&p| is_prime_u64(p)));
        assert!(!is_prime_u64((1u64 << 61) + 1));
    }
}
