use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use super::PolyError;

/// Dense polynomial with exact integer coefficients, lowest degree first.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// an empty coefficient vector and every other polynomial a nonzero leading
/// coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `c * z^k`.
    pub fn monomial(c: impl Into<BigInt>, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c.into());
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    /// Multiplicity of the root at the origin.
    pub fn trailing_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Divide by `z^k`, dropping the low coefficients.
    pub fn unshift(&self, k: usize) -> Self {
        Self::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Keep coefficients of degree at most `deg`.
    pub fn truncate(&self, deg: usize) -> Self {
        Self::new(self.coeffs.iter().take(deg + 1).cloned().collect())
    }

    /// `P(z^k)`.
    pub fn compose_power(&self, k: usize) -> Self {
        assert!(k >= 1, "compose_power needs k >= 1");
        let Some(d) = self.degree() else {
            return Self::zero();
        };
        let mut coeffs = vec![BigInt::zero(); d * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c.clone();
        }
        Self::new(coeffs)
    }

    /// `z^d P(1/z)`; `d` must be at least the degree.
    ///
    /// With `d` the matrix dimension this turns `det(zI - A)` into
    /// `det(I - zA)` and back.
    pub fn reciprocal(&self, d: usize) -> Self {
        if let Some(deg) = self.degree() {
            assert!(
                d >= deg,
                "reciprocal degree {d} below polynomial degree {deg}"
            );
        }
        let mut coeffs = vec![BigInt::zero(); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[d - i] = c.clone();
        }
        Self::new(coeffs)
    }

    /// Same polynomial with a positive leading coefficient.
    pub fn sign_normalized(&self) -> Self {
        match self.leading() {
            Some(l) if l.is_negative() => -self,
            _ => self.clone(),
        }
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divide out the content and make the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        let p = Self::new(self.coeffs.iter().map(|a| a / &c).collect());
        p.sign_normalized()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| {
                acc * z + c.to_f64().unwrap_or(f64::NAN)
            })
    }

    /// Sum of |a_i| |z|^i, the natural scale for residuals at `z`.
    pub fn abs_eval(&self, r: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * r + c.to_f64().unwrap_or(f64::NAN).abs())
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default()
    }

    /// Long division over the integers.
    ///
    /// Returns `None` when some quotient coefficient would not be an integer.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (i, d) in divisor.coeffs.iter().enumerate() {
                rem[k + i] -= &q * d;
            }
            quot[k] = q;
        }
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Quotient when `divisor` divides `self` exactly in `Z[z]`.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        match self.div_rem(divisor) {
            Some((q, r)) if r.is_zero() => Some(q),
            _ => None,
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_some()
    }

    /// A scalar multiple of the remainder of `self` by `divisor`, computed
    /// without fractions.
    fn pseudo_rem(&self, divisor: &Self) -> Self {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead = divisor.leading().unwrap().clone();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let top = r.leading().unwrap().clone();
            r = &r.scale(&lead) - &divisor.shift(dr - dd).scale(&top);
        }
        r
    }

    /// Primitive gcd with positive leading coefficient (content ignored).
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.primitive_part();
        }
        if other.is_zero() {
            return self.primitive_part();
        }
        let (mut f, mut g) = (self.primitive_part(), other.primitive_part());
        if f.degree() < g.degree() {
            std::mem::swap(&mut f, &mut g);
        }
        loop {
            let r = f.pseudo_rem(&g);
            if r.is_zero() {
                return g;
            }
            if r.degree() == Some(0) {
                return Self::one();
            }
            f = g;
            g = r.primitive_part();
        }
    }

    /// Square-free decomposition `P = c * prod f_i^i` by Yun's algorithm.
    ///
    /// Returns the non-constant primitive factors `f_i` with their
    /// multiplicities. The root at the origin is treated like any other.
    pub fn squarefree_factors(&self) -> Vec<(Self, usize)> {
        let a = self.primitive_part();
        if a.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        if a.is_squarefree_mod_prime() {
            return vec![(a, 1)];
        }
        let da = a.derivative();
        let b = a.gcd(&da);
        let mut c = a.exact_div(&b).expect("gcd divides");
        let mut d = &da.exact_div(&b).expect("gcd divides derivative") - &c.derivative();
        let mut out = Vec::new();
        let mut i = 1;
        while c.degree().unwrap_or(0) > 0 {
            let f = c.gcd(&d);
            c = c.exact_div(&f).expect("gcd divides");
            d = &d.exact_div(&f).expect("gcd divides") - &c.derivative();
            if f.degree().unwrap_or(0) > 0 {
                out.push((f, i));
            }
            i += 1;
        }
        out
    }

    /// Cheap certificate of square-freeness: the gcd with the derivative is
    /// constant modulo a large prime not dividing the leading coefficient.
    /// `false` means "not certified", not "has a repeated factor".
    fn is_squarefree_mod_prime(&self) -> bool {
        const P: u64 = 2_305_843_009_213_693_951; // 2^61 - 1
        let reduce = |p: &Self| -> Vec<u64> {
            let m = BigInt::from(P);
            let mut v: Vec<u64> = p
                .coeffs
                .iter()
                .map(|c| c.mod_floor(&m).to_u64().unwrap())
                .collect();
            while v.last() == Some(&0) {
                v.pop();
            }
            v
        };
        let f = reduce(self);
        if f.len() != self.coeffs.len() {
            return false;
        }
        let g = reduce(&self.derivative());
        modp::gcd_degree(f, g, P) == Some(0)
    }
}

mod modp {
    pub fn mul(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    pub fn pow(mut a: u64, mut e: u64, p: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a, p);
            }
            a = mul(a, a, p);
            e >>= 1;
        }
        r
    }

    pub fn inv(a: u64, p: u64) -> u64 {
        pow(a, p - 2, p)
    }

    /// Degree of gcd(f, g) over F_p, `None` if both are zero.
    pub fn gcd_degree(mut f: Vec<u64>, mut g: Vec<u64>, p: u64) -> Option<usize> {
        loop {
            if g.is_empty() {
                return f.len().checked_sub(1);
            }
            let lg = inv(*g.last().unwrap(), p);
            while f.len() >= g.len() {
                let coef = mul(*f.last().unwrap(), lg, p);
                let off = f.len() - g.len();
                for (i, &gi) in g.iter().enumerate() {
                    let t = mul(coef, gi, p);
                    f[off + i] = (f[off + i] + p - t) % p;
                }
                while f.last() == Some(&0) {
                    f.pop();
                }
                if f.is_empty() {
                    break;
                }
            }
            std::mem::swap(&mut f, &mut g);
        }
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: Self) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i);
                    let b = rhs.coeffs.get(i);
                    match (a, b) {
                        (Some(a), Some(b)) => a + b,
                        (Some(a), None) => a.clone(),
                        (None, Some(b)) => b.clone(),
                        (None, None) => unreachable!(),
                    }
                })
                .collect(),
        )
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: Self) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        -&self
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: Self) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPolynomial {
            type Output = IntPolynomial;
            fn $m(self, rhs: Self) -> IntPolynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl IntPolynomial {
    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

/// Sparse ascending form, e.g. `1*z^0 + 2*z^3 - 1*z^5`.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match (first, c.is_negative()) {
                (true, false) => write!(f, "{c}*z^{k}")?,
                (true, true) => write!(f, "-{}*z^{k}", c.abs())?,
                (false, false) => write!(f, " + {c}*z^{k}")?,
                (false, true) => write!(f, " - {}*z^{k}", c.abs())?,
            }
            first = false;
        }
        Ok(())
    }
}

/// Accepts the display form as well as looser input such as `1 + 2z^3 - z^5`
/// in any of the variables `z`, `x`, `t`.
impl FromStr for IntPolynomial {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyError::Parse(s.to_string());
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in compact.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                let prev = compact[..i].chars().last().unwrap();
                if prev != '^' && prev != '*' {
                    terms.push(&compact[start..i]);
                    start = i;
                }
            }
        }
        terms.push(&compact[start..]);

        let mut coeffs: Vec<BigInt> = Vec::new();
        for term in terms {
            let (neg, body) = match term.as_bytes().first() {
                Some(b'+') => (false, &term[1..]),
                Some(b'-') => (true, &term[1..]),
                _ => (false, term),
            };
            if body.is_empty() {
                return Err(bad());
            }
            let var_pos = body.find(['z', 'x', 't']);
            let (coef_txt, power) = match var_pos {
                None => (body, 0usize),
                Some(p) => {
                    let coef_txt = body[..p].trim_end_matches('*');
                    let rest = &body[p + 1..];
                    let power = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^')
                            .ok_or_else(bad)?
                            .parse::<usize>()
                            .map_err(|_| bad())?
                    };
                    (coef_txt, power)
                }
            };
            let mut c = if coef_txt.is_empty() {
                BigInt::one()
            } else {
                coef_txt.parse::<BigInt>().map_err(|_| bad())?
            };
            if neg {
                c = -c;
            }
            if coeffs.len() <= power {
                coeffs.resize(power + 1, BigInt::zero());
            }
            coeffs[power] += c;
        }
        Ok(Self::new(coeffs))
    }
}

/// Dense coefficient array; coefficients beyond `i64` are written as strings.
impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn trims_and_degree() {
        assert_eq!(p(&[1, 2, 0, 0]).degree(), Some(1));
        assert!(p(&[0, 0]).is_zero());
        assert_eq!(p(&[0, 0, 3]).trailing_zeros(), 2);
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(&a * &b, p(&[-1, 0, 1]));
        assert_eq!(&a - &a, IntPolynomial::zero());
        assert_eq!(a.pow(3), p(&[1, 3, 3, 1]));
        assert_eq!(p(&[1, 2, 3]).compose_power(2), p(&[1, 0, 2, 0, 3]));
    }

    #[test]
    fn division() {
        let f = p(&[-1, 0, 0, 1]);
        assert_eq!(f.exact_div(&p(&[-1, 1])), Some(p(&[1, 1, 1])));
        assert_eq!(f.exact_div(&p(&[1, 1])), None);
        assert_eq!(p(&[1, 2]).div_rem(&p(&[0, 2])), Some((p(&[1]), p(&[1]))));
        assert_eq!(p(&[1, 3]).div_rem(&p(&[0, 2])), None);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = p(&[-1, 1]);
        let b = p(&[1, 1]);
        let f = &(&a * &a) * &b;
        assert_eq!(f.gcd(&f.derivative()), a);
        let mut sf = f.squarefree_factors();
        sf.sort_by_key(|(_, m)| *m);
        assert_eq!(sf, vec![(b.clone(), 1), (a.clone(), 2)]);
        assert_eq!(p(&[1, 0, 1]).squarefree_factors(), vec![(p(&[1, 0, 1]), 1)]);
    }

    #[test]
    fn reciprocal_pads() {
        assert_eq!(p(&[1, 2]).reciprocal(3), p(&[0, 0, 2, 1]));
    }

    #[test]
    fn display_round_trip() {
        let f = p(&[1, 0, 0, 2, 0, -1]);
        assert_eq!(f.to_string(), "1*z^0 + 2*z^3 - 1*z^5");
        assert_eq!(f.to_string().parse::<IntPolynomial>().unwrap(), f);
        assert_eq!("1 + 2z^3 - z^5".parse::<IntPolynomial>().unwrap(), f);
        assert_eq!(
            "-x^4 + 2x + 1".parse::<IntPolynomial>().unwrap(),
            p(&[1, 2, 0, 0, -1])
        );
        assert_eq!("0".parse::<IntPolynomial>().unwrap(), IntPolynomial::zero());
        assert!("z^".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn json_dense() {
        let s = serde_json::to_string(&p(&[-1, 0, 2])).unwrap();
        assert_eq!(s, "[-1,0,2]");
    }
}
