//! Dense univariate polynomials over the integers.
//!
//! Used for characteristic polynomials, cyclotomic factor stripping and as the
//! working representation behind [`crate::alexander::LaurentPoly`] for
//! determinants and gcds.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree order, never with a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Non-negative gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut c = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            c = -c;
        }
        IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect())
    }

    pub fn scale(&self, c: &BigInt) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `x^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    /// Divides by `x^k`, assuming the low coefficients vanish.
    pub fn unshift(&self, k: usize) -> IntPoly {
        debug_assert!(self.coeffs.iter().take(k).all(Zero::is_zero));
        IntPoly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Pseudo-remainder of `self` by `divisor`: `lc(d)^(deg a - deg d + 1) a mod d`.
    pub fn pseudo_rem(&self, divisor: &IntPoly) -> IntPoly {
        let d_deg = divisor.degree().expect("pseudo-remainder by zero");
        let lc = divisor.leading().unwrap().clone();
        let mut r = self.clone();
        let Some(a_deg) = r.degree() else {
            return r;
        };
        if a_deg < d_deg {
            return r;
        }
        let mut steps = a_deg - d_deg + 1;
        while let Some(r_deg) = r.degree() {
            if r_deg < d_deg {
                break;
            }
            let lead = r.leading().unwrap().clone();
            let t = IntPoly::monomial(lead, r_deg - d_deg);
            r = &r.scale(&lc) - &(&t * divisor);
            steps -= 1;
        }
        if steps > 0 {
            r = r.scale(&num_traits::pow(lc, steps));
        }
        r
    }

    /// Exact division over the integers. `None` if `divisor` does not divide
    /// `self` in `Z[x]`.
    pub fn exact_div(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let d_deg = divisor.degree()?;
        if self.is_zero() {
            return Some(IntPoly::zero());
        }
        let lc = divisor.leading().unwrap();
        let mut r = self.clone();
        let a_deg = r.degree().unwrap();
        if a_deg < d_deg {
            return None;
        }
        let mut q = vec![BigInt::zero(); a_deg - d_deg + 1];
        while let Some(r_deg) = r.degree() {
            if r_deg < d_deg {
                return None;
            }
            let (c, rem) = r.leading().unwrap().div_rem(lc);
            if !rem.is_zero() {
                return None;
            }
            let t = IntPoly::monomial(c.clone(), r_deg - d_deg);
            q[r_deg - d_deg] = c;
            r = &r - &(&t * divisor);
        }
        Some(IntPoly::new(q))
    }

    /// Greatest common divisor in `Z[x]`, normalized to positive leading
    /// coefficient. Content gcd times the gcd of primitive parts, the latter
    /// by a primitive pseudo-remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.normalized_sign();
        }
        if other.is_zero() {
            return self.normalized_sign();
        }
        let content = self.content().gcd(&other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part().scale(&content)
    }

    fn normalized_sign(&self) -> IntPoly {
        if self.leading().is_some_and(Signed::is_negative) {
            -self
        } else {
            self.clone()
        }
    }

    /// `x^m - 1`
    pub fn x_pow_minus_one(m: usize) -> IntPoly {
        let mut coeffs = vec![BigInt::zero(); m + 1];
        coeffs[0] = -BigInt::one();
        coeffs[m] = BigInt::one();
        IntPoly::new(coeffs)
    }

    /// The `m`-th cyclotomic polynomial.
    pub fn cyclotomic(m: usize) -> IntPoly {
        assert!(m >= 1);
        IntPoly::cyclotomics_up_to(m).pop().unwrap()
    }

    /// `Φ_1, …, Φ_max` (index `m - 1` holds `Φ_m`).
    pub fn cyclotomics_up_to(max: usize) -> Vec<IntPoly> {
        let mut out: Vec<IntPoly> = Vec::with_capacity(max);
        for m in 1..=max {
            let mut p = IntPoly::x_pow_minus_one(m);
            for d in (1..m).filter(|d| m % d == 0) {
                p = p
                    .exact_div(&out[d - 1])
                    .expect("cyclotomic factors divide x^m - 1");
            }
            out.push(p);
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.coeffs.iter().enumerate().map(|(k, c)| (k as i64, c)),
            "x",
        )
    }
}

/// Shared pretty-printer, highest degree first.
pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl DoubleEndedIterator<Item = (i64, &'a BigInt)>,
    var: &str,
) -> fmt::Result {
    let mut first = true;
    for (k, c) in terms.rev() {
        if c.is_zero() {
            continue;
        }
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if neg { '-' } else { '+' })?;
        }
        first = false;
        let unit = abs.is_one();
        match (k, unit) {
            (0, _) => write!(f, "{abs}")?,
            (1, true) => write!(f, "{var}")?,
            (1, false) => write!(f, "{abs}*{var}")?,
            (_, true) => write!(f, "{var}^{k}")?,
            (_, false) => write!(f, "{abs}*{var}^{k}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
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
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64(c)
    }

    #[test]
    fn cyclotomic_small() {
        assert_eq!(IntPoly::cyclotomic(1), p(&[-1, 1]));
        assert_eq!(IntPoly::cyclotomic(2), p(&[1, 1]));
        assert_eq!(IntPoly::cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(IntPoly::cyclotomic(6), p(&[1, -1, 1]));
        assert_eq!(IntPoly::cyclotomic(12), p(&[1, 0, -1, 0, 1]));
    }

    #[test]
    fn gcd_with_content() {
        // 2(x-1)(x+1) and 6(x-1)(x+2)
        let a = &p(&[-2, 0, 2]) * &IntPoly::one();
        let b = &p(&[-1, 1]) * &p(&[12, 6]);
        assert_eq!(a.gcd(&b), p(&[-2, 2]));
        assert_eq!(a.gcd(&IntPoly::zero()), a);
    }

    #[test]
    fn gcd_coprime() {
        assert_eq!(p(&[1, 1]).gcd(&p(&[-1, 1])), IntPoly::one());
    }

    #[test]
    fn exact_division() {
        let a = &p(&[1, 2, 1]) * &p(&[3, 0, 1]);
        assert_eq!(a.exact_div(&p(&[1, 1])), Some(&p(&[1, 1]) * &p(&[3, 0, 1])));
        assert_eq!(p(&[1, 0, 1]).exact_div(&p(&[1, 1])), None);
        assert_eq!(p(&[1, 2]).exact_div(&p(&[0, 2])), None);
    }

    #[test]
    fn pseudo_remainder_identity() {
        let a = p(&[5, -3, 0, 7]);
        let b = p(&[2, 3]);
        let r = a.pseudo_rem(&b);
        assert!(r.degree().unwrap_or(0) < 1);
        // lc(b)^3 * a(-2/3) scaled: r = 27 * a(-2/3)
        // a(-2/3) = 5 + 2 + 7 * (-8/27) = 7 - 56/27 = 133/27
        assert_eq!(r, p(&[133]));
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, -2, 0, 1]).to_string(), "x^3 - 2*x + 1");
        assert_eq!(IntPoly::zero().to_string(), "0");
    }
}
