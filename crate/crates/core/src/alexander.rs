//! Fox calculus and the Alexander polynomial of a deficiency-one
//! presentation relative to an integer character.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{write_terms, IntPoly};
use crate::torus::{eval_int, MappingTorusPresentation};
use crate::words::{to_i64, Word};

/// Integer Laurent polynomial in `s`; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: BigInt, k: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, BigInt)>) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: i64, c: BigInt) {
        let e = self.terms.entry(k).or_insert_with(BigInt::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Max exponent minus min exponent; `None` for zero.
    pub fn span(&self) -> Option<u64> {
        Some(self.max_exponent()?.abs_diff(self.min_exponent()?))
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.add_term(k, c.clone());
        }
        out
    }

    pub fn mul(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, x) in self.terms() {
            for (b, y) in other.terms() {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    /// `s^-v · p` as an ordinary polynomial, where `v` is the lowest exponent.
    pub fn to_poly(&self) -> (IntPoly, i64) {
        let Some(low) = self.min_exponent() else {
            return (IntPoly::zero(), 0);
        };
        let high = self.max_exponent().unwrap();
        let mut coeffs = vec![BigInt::zero(); (high - low) as usize + 1];
        for (k, c) in self.terms() {
            coeffs[(k - low) as usize] = c.clone();
        }
        (IntPoly::new(coeffs), low)
    }

    pub fn from_poly(p: &IntPoly, shift: i64) -> LaurentPoly {
        LaurentPoly::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| (k as i64 + shift, c.clone())),
        )
    }

    /// Representative with lowest exponent 0 and positive leading
    /// coefficient.
    pub fn normalized(&self) -> LaurentPoly {
        let (p, _) = self.to_poly();
        let p = if p.leading().is_some_and(Signed::is_negative) {
            -&p
        } else {
            p
        };
        LaurentPoly::from_poly(&p, 0)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms(), "s")
    }
}

/// `∂r/∂g` pushed to `Z[s, s^-1]` by `h ↦ s^φ(h)`. `g` is 1-based.
pub fn fox_derivative_specialized(r: &Word, g: usize, values: &[BigInt]) -> Result<LaurentPoly> {
    if g == 0 || g > values.len() {
        return Err(Error::GeneratorOutOfRange {
            index: g,
            rank: values.len(),
        });
    }
    let mut out = LaurentPoly::zero();
    let mut prefix = 0i64;
    for &l in r.letters() {
        let h = l.unsigned_abs() as usize;
        let v = to_i64(values.get(h - 1).ok_or(Error::GeneratorOutOfRange {
            index: h,
            rank: values.len(),
        })?)?;
        if l > 0 {
            if h == g {
                out.add_term(prefix, BigInt::one());
            }
            prefix += v;
        } else {
            prefix -= v;
            if h == g {
                out.add_term(prefix, -BigInt::one());
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlexanderPolynomial {
    /// Normalized: lowest exponent 0, positive leading coefficient.
    pub polynomial: LaurentPoly,
    /// All maximal minors vanish.
    pub degenerate: bool,
}

impl AlexanderPolynomial {
    pub fn degree(&self) -> Option<u64> {
        self.polynomial.span()
    }
}

/// The specialized Fox matrix, one row per relator. Each row is checked
/// against the fundamental identity `Σ_g ∂r/∂g · (s^φ(g) - 1) = s^φ(r) - 1`.
pub fn fox_matrix(relators: &[Word], values: &[BigInt]) -> Result<Vec<Vec<LaurentPoly>>> {
    let n = values.len();
    let mut rows = Vec::with_capacity(relators.len());
    for (i, r) in relators.iter().enumerate() {
        let row: Vec<LaurentPoly> = (1..=n)
            .map(|g| fox_derivative_specialized(r, g, values))
            .collect::<Result<_>>()?;
        let mut lhs = LaurentPoly::zero();
        for (g, d) in row.iter().enumerate() {
            let ds = LaurentPoly::from_terms([
                (to_i64(&values[g])?, BigInt::one()),
                (0, -BigInt::one()),
            ]);
            lhs = lhs.add(&d.mul(&ds));
        }
        let rhs = LaurentPoly::from_terms([
            (to_i64(&eval_int(values, r))?, BigInt::one()),
            (0, -BigInt::one()),
        ]);
        if lhs != rhs {
            return Err(Error::Internal(format!(
                "Fox identity fails on relator {}",
                i + 1
            )));
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Fraction-free determinant over `Z[s]`.
fn bareiss(mut a: Vec<Vec<IntPoly>>) -> IntPoly {
    let n = a.len();
    if n == 0 {
        return IntPoly::one();
    }
    let mut sign = false;
    let mut prev = IntPoly::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = !sign;
                }
                None => return IntPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Gcd of the maximal minors of the Fox matrix of a presentation with one
/// more generator than relators.
pub fn alexander_of(relators: &[Word], values: &[BigInt]) -> Result<AlexanderPolynomial> {
    let n = values.len();
    if relators.len() + 1 != n {
        return Err(Error::Precondition(format!(
            "deficiency-one presentation expected, got {n} generators and {} relators",
            relators.len()
        )));
    }
    let m = fox_matrix(relators, values)?;
    // clear negative exponents row by row; this only changes minors by units
    let rows: Vec<Vec<IntPoly>> = m
        .iter()
        .map(|row| {
            let low = row
                .iter()
                .filter_map(LaurentPoly::min_exponent)
                .min()
                .unwrap_or(0);
            row.iter()
                .map(|p| {
                    let (q, v) = p.to_poly();
                    q.shift((v - low) as usize)
                })
                .collect()
        })
        .collect();
    let mut g = IntPoly::zero();
    for skip in 0..n {
        let minor: Vec<Vec<IntPoly>> = rows
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != skip)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        g = g.gcd(&bareiss(minor));
    }
    let polynomial = LaurentPoly::from_poly(&g, 0).normalized();
    Ok(AlexanderPolynomial {
        degenerate: polynomial.is_zero(),
        polynomial,
    })
}

pub fn alexander_polynomial(
    p: &MappingTorusPresentation,
    values: &[BigInt],
) -> Result<AlexanderPolynomial> {
    alexander_of(&p.relators, values)
}

/// Fiber rank as the span of the Alexander polynomial.
pub fn oracle_rank(relators: &[Word], values: &[BigInt]) -> Result<u64> {
    let a = alexander_of(relators, values)?;
    a.degree().ok_or_else(|| {
        Error::Precondition("all maximal minors vanish; the Alexander polynomial is zero".into())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::fiber::classify;
    use crate::hierarchy::UpgTorus;
    use crate::torus::CharacterClass;
    use crate::words::FreeAutomorphism;
    use proptest::prelude::*;

    fn w(l: &[i32]) -> Word {
        Word::from_letters(l.iter().copied())
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn lp(terms: &[(i64, i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(terms.iter().map(|&(k, c)| (k, BigInt::from(c))))
    }

    #[test]
    fn fox_examples() {
        // generators t, x; r = t^-1 x^-1 t x
        let r = w(&[-1, -2, 1, 2]);
        let d = fox_derivative_specialized(&r, 2, &ints(&[1, 0])).unwrap();
        assert_eq!(d, lp(&[(-1, -1), (0, 1)]));
        assert_eq!(d.normalized().span(), Some(1));
        assert!(fox_derivative_specialized(&w(&[1, 1]), 2, &ints(&[1, 0]))
            .unwrap()
            .is_zero());
        assert_eq!(
            fox_derivative_specialized(&w(&[2]), 2, &ints(&[5, 3])).unwrap(),
            lp(&[(0, 1)])
        );
        assert!(fox_derivative_specialized(&r, 3, &ints(&[1, 0])).is_err());
    }

    #[test]
    fn product_with_z() {
        let p = MappingTorusPresentation::standard(&FreeAutomorphism::identity(2));
        let a = alexander_polynomial(&p, &ints(&[0, 0, 1])).unwrap();
        assert_eq!(a.polynomial, lp(&[(0, 1), (1, -2), (2, 1)]));
        assert_eq!(a.polynomial.to_string(), "s^2 - 2*s + 1");
        assert_eq!(a.degree(), Some(2));
        for (n, p, q) in [(3, 1, 2), (4, 3, 5), (2, 7, 1)] {
            let pres = MappingTorusPresentation::standard(&FreeAutomorphism::identity(n));
            let mut v = vec![p; n];
            v.push(q);
            assert_eq!(
                oracle_rank(&pres.relators, &ints(&v)).unwrap(),
                (q * (n as i64 - 1) + 1) as u64
            );
        }
    }

    #[test]
    fn transvection() {
        let a = FreeAutomorphism::new(2, vec![w(&[1]), w(&[2, 1])]).unwrap();
        let p = MappingTorusPresentation::standard(&a);
        assert_eq!(
            alexander_polynomial(&p, &ints(&[0, 0, 1]))
                .unwrap()
                .degree(),
            Some(2)
        );
        // φ(t) = 0 gives a degenerate matrix
        let d = alexander_polynomial(&p, &ints(&[0, 1, 0])).unwrap();
        assert!(d.degenerate);
        assert!(oracle_rank(&p.relators, &ints(&[0, 1, 0])).is_err());
    }

    #[test]
    fn khramtsov_gbs_presentation() {
        // a, b, t with a^4 b^-2 and t^-1 b^-1 t b
        let rels = [w(&[1, 1, 1, 1, -2, -2]), w(&[-3, -2, 3, 2])];
        for t in [0, 1] {
            assert_eq!(oracle_rank(&rels, &ints(&[1, 2, t])).unwrap(), 4);
        }
        assert_eq!(oracle_rank(&rels, &ints(&[2, 4, 1])).unwrap(), 7);
    }

    #[test]
    fn shape_errors() {
        assert!(matches!(
            alexander_of(&[], &ints(&[1, 1])),
            Err(Error::Precondition(_))
        ));
    }

    proptest! {
        #[test]
        fn oracle_matches_hierarchy(seed in 0u64..10_000, n in 2usize..5) {
            let mut rng = corpus::rng(seed);
            let a = corpus::random_triangular_automorphism(&mut rng, n, 4);
            let torus = UpgTorus::from_automorphism(&a).unwrap();
            let lattice = crate::torus::character_lattice(&torus.presentation);
            let values = lattice.character(&corpus::random_vector(&mut rng, lattice.b1, 4));
            prop_assume!(values.iter().any(|v| !v.is_zero()));
            let c = classify(&torus, &CharacterClass::from_bigints(&values)).unwrap();
            if let Some(r) = c.verdict.rank() {
                prop_assert_eq!(oracle_rank(&torus.presentation.relators, &c.character).unwrap(), r);
            }
        }

        #[test]
        fn invariant_under_relator_moves(seed in 0u64..10_000, rot in 0usize..20, flip in any::<bool>()) {
            let mut rng = corpus::rng(seed);
            let a = corpus::random_triangular_automorphism(&mut rng, 3, 3);
            let p = MappingTorusPresentation::standard(&a);
            let mut values = vec![BigInt::zero(); 4];
            values[3] = BigInt::one();
            let base = alexander_of(&p.relators, &values).unwrap();
            let moved: Vec<Word> = p
                .relators
                .iter()
                .map(|r| {
                    let l = r.letters();
                    let k = if l.is_empty() { 0 } else { rot % l.len() };
                    let c = Word::from_letters(l[k..].iter().chain(&l[..k]).copied());
                    if flip { c.inverse() } else { c }
                })
                .collect();
            prop_assert_eq!(alexander_of(&moved, &values).unwrap(), base);
        }
    }
}
