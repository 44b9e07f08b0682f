//! Free-group words, automorphisms given by generator images, their
//! abelianization and unipotence analysis.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

/// A freely reduced word. Letter `+i` is generator `i` (1-based), `-i` its
/// inverse. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<i32>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// The one-letter word `x_i^{±1}`.
    pub fn letter(letter: i32) -> Self {
        assert!(letter != 0, "letter 0 is not a generator");
        Word(vec![letter])
    }

    pub fn generator(i: usize) -> Self {
        Word::letter(i as i32)
    }

    /// Freely reduces a raw letter sequence, checking every index against `rank`.
    pub fn reduce_word(raw: &[i32], rank: usize) -> Result<Word> {
        for &l in raw {
            let idx = l.unsigned_abs() as usize;
            if l == 0 || idx > rank {
                return Err(Error::GeneratorOutOfRange { index: idx, rank });
            }
        }
        Ok(Word::from_letters(raw.iter().copied()))
    }

    /// Freely reduces without a range check.
    pub fn from_letters(letters: impl IntoIterator<Item = i32>) -> Word {
        let mut out: Vec<i32> = Vec::new();
        for l in letters {
            debug_assert!(l != 0);
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn letters(&self) -> &[i32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        Word::from_letters((0..k.unsigned_abs()).flat_map(|_| base.0.iter().copied()))
    }

    pub fn product<'a>(words: impl IntoIterator<Item = &'a Word>) -> Word {
        Word::from_letters(words.into_iter().flat_map(|w| w.0.iter().copied()))
    }

    /// Largest generator index occurring (0 for the identity).
    pub fn max_generator(&self) -> usize {
        self.0
            .iter()
            .map(|l| l.unsigned_abs() as usize)
            .max()
            .unwrap_or(0)
    }

    /// Shortest word in the conjugacy class.
    pub fn cyclic_reduce(&self) -> Word {
        let s = &self.0;
        let (mut i, mut j) = (0, s.len());
        while j >= i + 2 && s[i] == -s[j - 1] {
            i += 1;
            j -= 1;
        }
        Word(s[i..j].to_vec())
    }

    /// Exponent-sum vector of length `rank`.
    pub fn exponent_sums(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for &l in &self.0 {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Replaces generator `i` by `images[i-1]` and reduces.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out: Vec<i32> = Vec::new();
        let mut push = |l: i32| {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        };
        for &l in &self.0 {
            let img = &images[l.unsigned_abs() as usize - 1].0;
            if l > 0 {
                img.iter().for_each(|&m| push(m));
            } else {
                img.iter().rev().for_each(|&m| push(-m));
            }
        }
        Word(out)
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&l| {
                let name = &names[l.unsigned_abs() as usize - 1];
                if l > 0 {
                    name.clone()
                } else {
                    format!("{name}^-1")
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (k, &l) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            if l > 0 {
                write!(f, "x{l}")?;
            } else {
                write!(f, "x{}^-1", -l)?;
            }
        }
        Ok(())
    }
}

/// Square matrix of exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        IntMatrix { n, rows }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        IntMatrix { n, rows }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().flatten().all(Zero::is_zero)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(BigInt::zero(), |acc, k| {
                            acc + &self.rows[i][k] * &other.rows[k][j]
                        })
                    })
                    .collect()
            })
            .collect();
        IntMatrix { n, rows }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        IntMatrix { n: self.n, rows }
    }

    pub fn pow(&self, k: u64) -> IntMatrix {
        let mut result = IntMatrix::identity(self.n);
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        result
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.rows.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Characteristic polynomial `det(xI - M)` via Faddeev-LeVerrier; every
    /// division is exact over the integers.
    pub fn charpoly(&self) -> IntPoly {
        let n = self.n;
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[n] = BigInt::one();
        let mut m = IntMatrix {
            n,
            rows: vec![vec![BigInt::zero(); n]; n],
        };
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            m = self.mul(&m);
            for i in 0..n {
                m.rows[i][i] += &coeffs[n - k + 1];
            }
            let am = self.mul(&m);
            let trace: BigInt = (0..n).map(|i| am.rows[i][i].clone()).sum();
            coeffs[n - k] = -trace / BigInt::from(k);
        }
        IntPoly::new(coeffs)
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| {
                let cells: Vec<String> = r.iter().map(ToString::to_string).collect();
                format!("[{}]", cells.join(","))
            })
            .collect();
        write!(f, "[{}]", rows.join(","))
    }
}

/// How invertibility of a [`FreeAutomorphism`] was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    /// Back-substitution along the generator order succeeds.
    Triangular,
    /// A user-supplied inverse composes to the identity on both sides.
    InverseChecked,
    /// Composition of verified automorphisms.
    Composite,
    /// Only the abelianization determinant was checked.
    Unverified,
}

/// An endomorphism of `F_n` given by the images of the generators, validated
/// as far as is decidable cheaply (see [`Validity`]).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAutomorphism {
    rank: usize,
    images: Vec<Word>,
    validity: Validity,
}

impl FreeAutomorphism {
    pub fn new(rank: usize, images: Vec<Word>) -> Result<Self> {
        let mut a = Self::unchecked(rank, images)?;
        let det = a.abelianization_matrix().det();
        if det.abs() != BigInt::one() {
            return Err(Error::NotUnimodular(det.to_string()));
        }
        if a.is_triangular() {
            a.validity = Validity::Triangular;
        }
        Ok(a)
    }

    /// Validates against an explicit inverse.
    pub fn with_inverse(rank: usize, images: Vec<Word>, inverse: Vec<Word>) -> Result<Self> {
        let mut a = Self::new(rank, images)?;
        let b = Self::unchecked(rank, inverse)?;
        let id = FreeAutomorphism::identity(rank);
        if a.compose(&b)?.images != id.images || b.compose(&a)?.images != id.images {
            return Err(Error::NotAutomorphism(
                "the supplied inverse does not compose to the identity".into(),
            ));
        }
        if a.validity == Validity::Unverified {
            a.validity = Validity::InverseChecked;
        }
        Ok(a)
    }

    fn unchecked(rank: usize, images: Vec<Word>) -> Result<Self> {
        if rank == 0 {
            return Err(Error::NotAutomorphism("rank must be positive".into()));
        }
        if images.len() != rank {
            return Err(Error::RankMismatch {
                left: rank,
                right: images.len(),
            });
        }
        for w in &images {
            if w.max_generator() > rank {
                return Err(Error::GeneratorOutOfRange {
                    index: w.max_generator(),
                    rank,
                });
            }
        }
        Ok(FreeAutomorphism {
            rank,
            images,
            validity: Validity::Unverified,
        })
    }

    pub fn identity(rank: usize) -> Self {
        FreeAutomorphism {
            rank,
            images: (1..=rank).map(Word::generator).collect(),
            validity: Validity::Triangular,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Word {
        &self.images[i - 1]
    }

    pub fn validity(&self) -> Validity {
        self.validity
    }

    /// Each image contains exactly one letter of its own generator and
    /// otherwise only earlier generators.
    fn is_triangular(&self) -> bool {
        self.images.iter().enumerate().all(|(k, w)| {
            let i = (k + 1) as u32;
            let own = w.letters().iter().filter(|l| l.unsigned_abs() == i).count();
            own == 1 && w.letters().iter().all(|l| l.unsigned_abs() <= i)
        })
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.max_generator() > self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: w.max_generator(),
            });
        }
        Ok(w.substitute(&self.images))
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &FreeAutomorphism) -> Result<FreeAutomorphism> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let images = other
            .images
            .iter()
            .map(|w| w.substitute(&self.images))
            .collect();
        let validity = match (self.validity, other.validity) {
            (Validity::Unverified, _) | (_, Validity::Unverified) => Validity::Unverified,
            _ => Validity::Composite,
        };
        let mut out = FreeAutomorphism {
            rank: self.rank,
            images,
            validity,
        };
        if out.is_triangular() {
            out.validity = Validity::Triangular;
        }
        Ok(out)
    }

    pub fn power(&self, k: u64) -> FreeAutomorphism {
        let mut out = FreeAutomorphism::identity(self.rank);
        for _ in 0..k {
            out = self.compose(&out).expect("equal ranks");
        }
        out
    }

    /// Column `i` is the exponent-sum vector of the image of `x_i`.
    pub fn abelianization_matrix(&self) -> IntMatrix {
        let n = self.rank;
        let cols: Vec<Vec<i64>> = self.images.iter().map(|w| w.exponent_sums(n)).collect();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(cols[j][i])).collect())
            .collect();
        IntMatrix::from_rows(rows)
    }
}

impl fmt::Display for FreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, w) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x{} -> {}", k + 1, w)?;
        }
        Ok(())
    }
}

fn euler_phi(mut m: usize) -> usize {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Least `k >= 1` with `(M^k - I)^n = 0`, or `None` when some eigenvalue is
/// not a root of unity.
///
/// The characteristic polynomial is stripped of cyclotomic factors `Φ_m` for
/// every `m` with `φ(m) <= n`; these are the only cyclotomic polynomials that
/// can divide a degree-`n` polynomial. `k` is the lcm of the `m` that occur.
pub fn least_unipotent_power(m: &IntMatrix) -> Result<Option<u64>> {
    let det = m.det();
    if det.abs() != BigInt::one() {
        return Err(Error::NotUnimodular(det.to_string()));
    }
    let n = m.dim();
    if n == 0 {
        return Ok(Some(1));
    }
    let mut rest = m.charpoly();
    let mut k: u64 = 1;
    // φ(m) >= sqrt(m/2), so φ(m) <= n forces m <= 2n².
    let bound = 2 * n * n + 2;
    let orders: Vec<usize> = (1..=bound).filter(|&m| euler_phi(m) <= n).collect();
    let cyclotomics = IntPoly::cyclotomics_up_to(*orders.last().unwrap());
    for order in orders {
        let phi = &cyclotomics[order - 1];
        let mut found = false;
        while let Some(q) = rest.exact_div(phi) {
            rest = q;
            found = true;
        }
        if found {
            k = k.lcm(&(order as u64));
        }
    }
    if rest.degree() != Some(0) {
        return Ok(None);
    }
    let nil = m.pow(k).sub(&IntMatrix::identity(n)).pow(n as u64);
    if !nil.is_zero() {
        return Err(Error::Internal(format!(
            "(M^{k} - I)^{n} is not zero although every eigenvalue is a {k}-th root of unity"
        )));
    }
    Ok(Some(k))
}

/// Heuristic growth data for `α^k(x_i)`, `k = 1..iterations`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrowthEstimate {
    /// Estimated polynomial degree of the cyclically reduced lengths.
    pub degree: u32,
    /// Lengths exploded past the cap; growth looks exponential.
    pub exponential_suspected: bool,
    /// Max over generators of the cyclically reduced length of `α^k(x_i)`.
    pub lengths: Vec<usize>,
    pub heuristic: bool,
}

const GROWTH_LENGTH_CAP: usize = 200_000;

/// Fits the dominant polynomial degree of the cyclically reduced lengths of
/// `α^k(x_i)`. Not a certificate of polynomial growth.
pub fn growth_degree_estimate(a: &FreeAutomorphism, iterations: usize) -> Result<GrowthEstimate> {
    if iterations < 4 {
        return Err(Error::Precondition(
            "growth estimate needs at least 4 iterations".into(),
        ));
    }
    let mut current: Vec<Word> = (1..=a.rank()).map(Word::generator).collect();
    let mut per_gen: Vec<Vec<i64>> = vec![Vec::new(); a.rank()];
    let mut lengths = Vec::new();
    let mut exploded = false;
    for _ in 0..iterations {
        current = current.iter().map(|w| w.substitute(a.images())).collect();
        let lens: Vec<usize> = current.iter().map(|w| w.cyclic_reduce().len()).collect();
        for (g, &l) in lens.iter().enumerate() {
            per_gen[g].push(l as i64);
        }
        let max = lens.iter().copied().max().unwrap_or(0);
        lengths.push(max);
        if current.iter().any(|w| w.len() > GROWTH_LENGTH_CAP) {
            exploded = true;
            break;
        }
    }
    if exploded {
        return Ok(GrowthEstimate {
            degree: u32::MAX,
            exponential_suspected: true,
            lengths,
            heuristic: true,
        });
    }
    let degree = per_gen
        .iter()
        .map(|seq| sequence_degree(seq))
        .max()
        .unwrap_or(0);
    Ok(GrowthEstimate {
        degree,
        exponential_suspected: false,
        lengths,
        heuristic: true,
    })
}

/// Smallest `d` whose `(d+1)`-th finite differences vanish on the last
/// three available entries; falls back to a log-ratio estimate.
fn sequence_degree(seq: &[i64]) -> u32 {
    let mut diffs = seq.to_vec();
    let mut d = 0u32;
    loop {
        let next: Vec<i64> = diffs.windows(2).map(|w| w[1] - w[0]).collect();
        if next.len() < 2 {
            break;
        }
        let tail = &next[next.len().saturating_sub(3)..];
        if tail.iter().all(|&x| x == 0) {
            return d;
        }
        d += 1;
        diffs = next;
    }
    let last = *seq.last().unwrap_or(&1) as f64;
    let mid = seq[seq.len() / 2 - 1].max(1) as f64;
    let ratio = (seq.len() as f64) / (seq.len() / 2) as f64;
    ((last / mid).ln() / ratio.ln()).round().max(0.0) as u32
}

/// Integer matrix entries as `i64`, failing on overflow.
pub fn to_i64(x: &BigInt) -> Result<i64> {
    x.to_i64()
        .ok_or_else(|| Error::Internal(format!("integer {x} does not fit in 64 bits")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[i32]) -> Word {
        Word::from_letters(letters.iter().copied())
    }

    fn aut(images: &[&[i32]]) -> FreeAutomorphism {
        FreeAutomorphism::new(images.len(), images.iter().map(|l| w(l)).collect()).unwrap()
    }

    #[test]
    fn reduce_examples() {
        assert_eq!(Word::reduce_word(&[1, -1], 1).unwrap(), Word::identity());
        assert_eq!(Word::reduce_word(&[1, 2, -2, 1], 2).unwrap(), w(&[1, 1]));
        assert_eq!(Word::reduce_word(&[2, -1, 1, -2, 3], 3).unwrap(), w(&[3]));
        assert!(matches!(
            Word::reduce_word(&[4], 3),
            Err(Error::GeneratorOutOfRange { index: 4, rank: 3 })
        ));
        assert!(Word::reduce_word(&[0], 3).is_err());
    }

    #[test]
    fn apply_examples() {
        let a = aut(&[&[1], &[2, 1]]);
        assert_eq!(a.apply(&w(&[-2])).unwrap(), w(&[-1, -2]));
        assert_eq!(a.apply(&w(&[2, 2])).unwrap(), w(&[2, 1, 2, 1]));
        let id = FreeAutomorphism::identity(3);
        assert_eq!(id.apply(&w(&[3, -1, 2])).unwrap(), w(&[3, -1, 2]));
        assert!(a.apply(&w(&[3])).is_err());
    }

    #[test]
    fn compose_examples() {
        let swap = aut(&[&[2], &[1]]);
        assert_eq!(
            swap.compose(&swap).unwrap().images(),
            FreeAutomorphism::identity(2).images()
        );
        let a = aut(&[&[1], &[2, 1]]);
        assert_eq!(a.power(2).image(2), &w(&[2, 1, 1]));
        assert_eq!(a.compose(&FreeAutomorphism::identity(2)).unwrap(), a);
        assert!(a.compose(&FreeAutomorphism::identity(3)).is_err());
    }

    #[test]
    fn validity_levels() {
        assert_eq!(aut(&[&[1], &[2, 1]]).validity(), Validity::Triangular);
        assert_eq!(aut(&[&[2], &[1]]).validity(), Validity::Unverified);
        let swap =
            FreeAutomorphism::with_inverse(2, vec![w(&[2]), w(&[1])], vec![w(&[2]), w(&[1])])
                .unwrap();
        assert_eq!(swap.validity(), Validity::InverseChecked);
        assert!(
            FreeAutomorphism::with_inverse(2, vec![w(&[2]), w(&[1])], vec![w(&[1]), w(&[2])])
                .is_err()
        );
        assert!(matches!(
            FreeAutomorphism::new(2, vec![w(&[1, 1]), w(&[2])]),
            Err(Error::NotUnimodular(_))
        ));
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(
            FreeAutomorphism::identity(3).abelianization_matrix(),
            IntMatrix::identity(3)
        );
        assert_eq!(
            aut(&[&[1], &[2, 1]]).abelianization_matrix(),
            IntMatrix::from_i64(&[&[1, 1], &[0, 1]])
        );
        assert_eq!(
            aut(&[&[2], &[1]]).abelianization_matrix(),
            IntMatrix::from_i64(&[&[0, 1], &[1, 0]])
        );
    }

    #[test]
    fn unipotent_power_examples() {
        assert_eq!(
            least_unipotent_power(&IntMatrix::identity(3)).unwrap(),
            Some(1)
        );
        assert_eq!(
            least_unipotent_power(&IntMatrix::from_i64(&[&[0, 1], &[1, 0]])).unwrap(),
            Some(2)
        );
        assert_eq!(
            least_unipotent_power(&IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap(),
            None
        );
        assert!(least_unipotent_power(&IntMatrix::from_i64(&[&[2, 0], &[0, 1]])).is_err());
        // order 4 block and a swap block: lcm(4, 2) = 4
        let m = IntMatrix::from_i64(&[&[0, -1, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, 1, 0]]);
        assert_eq!(least_unipotent_power(&m).unwrap(), Some(4));
        // unipotent but not the identity
        let j = IntMatrix::from_i64(&[&[1, 1], &[0, 1]]);
        assert_eq!(least_unipotent_power(&j).unwrap(), Some(1));
        // order 6: companion matrix of x^2 - x + 1
        let c6 = IntMatrix::from_i64(&[&[0, -1], &[1, 1]]);
        assert_eq!(least_unipotent_power(&c6).unwrap(), Some(6));
    }

    #[test]
    fn charpoly_known() {
        let m = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(m.charpoly(), IntPoly::from_i64(&[1, -3, 1]));
        assert_eq!(m.det(), BigInt::one());
    }

    #[test]
    fn growth_examples() {
        let id = FreeAutomorphism::identity(2);
        assert_eq!(growth_degree_estimate(&id, 8).unwrap().degree, 0);
        let lin = aut(&[&[1], &[2, 1]]);
        let g = growth_degree_estimate(&lin, 8).unwrap();
        assert_eq!(g.degree, 1);
        assert_eq!(&g.lengths[..3], &[2, 3, 4]);
        let quad = aut(&[&[1], &[2, 1], &[3, 2]]);
        assert_eq!(growth_degree_estimate(&quad, 8).unwrap().degree, 2);
        let expo = aut(&[&[1, 2], &[1, 2, 2]]);
        let g = growth_degree_estimate(&expo, 40).unwrap();
        assert!(g.exponential_suspected || g.degree >= 3);
        assert!(growth_degree_estimate(&id, 3).is_err());
    }

    #[test]
    fn cyclic_reduction() {
        assert_eq!(w(&[-1, 2, 3, 1]).cyclic_reduce(), w(&[2, 3]));
        assert_eq!(w(&[1, -1]).cyclic_reduce(), Word::identity());
        assert_eq!(w(&[1, 2, -1]).cyclic_reduce(), w(&[2]));
    }
}
