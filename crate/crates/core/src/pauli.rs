//! Symplectic algebra of n-qubit Pauli strings.
//!
//! A [`PauliString`] stores one X bit and one Z bit per qubit, packed into `u64`
//! masks with qubit `q` at bit `q`. Per-qubit factor: `(0,0)=I`, `(1,0)=X`,
//! `(1,1)=Y`, `(0,1)=Z`. Hermitian strings carry no phase; phases produced by
//! products live in [`Phase`] and [`ScaledPauli`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_QUBITS: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
}

#[inline]
fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
fn check_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_QUBITS {
        Err(Error::QubitCount(n))
    } else {
        Ok(())
    }
}

impl PauliString {
    pub fn new(n: usize, x_bits: u64, z_bits: u64) -> Result<Self> {
        check_qubits(n)?;
        Ok(Self {
            n,
            x: x_bits & mask(n),
            z: z_bits & mask(n),
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new(n, 0, 0)
    }

    /// Single-qubit factor `label` (one of `IXYZ`) on `qubit`, identity elsewhere.
    pub fn single(n: usize, qubit: usize, label: char) -> Result<Self> {
        check_qubits(n)?;
        if qubit >= n {
            return Err(Error::PauliLength {
                expected: n,
                found: qubit + 1,
            });
        }
        let (x, z) = bits_of(label).ok_or(Error::InvalidPauliChar {
            ch: label,
            position: qubit,
        })?;
        Self::new(n, (x as u64) << qubit, (z as u64) << qubit)
    }

    /// Parses `text` and checks that it covers exactly `n` qubits.
    pub fn parse_n(text: &str, n: usize) -> Result<Self> {
        let p: Self = text.parse()?;
        if p.n != n {
            return Err(Error::PauliLength {
                expected: n,
                found: p.n,
            });
        }
        Ok(p)
    }

    /// Pauli string with canonical index `index` in `0..4^n` (index 0 is the identity).
    pub fn from_index(n: usize, index: u128) -> Result<Self> {
        check_qubits(n)?;
        let (mut x, mut z) = (0u64, 0u64);
        let mut rest = index;
        for q in (0..n).rev() {
            let (xb, zb) = match rest % 4 {
                0 => (0, 0),
                1 => (1, 0),
                2 => (1, 1),
                _ => (0, 1),
            };
            x |= xb << q;
            z |= zb << q;
            rest /= 4;
        }
        Self::new(n, x, z)
    }

    /// Inverse of [`PauliString::from_index`].
    pub fn index(&self) -> u128 {
        (0..self.n).fold(0u128, |acc, q| acc * 4 + self.code(q) as u128)
    }

    /// All `4^n - 1` non-identity strings in canonical order.
    pub fn all_non_identity(n: usize) -> Result<Vec<Self>> {
        check_qubits(n)?;
        if n > 12 {
            return Err(Error::QubitCount(n));
        }
        (1..(1u128 << (2 * n)))
            .map(|k| Self::from_index(n, k))
            .collect()
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn x_bits(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn z_bits(&self) -> u64 {
        self.z
    }

    #[inline]
    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Factor on `qubit` as one of `IXYZ`.
    pub fn factor(&self, qubit: usize) -> char {
        ['I', 'X', 'Y', 'Z'][self.code(qubit) as usize]
    }

    /// Position of the factor in the `I < X < Y < Z` ordering.
    #[inline]
    fn code(&self, qubit: usize) -> u8 {
        match ((self.x >> qubit) & 1, (self.z >> qubit) & 1) {
            (0, 0) => 0,
            (1, 0) => 1,
            (1, 1) => 2,
            _ => 3,
        }
    }

    #[inline]
    fn check_same(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            Err(Error::DimensionMismatch {
                left: self.n,
                right: other.n,
            })
        } else {
            Ok(())
        }
    }

    /// Symplectic form; 0 means the strings commute. Caller guarantees equal qubit counts.
    #[inline]
    pub(crate) fn symplectic(&self, other: &Self) -> u32 {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) & 1
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &Self) -> bool {
        self.symplectic(other) == 0
    }

    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.commutes_unchecked(other))
    }

    pub fn anticommutes(&self, other: &Self) -> Result<bool> {
        self.commutes(other).map(|c| !c)
    }

    /// Product `self * other` as an exact phase and a Hermitian string.
    pub fn mul_phased(&self, other: &Self) -> Result<(Phase, PauliString)> {
        self.check_same(other)?;
        Ok(self.mul_unchecked(other))
    }

    /// With `P = i^{x.z} X^x Z^z`: `(X^a Z^b)(X^c Z^d) = (-1)^{b.c} X^{a+c} Z^{b+d}`.
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Self) -> (Phase, PauliString) {
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let e = (self.x & self.z).count_ones() as i64 + (other.x & other.z).count_ones() as i64
            + 2 * (self.z & other.x).count_ones() as i64
            - (x & z).count_ones() as i64;
        (
            Phase::from_exponent(e),
            PauliString { n: self.n, x, z },
        )
    }

    /// `‖P‖_F² = 2^n` for every Pauli string.
    #[inline]
    pub fn frobenius_norm_sq(&self) -> u128 {
        1u128 << self.n
    }
}

fn bits_of(label: char) -> Option<(bool, bool)> {
    match label {
        'I' => Some((false, false)),
        'X' => Some((true, false)),
        'Y' => Some((true, true)),
        'Z' => Some((false, true)),
        _ => None,
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.index().cmp(&other.index()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let n = s.chars().count();
        check_qubits(n).map_err(|_| Error::PauliLength {
            expected: n.clamp(1, MAX_QUBITS),
            found: n,
        })?;
        let (mut x, mut z) = (0u64, 0u64);
        for (q, ch) in s.chars().enumerate() {
            let (xb, zb) = bits_of(ch).ok_or(Error::InvalidPauliChar { ch, position: q })?;
            x |= (xb as u64) << q;
            z |= (zb as u64) << q;
        }
        Self::new(n, x, z)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n {
            write!(f, "{}", self.factor(q))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

/// A power of `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    #[inline]
    pub fn from_exponent(e: i64) -> Self {
        Phase(e.rem_euclid(4) as u8)
    }

    #[inline]
    pub fn exponent(self) -> u8 {
        self.0
    }

    pub fn to_complex<T: Scalar>(self) -> Complex<T> {
        let (one, zero) = (T::one(), T::zero());
        match self.0 {
            0 => Complex::new(one, zero),
            1 => Complex::new(zero, one),
            2 => Complex::new(-one, zero),
            _ => Complex::new(zero, -one),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;

    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl Neg for Phase {
    type Output = Phase;

    fn neg(self) -> Phase {
        self * Phase::MINUS_ONE
    }
}

/// `coefficient * base`.
#[derive(Clone, PartialEq, Debug)]
pub struct ScaledPauli<T> {
    pub base: PauliString,
    pub coefficient: Complex<T>,
}

impl<T: Scalar> ScaledPauli<T> {
    pub fn new(base: PauliString, coefficient: Complex<T>) -> Self {
        Self { base, coefficient }
    }

    pub fn unit(base: PauliString) -> Self {
        Self::new(base, Complex::new(T::one(), T::zero()))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.re == T::zero() && self.coefficient.im == T::zero()
    }

    /// `[g, self]`, or `None` when it vanishes.
    pub fn commutator_from_left(&self, g: &PauliString) -> Result<Option<ScaledPauli<T>>> {
        g.check_same(&self.base)?;
        if g.commutes_unchecked(&self.base) || self.is_zero() {
            return Ok(None);
        }
        // Anticommuting: g·s − s·g = 2·g·s.
        let (phase, base) = g.mul_unchecked(&self.base);
        let two = T::from_int(2);
        let c = self.coefficient.clone() * phase.to_complex::<T>() * two;
        Ok(Some(ScaledPauli::new(base, c)))
    }

    /// `|coefficient|² · 2^n`.
    pub fn frobenius_norm_sq(&self) -> T {
        let c = &self.coefficient;
        (c.re.clone() * c.re.clone() + c.im.clone() * c.im.clone()) * pow2::<T>(self.base.n)
    }
}

fn pow2<T: Scalar>(n: usize) -> T {
    (0..n).fold(T::one(), |acc, _| acc * T::from_int(2))
}

pub fn commutes(a: &PauliString, b: &PauliString) -> Result<bool> {
    a.commutes(b)
}

/// `a · b` with its phase folded into the coefficient.
pub fn multiply<T: Scalar>(a: &PauliString, b: &PauliString) -> Result<ScaledPauli<T>> {
    let (phase, base) = a.mul_phased(b)?;
    Ok(ScaledPauli::new(base, phase.to_complex()))
}

/// `‖[a, b]‖_F²`: 0 when `a` and `b` commute, `4·2^n` otherwise.
pub fn commutator_norm_sq(a: &PauliString, b: &PauliString) -> Result<u128> {
    let inner = ScaledPauli::<i64>::unit(*b).commutator_from_left(a)?;
    Ok(inner.map_or(0, |s| s.frobenius_norm_sq() as u128))
}

/// `‖[g_k, [g_j, o]]‖_F²`, evaluated through nested symbolic commutators.
pub fn double_commutator_norm_sq(
    g_k: &PauliString,
    g_j: &PauliString,
    o: &PauliString,
) -> Result<u128> {
    g_k.check_same(g_j)?;
    let inner = ScaledPauli::<i64>::unit(*o).commutator_from_left(g_j)?;
    let outer = match inner {
        Some(s) => s.commutator_from_left(g_k)?,
        None => None,
    };
    Ok(outer.map_or(0, |s| s.frobenius_norm_sq() as u128))
}

/// Sparse linear combination `Σ c_P · P` over Pauli strings of one qubit count.
///
/// Coefficients are relative to whatever normalization the caller chooses for the
/// basis elements; [`PauliSum::coefficient_norm_sq`] is `Σ |c_P|²`, which equals the
/// Frobenius norm squared when the basis is `P / √(2^n)`.
#[derive(Clone, PartialEq, Debug)]
pub struct PauliSum<T> {
    n: usize,
    terms: BTreeMap<PauliString, Complex<T>>,
}

impl<T: Scalar> PauliSum<T> {
    pub fn zero(n: usize) -> Result<Self> {
        check_qubits(n)?;
        Ok(Self {
            n,
            terms: BTreeMap::new(),
        })
    }

    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, Complex<T>)>,
    {
        let mut sum = Self::zero(n)?;
        for (p, c) in terms {
            sum.add_term(p, c)?;
        }
        Ok(sum)
    }

    /// Real linear combination.
    pub fn from_real<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, T)>,
    {
        Self::from_terms(n, terms.into_iter().map(|(p, c)| (p, Complex::new(c, T::zero()))))
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, p: &PauliString) -> Complex<T> {
        self.terms
            .get(p)
            .cloned()
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn add_term(&mut self, p: PauliString, c: Complex<T>) -> Result<()> {
        if p.n != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: p.n,
            });
        }
        let zero = Complex::new(T::zero(), T::zero());
        let entry = self.terms.entry(p).or_insert_with(|| zero.clone());
        *entry = entry.clone() + c;
        if *entry == zero {
            self.terms.remove(&p);
        }
        Ok(())
    }

    /// `[p, self]` with unnormalized `p`, expanded bilinearly.
    pub fn commutator_from_left(&self, p: &PauliString) -> Result<Self> {
        let mut out = Self::zero(self.n)?;
        for (q, c) in &self.terms {
            if let Some(s) = ScaledPauli::new(*q, c.clone()).commutator_from_left(p)? {
                out.add_term(s.base, s.coefficient)?;
            }
        }
        Ok(out)
    }

    pub fn scale(&self, factor: &T) -> Self {
        Self {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| (*p, c.clone() * factor.clone()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        let mut out = self.clone();
        for (p, c) in &other.terms {
            out.add_term(*p, c.clone())?;
        }
        Ok(out)
    }

    /// `Σ |c_P|²`.
    pub fn coefficient_norm_sq(&self) -> T {
        self.terms.values().fold(T::zero(), |acc, c| {
            acc + c.re.clone() * c.re.clone() + c.im.clone() * c.im.clone()
        })
    }

    /// `Σ conj(a_P) b_P`.
    pub fn inner(&self, other: &Self) -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        self.terms.iter().fold(zero, |acc, (p, a)| match other.terms.get(p) {
            Some(b) => acc + a.clone().conj() * b.clone(),
            None => acc,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    fn random_pauli(rng: &mut impl Rng, n: usize) -> PauliString {
        PauliString::from_index(n, rng.gen_range(0..(1u128 << (2 * n)))).unwrap()
    }

    fn random_non_identity(rng: &mut impl Rng, n: usize) -> PauliString {
        PauliString::from_index(n, rng.gen_range(1..(1u128 << (2 * n)))).unwrap()
    }

    #[test]
    fn text_roundtrip_and_bits() {
        let s = p("XYZIX");
        assert_eq!(s.to_string(), "XYZIX");
        assert_eq!(s.x_bits(), 0b10011);
        assert_eq!(s.z_bits(), 0b00110);
        assert_eq!(s.weight(), 4);
        assert_eq!(PauliString::from_index(5, s.index()).unwrap(), s);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            "ZIIIQ".parse::<PauliString>(),
            Err(Error::InvalidPauliChar { ch: 'Q', position: 4 })
        );
        assert!(matches!(
            PauliString::parse_n("ZII", 5),
            Err(Error::PauliLength { expected: 5, found: 3 })
        ));
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn commutation_examples() {
        assert!(!commutes(&p("X"), &p("Z")).unwrap());
        assert!(commutes(&p("XX"), &p("YY")).unwrap());
        assert!(!commutes(&p("XIIII"), &p("ZIIII")).unwrap());
        assert!(matches!(
            commutes(&p("X"), &p("XX")),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn multiplication_examples() {
        let xy = multiply::<i64>(&p("X"), &p("Y")).unwrap();
        assert_eq!(xy.base, p("Z"));
        assert_eq!(xy.coefficient, Complex::new(0, 1));

        let xx = multiply::<i64>(&p("X"), &p("X")).unwrap();
        assert!(xx.base.is_identity());
        assert_eq!(xx.coefficient, Complex::new(1, 0));

        let prod = multiply::<i64>(&p("XZ"), &p("YZ")).unwrap();
        assert_eq!(prod.base, p("ZI"));
        assert_eq!(prod.coefficient, Complex::new(0, 1));
    }

    #[test]
    fn product_matches_dense_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..300 {
            let n = rng.gen_range(1..=3);
            let (a, b) = (random_pauli(&mut rng, n), random_pauli(&mut rng, n));
            let prod = multiply::<f64>(&a, &b).unwrap();
            let expected = dense::pauli_matrix(&a) * dense::pauli_matrix(&b);
            let got = dense::pauli_matrix(&prod.base) * prod.coefficient;
            assert!((expected - got).norm() < 1e-12, "{a} * {b}");
        }
    }

    #[test]
    fn commutator_norm_examples() {
        assert_eq!(commutator_norm_sq(&p("X"), &p("X")).unwrap(), 0);
        assert_eq!(commutator_norm_sq(&p("X"), &p("Z")).unwrap(), 8);
        assert_eq!(commutator_norm_sq(&p("XIIII"), &p("ZIIII")).unwrap(), 128);
    }

    #[test]
    fn commutator_norm_exhaustive_against_dense() {
        for n in 1..=3 {
            let all: Vec<_> = (0..(1u128 << (2 * n)))
                .map(|k| PauliString::from_index(n, k).unwrap())
                .collect();
            let mats: Vec<_> = all.iter().map(dense::pauli_matrix).collect();
            for (i, a) in all.iter().enumerate() {
                for (j, b) in all.iter().enumerate() {
                    let dense_norm = dense::frobenius_norm_sq(&dense::commutator(&mats[i], &mats[j]));
                    let exact = commutator_norm_sq(a, b).unwrap();
                    assert_eq!(dense_norm.round() as u128, exact, "{a} {b}");
                    assert!((dense_norm - exact as f64).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn double_commutator_examples() {
        let o = p("ZIIII");
        assert_eq!(double_commutator_norm_sq(&p("YIIII"), &p("XIIII"), &o).unwrap(), 0);
        assert_eq!(double_commutator_norm_sq(&p("XXIII"), &p("XIIII"), &o).unwrap(), 512);
        assert_eq!(double_commutator_norm_sq(&p("X"), &p("X"), &p("X")).unwrap(), 0);
        assert!(double_commutator_norm_sq(&p("X"), &p("XX"), &p("X")).is_err());
        assert!(double_commutator_norm_sq(&p("XX"), &p("XX"), &p("X")).is_err());
    }

    #[test]
    fn double_commutator_matches_dense_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..1000 {
            let n = rng.gen_range(1..=3);
            let (k, j, o) = (
                random_pauli(&mut rng, n),
                random_pauli(&mut rng, n),
                random_pauli(&mut rng, n),
            );
            let (mk, mj, mo) = (dense::pauli_matrix(&k), dense::pauli_matrix(&j), dense::pauli_matrix(&o));
            let dense_norm = dense::frobenius_norm_sq(&dense::commutator(&mk, &dense::commutator(&mj, &mo)));
            assert_eq!(
                dense_norm.round() as u128,
                double_commutator_norm_sq(&k, &j, &o).unwrap(),
                "{k} {j} {o}"
            );
        }
    }

    #[test]
    fn double_commutator_under_anticommuting_hypothesis() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 5;
        let mut checked = 0;
        while checked < 10_000 {
            let o = random_non_identity(&mut rng, n);
            let gj = random_non_identity(&mut rng, n);
            let gk = random_non_identity(&mut rng, n);
            if o.commutes_unchecked(&gj) || o.commutes_unchecked(&gk) {
                continue;
            }
            let v = double_commutator_norm_sq(&gk, &gj, &o).unwrap();
            let expected = if gk.commutes_unchecked(&gj) { 1u128 << (n + 4) } else { 0 };
            assert_eq!(v, expected);
            checked += 1;
        }
    }

    #[test]
    fn pauli_sum_commutator_cancels_and_collects() {
        // [X, Y + Z] = 2iZ - 2iY
        let s = PauliSum::<i64>::from_real(1, [(p("Y"), 1), (p("Z"), 1)]).unwrap();
        let c = s.commutator_from_left(&p("X")).unwrap();
        assert_eq!(c.coefficient(&p("Z")), Complex::new(0, 2));
        assert_eq!(c.coefficient(&p("Y")), Complex::new(0, -2));
        assert_eq!(c.coefficient_norm_sq(), 8);

        let mut t = PauliSum::<i64>::zero(1).unwrap();
        t.add_term(p("X"), Complex::new(1, 0)).unwrap();
        t.add_term(p("X"), Complex::new(-1, 0)).unwrap();
        assert!(t.is_empty());
    }

    #[test]
    fn canonical_order_is_text_lexicographic() {
        let all = PauliString::all_non_identity(2).unwrap();
        let texts: Vec<String> = all.iter().map(|s| s.to_string()).collect();
        let mut sorted = texts.clone();
        sorted.sort_by_key(|t| t.replace('I', "0").replace('X', "1").replace('Y', "2").replace('Z', "3"));
        assert_eq!(texts, sorted);
        assert_eq!(all.len(), 15);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        (0u128..(1u128 << (2 * n))).prop_map(move |k| PauliString::from_index(n, k).unwrap())
    }

    proptest! {
        #[test]
        fn commute_or_anticommute((a, b) in (1usize..=6).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))) {
            let (pa, sa) = multiply::<i64>(&a, &b).map(|s| (s.base, s.coefficient)).unwrap();
            let (pb, sb) = multiply::<i64>(&b, &a).map(|s| (s.base, s.coefficient)).unwrap();
            prop_assert_eq!(pa, pb);
            if commutes(&a, &b).unwrap() {
                prop_assert_eq!(sa, sb);
            } else {
                prop_assert_eq!(sa, -sb);
            }
        }

        #[test]
        fn product_is_associative(
            (a, b, c) in (1usize..=6).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
        ) {
            let ab = multiply::<i64>(&a, &b).unwrap();
            let ab_c = multiply::<i64>(&ab.base, &c).unwrap();
            let bc = multiply::<i64>(&b, &c).unwrap();
            let a_bc = multiply::<i64>(&a, &bc.base).unwrap();
            prop_assert_eq!(ab_c.base, a_bc.base);
            prop_assert_eq!(ab.coefficient * ab_c.coefficient, bc.coefficient * a_bc.coefficient);
        }

        #[test]
        fn self_product_is_identity(a in (1usize..=8).prop_flat_map(arb_pauli)) {
            let sq = multiply::<i64>(&a, &a).unwrap();
            prop_assert!(sq.base.is_identity());
            prop_assert_eq!(sq.coefficient, Complex::new(1, 0));
        }
    }
}
