//! Casimir-type identities for commutator norms over the normalized Pauli basis
//! of `su(d)`, `d = 2^n`, computed two independent ways.
//!
//! Basis elements are `G_P = P / √d` for the `d² − 1` non-identity Pauli strings,
//! so `Tr(G_P G_Q) = δ_PQ`. Observables are stored by their coordinates in this
//! basis; `ad_{G_P} = ad_P / √d` keeps every symbolic quantity a rational
//! function of the coordinates, which is what lets the symbolic route run over
//! exact rationals.
//!
//! Identities checked, for `O` in the span with Casimir eigenvalue `c`:
//! * `Σ_j ‖[G_j, O]‖² = c ‖O‖²`
//! * `Σ_{j,k} ‖[G_k, [G_j, O]]‖² = c² ‖O‖²`
//! * `Σ_j ‖[G_j, [G_j, O]]‖² ≥ c² ‖O‖² / (d² − 1)`
//! * `Σ_{j≠k} ‖[G_k, [G_j, O]]‖² ≤ c² ‖O‖² (d² − 2) / (d² − 1)`

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::dense;
use crate::error::{Error, Result};
use crate::pauli::{PauliString, PauliSum};
use crate::scalar::Scalar;
use crate::seeds;

/// Largest qubit count accepted by the symbolic routines.
pub const MAX_THEORY_QUBITS: usize = 6;
/// Largest qubit count for the dense cross-check.
pub const MAX_DENSE_QUBITS: usize = 3;

/// Relative tolerance for inequality checks.
pub const INEQUALITY_TOL: f64 = 1e-8;

/// The normalized Pauli basis of `su(2^n)` in canonical order.
#[derive(Clone, Debug)]
pub struct OrthonormalBasis {
    n: usize,
    elements: Vec<PauliString>,
}

impl OrthonormalBasis {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_THEORY_QUBITS {
            return Err(Error::QubitCount(n));
        }
        Ok(Self {
            n,
            elements: PauliString::all_non_identity(n)?,
        })
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.n
    }

    /// Hilbert-space dimension `d = 2^n`.
    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// `d² − 1`.
    #[inline]
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Unnormalized Pauli strings; element `j` is `elements()[j] / √d`.
    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    pub fn position(&self, p: &PauliString) -> Option<usize> {
        self.elements.binary_search(p).ok()
    }
}

/// `O = Σ_j o_j G_j` by its coordinates in [`OrthonormalBasis`] order.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableInAlgebra<T> {
    n: usize,
    coefficients: Vec<T>,
}

impl<T: Scalar> ObservableInAlgebra<T> {
    pub fn new(n: usize, coefficients: Vec<T>) -> Result<Self> {
        if n == 0 || n > MAX_THEORY_QUBITS {
            return Err(Error::QubitCount(n));
        }
        let expected = (1usize << (2 * n)) - 1;
        if coefficients.len() != expected {
            return Err(Error::ParameterLength {
                expected,
                found: coefficients.len(),
            });
        }
        Ok(Self { n, coefficients })
    }

    pub fn zero(n: usize) -> Result<Self> {
        Self::new(n, vec![T::zero(); (1usize << (2 * n)) - 1])
    }

    /// `weight · G_P` for a single basis element.
    pub fn basis_element(p: &PauliString, weight: T) -> Result<Self> {
        if p.is_identity() {
            return Err(Error::Identity("basis element"));
        }
        let mut o = Self::zero(p.qubits())?;
        let j = (p.index() - 1) as usize;
        o.coefficients[j] = weight;
        Ok(o)
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    /// `‖O‖_F² = Σ o_j²`.
    pub fn norm_sq(&self) -> T {
        self.coefficients
            .iter()
            .fold(T::zero(), |acc, c| acc + c.clone() * c.clone())
    }

    pub fn scaled(&self, factor: &T) -> Self {
        Self {
            n: self.n,
            coefficients: self.coefficients.iter().map(|c| c.clone() * factor.clone()).collect(),
        }
    }

    /// Coordinates as a sparse sum (coefficients relative to `P / √d`).
    pub fn to_pauli_sum(&self) -> Result<PauliSum<T>> {
        let terms = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != T::zero())
            .map(|(j, c)| Ok((PauliString::from_index(self.n, j as u128 + 1)?, c.clone())))
            .collect::<Result<Vec<_>>>()?;
        PauliSum::from_real(self.n, terms)
    }
}

impl ObservableInAlgebra<f64> {
    /// Uniform random direction scaled to unit Frobenius norm.
    pub fn random_unit(n: usize, rng: &mut seeds::Rng) -> Result<Self> {
        let len = (1usize << (2 * n)) - 1;
        let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm = raw.iter().map(|x| x * x).sum::<f64>().sqrt();
        Self::new(n, raw.into_iter().map(|x| x / norm).collect())
    }
}

fn pow2<T: Scalar>(n: usize) -> T {
    T::from_int(1i64 << n)
}

fn check_span<T>(basis: &OrthonormalBasis, o: &ObservableInAlgebra<T>) -> Result<()> {
    if basis.n != o.n {
        Err(Error::DimensionMismatch { left: basis.n, right: o.n })
    } else {
        Ok(())
    }
}

/// Measures the adjoint Casimir eigenvalue: `Σ_j [G_j, [G_j, G_Q]] = c G_Q` for
/// every basis element `G_Q`, and all `c` agree.
pub fn casimir_constant<T: Scalar>(n: usize) -> Result<T> {
    let basis = OrthonormalBasis::new(n)?;
    measure_casimir(&basis)
}

fn measure_casimir<T: Scalar>(basis: &OrthonormalBasis) -> Result<T> {
    let d: T = pow2(basis.n);
    let per_element: Vec<Result<T>> = basis
        .elements
        .par_iter()
        .map(|q| {
            let start = PauliSum::from_real(basis.n, [(*q, T::one())])?;
            let mut acc = PauliSum::zero(basis.n)?;
            for p in &basis.elements {
                let twice = start.commutator_from_left(p)?.commutator_from_left(p)?;
                acc = acc.add(&twice)?;
            }
            if acc.len() > 1 || (acc.len() == 1 && acc.coefficient(q) == num_complex::Complex::new(T::zero(), T::zero())) {
                return Err(Error::NotProportional(q.to_string()));
            }
            let c = acc.coefficient(q);
            if c.im != T::zero() {
                return Err(Error::NotProportional(q.to_string()));
            }
            Ok(c.re / d.clone())
        })
        .collect();
    let mut first: Option<T> = None;
    for (q, c) in basis.elements.iter().zip(per_element) {
        let c = c?;
        match &first {
            None => first = Some(c),
            Some(f) => {
                let (a, b) = (f.as_f64(), c.as_f64());
                if (a - b).abs() > 1e-9 * a.abs().max(1.0) {
                    return Err(Error::InconsistentCasimir {
                        element: q.to_string(),
                        expected: a,
                        found: b,
                    });
                }
            }
        }
    }
    first.ok_or(Error::QubitCount(basis.n))
}

/// Closed form `2d` for the normalized Pauli basis; used only to cross-check
/// the measured value.
pub fn conjectured_casimir(n: usize) -> f64 {
    2.0 * (1u64 << n) as f64
}

/// Cached basis and Casimir constant for one qubit count.
#[derive(Clone, Debug)]
pub struct Theory<T> {
    basis: OrthonormalBasis,
    casimir: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck<T> {
    pub lhs: T,
    pub rhs: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HessianCheck<T> {
    /// `Σ_j ‖[G_j, [G_j, O]]‖²`.
    pub diag_sum: T,
    /// `Σ_{j≠k} ‖[G_k, [G_j, O]]‖²`.
    pub offdiag_sum: T,
    /// `c² ‖O‖² / (d² − 1)`.
    pub lower_bound: T,
    /// `c² ‖O‖² (d² − 2) / (d² − 1)`.
    pub upper_bound: T,
}

impl<T: Scalar> Theory<T> {
    pub fn new(n: usize) -> Result<Self> {
        let basis = OrthonormalBasis::new(n)?;
        let casimir = measure_casimir(&basis)?;
        Ok(Self { basis, casimir })
    }

    pub fn basis(&self) -> &OrthonormalBasis {
        &self.basis
    }

    pub fn casimir(&self) -> &T {
        &self.casimir
    }

    fn dim(&self) -> T {
        pow2(self.basis.n)
    }

    /// `[G_j, O]` for every `j`, scaled by `√d` (coordinates relative to `G`).
    fn first_commutators(&self, o: &PauliSum<T>) -> Result<Vec<PauliSum<T>>> {
        self.basis
            .elements
            .par_iter()
            .map(|p| o.commutator_from_left(p))
            .collect()
    }

    /// First-order sum `Σ_j ‖[G_j, O]‖²` against `c ‖O‖²`.
    pub fn first_order(&self, o: &ObservableInAlgebra<T>) -> Result<IdentityCheck<T>> {
        check_span(&self.basis, o)?;
        let sum = o.to_pauli_sum()?;
        let lhs = self
            .first_commutators(&sum)?
            .iter()
            .fold(T::zero(), |acc, a| acc + a.coefficient_norm_sq())
            / self.dim();
        Ok(IdentityCheck {
            lhs,
            rhs: self.casimir.clone() * o.norm_sq(),
        })
    }

    /// Per-`j` sums `(Σ_k ‖[G_k,[G_j,O]]‖², ‖[G_j,[G_j,O]]‖²)` in basis order.
    fn second_order_rows(&self, o: &ObservableInAlgebra<T>) -> Result<Vec<(T, T)>> {
        check_span(&self.basis, o)?;
        let sum = o.to_pauli_sum()?;
        let d2 = self.dim() * self.dim();
        let firsts = self.first_commutators(&sum)?;
        firsts
            .par_iter()
            .enumerate()
            .map(|(j, a)| {
                if a.is_empty() {
                    return Ok((T::zero(), T::zero()));
                }
                let mut row = T::zero();
                let mut diag = T::zero();
                for (k, p) in self.basis.elements.iter().enumerate() {
                    let v = a.commutator_from_left(p)?.coefficient_norm_sq();
                    if k == j {
                        diag = v.clone();
                    }
                    row = row + v;
                }
                Ok((row / d2.clone(), diag / d2.clone()))
            })
            .collect()
    }

    /// Double sum `Σ_{j,k} ‖[G_k, [G_j, O]]‖²` against `c² ‖O‖²`.
    pub fn second_order(&self, o: &ObservableInAlgebra<T>) -> Result<IdentityCheck<T>> {
        let rows = self.second_order_rows(o)?;
        let lhs = rows.into_iter().fold(T::zero(), |acc, (r, _)| acc + r);
        Ok(IdentityCheck {
            lhs,
            rhs: self.casimir.clone() * self.casimir.clone() * o.norm_sq(),
        })
    }

    /// Diagonal/off-diagonal split with the lower and upper bounds.
    /// Fails with [`Error::TheoryViolation`] if a bound or the double-sum total is
    /// violated beyond [`INEQUALITY_TOL`] (relative).
    pub fn hessian_split(&self, o: &ObservableInAlgebra<T>) -> Result<HessianCheck<T>> {
        let rows = self.second_order_rows(o)?;
        let (total, diag_sum) = rows
            .into_iter()
            .fold((T::zero(), T::zero()), |(t, d), (r, g)| (t + r, d + g));
        let offdiag_sum = total.clone() - diag_sum.clone();
        let c2o = self.casimir.clone() * self.casimir.clone() * o.norm_sq();
        let m = T::from_int(self.basis.len() as i64);
        let lower_bound = c2o.clone() / m.clone();
        let upper_bound = c2o.clone() * (m.clone() - T::one()) / m;

        let scale = c2o.as_f64().abs().max(f64::MIN_POSITIVE);
        let slack = |big: &T, small: &T| (big.as_f64() - small.as_f64()) / scale;
        if slack(&diag_sum, &lower_bound) < -INEQUALITY_TOL {
            return Err(Error::TheoryViolation(format!(
                "diagonal sum {diag_sum:?} below lower bound {lower_bound:?}"
            )));
        }
        if slack(&upper_bound, &offdiag_sum) < -INEQUALITY_TOL {
            return Err(Error::TheoryViolation(format!(
                "off-diagonal sum {offdiag_sum:?} above upper bound {upper_bound:?}"
            )));
        }
        if slack(&total, &c2o).abs() > INEQUALITY_TOL {
            return Err(Error::TheoryViolation(format!(
                "double sum {total:?} differs from c^2 |O|^2 = {c2o:?}"
            )));
        }
        Ok(HessianCheck {
            diag_sum,
            offdiag_sum,
            lower_bound,
            upper_bound,
        })
    }
}

pub fn verify_theorem1<T: Scalar>(o: &ObservableInAlgebra<T>) -> Result<(IdentityCheck<T>, T)> {
    let theory = Theory::new(o.qubits())?;
    let check = theory.first_order(o)?;
    Ok((check, theory.casimir))
}

pub fn verify_lemma1<T: Scalar>(o: &ObservableInAlgebra<T>) -> Result<IdentityCheck<T>> {
    Theory::new(o.qubits())?.second_order(o)
}

pub fn verify_lemma2_and_theorem2<T: Scalar>(o: &ObservableInAlgebra<T>) -> Result<HessianCheck<T>> {
    Theory::new(o.qubits())?.hessian_split(o)
}

/// `Σ_a Tr(G_a O)²` over an orthonormal set of Hermitian generators, all given
/// in coordinates relative to `P / √d`.
pub fn g_purity<T: Scalar>(generators: &[PauliSum<T>], o: &PauliSum<T>) -> Result<T> {
    let tol = 1e-9;
    for (a, g) in generators.iter().enumerate() {
        if g.qubits() != o.qubits() {
            return Err(Error::DimensionMismatch { left: o.qubits(), right: g.qubits() });
        }
        if g.terms().any(|(_, c)| c.im.as_f64().abs() > tol) {
            return Err(Error::NotOrthonormal(format!("generator {a} is not Hermitian")));
        }
        for (b, h) in generators.iter().enumerate().skip(a) {
            let ip = g.inner(h);
            let target = if a == b { 1.0 } else { 0.0 };
            if (ip.re.as_f64() - target).abs() > tol || ip.im.as_f64().abs() > tol {
                return Err(Error::NotOrthonormal(format!(
                    "<G_{a}, G_{b}> = {:?}",
                    ip
                )));
            }
        }
    }
    Ok(generators.iter().fold(T::zero(), |acc, g| {
        let t = g.inner(o).re;
        acc + t.clone() * t
    }))
}

/// All identity quantities computed from dense matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseQuantities {
    pub casimir: f64,
    pub thm1_lhs: f64,
    pub lemma1_lhs: f64,
    pub diag_sum: f64,
    pub offdiag_sum: f64,
}

/// Dense basis `P / √d`.
pub fn dense_basis(n: usize) -> Result<Vec<dense::Matrix>> {
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::QubitCount(n));
    }
    let scale = Complex64::new(1.0 / ((1u64 << n) as f64).sqrt(), 0.0);
    Ok(PauliString::all_non_identity(n)?
        .iter()
        .map(|p| dense::pauli_matrix(p) * scale)
        .collect())
}

/// Casimir eigenvalue from `Tr(G_Q Σ_j ad²_{G_j} G_Q)` with proportionality checked.
pub fn dense_casimir(n: usize) -> Result<f64> {
    let basis = dense_basis(n)?;
    let mut first = None;
    for (q, gq) in basis.iter().enumerate() {
        let total = basis.iter().fold(dense::Matrix::zeros(gq.nrows(), gq.ncols()), |acc, g| {
            acc + dense::commutator(g, &dense::commutator(g, gq))
        });
        let c = dense::hs_inner(gq, &total).re;
        let residual = dense::frobenius_norm_sq(&(&total - gq * Complex64::new(c, 0.0)));
        if residual > 1e-18 {
            return Err(Error::NotProportional(format!("basis element {q}")));
        }
        match first {
            None => first = Some(c),
            Some(f) if (f - c).abs() > 1e-9 * f.abs() => {
                return Err(Error::InconsistentCasimir {
                    element: format!("basis element {q}"),
                    expected: f,
                    found: c,
                })
            }
            _ => {}
        }
    }
    first.ok_or(Error::QubitCount(n))
}

/// Dense evaluation of every identity's left-hand side for `o`.
pub fn dense_quantities(o: &ObservableInAlgebra<f64>) -> Result<DenseQuantities> {
    let basis = dense_basis(o.qubits())?;
    let dim = basis[0].nrows();
    let om = basis
        .iter()
        .zip(o.coefficients())
        .fold(dense::Matrix::zeros(dim, dim), |acc, (g, c)| acc + g * Complex64::new(*c, 0.0));
    let firsts: Vec<dense::Matrix> = basis.iter().map(|g| dense::commutator(g, &om)).collect();
    let thm1_lhs = firsts.iter().map(dense::frobenius_norm_sq).sum();
    let (mut diag_sum, mut offdiag_sum) = (0.0, 0.0);
    for (j, a) in firsts.iter().enumerate() {
        for (k, g) in basis.iter().enumerate() {
            let v = dense::frobenius_norm_sq(&dense::commutator(g, a));
            if j == k {
                diag_sum += v;
            } else {
                offdiag_sum += v;
            }
        }
    }
    Ok(DenseQuantities {
        casimir: dense_casimir(o.qubits())?,
        thm1_lhs,
        lemma1_lhs: diag_sum + offdiag_sum,
        diag_sum,
        offdiag_sum,
    })
}

/// One row of a randomized verification sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationRow {
    pub n: usize,
    pub d: usize,
    pub c_measured: f64,
    pub thm1_lhs: f64,
    pub thm1_rhs: f64,
    pub lemma1_lhs: f64,
    pub lemma1_rhs: f64,
    pub diag_sum: f64,
    pub offdiag_sum: f64,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// Largest relative deviation among the equality identities, the
    /// symbolic-vs-dense comparisons (n ≤ 3) and any negative inequality slack.
    pub max_rel_err: f64,
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Checks every identity on `trials` random unit-norm observables.
pub fn verify_random(n: usize, trials: usize, seed: u64) -> Result<Vec<VerificationRow>> {
    let theory = Theory::<f64>::new(n)?;
    let dense_c = if n <= MAX_DENSE_QUBITS { Some(dense_casimir(n)?) } else { None };
    let mut rng = seeds::rng(seed);
    let mut rows = Vec::with_capacity(trials);
    for _ in 0..trials {
        let o = ObservableInAlgebra::random_unit(n, &mut rng)?;
        rows.push(verification_row(&theory, &o, dense_c)?);
    }
    Ok(rows)
}

/// Verification row for one observable.
pub fn verification_row(
    theory: &Theory<f64>,
    o: &ObservableInAlgebra<f64>,
    dense_casimir: Option<f64>,
) -> Result<VerificationRow> {
    let n = o.qubits();
    let c = *theory.casimir();
    let first = theory.first_order(o)?;
    let second = theory.second_order(o)?;
    let split = theory.hessian_split(o)?;
    let c2o = c * c * o.norm_sq();
    let mut errs = vec![
        rel_err(first.lhs, first.rhs),
        rel_err(second.lhs, second.rhs),
        rel_err(split.diag_sum + split.offdiag_sum, second.rhs),
    ];
    if c2o > 0.0 {
        errs.push(((split.lower_bound - split.diag_sum) / c2o).max(0.0));
        errs.push(((split.offdiag_sum - split.upper_bound) / c2o).max(0.0));
    }
    if let Some(dc) = dense_casimir {
        let dq = dense_quantities(o)?;
        errs.extend([
            rel_err(c, dc),
            rel_err(first.lhs, dq.thm1_lhs),
            rel_err(second.lhs, dq.lemma1_lhs),
            rel_err(split.diag_sum, dq.diag_sum),
            rel_err(split.offdiag_sum, dq.offdiag_sum),
        ]);
    }
    Ok(VerificationRow {
        n,
        d: 1 << n,
        c_measured: c,
        thm1_lhs: first.lhs,
        thm1_rhs: first.rhs,
        lemma1_lhs: second.lhs,
        lemma1_rhs: second.rhs,
        diag_sum: split.diag_sum,
        offdiag_sum: split.offdiag_sum,
        lower_bound: split.lower_bound,
        upper_bound: split.upper_bound,
        max_rel_err: errs.into_iter().fold(0.0, f64::max),
    })
}
