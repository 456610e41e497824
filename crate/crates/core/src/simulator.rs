//! Dense statevector simulation of the product ansatz
//! `U(θ) = e^{-iθ_L G_L} ⋯ e^{-iθ_1 G_1}` after an `R_Y` angle encoding.
//!
//! Basis index bit `q` holds qubit `q`. Rotations are applied in list order, so
//! `G_1` acts on the state first.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector<T> {
    n: usize,
    amps: Vec<Complex<T>>,
}

/// `G|b⟩ = i^{|x∧z|} (-1)^{|z∧b|} |b ⊕ x⟩`.
#[inline]
fn pauli_action<T: Real>(g: &PauliString, b: usize) -> Complex<T> {
    let y_count = (g.x_bits() & g.z_bits()).count_ones();
    let sign = (g.z_bits() & b as u64).count_ones();
    crate::pauli::Phase::from_exponent(y_count as i64 + 2 * sign as i64).to_complex()
}

impl<T: Real> StateVector<T> {
    /// `|0…0⟩`.
    pub fn zero(n: usize) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::QubitCount(n));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(Self { n, amps })
    }

    pub fn from_amplitudes(n: usize, amps: Vec<Complex<T>>) -> Result<Self> {
        if n == 0 || n > 30 {
            return Err(Error::QubitCount(n));
        }
        if amps.len() != 1 << n {
            return Err(Error::InvalidConfig(format!(
                "{} amplitudes for {n} qubits",
                amps.len()
            )));
        }
        Ok(Self { n, amps })
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sq(&self) -> T {
        self.amps.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<Complex<T>> {
        self.check(other.n)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b))
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Self) -> Result<T> {
        self.inner(other).map(|z| z.norm_sqr())
    }

    fn check(&self, n: usize) -> Result<()> {
        if n != self.n {
            Err(Error::DimensionMismatch { left: self.n, right: n })
        } else {
            Ok(())
        }
    }

    /// `R_Y(angle) = exp(-i (angle/2) Y)` on one qubit.
    pub fn apply_ry(&mut self, qubit: usize, angle: T) {
        let half = angle / T::lit(2.0);
        let (s, c) = half.sin_cos();
        let bit = 1usize << qubit;
        for b in 0..self.amps.len() {
            if b & bit == 0 {
                let a0 = self.amps[b];
                let a1 = self.amps[b | bit];
                self.amps[b] = a0 * c - a1 * s;
                self.amps[b | bit] = a0 * s + a1 * c;
            }
        }
    }

    /// `R_Y(x)` on every qubit.
    pub fn apply_ry_encoding(&mut self, x: T) {
        for q in 0..self.n {
            self.apply_ry(q, x);
        }
    }

    /// `exp(-iθG)|ψ⟩ = cos θ |ψ⟩ - i sin θ G|ψ⟩`, using `G² = I`.
    pub fn apply_pauli_rotation(&mut self, g: &PauliString, theta: T) -> Result<()> {
        self.check(g.qubits())?;
        if g.is_identity() {
            return Err(Error::Identity("generator"));
        }
        let (s, c) = theta.sin_cos();
        let minus_i_sin = Complex::new(T::zero(), -s);
        let flip = g.x_bits() as usize;
        if flip == 0 {
            for (b, a) in self.amps.iter_mut().enumerate() {
                *a = *a * c + minus_i_sin * pauli_action::<T>(g, b) * *a;
            }
            return Ok(());
        }
        for b in 0..self.amps.len() {
            let partner = b ^ flip;
            if b < partner {
                let (a, p) = (self.amps[b], self.amps[partner]);
                // (Gψ)[b] = phase(partner)·ψ[partner]
                self.amps[b] = a * c + minus_i_sin * pauli_action::<T>(g, partner) * p;
                self.amps[partner] = p * c + minus_i_sin * pauli_action::<T>(g, b) * a;
            }
        }
        Ok(())
    }

    /// `⟨ψ|O|ψ⟩` for a Pauli string `O`.
    pub fn expectation(&self, o: &PauliString) -> Result<T> {
        self.check(o.qubits())?;
        let flip = o.x_bits() as usize;
        let mut acc = Complex::new(T::zero(), T::zero());
        for (b, a) in self.amps.iter().enumerate() {
            acc = acc + self.amps[b ^ flip].conj() * pauli_action::<T>(o, b) * a;
        }
        debug_assert!(
            acc.im.abs() <= T::epsilon() * T::lit(64.0 * self.amps.len() as f64),
            "non-real Pauli expectation {acc:?}"
        );
        Ok(acc.re)
    }
}

/// Input-angle encoding rule.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum Encoding {
    /// `R_Y(x)` with the same angle on every qubit.
    #[default]
    AllQubits,
    /// `R_Y(x)` on the listed qubits only.
    Qubits(Vec<usize>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitModel {
    n: usize,
    generators: Vec<PauliString>,
    observable: PauliString,
    encoding: Encoding,
}

impl CircuitModel {
    pub fn new(generators: Vec<PauliString>, observable: PauliString) -> Result<Self> {
        Self::with_encoding(generators, observable, Encoding::AllQubits)
    }

    pub fn with_encoding(
        generators: Vec<PauliString>,
        observable: PauliString,
        encoding: Encoding,
    ) -> Result<Self> {
        let n = observable.qubits();
        if observable.is_identity() {
            return Err(Error::Identity("observable"));
        }
        for g in &generators {
            if g.qubits() != n {
                return Err(Error::DimensionMismatch { left: n, right: g.qubits() });
            }
            if g.is_identity() {
                return Err(Error::Identity("generator"));
            }
        }
        if let Encoding::Qubits(qs) = &encoding {
            if let Some(&q) = qs.iter().find(|&&q| q >= n) {
                return Err(Error::InvalidConfig(format!("encoding qubit {q} out of range for {n} qubits")));
            }
        }
        Ok(Self { n, generators, observable, encoding })
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn depth(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    pub fn observable(&self) -> &PauliString {
        &self.observable
    }

    pub fn encoding(&self) -> &Encoding {
        &self.encoding
    }

    /// `|0…0⟩` after the input encoding.
    pub fn encoded_state<T: Real>(&self, x: T) -> Result<StateVector<T>> {
        let mut psi = StateVector::zero(self.n)?;
        match &self.encoding {
            Encoding::AllQubits => psi.apply_ry_encoding(x),
            Encoding::Qubits(qs) => qs.iter().for_each(|&q| psi.apply_ry(q, x)),
        }
        Ok(psi)
    }

    /// Applies the trainable rotations to `state` in place.
    pub fn evolve<T: Real>(&self, state: &mut StateVector<T>, theta: &[T]) -> Result<()> {
        if theta.len() != self.generators.len() {
            return Err(Error::ParameterLength {
                expected: self.generators.len(),
                found: theta.len(),
            });
        }
        for (g, &t) in self.generators.iter().zip(theta) {
            state.apply_pauli_rotation(g, t)?;
        }
        Ok(())
    }

    /// Output state `U(θ) R_Y(x)^{⊗n} |0…0⟩`.
    pub fn state<T: Real>(&self, theta: &[T], x: T) -> Result<StateVector<T>> {
        let mut psi = self.encoded_state(x)?;
        self.evolve(&mut psi, theta)?;
        Ok(psi)
    }

    /// Model output from a cached encoded state; `scratch` is overwritten.
    pub fn output_from<T: Real>(
        &self,
        encoded: &StateVector<T>,
        theta: &[T],
        scratch: &mut StateVector<T>,
    ) -> Result<T> {
        scratch.clone_from(encoded);
        self.evolve(scratch, theta)?;
        scratch.expectation(&self.observable)
    }
}

/// `⟨0|R_Y(x)^† U(θ)^† O U(θ) R_Y(x)|0⟩`.
pub fn run_model<T: Real>(model: &CircuitModel, theta: &[T], x: T) -> Result<T> {
    model.state(theta, x)?.expectation(&model.observable)
}
