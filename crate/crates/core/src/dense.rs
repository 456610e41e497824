//! Dense complex matrices for small qubit counts.
//!
//! Independent cross-check route: operators are built from the `IXYZ` text
//! through Kronecker products, never through the symplectic bit algebra.
//! Basis index bit `q` is qubit `q`, so qubit `n-1` is the leftmost Kronecker factor.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::pauli::{PauliString, PauliSum};

pub type Matrix = DMatrix<Complex64>;
pub type Vector = DVector<Complex64>;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn single_qubit(label: char) -> Matrix {
    let entries = match label {
        'I' => [ONE, ZERO, ZERO, ONE],
        'X' => [ZERO, ONE, ONE, ZERO],
        'Y' => [ZERO, -I, I, ZERO],
        'Z' => [ONE, ZERO, ZERO, -ONE],
        other => panic!("not a Pauli label: {other}"),
    };
    Matrix::from_row_slice(2, 2, &entries)
}

pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a Matrix>) -> Matrix {
    factors
        .into_iter()
        .fold(Matrix::from_element(1, 1, ONE), |acc, f| acc.kronecker(f))
}

pub fn pauli_matrix(p: &PauliString) -> Matrix {
    let text: Vec<char> = p.to_string().chars().collect();
    let factors: Vec<Matrix> = text.iter().rev().map(|&c| single_qubit(c)).collect();
    kron_all(&factors)
}

pub fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    a * b - b * a
}

pub fn frobenius_norm_sq(m: &Matrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// `Tr(a† b)`.
pub fn hs_inner(a: &Matrix, b: &Matrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// `Σ c_P · P · scale`.
pub fn sum_matrix(sum: &PauliSum<f64>, scale: f64) -> Matrix {
    let d = 1usize << sum.qubits();
    sum.terms().fold(Matrix::zeros(d, d), |acc, (p, c)| {
        acc + pauli_matrix(p) * (*c * scale)
    })
}

/// `exp(-i θ G)` via the matrix exponential.
pub fn pauli_rotation(g: &PauliString, theta: f64) -> Matrix {
    (pauli_matrix(g) * Complex64::new(0.0, -theta)).exp()
}

/// `R_Y(x)^{⊗n}`.
pub fn ry_layer(n: usize, x: f64) -> Matrix {
    let y = single_qubit('Y') * Complex64::new(0.0, -x / 2.0);
    let ry = y.exp();
    kron_all(std::iter::repeat(&ry).take(n))
}

pub fn basis_state(n: usize, index: usize) -> Vector {
    let mut v = Vector::zeros(1 << n);
    v[index] = ONE;
    v
}

/// `⟨ψ|M|ψ⟩`.
pub fn expectation(psi: &Vector, m: &Matrix) -> Complex64 {
    psi.dotc(&(m * psi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pauli_algebra_relations() {
        let (x, y, z) = (single_qubit('X'), single_qubit('Y'), single_qubit('Z'));
        assert!((&x * &y - &z * I).norm() < 1e-15);
        assert!((&x * &x - Matrix::identity(2, 2)).norm() < 1e-15);
    }

    #[test]
    fn qubit_zero_is_least_significant() {
        let p: PauliString = "XI".parse().unwrap();
        let m = pauli_matrix(&p);
        // X on qubit 0 maps |00> to |01> (index 1).
        assert_eq!(m[(1, 0)], ONE);
    }

    #[test]
    fn ry_rotation_of_zero() {
        let v = ry_layer(1, std::f64::consts::PI) * basis_state(1, 0);
        assert!((v[1].norm() - 1.0).abs() < 1e-12);
    }
}
