pub mod dense;
pub mod error;
pub mod experiments;
pub mod optimizer;
pub mod pauli;
pub mod scalar;
pub mod seeds;
pub mod selection;
pub mod simulator;
pub mod theory;

pub use error::{Error, Result};
pub use pauli::{PauliString, PauliSum, Phase, ScaledPauli};
pub use scalar::{Real, Scalar};

pub type StateVector64 = simulator::StateVector<f64>;
pub type StateVector32 = simulator::StateVector<f32>;
pub type PauliSum64 = PauliSum<f64>;
pub type ExactPauliSum = PauliSum<num_rational::Rational64>;
pub type SpsaConfig64 = optimizer::SpsaConfig<f64>;
pub type TrialRecord64 = optimizer::TrialRecord<f64>;
pub type ExactObservable = theory::ObservableInAlgebra<num_rational::Rational64>;
pub type Observable64 = theory::ObservableInAlgebra<f64>;
