//! Derivative estimators.

pub mod sampling;
pub mod schedule;
pub mod tensor;

mod estimate;

pub use estimate::{
    brute_liminf, delta_n, demyanov_deriv, demyanov_directions, dini_deriv, dini_series, ginchev_base, ginchev_deriv,
    ginchev_series, hadamard_deriv, hadamard_zero, studniarski_deriv, DerivEstimate, Sign,
};
pub use schedule::{FloorPolicy, LiminfSchedule, Shell};
pub use tensor::{multi_indices, MultiplierChain, SymTensor, MAX_TENSOR_DIM, MAX_TENSOR_ORDER};
