//! Dense complex linear algebra and multi-register quantum states.

pub mod eig;
pub mod layout;
pub mod matrix;
pub mod state;
pub mod svd;

pub use eig::{hermitian_eig, psd_sqrt, spectral_map, Eigen};
pub use layout::{Party, Register, RegisterLayout, MAX_QUBITS};
pub use matrix::{c64, gates, Matrix, C64};
pub use state::{
    fidelity, max_overlap_local_unitary, purify, tensor_product, DensityMatrix, LocalTransition,
    PureState, QuantumObject,
};
pub use svd::{svd, trace_norm, Svd};
