//! Round reduction and round elimination as protocol compilers.

pub mod classical;
pub mod product;
pub mod quantum;

use crate::protocol::Signature;
use crate::rational::Ratio;

pub use classical::{classical_round_eliminate, classical_round_reduce, ClassicalElimination};
pub use product::{build_product_distribution, PRODUCT_CAP};
pub use quantum::{quantum_round_eliminate, quantum_round_reduce, QuantumElimination};

/// Tolerance on certificate slack.
pub const CERT_TOL: f64 = 1e-7;

/// Error accounting of one transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct EliminationCertificate {
    pub before: Signature,
    pub after: Signature,
    pub error_before: f64,
    pub error_after: f64,
    /// Exact errors when the protocols are classical.
    pub exact_before: Option<Ratio>,
    pub exact_after: Option<Ratio>,
    /// `I(X:M)` of the removed message.
    pub information: f64,
    pub bound: f64,
    /// `bound − error_after`.
    pub slack: f64,
}

impl EliminationCertificate {
    pub fn holds(&self) -> bool {
        self.slack >= -CERT_TOL
    }
}
