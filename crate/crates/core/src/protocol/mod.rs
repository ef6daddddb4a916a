//! Classical and quantum two-party protocols.

pub mod classical;
pub mod embed;
pub mod game;
pub mod quantum;
pub mod sample;
pub mod signature;

pub use classical::{
    distributional_error, eval_classical, eval_classical_capped, first_message_encoding,
    fix_public_coin, random_protocol, ClassicalProtocol, CoinDist, CoinSpace, ErrorReport,
    FixedCoin, MessageEncoding, RandomProtocolSpec, Run, Shape, BRANCH_CAP,
};
pub use embed::embed_classical;
pub use game::{GameSpec, SumEncoding};
pub use quantum::{
    eval_quantum, first_message_encoding_quantum, fix_public_coin_quantum,
    quantum_distributional_error, verify_safe, verify_secure, Branch, Finale, Gate,
    PublicCoinQuantumProtocol, QuantumErrorReport, QuantumMessageEncoding, QuantumProtocol,
    QuantumRound, Stage, VerifyReport,
};
pub use sample::{random_quantum_protocol, RandomQuantumSpec};
pub use signature::Signature;
