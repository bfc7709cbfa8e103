pub mod arith;
pub mod bigfloat;
pub mod charsum;
pub mod classical;
pub mod cyclotomic;
pub mod error;
pub mod ffhyper;
pub mod ffield;
pub mod gfunction;
pub mod harness;
pub mod oracles;
pub mod padic;

pub use error::{Error, Result};
pub use cyclotomic::CycNumber;
pub use ffhyper::FFHyperParams;
pub use ffield::{FieldElement, FiniteField};
pub use gfunction::GParams;
pub use harness::{run_verification, worker_count, Config, Report};
pub use padic::PAdic;
