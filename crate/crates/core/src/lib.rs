//! Exact invariants of lens spaces and surgeries on knots, and a rule engine
//! that classifies the surgeries relating two connected sums of lens spaces.

pub mod error;
pub mod exactmath;
pub mod group;
pub mod lens;
pub mod obstruct;
pub mod slope;
pub mod spinccob;
pub mod twobridge;

pub use error::{Error, Result, MAX_MODULUS};
pub use exactmath::{q, Rational};
pub use group::AbelianGroup;
pub use lens::{ConnSum, DInvariants, LensSpace, LinkingForm};
pub use obstruct::{classify, classify_formal_lspaces, Derivation, Knot, KnotClass, Registry};
pub use twobridge::{LinkSum, TwoBridgeLink};
