//! Pearl complexes over Z2 Laurent coefficients, the Floer–Gysin sequence of
//! a circle bundle over a monotone Lagrangian, and the Floer–Euler class.

pub mod analysis;
pub mod chain;
pub mod dataset;
pub mod error;
pub mod gf2;
pub mod graded;
pub mod gysin;
pub mod les;
pub mod pearl;
pub mod positivity;
pub mod quantum;
pub mod ring;

pub use analysis::{Analysis, Check};
pub use chain::{Cochain, SparseMap};
pub use dataset::DatasetFile;
pub use error::Error;
pub use graded::Model;
pub use gysin::{BundleComplex, TwistTerm};
pub use pearl::{DiffTerm, Generator, PearlComplex, PearlData};
pub use quantum::{Product, ProductData, ProductTerm};
pub use ring::{LaurentElement, RingKind, RingSpec};
