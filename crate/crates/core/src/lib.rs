//! Exact coordinates for Bott–Samelson bimodules over the equivariant
//! cohomology of a point.

pub mod bimodule;
pub mod cartan;
pub mod diagram;
pub mod error;
pub mod linalg;
pub mod localized;
pub mod morphism;
pub mod poly;
pub mod random;
pub mod suites;
pub mod vertex;

pub use cartan::{BraidWord, CartanData, WeylElement};
pub use error::{Error, Result};
pub use poly::{Degree, Monomial, Poly, Rational};
pub use bimodule::{BSElement, Gallery, GradedRank, LocalizationMatrix, StandardElement};
pub use morphism::{EntryDifference, Morphism};
pub use vertex::HomSpaceReport;
pub use diagram::{Diagram, Generator, RelationReport, Slice};
pub use suites::{builtin_suites, CheckResult, Suite, SuiteOptions, SuiteReport};
