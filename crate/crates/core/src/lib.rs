pub mod algebra;
pub mod algebroid;
pub mod ce;
pub mod enveloping;
pub mod hs;
pub mod linalg;
pub mod violation;

pub use violation::Violation;
