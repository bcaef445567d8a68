//! Closed-form constructors with exact jets.

pub mod bryant;
pub mod hyperbolic;
pub mod registry;
pub mod s3;
pub mod weierstrass;
