pub mod classify;
pub mod families;
pub mod numtheory;
pub mod tate;
pub mod weierstrass;
