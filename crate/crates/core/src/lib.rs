pub mod error;
pub mod hermite;
pub mod localize;
pub mod charpoly;
pub mod matrix;
pub mod modular;
pub mod numerics;
pub mod oracle;
pub mod poly;
pub mod refine;
