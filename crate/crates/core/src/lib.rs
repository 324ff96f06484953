//! Exact Witt-vector arithmetic, deformed Artin–Hasse series and the
//! finite duality checks built on them.

pub mod exactring;
pub mod ahseries;
pub mod wittcore;
pub mod dualitylab;
pub mod par;
pub mod report;
