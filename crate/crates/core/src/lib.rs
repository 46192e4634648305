//! Exact point counting over finite fields and `Z/p^k`, the Hasse-Weil,
//! Igusa and Serre generating series built from those counts, rational
//! reconstruction of truncated series, and a small Grothendieck-ring
//! calculus with counting, Euler and Hodge specializations.

pub mod algebra;
pub mod cli;
pub mod counting;
pub mod groth;
pub mod rationality;
pub mod series;
pub mod varieties;
