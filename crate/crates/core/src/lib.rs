//! α-stable distributions: parametrizations, Lévy–Khinchin triples, densities,
//! domains of attraction and Monte Carlo checks of normalized sums.
//!
//! The numerical core is generic over the scalar (`f32` or `f64`); the
//! aliases below fix it to one of them.

pub mod check;
pub mod density;
pub mod doa;
pub mod error;
pub mod infdiv;
pub mod montecarlo;
pub mod params;
pub mod quad;
pub mod real;
pub mod special;

pub use error::{Error, Result};
pub use params::{Convention, StableParams};
pub use real::Real;

pub type StableParamsF64 = params::StableParams<f64>;
pub type StableParamsF32 = params::StableParams<f32>;
pub type SupportF64 = params::Support<f64>;
pub type IdTripleF64 = infdiv::IdTriple<f64>;
pub type IdTripleF32 = infdiv::IdTriple<f32>;
pub type LevyMeasureF64 = infdiv::LevyMeasure<f64>;
pub type LevyMeasureF32 = infdiv::LevyMeasure<f32>;
pub type CanonicalMeasureF64 = infdiv::CanonicalMeasure<f64>;
pub type SeriesResultF64 = density::SeriesResult<f64>;
pub type TailSpecF64 = doa::TailSpec<f64>;
pub type TailSpecF32 = doa::TailSpec<f32>;
pub type NormingSchemeF64 = doa::NormingScheme<f64>;
pub type ExampleModelF64 = doa::ExampleModel<f64>;
pub type ExampleNameF64 = doa::ExampleName<f64>;
