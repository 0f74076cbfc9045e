//! Radial Kohn-Sham solver for two-electron ions confined in an impenetrable
//! sphere, with position- and momentum-space Shannon entropies.
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases at the crate root fix the scalar to `f64`, which is what every
//! documented tolerance refers to.

pub mod configuration;
pub mod density;
pub mod entropy;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod momentum;
pub mod potentials;
pub mod scalar;
pub mod scf;
pub mod special;

pub use configuration::{supported_configurations, Configuration, Shell, SpinCoupling};
pub use density::{build_density, Normalization, RadialDensity};
pub use entropy::{
    bbm_bound, crossover_detect, entropies, normalization_convert, normalization_invert, shannon_p, shannon_p_aligned, shannon_r,
    shannon_r_aligned, AngularModel, Crossing, EntropyResult,
};
pub use error::{Error, Result};
pub use grid::{build_grid, channel_operator, legendre_collocation, ChannelOperator, Collocation, Mapping, RadialGrid};
pub use momentum::{momentum_density, MomentumDensity, MomentumGrid, MomentumOptions};
pub use potentials::{CorrelationConstants, LypSpin, PotentialField, PotentialKind};
pub use scalar::Real;
pub use scf::{scan, scf_solve, scf_solve_from, solve_channel, Energies, Orbital, ScfControls, ScfResult, Variant};

pub type RadialGrid64 = RadialGrid<f64>;
pub type Mapping64 = Mapping<f64>;
pub type RadialDensity64 = RadialDensity<f64>;
pub type PotentialField64 = PotentialField<f64>;
pub type Orbital64 = Orbital<f64>;
pub type ScfControls64 = ScfControls<f64>;
pub type ScfResult64 = ScfResult<f64>;
pub type MomentumOptions64 = MomentumOptions<f64>;
pub type EntropyResult64 = EntropyResult<f64>;
pub type MomentumDensity64 = MomentumDensity<f64>;
pub type Crossing64 = Crossing<f64>;
