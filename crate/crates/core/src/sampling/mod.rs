//! Random-variate generation: reproducible RNG streams, Poisson counts and
//! box scatters, one-sided stable draws and the inverse stable subordinator.

mod point;
mod rng;
mod subordinator;

pub use point::{count_at, sample_point_field, sample_poisson, BoxRegion, PointProcessSample};
pub use rng::RngStream;
pub use subordinator::{
    sample_inverse_subordinator, sample_inverse_subordinator_path, sample_stable_unit,
    sample_subordinator_path, SubordinatorPath, DEFAULT_PATH_STEP,
};
