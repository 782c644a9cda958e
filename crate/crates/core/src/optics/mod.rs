//! Underwater image formation: attenuation, illumination, veiling light,
//! forward composition and its algebraic inverse.

mod model;
mod planar;
mod scene;
mod water;

pub use model::{
    artificial_light_field, background_light_field, compose_underwater, forward_model,
    illumination_field, illumination_with_artificial, invert_to_clean, transmission_map, Composite,
    DepthMap, TransmissionMap,
};
pub use planar::PlanarImage;
pub use scene::{
    ArtificialLightSpec, OpticalScene, ARTIFICIAL_PEAK_RANGE, DEPTH_RANGE_M, KAPPA_RANGE,
    OMEGA_RANGE, SIGMA_RANGE, SURFACE_LIGHT_RANGE,
};
pub use water::WaterType;
