//! Rarefaction waves: Burgers regularisation, wave curves at constant entropy,
//! the exact Riemann fan and the smooth approximate wave.

pub mod burgers;
pub mod profile;
pub mod riemann;

pub use burgers::{burgers_eval, burgers_initial, BurgersSpec};
pub use profile::{riemann_fan_eval, smooth_wave_eval, WaveOptions, WavePattern, WavePoint, WaveProfile};
pub use riemann::{
    intermediate_state, invert_char_speed, rarefaction_curve_u, FarState, MidState, RiemannData,
};
