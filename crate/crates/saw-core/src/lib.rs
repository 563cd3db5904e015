//! Surface-acoustic-wave propagation on anisotropic piezoelectric crystals.
//!
//! The crate computes SAW phase velocities on arbitrarily oriented
//! piezoelectric half-spaces with a partial-wave solver, derives
//! beam-steering and diffraction parameters from velocity anisotropy,
//! searches orientation space for minimally-diffracting cuts, simulates
//! far-field diffraction of finite-aperture beams with the angular-spectrum
//! method, and fits diffraction parameters from resonator linewidth data.
//!
//! Angles are degrees at every public interface, lengths are SI unless a
//! quantity is explicitly normalized to the acoustic wavelength.

pub mod anisotropy;
pub mod materials;
pub mod math;
pub mod surface_wave;

pub use materials::{Handedness, MaterialConstants, Orientation};
pub use surface_wave::{Polarization, Surface, SurfaceWaveSolution};

/// Vacuum permittivity, F/m.
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
