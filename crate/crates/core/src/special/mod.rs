//! Special functions: complex Gamma, Macdonald functions, free resolvent
//! kernels and their decay bounds.

pub mod bessel;
pub mod fit;
pub mod gamma;
pub mod kernel;

pub use bessel::{macdonald_k, macdonald_k_scaled};
pub use gamma::gamma_complex;
pub use kernel::{
    decay_shape, free_green, interpolation_kernel, kernel_bound_report, small_argument_shape,
    KernelSample, LadderOptions, Regime, SlopeReport,
};
