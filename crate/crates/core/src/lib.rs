//! Generalized sampling on the Paley–Wiener space `PW_π`.
//!
//! Given Fourier-multiplier operators `T_1, …, T_N` acting on functions with
//! spectrum in `[-1/2, 1/2]`, this crate decides whether `f` can be recovered
//! stably from the samples `T_n(f)(Nm)`, synthesizes the reconstruction
//! kernels `g_n`, and reconstructs band-limited functions from truncated
//! sample windows.
//!
//! The main entry points:
//!
//! * [`multiplier`]: symbols `K_n(ξ)` and operator families.
//! * [`criterion`]: the matrix field `M_T(x)`, its determinant profile and
//!   the sampling/interpolation classification.
//! * [`kernels`]: spectral synthesis of `g_n` and the closed-form kernels
//!   for derivative, shifted, two-node and difference-quotient sampling.
//! * [`signals`]: finite sinc-translate test functions and sample sets.
//! * [`reconstruct`]: truncated reconstruction series and frame ratios.

pub mod criterion;
pub mod error;
pub mod io;
pub mod kernels;
pub mod linalg;
pub mod multiplier;
pub mod quadrature;
pub mod reconstruct;
pub mod signals;
pub mod special;
pub mod tolerances;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use criterion::{
    build_matrix, classify_theorem1, classify_theorem2, det_profile, periodization_check,
    CriterionCase, CriterionOptions, CriterionReport, MatrixField, SamplingVerdicts, Verdict,
};
pub use error::{Error, Result};
pub use kernels::{
    diffquot_kernels, dynamical_kernels, littmann_coeffs, littmann_kernel, shifted_kernel,
    synthesize_spectral, twonode_kernels, verify_biorthogonality, ClosedFormKernels,
    ClosedFormKind, KernelClosedForm, Kernels, SpectralKernelSet,
};
pub use multiplier::{
    common_root_scan, eval_multiplier, power_family, Multiplier, MultiplierSpec, OperatorFamily,
    TabulatedMultiplier,
};
pub use reconstruct::{frame_ratio, reconstruct, residual_norms, FrameReport, Reconstruction};
pub use signals::{apply_operator, l2_norm_sq, sample_family, BandlimitedSignal, SampleSet};
