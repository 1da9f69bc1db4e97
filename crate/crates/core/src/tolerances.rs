//! Default tolerances and resolutions shared by all modules.

/// `max_n |K_n(ξ)|` below this counts as a common root.
pub const TOL_ROOT: f64 = 1e-10;

/// `|det M_T(x)|` below this counts as a zero of the determinant.
pub const TOL_DET: f64 = 1e-10;

/// Max-norm of `G·M − I` accepted after spectral inversion.
pub const TOL_INV: f64 = 1e-9;

pub const DEFAULT_INITIAL_GRID: usize = 4096;
pub const DEFAULT_REFINE_LEVELS: usize = 3;

/// Gauss–Legendre nodes per spectral piece.
pub const DEFAULT_QUAD_ORDER: usize = 64;

/// Beyond this `|x|`, Fourier integrals are split into panels no wider than
/// a quarter period of `e^{2πixξ}`.
pub const SPLIT_THRESHOLD: f64 = 20.0;

/// Nodes per split panel. A quarter period is resolved far past f64 by 16 nodes.
pub const SPLIT_PANEL_ORDER: usize = 16;

/// Hard cap on split panels per unit source interval.
pub const MAX_SPLIT_PANELS: usize = 1 << 14;

/// Truncation of the spatial correction sum in the dynamical recursion.
pub const DEFAULT_J_DYN: usize = 64;

/// Multiplier on the outermost ring of terms used as a truncation estimate.
pub const TAIL_FACTOR: f64 = 10.0;
