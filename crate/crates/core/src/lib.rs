//! Certified approximate factorization of complex univariate polynomials.
//!
//! Given a polynomial `P` of degree `n` and a tolerance `eps`, [`fact`]
//! produces linear factors `L1..Ln` with `|P - L1*L2*...*Ln| < eps*|P|`
//! in the coefficient l1 norm, together with an independently verified
//! residual. The engine follows the splitting-circle strategy: locate a
//! circle with `k` roots strictly inside and a guaranteed root-free
//! annulus around its boundary, extract the corresponding factor through
//! contour integration over the circle, refine it by a quadratically
//! convergent Newton iteration on factor pairs, and recurse.
//!
//! The supporting toolkit is exposed as well:
//!
//! * [`num`] / [`poly`] / [`mod@fft`] — arbitrary-precision complex scalars,
//!   polynomial arithmetic with controlled rounding, and the radix-2 FFT;
//! * [`moduli`] — Graeffe root squaring and certified root-modulus
//!   estimators ([`nrd`], [`mod_k`], [`mod_max`], [`mod_min`]);
//! * [`circle_search`] — splitting-circle search ([`rad`], [`hom`],
//!   [`ctr`], [`ctr0`]);
//! * [`circle_split`] — factor extraction from a unit splitting circle
//!   ([`contour_sums`], [`res`], [`aux`], [`ns`], [`fcs`]);
//! * [`factor`] — complete factorization ([`fact`], [`roots`],
//!   [`verify_residual`]).
//!
//! All types are immutable values and all operations are pure functions;
//! the crate is safe for concurrent use from multiple threads.
//!
//! ```
//! use circlesplit::num::{float_from_decimal, Precision};
//! use circlesplit::{fact, Limits, Poly};
//!
//! let prec = Precision::new(128);
//! // x^3 - x
//! let p = Poly::from_f64_coeffs(prec, &[(0.0, 0.0), (-1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
//! let eps = float_from_decimal(prec, "1e-12").unwrap();
//! let list = fact(&p, &eps, &Limits::default()).unwrap();
//! assert_eq!(list.factors.len(), 3);
//! assert!(list.residual < eps);
//! ```

pub mod circle_search;
pub mod circle_split;
mod error;
pub mod factor;
pub mod fft;
pub mod moduli;
pub mod num;
pub mod poly;

pub use error::{Error, Result};
pub use num::{BigComplex, Precision};
pub use poly::Poly;

pub use circle_search::{ctr, ctr0, ctr_probed, hom, rad, Annulus, CtrProbe, FactorPair, SplitCircle};
pub use circle_split::{
    aux, aux_traced, contour_sums, elementary_from_power_sums, fcs, ns, res, ContourSums,
};
pub use factor::{fact, fact_traced, roots, verify_residual, FactorList, RootList, SplitEvent};
pub use fft::{fft, FftDirection};
pub use moduli::{
    envelope_scaling, graeffe, lower_convex_envelope, mod_k, mod_max, mod_min, nrd,
    EnvelopeScaling, ModulusEstimate,
};

/// Resource caps for the iterative algorithms.
///
/// `max_bits = 0` derives the cap from the degree of the polynomial at
/// hand as `4096 * max(1, n/16)`. The sample factor bounds the contour
/// quadrature: a split fails once `N` exceeds `max_sample_factor * L`.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub max_bits: u32,
    pub max_sample_factor: u32,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_bits: 0,
            max_sample_factor: 1 << 16,
        }
    }
}


impl Limits {
    /// Effective mantissa-width ceiling for a degree-`n` problem.
    pub fn bits_cap(&self, n: usize) -> u32 {
        if self.max_bits > 0 {
            self.max_bits
        } else {
            4096 * (n as u32 / 16).max(1)
        }
    }

    /// Checks a requested working width against the ceiling.
    pub(crate) fn check_bits(&self, bits: u32, n: usize) -> Result<u32> {
        let cap = self.bits_cap(n);
        if bits > cap {
            Err(Error::PrecisionExhausted {
                needed: bits,
                cap,
                degree: n,
            })
        } else {
            Ok(bits)
        }
    }
}
