//! Arbitrary-precision binary floating-point scalars.
//!
//! Every scalar in the crate is a [`BigComplex`]: a complex number whose
//! real and imaginary parts are binary floats with an explicit mantissa
//! width, rounded to nearest. A [`Precision`] names the working width of
//! a computation scope; results of arithmetic are rounded to the width of
//! the scope that produced them, so a value always carries the precision
//! it was computed at.

use rug::float::Round;
use rug::ops::{CompleteRound, Pow};
use rug::{Complex, Float};

/// Mantissa width (in bits) for a computation scope. Never below 53.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 53;

    /// A width of at least `MIN_BITS` bits.
    pub fn new(bits: u32) -> Self {
        Precision(bits.max(Self::MIN_BITS))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Widened scope, for guard digits.
    pub fn plus(self, extra: u32) -> Self {
        Precision(self.0 + extra)
    }

    /// Doubled width, for verification passes.
    pub fn double(self) -> Self {
        Precision(self.0 * 2)
    }

    /// Width able to resolve a relative error of `eps`, plus `guard` bits.
    ///
    /// `eps >= 1` collapses to the minimum width.
    pub fn for_rel_eps(eps: &Float, guard: u32) -> Self {
        Precision::new(rel_bits(eps) + guard)
    }
}

/// `ceil(-log2(eps))` clamped to `[0, u32::MAX]`: the number of mantissa
/// bits consumed by a relative tolerance.
pub fn rel_bits(eps: &Float) -> u32 {
    if !eps.is_finite() || eps.is_zero() || !eps.is_sign_positive() {
        return u32::MAX;
    }
    if *eps >= 1u32 {
        return 0;
    }
    // exp(x) in rug: value = mantissa * 2^exp with mantissa in [0.5, 1).
    match eps.get_exp() {
        Some(e) => {
            // eps in [2^(e-1), 2^e) => -log2(eps) in (-e, -e+1].
            let e = i64::from(e);
            u32::try_from((-e) + 1).unwrap_or(u32::MAX)
        }
        None => u32::MAX,
    }
}

/// A real constant at the given width.
pub fn rfloat(prec: Precision, value: f64) -> Float {
    Float::with_val(prec.bits(), value)
}

/// `2^exp` as a positive real, exact.
pub fn pow2(prec: Precision, exp: i32) -> Float {
    Float::with_val(prec.bits(), Float::i_exp(1, exp))
}

/// Parses a decimal string at the given width, round to nearest.
pub fn float_from_decimal(prec: Precision, text: &str) -> Option<Float> {
    let parsed = Float::parse(text).ok()?;
    Some(Float::with_val(prec.bits(), parsed))
}

/// Full-precision decimal rendering, enough digits to reparse exactly.
pub fn decimal_string(value: &Float) -> String {
    if value.is_zero() {
        return "0".to_string();
    }
    let digits = (value.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    value.to_string_radix(10, Some(digits))
}

/// An arbitrary-precision complex number.
///
/// Finite by invariant: no operation lets an infinity or NaN escape
/// unnoticed; overflow surfaces as an error in the algorithms that can
/// produce it.
#[derive(Clone, Debug, PartialEq)]
pub struct BigComplex {
    inner: Complex,
}

impl BigComplex {
    pub fn zero(prec: Precision) -> Self {
        BigComplex {
            inner: Complex::new(prec.bits()),
        }
    }

    pub fn one(prec: Precision) -> Self {
        BigComplex::from_f64(prec, 1.0, 0.0)
    }

    pub fn from_f64(prec: Precision, re: f64, im: f64) -> Self {
        BigComplex {
            inner: Complex::with_val(prec.bits(), (re, im)),
        }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        BigComplex {
            inner: Complex::from((re, im)),
        }
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        BigComplex {
            inner: Complex::with_val(prec, (re, Float::new(prec))),
        }
    }

    pub fn re(&self) -> &Float {
        self.inner.real()
    }

    pub fn im(&self) -> &Float {
        self.inner.imag()
    }

    /// Widest mantissa among the two parts.
    pub fn prec(&self) -> u32 {
        let (p, q) = self.inner.prec();
        p.max(q)
    }

    pub fn is_zero(&self) -> bool {
        self.inner.real().is_zero() && self.inner.imag().is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.inner.real().is_finite() && self.inner.imag().is_finite()
    }

    /// Re-rounds to `prec`, round to nearest.
    pub fn round_to(&self, prec: Precision) -> Self {
        BigComplex {
            inner: Complex::with_val(prec.bits(), &self.inner),
        }
    }

    pub fn add(&self, rhs: &Self, prec: Precision) -> Self {
        BigComplex {
            inner: Complex::with_val(prec.bits(), &self.inner + &rhs.inner),
        }
    }

    pub fn sub(&self, rhs: &Self, prec: Precision) -> Self {
        BigComplex {
            inner: Complex::with_val(prec.bits(), &self.inner - &rhs.inner),
        }
    }

    pub fn mul(&self, rhs: &Self, prec: Precision) -> Self {
        BigComplex {
            inner: Complex::with_val(prec.bits(), &self.inner * &rhs.inner),
        }
    }

    pub fn div(&self, rhs: &Self, prec: Precision) -> Self {
        BigComplex {
            inner: Complex::with_val(prec.bits(), &self.inner / &rhs.inner),
        }
    }

    pub fn recip(&self, prec: Precision) -> Self {
        BigComplex {
            inner: Complex::with_val(prec.bits(), self.inner.recip_ref()),
        }
    }

    /// Exact negation.
    pub fn neg(&self) -> Self {
        BigComplex {
            inner: (-&self.inner).complete(self.inner.prec()),
        }
    }

    /// Exact conjugation.
    pub fn conj(&self) -> Self {
        BigComplex {
            inner: self.inner.conj_ref().complete(self.inner.prec()),
        }
    }

    pub fn mul_real(&self, rhs: &Float, prec: Precision) -> Self {
        BigComplex {
            inner: Complex::with_val(prec.bits(), &self.inner * rhs),
        }
    }

    pub fn div_real(&self, rhs: &Float, prec: Precision) -> Self {
        BigComplex {
            inner: Complex::with_val(prec.bits(), &self.inner / rhs),
        }
    }

    /// Exact scaling by `2^k`.
    pub fn mul_pow2(&self, k: i32) -> Self {
        let mut out = self.inner.clone();
        out <<= k;
        BigComplex { inner: out }
    }

    /// `|z|`, round to nearest.
    pub fn modulus(&self, prec: Precision) -> Float {
        Float::with_val(
            prec.bits(),
            self.inner.real().hypot_ref(self.inner.imag()),
        )
    }

    /// Upper bound on `|z|` at the given width (rounds up).
    pub fn modulus_upper(&self, prec: Precision) -> Float {
        Float::with_val_round(
            prec.bits(),
            self.inner.real().hypot_ref(self.inner.imag()),
            Round::Up,
        )
        .0
    }

    /// `log2 |z|` as a double, or `-inf` for zero. Safe for values whose
    /// exponents exceed the double range.
    pub fn log2_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let prec = Precision::new(self.prec());
        let m = self.modulus(prec);
        log2_f64(&m)
    }
}

/// `log2` of a positive float as a double, exponent-safe.
pub fn log2_f64(value: &Float) -> f64 {
    if value.is_zero() {
        return f64::NEG_INFINITY;
    }
    let exp = value.get_exp().expect("finite nonzero float") as f64;
    // mantissa in [0.5, 1): bring the value into double range first.
    let mantissa = Float::with_val(64, value >> value.get_exp().unwrap()).to_f64();
    exp + mantissa.abs().log2()
}

/// `tau^n * e^(-c*n*tau)` style tolerance factors evaluated in big-float
/// arithmetic so they never underflow.
pub fn tau_pow_exp(prec: Precision, tau: f64, n: u32, coeff: f64) -> Float {
    let t = rfloat(prec, tau);
    let pow = t.clone().pow(n);
    let arg = rfloat(prec, coeff * n as f64 * tau);
    pow * arg.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(bits: u32) -> Precision {
        Precision::new(bits)
    }

    #[test]
    fn precision_floor() {
        assert_eq!(Precision::new(10).bits(), 53);
        assert_eq!(Precision::new(200).bits(), 200);
    }

    #[test]
    fn rel_bits_scale() {
        let eps = rfloat(p(64), 0.25);
        assert_eq!(rel_bits(&eps), 2);
        let one = rfloat(p(64), 1.0);
        assert_eq!(rel_bits(&one), 0);
        let tiny = pow2(p(64), -200);
        assert_eq!(rel_bits(&tiny), 200);
    }

    #[test]
    fn complex_arithmetic() {
        let prec = p(128);
        let a = BigComplex::from_f64(prec, 3.0, 4.0);
        assert_eq!(a.modulus(prec).to_f64(), 5.0);
        let b = BigComplex::from_f64(prec, 0.0, 1.0);
        let ab = a.mul(&b, prec);
        assert_eq!(ab.re().to_f64(), -4.0);
        assert_eq!(ab.im().to_f64(), 3.0);
        let q = ab.div(&b, prec);
        assert_eq!(q.re().to_f64(), 3.0);
        assert_eq!(q.im().to_f64(), 4.0);
    }

    #[test]
    fn pow2_scaling_is_exact() {
        let prec = p(64);
        let z = BigComplex::from_f64(prec, 1.5, -2.25);
        let shifted = z.mul_pow2(10).mul_pow2(-10);
        assert_eq!(z, shifted);
    }

    #[test]
    fn decimal_round_trip() {
        let prec = p(100);
        let x = rfloat(prec, 0.1) / rfloat(prec, 3.0);
        let s = decimal_string(&x);
        let back = float_from_decimal(prec, &s).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn log2_abs_handles_huge_exponents() {
        let prec = p(64);
        let mut z = BigComplex::from_f64(prec, 1.0, 0.0);
        z = z.mul_pow2(1_000_000);
        assert!((z.log2_abs() - 1.0e6).abs() < 1e-6);
    }
}
