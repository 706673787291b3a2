//! Dense complex polynomials with controlled rounding.
//!
//! Coefficients are stored in ascending powers: index `j` holds the
//! coefficient of `x^j`. The leading coefficient is nonzero unless the
//! polynomial is identically zero, which is represented by an empty
//! coefficient list and the degree sentinel `-1`.

use crate::error::{Error, Result};
use crate::fft::{fft, FftDirection};
use crate::num::{rel_bits, rfloat, BigComplex, Precision};
use rug::float::Round;
use rug::ops::AddAssignRound;
use rug::Float;
use std::fmt;

/// Degree bound up to which Taylor shifts use plain synthetic division.
const SHIFT_SYNTHETIC_MAX: usize = 33;

/// Size bound up to which products use the schoolbook method.
const MUL_SCHOOLBOOK_MAX: usize = 24;

#[derive(Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<BigComplex>,
}

impl Poly {
    /// The zero polynomial (empty representation, degree -1).
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    /// Builds from ascending coefficients, stripping trailing zeros.
    pub fn from_coeffs(mut coeffs: Vec<BigComplex>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_f64_coeffs(prec: Precision, coeffs: &[(f64, f64)]) -> Self {
        Poly::from_coeffs(
            coeffs
                .iter()
                .map(|&(re, im)| BigComplex::from_f64(prec, re, im))
                .collect(),
        )
    }

    /// Monic product of `(x - r)` over the given roots.
    pub fn from_roots(prec: Precision, roots: &[BigComplex]) -> Self {
        let mut acc = Poly::from_coeffs(vec![BigComplex::one(prec)]);
        for r in roots {
            let lin = Poly::from_coeffs(vec![r.neg(), BigComplex::one(prec)]);
            acc = acc.mul(&lin, prec);
        }
        acc
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    /// Coefficient of `x^j`; zero beyond the degree.
    pub fn coeff(&self, j: usize) -> BigComplex {
        self.coeffs
            .get(j)
            .cloned()
            .unwrap_or_else(|| BigComplex::zero(Precision::new(Precision::MIN_BITS)))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `-1` for the zero polynomial.
    pub fn degree(&self) -> isize {
        self.coeffs.len() as isize - 1
    }

    pub fn leading(&self) -> Option<&BigComplex> {
        self.coeffs.last()
    }

    /// Widest coefficient mantissa, or the minimum width for zero.
    pub fn max_prec(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|c| c.prec())
            .max()
            .unwrap_or(Precision::MIN_BITS)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    /// Sum of coefficient moduli, rounded up: an upper bound on `|P|` at
    /// the working width.
    pub fn l1_norm(&self, prec: Precision) -> Float {
        let mut acc = Float::new(prec.bits());
        for c in &self.coeffs {
            acc.add_assign_round(c.modulus_upper(prec), Round::Up);
        }
        acc
    }

    /// Lower bound companion of [`Poly::l1_norm`].
    pub fn l1_norm_lower(&self, prec: Precision) -> Float {
        let mut acc = Float::new(prec.bits());
        for c in &self.coeffs {
            let m = Float::with_val_round(prec.bits(), c.re().hypot_ref(c.im()), Round::Down).0;
            acc.add_assign_round(m, Round::Down);
        }
        acc
    }

    /// Horner evaluation at the working width.
    pub fn eval(&self, z: &BigComplex, prec: Precision) -> BigComplex {
        let mut acc = BigComplex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z, prec).add(c, prec);
        }
        acc
    }

    /// Formal derivative.
    pub fn derivative(&self, prec: Precision) -> Poly {
        if self.len() <= 1 {
            return Poly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(j, c)| c.mul_real(&rfloat(prec, j as f64), prec))
            .collect();
        Poly::from_coeffs(coeffs)
    }

    /// Re-rounds every coefficient to `prec`.
    pub fn round_to(&self, prec: Precision) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.round_to(prec)).collect())
    }

    pub fn neg(&self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn add(&self, rhs: &Poly, prec: Precision) -> Poly {
        let n = self.len().max(rhs.len());
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let a = self.coeffs.get(j);
            let b = rhs.coeffs.get(j);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a.add(b, prec),
                (Some(a), None) => a.round_to(prec),
                (None, Some(b)) => b.round_to(prec),
                (None, None) => unreachable!(),
            });
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, rhs: &Poly, prec: Precision) -> Poly {
        self.add(&rhs.neg(), prec)
    }

    /// Scales every coefficient by a complex constant.
    pub fn scale(&self, s: &BigComplex, prec: Precision) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.mul(s, prec)).collect())
    }

    pub fn scale_real(&self, s: &Float, prec: Precision) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| c.mul_real(s, prec)).collect())
    }

    /// Product at the working width: schoolbook for small operands, FFT
    /// convolution above.
    pub fn mul(&self, rhs: &Poly, prec: Precision) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let (la, lb) = (self.len(), rhs.len());
        if la.min(lb) <= MUL_SCHOOLBOOK_MAX {
            return self.mul_schoolbook(rhs, prec);
        }
        self.mul_fft(rhs, prec)
    }

    fn mul_schoolbook(&self, rhs: &Poly, prec: Precision) -> Poly {
        let out_len = self.len() + rhs.len() - 1;
        let mut out = vec![BigComplex::zero(prec); out_len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a.mul(b, prec);
                out[i + j] = out[i + j].add(&t, prec);
            }
        }
        Poly::from_coeffs(out)
    }

    fn mul_fft(&self, rhs: &Poly, prec: Precision) -> Poly {
        let out_len = self.len() + rhs.len() - 1;
        let l = out_len.next_power_of_two();
        let guard = 2 * l.trailing_zeros() + 24;
        let w = prec.plus(guard);
        let pad = |p: &Poly| {
            let mut v: Vec<BigComplex> = p.coeffs.to_vec();
            v.resize(l, BigComplex::zero(w));
            v
        };
        let fa = fft(&pad(self), FftDirection::Forward, w).expect("power-of-two length");
        let fb = fft(&pad(rhs), FftDirection::Forward, w).expect("power-of-two length");
        let prod: Vec<BigComplex> = fa
            .iter()
            .zip(fb.iter())
            .map(|(a, b)| a.mul(b, w))
            .collect();
        let inv = fft(&prod, FftDirection::Inverse, w).expect("power-of-two length");
        Poly::from_coeffs(
            inv.into_iter()
                .take(out_len)
                .map(|c| c.round_to(prec))
                .collect(),
        )
    }

    /// Taylor shift: returns `Q` with `Q(z) = P(z + u)`. Degree and
    /// leading coefficient are preserved.
    pub fn shift(&self, u: &BigComplex, prec: Precision) -> Poly {
        if self.is_zero() || u.is_zero() {
            return self.clone();
        }
        if self.len() <= SHIFT_SYNTHETIC_MAX {
            return self.shift_synthetic(u, prec);
        }
        let m = self.len() / 2;
        let lo = Poly {
            coeffs: self.coeffs[..m].to_vec(),
        }
        .shift(u, prec);
        let hi = Poly {
            coeffs: self.coeffs[m..].to_vec(),
        }
        .shift(u, prec);
        let lin = Poly::from_coeffs(vec![u.clone(), BigComplex::one(prec)]);
        let binom = lin.pow(m as u32, prec);
        lo.add(&binom.mul(&hi, prec), prec)
    }

    fn shift_synthetic(&self, u: &BigComplex, prec: Precision) -> Poly {
        let n = self.len();
        let mut c: Vec<BigComplex> = self.coeffs.to_vec();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = u.mul(&c[j + 1], prec);
                c[j] = c[j].add(&t, prec);
            }
        }
        Poly::from_coeffs(c)
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, k: u32, prec: Precision) -> Poly {
        let mut result = Poly::from_coeffs(vec![BigComplex::one(prec)]);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base, prec);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base, prec);
            }
        }
        result
    }

    /// Dilation: coefficient `j` is multiplied by `rho^j`, so every root
    /// is divided by `rho`.
    pub fn dilate(&self, rho: &Float, prec: Precision) -> Result<Poly> {
        if !(rho.is_finite() && rho.is_sign_positive() && !rho.is_zero()) {
            return Err(Error::InvalidInput("dilation factor must be positive".into()));
        }
        let mut pow = rfloat(prec, 1.0);
        let mut out = Vec::with_capacity(self.len());
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                pow = Float::with_val(prec.bits(), &pow * rho);
            }
            out.push(c.mul_real(&pow, prec));
        }
        let result = Poly::from_coeffs(out);
        if !result.is_finite() {
            return Err(Error::Overflow);
        }
        Ok(result)
    }

    /// Exact dilation by `2^beta`.
    pub fn dilate_pow2(&self, beta: i64) -> Result<Poly> {
        let mut out = Vec::with_capacity(self.len());
        for (j, c) in self.coeffs.iter().enumerate() {
            let total = beta.checked_mul(j as i64).ok_or(Error::Overflow)?;
            out.push(mul_pow2_i64(c, total)?);
        }
        Ok(Poly { coeffs: out })
    }

    /// Reversal `x^n P(1/x)`: nonzero roots map to their inverses. Zeros
    /// of `P` at the origin become leading zeros and are stripped, so the
    /// degree can drop (`x^2` reverses to the constant `1`).
    pub fn reciprocal(&self) -> Poly {
        let mut coeffs = self.coeffs.to_vec();
        coeffs.reverse();
        Poly::from_coeffs(coeffs)
    }

    /// Rounds coefficients to the coarsest width with
    /// `|P - Q| < eps * |Q|` in the l1 norm. Each coefficient is rounded
    /// to a relative error of at most `eps / (2(n+1))` and the aggregate
    /// bound is then verified, widening if necessary.
    pub fn round_rel(&self, eps: &Float) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let spread = 2 * (self.len() as u32).next_power_of_two().trailing_zeros() + 2;
        let mut w = Precision::new(rel_bits(eps) + spread + 1);
        loop {
            let rounded = self.round_to(w);
            if self.rounding_within_rel(&rounded, eps) {
                return rounded;
            }
            if w.bits() >= self.max_prec() {
                return self.clone();
            }
            w = w.double();
        }
    }

    /// Rounds coefficients so that `|P - Q| < bound` absolutely.
    pub fn round_abs(&self, bound: &Float) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let norm = self.l1_norm(Precision::new(64));
        // |P - Q| <= 2^-w |P|; want that below `bound`.
        let ratio = Float::with_val(64, &norm / bound);
        let mut w = Precision::new(crate::num::log2_f64(&ratio).ceil().max(0.0) as u32 + 8);
        loop {
            let rounded = self.round_to(w);
            let check = Precision::new(self.max_prec().max(w.bits()) + 32);
            let diff = self.sub(&rounded, check).l1_norm(check);
            if diff < *bound {
                return rounded;
            }
            if w.bits() >= self.max_prec() {
                return self.clone();
            }
            w = w.double();
        }
    }

    fn rounding_within_rel(&self, rounded: &Poly, eps: &Float) -> bool {
        let check = Precision::new(self.max_prec().max(rounded.max_prec()) + 32);
        let diff = self.sub(rounded, check).l1_norm(check);
        let denom = rounded.l1_norm_lower(check);
        let rhs = Float::with_val_round(check.bits(), eps * &denom, Round::Down).0;
        diff < rhs
    }

    /// Euclidean division: `self = Q * rhs + R` with `deg R < deg rhs`.
    pub fn divrem(&self, rhs: &Poly, prec: Precision) -> Result<(Poly, Poly)> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.degree() < rhs.degree() {
            return Ok((Poly::zero(), self.clone()));
        }
        let db = rhs.len() - 1;
        let lead = rhs.leading().expect("nonzero divisor");
        let mut rem: Vec<BigComplex> = self.coeffs.to_vec();
        let qlen = self.len() - db;
        let mut q = vec![BigComplex::zero(prec); qlen];
        for i in (0..qlen).rev() {
            let c = rem[i + db].div(lead, prec);
            if !c.is_zero() {
                for (j, b) in rhs.coeffs.iter().enumerate() {
                    let t = c.mul(b, prec);
                    rem[i + j] = rem[i + j].sub(&t, prec);
                }
            }
            rem[i + db] = BigComplex::zero(prec);
            q[i] = c;
        }
        rem.truncate(db);
        Ok((Poly::from_coeffs(q), Poly::from_coeffs(rem)))
    }

    /// `(self * rhs) mod modulus`.
    pub fn mulmod(&self, rhs: &Poly, modulus: &Poly, prec: Precision) -> Result<Poly> {
        if modulus.degree() < 1 {
            return Err(Error::InvalidInput(
                "modulus must have degree at least 1".into(),
            ));
        }
        let prod = self.mul(rhs, prec);
        Ok(prod.divrem(modulus, prec)?.1)
    }

    /// Splits off the leading coefficient: returns the monic rescaling
    /// and the original leading coefficient.
    pub fn monic(&self, prec: Precision) -> Option<(Poly, BigComplex)> {
        let lead = self.leading()?.clone();
        let inv = lead.recip(prec);
        Some((self.scale(&inv, prec), lead))
    }
}

/// Exact scaling by `2^k` with an `i64` exponent, chunked through the
/// `i32` shift interface.
fn mul_pow2_i64(c: &BigComplex, k: i64) -> Result<BigComplex> {
    let mut out = c.clone();
    let mut rest = k;
    while rest != 0 {
        let step = rest.clamp(i64::from(i32::MIN / 2), i64::from(i32::MAX / 2)) as i32;
        out = out.mul_pow2(step);
        if !out.is_finite() {
            return Err(Error::Overflow);
        }
        rest -= i64::from(step);
    }
    Ok(out)
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(j, c)| format!("({:.6e},{:.6e})x^{}", c.re().to_f64(), c.im().to_f64(), j))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
