//! Radix-2 discrete Fourier transform over arbitrary-precision complex
//! values.
//!
//! The forward transform uses the root `w = e^{2 pi i / L}`:
//! `X_m = sum_k x_k w^{mk}`. The inverse uses the conjugate root and
//! scales by `1/L` (exact, `L` being a power of two). Twiddle factors are
//! recomputed per call at the working width, so calls are pure and safe
//! to run concurrently.

use crate::error::{Error, Result};
use crate::num::{BigComplex, Precision};
use rug::float::Constant;
use rug::Float;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FftDirection {
    Forward,
    Inverse,
}

/// In-order radix-2 FFT. The length must be a power of two.
pub fn fft(values: &[BigComplex], direction: FftDirection, prec: Precision) -> Result<Vec<BigComplex>> {
    let l = values.len();
    if l == 0 || !l.is_power_of_two() {
        return Err(Error::InvalidInput(format!(
            "FFT length {l} is not a power of two"
        )));
    }
    if l == 1 {
        return Ok(vec![values[0].round_to(prec)]);
    }
    let lg = l.trailing_zeros();
    let w = prec.plus(2 * lg + 16);

    let twiddles = twiddle_table(l, direction, w);
    let mut a: Vec<BigComplex> = (0..l)
        .map(|i| values[bit_reverse(i, lg)].clone())
        .collect();

    let mut len = 2;
    while len <= l {
        let half = len / 2;
        let step = l / len;
        for start in (0..l).step_by(len) {
            for k in 0..half {
                let t = a[start + half + k].mul(&twiddles[k * step], w);
                let u = a[start + k].clone();
                a[start + k] = u.add(&t, w);
                a[start + half + k] = u.sub(&t, w);
            }
        }
        len *= 2;
    }

    if direction == FftDirection::Inverse {
        let shift = -(lg as i32);
        for v in &mut a {
            *v = v.mul_pow2(shift);
        }
    }
    Ok(a.into_iter().map(|v| v.round_to(prec)).collect())
}

fn bit_reverse(i: usize, bits: u32) -> usize {
    i.reverse_bits() >> (usize::BITS - bits)
}

/// Powers `w^k` for `k < l/2`, refreshed from exact sin/cos every 64
/// steps to stop drift in the power chain.
fn twiddle_table(l: usize, direction: FftDirection, w: Precision) -> Vec<BigComplex> {
    let bits = w.bits();
    let two_pi = Float::with_val(bits, Constant::Pi) * 2u32;
    let theta = two_pi >> l.trailing_zeros();
    let mut table = Vec::with_capacity(l / 2);
    table.push(BigComplex::from_f64(w, 1.0, 0.0));
    if l / 2 > 1 {
        let base = unit_root(&theta, direction, bits);
        for k in 1..l / 2 {
            let next = if k % 64 == 0 {
                let angle = Float::with_val(bits, &theta * k as u32);
                unit_root(&angle, direction, bits)
            } else {
                table[k - 1].mul(&base, w)
            };
            table.push(next);
        }
    }
    table
}

fn unit_root(angle: &Float, direction: FftDirection, bits: u32) -> BigComplex {
    let (sin, cos) = angle.clone().sin_cos(Float::new(bits));
    match direction {
        FftDirection::Forward => BigComplex::from_parts(cos, sin),
        FftDirection::Inverse => BigComplex::from_parts(cos, -sin),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::pow2;

    fn p(bits: u32) -> Precision {
        Precision::new(bits)
    }

    fn cvec(prec: Precision, vals: &[(f64, f64)]) -> Vec<BigComplex> {
        vals.iter()
            .map(|&(re, im)| BigComplex::from_f64(prec, re, im))
            .collect()
    }

    #[test]
    fn impulse_transforms_to_ones() {
        let prec = p(96);
        let v = cvec(prec, &[(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let out = fft(&v, FftDirection::Forward, prec).unwrap();
        for x in &out {
            assert!((x.re().to_f64() - 1.0).abs() < 1e-20);
            assert!(x.im().to_f64().abs() < 1e-20);
        }
    }

    #[test]
    fn ones_transform_to_impulse() {
        let prec = p(96);
        let v = cvec(prec, &[(1.0, 0.0); 4]);
        let out = fft(&v, FftDirection::Forward, prec).unwrap();
        assert!((out[0].re().to_f64() - 4.0).abs() < 1e-20);
        for x in &out[1..] {
            assert!(x.modulus(prec).to_f64() < 1e-20);
        }
    }

    #[test]
    fn forward_sign_convention() {
        // [0, 1] transforms to [1, w] with w = e^{2 pi i / 2} = -1; for
        // length 4, index 1 must pick up +i (positive-sign root).
        let prec = p(96);
        let v = cvec(prec, &[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 0.0)]);
        let out = fft(&v, FftDirection::Forward, prec).unwrap();
        assert!((out[1].im().to_f64() - 1.0).abs() < 1e-20);
        assert!(out[1].re().to_f64().abs() < 1e-20);
    }

    #[test]
    fn rejects_non_power_of_two() {
        let prec = p(64);
        let v = cvec(prec, &[(1.0, 0.0); 3]);
        assert!(fft(&v, FftDirection::Forward, prec).is_err());
    }

    #[test]
    fn round_trip_many_lengths() {
        let prec = p(128);
        for lg in 1..=10 {
            let l = 1usize << lg;
            let vals: Vec<(f64, f64)> = (0..l)
                .map(|i| ((i as f64 * 0.83).sin(), (i as f64 * 1.7).cos()))
                .collect();
            let v = cvec(prec, &vals);
            let fwd = fft(&v, FftDirection::Forward, prec).unwrap();
            let back = fft(&fwd, FftDirection::Inverse, prec).unwrap();
            let tol = pow2(prec, -(prec.bits() as i32) + 30).to_f64();
            for (orig, rt) in v.iter().zip(back.iter()) {
                let d = orig.sub(rt, prec).modulus(prec).to_f64();
                assert!(d < tol, "length {l}: drift {d}");
            }
        }
    }
}
