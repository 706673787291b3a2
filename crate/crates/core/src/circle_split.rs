//! Factor extraction from a unit splitting circle.
//!
//! Given `P` with exactly `k` roots in the open unit disk and none in the
//! annulus `(e^-delta, e^delta)`, the factor `F` collecting the inside
//! roots is recovered in three moves: discretized contour integrals over
//! the unit circle give the power sums of the inside roots and the
//! moments of `1/P` ([`contour_sums`]); Newton's identities turn those
//! into an initial factor `F0` and auxiliary polynomial `H0` ([`res`]);
//! and a quadratically convergent Newton iteration on factor pairs
//! ([`ns`], with [`aux`] maintaining `H * G == 1 mod F`) refines the pair
//! until `|P - F*G| < eps * |P|`. [`fcs`] orchestrates the three with
//! sample-count doubling when the quadrature was too coarse.

use crate::circle_search::{pair_residual, FactorPair};
use crate::error::{Error, Result};
use crate::num::{rel_bits, rfloat, BigComplex, Precision};
use crate::poly::Poly;
use crate::fft::{fft, FftDirection};
use crate::Limits;
use rug::float::Constant;
use rug::Float;

/// Iteration caps: both loops converge quadratically when they converge
/// at all, so these are generous.
const AUX_MAX_ITERS: usize = 64;
const NS_MAX_ITERS: usize = 64;

/// Discretized contour integrals over the unit circle at `N = K * L`
/// roots of unity.
#[derive(Clone, Debug)]
pub struct ContourSums {
    /// `W_m = (1/N) sum_j P'(w^j)/P(w^j) w^{(m+1)j}` for `m = 1..=k`:
    /// approximate power sums of the roots inside the unit disk.
    pub power_sums: Vec<BigComplex>,
    /// `U_m = (1/N) sum_j w^{mj} / P(w^j)` for `m = 1..=k`: approximate
    /// moments of `1/P` along the circle.
    pub inv_moments: Vec<BigComplex>,
    /// Total sample count `N`.
    pub samples: usize,
}

/// The power of two `L` with `n < L <= 2n` used as FFT length.
pub(crate) fn fft_length(n: usize) -> usize {
    (n + 1).next_power_of_two()
}

/// Evaluates the contour sums by `K` passes of length-`L` FFTs over
/// twisted coefficient vectors. `samples` must be a multiple of the FFT
/// length. Fails with [`Error::SampleSingular`] when a sample point lands
/// below the resolvable magnitude of `P`; the caller reacts by enlarging
/// `samples`, which moves the whole sample set.
pub fn contour_sums(
    p: &Poly,
    k: usize,
    samples: usize,
    prec: Precision,
) -> Result<ContourSums> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::InvalidInput("contour sums need degree >= 1".into()));
    }
    let n = n as usize;
    if k < 1 || k > n {
        return Err(Error::InvalidInput(format!(
            "inside root count {k} out of range 1..={n}"
        )));
    }
    let l = fft_length(n);
    if samples == 0 || !samples.is_multiple_of(l) {
        return Err(Error::InvalidInput(format!(
            "sample count {samples} is not a multiple of the FFT length {l}"
        )));
    }
    let passes = samples / l;
    let w = prec.plus(32);

    // magnitude below which a sample value is treated as a root hit
    let threshold = {
        let norm = p.l1_norm(w);
        let cut = crate::num::pow2(w, -(prec.bits() as i32) / 2);
        norm * cut
    };

    let deriv = p.derivative(w);
    let theta = {
        let two_pi = Float::with_val(w.bits(), Constant::Pi) * 2u32;
        two_pi / samples as u32
    };

    let mut power_sums = vec![BigComplex::zero(w); k];
    let mut inv_moments = vec![BigComplex::zero(w); k];

    for u in 0..passes {
        let base = {
            let angle = Float::with_val(w.bits(), &theta * u as u32);
            let (sin, cos) = angle.sin_cos(Float::new(w.bits()));
            BigComplex::from_parts(cos, sin)
        };
        let alpha = fft(&twisted(p, &base, l, w), FftDirection::Forward, w)?;
        let beta = fft(&twisted(&deriv, &base, l, w), FftDirection::Forward, w)?;

        let mut gamma = Vec::with_capacity(l);
        let mut delta = Vec::with_capacity(l);
        for (a, b) in alpha.iter().zip(beta.iter()) {
            if a.modulus(w) < threshold {
                return Err(Error::SampleSingular);
            }
            let inv = a.recip(w);
            delta.push(b.mul(&inv, w));
            gamma.push(inv);
        }
        let x = fft(&gamma, FftDirection::Forward, w)?;
        let y = fft(&delta, FftDirection::Forward, w)?;

        // accumulate x_m w^{mu} and y_{m+1} w^{(m+1)u} for m = 1..=k;
        // both transforms are L-periodic in the index, so wrap exactly
        let mut wu_pow = base.clone(); // base^(1), exponent tracks m
        for m in 1..=k {
            inv_moments[m - 1] = inv_moments[m - 1].add(&x[m % l].mul(&wu_pow, w), w);
            let next = wu_pow.mul(&base, w); // base^(m+1)
            power_sums[m - 1] = power_sums[m - 1].add(&y[(m + 1) % l].mul(&next, w), w);
            wu_pow = next;
        }
    }

    let count = rfloat(w, samples as f64);
    let finish = |v: Vec<BigComplex>| -> Vec<BigComplex> {
        v.into_iter()
            .map(|c| c.div_real(&count, w).round_to(prec))
            .collect()
    };
    Ok(ContourSums {
        power_sums: finish(power_sums),
        inv_moments: finish(inv_moments),
        samples,
    })
}

/// Coefficients of `q` twisted by powers of `base` and zero-padded to
/// length `l`: entry `j` is `q_j * base^j`.
fn twisted(q: &Poly, base: &BigComplex, l: usize, prec: Precision) -> Vec<BigComplex> {
    let mut out = Vec::with_capacity(l);
    let mut pow = BigComplex::one(prec);
    for (j, c) in q.coeffs().iter().enumerate() {
        if j > 0 {
            pow = pow.mul(base, prec);
        }
        out.push(c.mul(&pow, prec));
    }
    out.resize(l, BigComplex::zero(prec));
    out
}

/// Initial approximations of the inside factor and the auxiliary
/// polynomial from the contour sums: Newton's identities convert the
/// power sums into the monic `F0` of degree `k`, and the `1/P` moments
/// assemble `H0` of degree `< k`. `k = n` is allowed and recovers the
/// monic rescaling of `P` itself.
pub fn res(p: &Poly, k: usize, samples: usize, prec: Precision) -> Result<(Poly, Poly)> {
    let sums = contour_sums(p, k, samples, prec)?;
    let phi = elementary_from_power_sums(&sums.power_sums, prec);

    // F0 = z^k + phi_1 z^{k-1} + ... + phi_k
    let mut f_coeffs = vec![BigComplex::zero(prec); k + 1];
    for (i, c) in phi.iter().enumerate() {
        f_coeffs[k - i] = c.clone();
    }
    let f0 = Poly::from_coeffs(f_coeffs);

    // H0 coefficient of z^l is sum_{m=l+1}^{k} phi_{k-m} U_{m-l}
    let us = &sums.inv_moments;
    let mut h_coeffs = Vec::with_capacity(k);
    for ell in 0..k {
        let mut acc = BigComplex::zero(prec);
        for m in (ell + 1)..=k {
            acc = acc.add(&phi[k - m].mul(&us[m - ell - 1], prec), prec);
        }
        h_coeffs.push(acc);
    }
    let h0 = Poly::from_coeffs(h_coeffs);
    Ok((f0, h0))
}

/// Newton's identities: converts the power sums `W_1..W_k` of a root
/// multiset into the coefficients `phi_0 = 1, phi_1, ..., phi_k` of its
/// monic product, via
/// `phi_m = -(W_1 phi_{m-1} + ... + W_{m-1} phi_1 + W_m) / m`.
pub fn elementary_from_power_sums(ws: &[BigComplex], prec: Precision) -> Vec<BigComplex> {
    let k = ws.len();
    let mut phi = vec![BigComplex::one(prec)];
    for m in 1..=k {
        let mut acc = ws[m - 1].clone();
        for i in 1..m {
            acc = acc.add(&ws[i - 1].mul(&phi[m - i], prec), prec);
        }
        let m_real = rfloat(prec, m as f64);
        phi.push(acc.div_real(&m_real, prec).neg());
    }
    phi
}

/// Refines the auxiliary polynomial: iterates `D = 1 - H*G0 mod F0`,
/// `H <- H(1 + D) mod F0`, until `|D| < eps`. The defect squares each
/// round, so divergence shows up fast: `|D| > 1` returns `None` (the
/// caller treats it as "quadrature too coarse").
pub fn aux(f0: &Poly, g0: &Poly, h0: &Poly, eps: &Float, prec: Precision) -> Result<Option<Poly>> {
    Ok(aux_traced(f0, g0, h0, eps, prec)?.0)
}

/// [`aux`] with the defect sequence `|D_m|` exposed for convergence
/// analysis.
pub fn aux_traced(
    f0: &Poly,
    g0: &Poly,
    h0: &Poly,
    eps: &Float,
    prec: Precision,
) -> Result<(Option<Poly>, Vec<Float>)> {
    if f0.degree() < 1 {
        return Err(Error::InvalidInput("aux modulus must have degree >= 1".into()));
    }
    if h0.degree() >= f0.degree() {
        return Err(Error::InvalidInput(
            "auxiliary polynomial must have degree below the factor".into(),
        ));
    }
    let one = Poly::from_coeffs(vec![BigComplex::one(prec)]);
    let mut h = h0.clone();
    let mut defects = Vec::new();
    for _ in 0..AUX_MAX_ITERS {
        let prod = h.mulmod(g0, f0, prec)?;
        let d = one.sub(&prod, prec);
        let defect = d.l1_norm(prec);
        defects.push(defect.clone());
        if defect < *eps {
            return Ok((Some(h), defects));
        }
        if defect > 1u32 {
            return Ok((None, defects));
        }
        let incr = one.add(&d, prec);
        h = h.mulmod(&incr, f0, prec)?;
    }
    Ok((None, defects))
}

/// Newton iteration on the factor pair: from an approximate monic factor
/// `F` and auxiliary `H`, repeatedly sets `G = P div F`, measures
/// `|P - F*G|/|P|`, and corrects `F += (H*P mod F)`. Returns `None` when
/// the starting point is outside the convergence basin (relative residual
/// above 1, or the auxiliary iteration diverged).
pub fn ns(
    p: &Poly,
    f0: &Poly,
    h0: &Poly,
    eps: &Float,
    prec: Precision,
) -> Result<Option<FactorPair>> {
    let n = p.degree();
    let kf = f0.degree();
    if !(1 <= kf && kf < n) {
        return Err(Error::InvalidInput(
            "factor degree must be strictly between 0 and deg(P)".into(),
        ));
    }
    let mut f = f0.clone();
    let mut h = h0.clone();
    let mut g = p.divrem(&f, prec)?.0;
    for _ in 0..NS_MAX_ITERS {
        let resid = pair_residual(p, &f, &g, prec);
        if resid < *eps {
            return Ok(Some(FactorPair {
                f,
                g,
                residual: resid,
            }));
        }
        if resid > 1u32 {
            return Ok(None);
        }
        match aux(&f, &g, &h, &resid, prec)? {
            Some(h1) => h = h1,
            None => return Ok(None),
        }
        let correction = h.mul(p, prec).divrem(&f, prec)?.1;
        let f_next = f.add(&correction, prec);
        if f_next.degree() != kf {
            return Ok(None);
        }
        f = f_next;
        g = p.divrem(&f, prec)?.0;
    }
    Ok(None)
}

/// Factorization given a unit splitting circle: `P` has exactly `k`
/// roots in the open unit disk and none in `(e^-delta, e^delta)`.
/// Runs [`res`]/[`ns`] with `N = K*L` contour samples, doubling `N`
/// whenever the Newton iteration fails to engage, and returns the pair
/// with its residual verified at doubled working width.
pub fn fcs(p: &Poly, k: usize, delta: f64, eps: &Float, limits: &Limits) -> Result<FactorPair> {
    let n = p.degree();
    if n < 2 {
        return Err(Error::InvalidInput("fcs needs degree >= 2".into()));
    }
    let n = n as usize;
    if k < 1 || k >= n {
        return Err(Error::InvalidInput(format!(
            "inside root count {k} out of range 1..{n}"
        )));
    }
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidInput("fcs needs delta > 0".into()));
    }

    let l = fft_length(n);
    let passes = ((1.0 / (2.0 * delta)).ceil().max(2.0)) as usize;
    let mut samples = passes * l;
    let cap = limits.max_sample_factor as usize * l;

    let bits = (n as u32 + rel_bits(eps) + 32).max(p.max_prec());
    limits.check_bits(bits, n)?;
    let prec = Precision::new(bits);

    loop {
        if samples > cap {
            return Err(Error::SplitFailed(format!(
                "contour sample ceiling {cap} reached at degree {n}"
            )));
        }
        let (f0, h0) = match res(p, k, samples, prec) {
            Ok(pair) => pair,
            Err(Error::SampleSingular) => {
                samples *= 2;
                continue;
            }
            Err(e) => return Err(e),
        };
        match ns(p, &f0, &h0, eps, prec)? {
            Some(pair) => {
                let verified = pair_residual(p, &pair.f, &pair.g, prec.double());
                if verified < *eps && pair.f.degree() == k as isize {
                    return Ok(FactorPair {
                        residual: verified,
                        ..pair
                    });
                }
                samples *= 2;
            }
            None => {
                samples *= 2;
            }
        }
    }
}
