//! Graeffe root squaring and certified root-modulus estimation.
//!
//! `rho_k(P)` denotes the k-th smallest root modulus of `P`, counted with
//! multiplicity. The estimators here bracket root moduli to a requested
//! multiplicative log-error `tau`: [`nrd`] counts roots in a disk,
//! [`mod_k`] brackets the k-th modulus, [`mod_max`] / [`mod_min`] the
//! largest and smallest. All of them iterate Graeffe steps, which square
//! every root, with per-level coefficient rounding whose tolerance keeps
//! the modulus brackets valid; the tolerance schedules shrink fast enough
//! in the degree that the working width is derived per level and checked
//! against the configured ceiling.

use crate::error::{Error, Result};
use crate::num::{pow2, rel_bits, rfloat, BigComplex, Precision};
use crate::poly::Poly;
use crate::Limits;
use rug::ops::Pow;
use rug::Float;

/// One Graeffe step: returns `Q` of the same degree with
/// `Q(x^2) = (-1)^n P(x) P(-x)`, so the roots of `Q` are the squares of
/// the roots of `P` and the leading coefficient is the square of the
/// leading coefficient of `P`.
pub fn graeffe(p: &Poly, prec: Precision) -> Result<Poly> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::InvalidInput("graeffe needs degree >= 1".into()));
    }
    let coeffs = p.coeffs();
    let even: Vec<BigComplex> = coeffs.iter().step_by(2).cloned().collect();
    let odd: Vec<BigComplex> = coeffs.iter().skip(1).step_by(2).cloned().collect();
    let a = Poly::from_coeffs(even);
    let b = Poly::from_coeffs(odd);
    let a2 = a.mul(&a, prec);
    let mut b2x = b.mul(&b, prec).coeffs().to_vec();
    b2x.insert(0, BigComplex::zero(prec));
    let q = a2.sub(&Poly::from_coeffs(b2x), prec);
    Ok(if n % 2 == 1 { q.neg() } else { q })
}

/// Corner indices of the convex envelope of `(j, y_j)` seen from above:
/// the polyline through consecutive corners bounds every finite point
/// from above. Points with `y = -inf` (zero coefficients) are never
/// corners; collinear interior points are not corners.
pub fn lower_convex_envelope(points: &[(usize, f64)]) -> Vec<usize> {
    let finite: Vec<(usize, f64)> = points
        .iter()
        .copied()
        .filter(|&(_, y)| y.is_finite())
        .collect();
    assert!(
        !finite.is_empty(),
        "envelope needs at least one finite point"
    );
    let mut hull: Vec<(usize, f64)> = Vec::with_capacity(finite.len());
    for &(x, y) in &finite {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // drop the middle point unless it rises strictly above the chord
            let cross = (x2 as f64 - x1 as f64) * (y - y1) - (x as f64 - x1 as f64) * (y2 - y1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    hull.into_iter().map(|(x, _)| x).collect()
}

/// A certified modulus bracket: `value * e^-tau <= rho_k(P) <= value * e^tau`.
#[derive(Clone, Debug)]
pub struct ModulusEstimate {
    pub value: Float,
    pub tau: f64,
}

impl ModulusEstimate {
    fn zero(tau: f64) -> Self {
        ModulusEstimate {
            value: Float::new(Precision::MIN_BITS),
            tau,
        }
    }
}

/// Log2 magnitudes of the coefficients, `-inf` for zeros.
fn log_points(p: &Poly) -> Vec<(usize, f64)> {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| (j, c.log2_abs()))
        .collect()
}

/// A power-of-two dilation `rho = 2^beta` chosen from the coefficient
/// envelope: `ell < k <= h` are the envelope corners straddling `k`, and
/// `beta = floor(log2(|a_ell| / |a_h|) / (h - ell) + 1/2)` nearly
/// equalizes the two corner magnitudes after dilation, which pins
/// `rho_k` of the dilated polynomial into a degree-bounded bracket.
#[derive(Clone, Copy, Debug)]
pub struct EnvelopeScaling {
    pub ell: usize,
    pub h: usize,
    pub beta: i64,
}

/// Envelope scaling for the k-th modulus of the polynomial whose log2
/// coefficient magnitudes are `points`. Zero coefficients (`-inf`) are
/// never corners, so both straddling corners carry nonzero coefficients.
pub fn envelope_scaling(points: &[(usize, f64)], k: usize) -> EnvelopeScaling {
    let corners = lower_convex_envelope(points);
    let ell = corners
        .iter()
        .copied()
        .filter(|&c| c < k)
        .max()
        .expect("a corner below k");
    let h = corners
        .iter()
        .copied()
        .find(|&c| c >= k)
        .expect("a corner at or above k");
    let y_ell = points[ell].1;
    let y_h = points[h].1;
    let beta = ((y_ell - y_h) / (h - ell) as f64 + 0.5).floor() as i64;
    EnvelopeScaling { ell, h, beta }
}

const SCHEDULE_PROBE_BITS: u32 = 96;

/// `2^{-4n} tau^n e^{-3 n tau / 2}`: the rounding tolerance that keeps a
/// unit-disk root count stable under coefficient perturbation.
fn nrd_round_tolerance(n: usize, tau: f64) -> Float {
    let prec = Precision::new(SCHEDULE_PROBE_BITS);
    let lead = pow2(prec, -4 * n as i32);
    lead * tau_factor(prec, tau, n as u32, -1.5)
}

/// `2^{-(n+1)} (3n)^{-n} tau^n e^{-3 n tau / 2}`: per-level rounding
/// tolerance for the k-th-modulus iteration.
fn mod_round_tolerance(n: usize, tau: f64) -> Float {
    let prec = Precision::new(SCHEDULE_PROBE_BITS);
    let lead = pow2(prec, -(n as i32) - 1);
    let three_n = rfloat(prec, 3.0 * n as f64);
    lead * three_n.pow(-(n as i32)) * tau_factor(prec, tau, n as u32, -1.5)
}

/// `tau^n e^{coeff * n * tau}` evaluated in big-float arithmetic so the
/// schedules never underflow.
fn tau_factor(prec: Precision, tau: f64, n: u32, coeff: f64) -> Float {
    let t = rfloat(prec, tau);
    let pow = t.pow(n);
    let arg = rfloat(prec, coeff * n as f64 * tau);
    pow * arg.exp()
}

/// Working width for a Graeffe step whose output will be rounded at
/// relative tolerance `eps`: schoolbook and FFT products lose at most
/// `O(n)` bits in the l1 sense.
fn graeffe_bits(n: usize, eps: &Float) -> u32 {
    rel_bits(eps).saturating_add(n as u32).saturating_add(32)
}

fn argmax_coeff(p: &Poly) -> usize {
    let mut best = 0usize;
    let mut best_y = f64::NEG_INFINITY;
    for (j, c) in p.coeffs().iter().enumerate() {
        let y = c.log2_abs();
        if y > best_y {
            best_y = y;
            best = j;
        }
    }
    best
}

/// Number of roots in the disk of radius `radius`: returns `k` with
/// `rho_k(P) e^-tau < radius < rho_{k+1}(P) e^tau` (conventions
/// `rho_0 = 0`, `rho_{n+1} = inf`). When `radius` falls within the
/// `e^{+-tau}` fuzz of some root modulus, either adjacent count satisfies
/// the contract.
pub fn nrd(p: &Poly, radius: &Float, tau: f64, limits: &Limits) -> Result<usize> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::InvalidInput("nrd needs degree >= 1".into()));
    }
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidInput("nrd needs tau > 0".into()));
    }
    if !(radius.is_finite() && radius.is_sign_positive() && !radius.is_zero()) {
        return Err(Error::InvalidInput("nrd needs a positive radius".into()));
    }
    let n = n as usize;
    if n == 1 {
        let prec = Precision::new(p.max_prec().max(64));
        let rho = p.coeff(0).modulus(prec) / p.coeff(1).modulus(prec);
        return Ok(if *radius > rho { 1 } else { 0 });
    }

    let mut tau_m = tau;
    let eps0 = nrd_round_tolerance(n, tau);
    let scale_bits = rel_bits(&eps0)
        .saturating_add(2 * (n as u32 + 1).next_power_of_two().trailing_zeros())
        .saturating_add(8);
    limits.check_bits(scale_bits, n)?;
    let mut q = p
        .round_to(Precision::new(scale_bits))
        .dilate(radius, Precision::new(scale_bits))?;
    let half = Float::with_val(SCHEDULE_PROBE_BITS, &eps0 / 2u32);
    q = q.round_rel(&half);

    let target = (2.0 * n as f64).ln();
    while 0.75 * tau_m < target {
        tau_m *= 1.5;
        let eps_m = nrd_round_tolerance(n, tau_m);
        let w = limits.check_bits(graeffe_bits(n, &eps_m), n)?;
        q = graeffe(&q, Precision::new(w))?;
        if !q.is_finite() {
            return Err(Error::Overflow);
        }
        let half_m = Float::with_val(SCHEDULE_PROBE_BITS, &eps_m / 2u32);
        q = q.round_rel(&half_m);
    }
    Ok(argmax_coeff(&q))
}

/// The k-th smallest root modulus, bracketed to `e^{+-tau}`.
pub fn mod_k(p: &Poly, k: usize, tau: f64, limits: &Limits) -> Result<ModulusEstimate> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::InvalidInput("mod_k needs degree >= 1".into()));
    }
    let n = n as usize;
    if !(1 <= k && k <= n) {
        return Err(Error::InvalidInput(format!(
            "mod_k index {k} out of range 1..={n}"
        )));
    }
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidInput("mod_k needs tau > 0".into()));
    }
    // roots at the origin: rho_k = 0 whenever at least k low coefficients vanish
    let zeros_at_origin = p
        .coeffs()
        .iter()
        .take_while(|c| c.is_zero())
        .count();
    if zeros_at_origin >= k {
        return Ok(ModulusEstimate::zero(tau));
    }

    let tau0 = tau / 8.0;
    let levels = levels_for(3.0 * n as f64, tau);

    let mut tau_m = tau0;
    let mut beta_weighted = 0.0f64;
    let mut cur = p.clone();
    let beta0 = envelope_scaling(&log_points(&cur), k).beta;
    beta_weighted += beta0 as f64;
    cur = cur.dilate_pow2(beta0)?;

    for m in 1..=levels {
        let eps = mod_round_tolerance(n, tau_m);
        let w = limits.check_bits(graeffe_bits(n, &eps), n)?;
        let half = Float::with_val(SCHEDULE_PROBE_BITS, &eps / 2u32);
        cur = cur.round_rel(&half);
        cur = graeffe(&cur, Precision::new(w))?;
        if !cur.is_finite() {
            return Err(Error::Overflow);
        }
        let beta = envelope_scaling(&log_points(&cur), k).beta;
        beta_weighted += beta as f64 / 2f64.powi(m as i32);
        cur = cur.dilate_pow2(beta)?;
        tau_m *= 1.5;
    }

    Ok(ModulusEstimate {
        value: exp2_f64(beta_weighted),
        tau,
    })
}

/// Smallest number of Graeffe levels with `2^-M log(bound) < tau / 2`.
fn levels_for(bound: f64, tau: f64) -> u32 {
    let mut m = 0u32;
    let mut step = bound.ln();
    while step >= tau / 2.0 {
        m += 1;
        step /= 2.0;
    }
    m
}

fn exp2_f64(x: f64) -> Float {
    rfloat(Precision::new(64), x).exp2()
}

/// The largest root modulus, bracketed to `e^{+-tau}`. Exploits the
/// binomial-bound scaling that pins `1 <= rho_n <= 4n` before each
/// Graeffe step; rounding per level is absolute, proportional to the
/// leading coefficient.
pub fn mod_max(p: &Poly, tau: f64, limits: &Limits) -> Result<ModulusEstimate> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::InvalidInput("mod_max needs degree >= 1".into()));
    }
    if tau.is_nan() || tau <= 0.0 {
        return Err(Error::InvalidInput("mod_max needs tau > 0".into()));
    }
    let n = n as usize;
    if p.coeffs().iter().take(n).all(|c| c.is_zero()) {
        return Ok(ModulusEstimate::zero(tau));
    }

    let tau0 = tau / 8.0;
    let levels = levels_for(4.0 * n as f64, tau);

    let mut tau_m = tau0;
    let mut beta_weighted = 0.0f64;
    let mut cur = p.clone();
    let beta0 = modmax_beta(&cur);
    beta_weighted += beta0 as f64;
    cur = cur.dilate_pow2(beta0)?;

    for m in 1..=levels {
        let lead_mag = cur
            .leading()
            .expect("nonzero polynomial")
            .modulus(Precision::new(SCHEDULE_PROBE_BITS));
        let bound = lead_mag * tau_factor(Precision::new(SCHEDULE_PROBE_BITS), tau_m, n as u32, -1.0);
        let half = Float::with_val(SCHEDULE_PROBE_BITS, &bound / 2u32);
        cur = cur.round_abs(&half);
        let rel = Float::with_val(
            SCHEDULE_PROBE_BITS,
            &bound / cur.l1_norm(Precision::new(SCHEDULE_PROBE_BITS)),
        );
        let w = limits.check_bits(graeffe_bits(n, &rel), n)?;
        cur = graeffe(&cur, Precision::new(w))?;
        if !cur.is_finite() {
            return Err(Error::Overflow);
        }
        let beta = modmax_beta(&cur);
        beta_weighted += beta as f64 / 2f64.powi(m as i32);
        cur = cur.dilate_pow2(beta)?;
        tau_m *= 1.5;
    }

    Ok(ModulusEstimate {
        value: exp2_f64(beta_weighted),
        tau,
    })
}

/// Scaling exponent for [`mod_max`]: the dilation `2^beta` must satisfy,
/// with magnitudes measured against the leading coefficient,
/// `|~a_{n-j}| <= 2^j C(n,j) |~a_n|` for every `j` and
/// `|~a_{n-h}| >= C(n,h) |~a_n|` for some `h`. Both conditions hold on a
/// unit-width window around `max_j x_j`; the floor lands inside it, and a
/// direct check nudges the exponent if double rounding put it outside.
fn modmax_beta(p: &Poly) -> i64 {
    let n = p.len() - 1;
    let points = log_points(p);
    let y_lead = points[n].1;
    let x = |j: usize| -> f64 {
        let y = points[n - j].1;
        if y.is_finite() {
            (y - y_lead - log2_binomial(n, j)) / j as f64
        } else {
            f64::NEG_INFINITY
        }
    };
    let x_max = (1..=n).map(x).fold(f64::NEG_INFINITY, f64::max);
    let mut beta = x_max.floor() as i64;
    for _ in 0..4 {
        let upper_ok =
            (1..=n).all(|j| x(j) == f64::NEG_INFINITY || beta as f64 >= x(j) - 1.0 - 1e-9);
        let lower_ok = (1..=n).any(|j| beta as f64 <= x(j) + 1e-9);
        match (upper_ok, lower_ok) {
            (true, true) => break,
            (false, _) => beta += 1,
            (true, false) => beta -= 1,
        }
    }
    beta
}

fn log2_binomial(n: usize, j: usize) -> f64 {
    let j = j.min(n - j);
    let mut acc = 0.0;
    for i in 1..=j {
        acc += ((n - j + i) as f64).log2() - (i as f64).log2();
    }
    acc
}

/// The smallest root modulus, bracketed to `e^{+-tau}`: zero when the
/// constant term vanishes, otherwise the reciprocal of the largest
/// modulus of the reversed polynomial.
pub fn mod_min(p: &Poly, tau: f64, limits: &Limits) -> Result<ModulusEstimate> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::InvalidInput("mod_min needs degree >= 1".into()));
    }
    if p.coeff(0).is_zero() {
        return Ok(ModulusEstimate::zero(tau));
    }
    let rev = p.reciprocal();
    let est = mod_max(&rev, tau, limits)?;
    let value = Float::with_val(est.value.prec(), est.value.recip_ref());
    Ok(ModulusEstimate { value, tau })
}
