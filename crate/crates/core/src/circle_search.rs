//! Splitting-circle search: radius bisection inside a root-free annulus
//! ([`rad`]), factorization through a dilated circle ([`hom`]), and
//! center selection with preprocessing ([`ctr`], [`ctr0`]).

use crate::circle_split::fcs;
use crate::error::{Error, Result};
use crate::moduli::{mod_k, mod_max, mod_min, nrd};
use crate::num::{log2_f64, rel_bits, rfloat, BigComplex, Precision};
use crate::poly::Poly;
use crate::Limits;
use rug::float::Round;
use rug::ops::Pow;
use rug::Float;

const SCALAR_BITS: u32 = 96;

fn sprec() -> Precision {
    Precision::new(SCALAR_BITS)
}

/// A certified root-free search region: at least `low` roots lie strictly
/// inside `inner`, and at most `high` roots lie within `outer`, i.e.
/// `rho_low(P) < inner` and `outer < rho_{high+1}(P)`.
#[derive(Clone, Debug)]
pub struct Annulus {
    pub inner: Float,
    pub outer: Float,
    pub low: usize,
    pub high: usize,
}

impl Annulus {
    pub fn new(inner: Float, outer: Float, low: usize, high: usize) -> Result<Self> {
        if !(inner.is_finite() && outer.is_finite() && inner.is_sign_positive() && !inner.is_zero())
        {
            return Err(Error::InvalidInput("annulus radii must be positive".into()));
        }
        if inner >= outer {
            return Err(Error::InvalidInput(
                "annulus inner radius must be below the outer radius".into(),
            ));
        }
        if !(1 <= low && low <= high) {
            return Err(Error::InvalidInput(
                "annulus root counts must satisfy 1 <= low <= high".into(),
            ));
        }
        Ok(Annulus {
            inner,
            outer,
            low,
            high,
        })
    }

    fn validate_for(&self, p: &Poly) -> Result<usize> {
        let n = p.degree();
        if n < 2 {
            return Err(Error::InvalidInput(
                "splitting needs a polynomial of degree >= 2".into(),
            ));
        }
        let n = n as usize;
        if self.high > n - 1 {
            return Err(Error::InvalidInput(format!(
                "annulus root count {} exceeds degree bound {}",
                self.high,
                n - 1
            )));
        }
        Ok(n)
    }

    /// `log(outer/inner)`, the working log-width.
    fn log_width(&self) -> f64 {
        let ratio = Float::with_val(SCALAR_BITS, &self.outer / &self.inner);
        log2_f64(&ratio) * std::f64::consts::LN_2
    }
}

/// A certified splitting circle: exactly `inside` roots lie strictly
/// inside radius `radius`, and no root has modulus in
/// `(radius * e^-half_width, radius * e^half_width)`.
#[derive(Clone, Debug)]
pub struct SplitCircle {
    pub radius: Float,
    pub inside: usize,
    pub half_width: f64,
}

/// A verified factor pair `P ~ f * g` with the relative l1 residual
/// `|P - f*g| / |P|` measured at elevated precision.
#[derive(Clone, Debug)]
pub struct FactorPair {
    pub f: Poly,
    pub g: Poly,
    pub residual: Float,
}

/// Upper bound on `|p - f*g| / |p|` at the given width.
pub(crate) fn pair_residual(p: &Poly, f: &Poly, g: &Poly, prec: Precision) -> Float {
    let prod = f.mul(g, prec);
    let diff = p.sub(&prod, prec).l1_norm(prec);
    let denom = p.l1_norm_lower(prec);
    Float::with_val_round(prec.bits(), &diff / &denom, Round::Up).0
}

/// Residual verification width: double the widest mantissa involved.
fn verify_prec(p: &Poly, f: &Poly, g: &Poly) -> Precision {
    Precision::new(p.max_prec().max(f.max_prec()).max(g.max_prec())).double()
}

/// Finds the splitting circle inside a certified annulus by bisection on
/// the radius. When the annulus is already root-free (`low == high`), the
/// circle is the geometric mean of the two adjacent root moduli; the
/// returned `half_width` certifies the root-free ring around it.
pub fn rad(p: &Poly, ann: &Annulus, limits: &Limits) -> Result<SplitCircle> {
    let n = ann.validate_for(p)?;
    let mut inner = ann.inner.clone();
    let mut outer = ann.outer.clone();
    let mut low = ann.low;
    let mut high = ann.high;

    loop {
        let width = Annulus {
            inner: inner.clone(),
            outer: outer.clone(),
            low,
            high,
        }
        .log_width();

        if low == high {
            let m_est = mod_k(p, low, width / 8.0, limits)?;
            let mm_est = mod_k(p, low + 1, width / 8.0, limits)?;
            if m_est.value.is_zero() {
                // all `low` inner roots sit at the origin; any circle well
                // below the next modulus splits them off
                let radius = Float::with_val(
                    SCALAR_BITS,
                    &mm_est.value * rfloat(sprec(), (-width / 8.0 - 1.0).exp()),
                );
                return Ok(SplitCircle {
                    radius,
                    inside: low,
                    half_width: 1.0,
                });
            }
            let radius = Float::with_val(SCALAR_BITS, &m_est.value * &mm_est.value).sqrt();
            let gap = Float::with_val(SCALAR_BITS, &mm_est.value / &m_est.value);
            let half_width = 0.5 * log2_f64(&gap) * std::f64::consts::LN_2 - width / 8.0;
            if half_width.is_nan() || half_width <= 0.0 {
                return Err(Error::SplitFailed(
                    "no positive root-free ring around the candidate circle".into(),
                ));
            }
            return Ok(SplitCircle {
                radius,
                inside: low,
                half_width,
            });
        }

        let rho = Float::with_val(SCALAR_BITS, &inner * &outer).sqrt();
        let gap = width / (8.0 * (high - low) as f64);
        let count = nrd(p, &rho, gap, limits)?;
        if count < low || count > high {
            return Err(Error::SplitFailed(
                "root count left the bisection bracket".into(),
            ));
        }
        let fuzz = rfloat(sprec(), gap.exp());
        if 2 * count < low + high || (2 * count == low + high && 2 * count < n) {
            outer = Float::with_val(SCALAR_BITS, &rho / &fuzz);
            high = count;
        } else {
            inner = rho * fuzz;
            low = count;
        }
    }
}

/// Splits `P` through the circle found by [`rad`]: dilates the circle to
/// the unit circle, extracts the pair there, and undoes the dilation, at
/// tolerances that keep the final residual below `eps`.
pub fn hom(p: &Poly, ann: &Annulus, eps: &Float, limits: &Limits) -> Result<FactorPair> {
    check_eps(eps)?;
    let n = ann.validate_for(p)?;
    let circle = rad(p, ann, limits)?;
    let rho = &circle.radius;

    // eps' = 1/4 min(rho^n, rho^-n) eps
    let rho_n = Float::with_val(SCALAR_BITS, rho.pow(n as u32));
    let rho_neg = Float::with_val(SCALAR_BITS, rho_n.recip_ref());
    let smaller = if rho_n < rho_neg { &rho_n } else { &rho_neg };
    let eps_unit = Float::with_val(SCALAR_BITS, eps * smaller) / 4u32;

    let w_in = scoped_bits(&eps_unit, n, limits)?;
    let q = p.round_to(w_in).dilate(rho, w_in)?;
    let pair = fcs(&q, circle.inside, circle.half_width, &eps_unit, limits)?;

    // undo the dilation at eps'' = 2^{-(n+4)} eps / n
    let eps_out = Float::with_val(SCALAR_BITS, eps / rfloat(sprec(), n as f64))
        >> (n as u32 + 4);
    let w_out = scoped_bits(&eps_out, n, limits)?;
    let inv_rho = Float::with_val(w_out.bits(), rho.recip_ref());
    let f = pair.f.round_to(w_out).dilate(&inv_rho, w_out)?;
    let g = pair.g.round_to(w_out).dilate(&inv_rho, w_out)?;

    finish_pair(p, f, g, eps, "dilated split")
}

/// Extra mantissa room for Taylor shifts by centers of modulus up to 2:
/// intermediate coefficient growth and output cancellation can each cost
/// a factor `3^n`, so `4n` bits cover both with margin.
fn shift_guard(n: usize) -> u32 {
    4 * n as u32 + 16
}

/// Working width resolving `eps` per coefficient with room for the
/// degree-`n` transform error.
fn scoped_bits(eps: &Float, n: usize, limits: &Limits) -> Result<Precision> {
    let bits = rel_bits(eps)
        .saturating_add(2 * (n as u32 + 1).next_power_of_two().trailing_zeros())
        .saturating_add(16);
    Ok(Precision::new(limits.check_bits(bits, n)?))
}

fn check_eps(eps: &Float) -> Result<()> {
    if !(eps.is_finite() && eps.is_sign_positive() && !eps.is_zero() && *eps < 1u32) {
        return Err(Error::InvalidInput("tolerance must satisfy 0 < eps < 1".into()));
    }
    Ok(())
}

fn finish_pair(p: &Poly, f: Poly, g: Poly, eps: &Float, what: &str) -> Result<FactorPair> {
    let n = p.degree();
    let kf = f.degree();
    if !(1 <= kf && kf < n && kf + g.degree() == n) {
        return Err(Error::SplitFailed(format!(
            "{what}: degenerate factor degrees {}/{} for degree {n}",
            kf,
            g.degree()
        )));
    }
    let residual = pair_residual(p, &f, &g, verify_prec(p, &f, &g));
    if residual >= *eps {
        return Err(Error::SplitFailed(format!(
            "{what}: residual verification failed"
        )));
    }
    Ok(FactorPair { f, g, residual })
}

/// Factorizes a polynomial of degree >= 2: peels a near-zero constant
/// term, reduces to [`ctr`] directly or through the reversed polynomial,
/// and otherwise splits through the fixed annulus around the unit circle
/// that the two disk counts certify.
pub fn ctr0(p: &Poly, eps: &Float, limits: &Limits) -> Result<FactorPair> {
    check_eps(eps)?;
    let n = p.degree();
    if n < 2 {
        return Err(Error::InvalidInput("ctr0 needs degree >= 2".into()));
    }
    let n = n as usize;
    let wp = Precision::new(p.max_prec().max(rel_bits(eps) + 32));

    // near-zero constant term: split off the factor z
    let a0 = p.coeff(0).modulus(wp);
    let norm = p.l1_norm(wp);
    if a0 < Float::with_val(wp.bits(), eps * &norm) {
        let f = Poly::from_coeffs(vec![BigComplex::zero(wp), BigComplex::one(wp)]);
        let g = Poly::from_coeffs(p.coeffs()[1..].to_vec());
        return finish_pair(p, f, g, eps, "origin split");
    }

    let radius = rfloat(wp, 1.9);
    let k1 = nrd(p, &radius, 0.05, limits)?;
    if k1 == n {
        return ctr(p, eps, limits);
    }

    let reversed = p.reciprocal();
    let k2 = nrd(&reversed, &radius, 0.05, limits)?;
    if k2 == n {
        let pair = ctr(&reversed, eps, limits)?;
        let f = pair.f.reciprocal();
        let g = pair.g.reciprocal();
        if f.degree() != pair.f.degree() || g.degree() != pair.g.degree() {
            return Err(Error::SplitFailed(
                "factor reversal dropped a degree".into(),
            ));
        }
        return finish_pair(p, f, g, eps, "reversed split");
    }

    // both disk counts certify the annulus around the unit circle:
    // rho_{n-k2} < e^0.05/1.9 and rho_{k1+1} > 1.9 e^-0.05
    let outer = rfloat(sprec(), 1.9) * rfloat(sprec(), (-0.05f64).exp());
    let inner = Float::with_val(SCALAR_BITS, outer.recip_ref());
    let ann = Annulus::new(inner, outer, n - k2, k1)?;
    hom(p, &ann, eps, limits)
}

/// Probe data from a [`ctr`] run, for budget instrumentation.
#[derive(Clone, Debug, Default)]
pub struct CtrProbe {
    /// The tolerance handed to the inner [`hom`] call, when that path ran.
    pub hom_eps: Option<Float>,
}

/// Finds the center of the splitting circle for a polynomial with all
/// root moduli at most 2, then splits: recenter at the root centroid,
/// rescale so the roots fill the unit disk, pick the best of four
/// candidate centers outside the circle, split there, and transform the
/// factors back.
pub fn ctr(p: &Poly, eps: &Float, limits: &Limits) -> Result<FactorPair> {
    Ok(ctr_probed(p, eps, limits)?.0)
}

pub fn ctr_probed(p: &Poly, eps: &Float, limits: &Limits) -> Result<(FactorPair, CtrProbe)> {
    check_eps(eps)?;
    let n = p.degree();
    if n < 2 {
        return Err(Error::InvalidInput("ctr needs degree >= 2".into()));
    }
    let n = n as usize;
    let mut probe = CtrProbe::default();

    // recenter at the root centroid u = -a_{n-1} / (n a_n)
    let u = {
        let prec = Precision::new(p.max_prec());
        let denom = p.coeff(n).mul_real(&rfloat(prec, n as f64), prec);
        p.coeff(n - 1).div(&denom, prec).neg()
    };
    let u_mag = u.modulus(sprec());

    // eps0' = eps/4 (1+|u|)^{-n}
    let one_plus_u = Float::with_val(SCALAR_BITS, 1u32 + &u_mag);
    let shrink = Float::with_val(SCALAR_BITS, (&one_plus_u).pow(-(n as i32)));
    let eps_shift = Float::with_val(SCALAR_BITS, eps * &shrink) / 4u32;
    let w0 = scoped_bits(&eps_shift, n, limits)?.plus(shift_guard(n));
    limits.check_bits(w0.bits(), n)?;
    let p0 = p.round_to(w0).shift(&u.round_to(w0), w0);

    let p_norm = p.l1_norm(sprec());
    let p0_norm = p0.l1_norm(sprec());
    // eps0 = eps/4 (1+|u|)^{-n} |P| / |P0|
    let eps0 = Float::with_val(SCALAR_BITS, &eps_shift * &p_norm) / &p0_norm;

    // near-zero constant term after recentering: factor z splits directly
    let c0 = p0.coeff(0).modulus(sprec());
    if c0 < Float::with_val(SCALAR_BITS, &eps0 * &p0_norm) {
        let f0 = Poly::from_coeffs(vec![BigComplex::zero(w0), BigComplex::one(w0)]);
        let g0 = Poly::from_coeffs(p0.coeffs()[1..].to_vec());
        let (f, g) = shift_back(&f0, &g0, &u, eps, n, limits)?;
        return Ok((finish_pair(p, f, g, eps, "centroid split")?, probe));
    }

    // dilate so every root lands inside the unit disk
    let r_est = mod_max(&p0, 0.01, limits)?;
    let rho = Float::with_val(SCALAR_BITS, &r_est.value * rfloat(sprec(), (0.01f64).exp()));
    if !rho.is_finite() || rho >= 4u32 {
        return Err(Error::SplitFailed(
            "recentred roots escaped the expected range".into(),
        ));
    }
    let sup_rho = if rho > 1u32 {
        rho.clone()
    } else {
        rfloat(sprec(), 1.0)
    };
    let sup_pow = Float::with_val(SCALAR_BITS, (&sup_rho).pow(-(n as i32)));
    let eps1 = Float::with_val(SCALAR_BITS, &eps0 * &sup_pow) / 4u32;
    let w1 = scoped_bits(&eps1, n, limits)?.plus(shift_guard(n));
    limits.check_bits(w1.bits(), n)?;
    let rho_w = Float::with_val(w1.bits(), &rho);
    let rho_neg_n = Float::with_val(w1.bits(), (&rho_w).pow(-(n as i32)));
    let p1 = p0
        .round_to(w1)
        .dilate(&rho_w, w1)?
        .scale_real(&rho_neg_n, w1);

    // four candidate centers 2 e^{i j pi / 2} = 2 i^j, exactly representable
    let mut best: Option<(usize, Float, Float, Float)> = None;
    let mut shifted = Vec::with_capacity(4);
    for j in 0..4usize {
        let v = candidate_center(j, w1);
        let q = p1.shift(&v, w1);
        let hi = mod_max(&q, 0.01, limits)?;
        let lo = mod_min(&q, 0.01, limits)?;
        let ratio = Float::with_val(SCALAR_BITS, &hi.value / &lo.value);
        shifted.push(q);
        let better = match &best {
            None => true,
            Some((_, _, _, r)) => ratio > *r,
        };
        if better {
            best = Some((j, lo.value, hi.value, ratio));
        }
    }
    let (j0, lo, hi, _ratio) = best.expect("four candidates");
    let p2 = shifted.swap_remove(j0);

    let p2_norm = p2.l1_norm(sprec());
    let three_neg_n = rfloat(sprec(), 3.0).pow(-(n as i32));
    let eps2 = Float::with_val(SCALAR_BITS, &eps1 * &p0_norm) / &p2_norm * three_neg_n;
    probe.hom_eps = Some(eps2.clone());

    let fuzz = rfloat(sprec(), (0.01f64).exp());
    let inner = Float::with_val(SCALAR_BITS, &lo * &fuzz);
    let outer = Float::with_val(SCALAR_BITS, &hi / &fuzz);
    if inner >= outer {
        return Err(Error::SplitFailed(
            "candidate center produced no usable annulus".into(),
        ));
    }
    let ann = Annulus::new(inner, outer, 1, n - 1)?;
    let pair2 = hom(&p2, &ann, &eps2, limits)?;

    // undo the candidate shift inside the eps1 budget
    let w_back = scoped_bits(&eps1, n, limits)?.plus(shift_guard(n));
    let v_back = candidate_center(j0, w_back).neg();
    let f1 = pair2.f.round_to(w_back).shift(&v_back, w_back);
    let g1 = pair2.g.round_to(w_back).shift(&v_back, w_back);

    // undo the dilation: F0 = rho^k F1(z/rho) at eps' = 2^{-n-4} eps0
    let eps_undilate = Float::with_val(SCALAR_BITS, &eps0 >> (n as u32 + 4));
    let w_ud = scoped_bits(&eps_undilate, n, limits)?;
    let k = f1.degree() as u32;
    let inv_rho = Float::with_val(w_ud.bits(), rho.recip_ref());
    let rho_ud = Float::with_val(w_ud.bits(), &rho);
    let f0 = f1
        .round_to(w_ud)
        .dilate(&inv_rho, w_ud)?
        .scale_real(&Float::with_val(w_ud.bits(), (&rho_ud).pow(k)), w_ud);
    let g0 = g1
        .round_to(w_ud)
        .dilate(&inv_rho, w_ud)?
        .scale_real(&Float::with_val(w_ud.bits(), (&rho_ud).pow(n as u32 - k)), w_ud);

    let (f, g) = shift_back(&f0, &g0, &u, eps, n, limits)?;
    Ok((finish_pair(p, f, g, eps, "centred split")?, probe))
}

/// `2 i^j` at the given width.
fn candidate_center(j: usize, prec: Precision) -> BigComplex {
    match j % 4 {
        0 => BigComplex::from_f64(prec, 2.0, 0.0),
        1 => BigComplex::from_f64(prec, 0.0, 2.0),
        2 => BigComplex::from_f64(prec, -2.0, 0.0),
        _ => BigComplex::from_f64(prec, 0.0, -2.0),
    }
}

/// Final recentering step shared by the [`ctr`] paths: shifts both
/// factors by `-u` at the `eps'' = 2^{-n-4} eps` budget.
fn shift_back(
    f0: &Poly,
    g0: &Poly,
    u: &BigComplex,
    eps: &Float,
    n: usize,
    limits: &Limits,
) -> Result<(Poly, Poly)> {
    let eps_back = Float::with_val(SCALAR_BITS, eps >> (n as u32 + 4));
    let w = scoped_bits(&eps_back, n, limits)?.plus(shift_guard(n));
    let back = u.round_to(w).neg();
    Ok((
        f0.round_to(w).shift(&back, w),
        g0.round_to(w).shift(&back, w),
    ))
}
