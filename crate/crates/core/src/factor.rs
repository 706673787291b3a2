//! Complete factorization into linear factors, with an independently
//! verified residual certificate.

use crate::circle_search::ctr0;
use crate::error::{Error, Result};
use crate::num::{rel_bits, BigComplex, Precision};
use crate::poly::Poly;
use crate::Limits;
use rug::float::Round;
use rug::Float;

/// Linear factors of `P` with the verified relative residual
/// `|P - L1*L2*...*Ln| / |P|`.
#[derive(Clone, Debug)]
pub struct FactorList {
    pub factors: Vec<Poly>,
    pub residual: Float,
}

/// Roots read off the linear factors, multiplicity by repetition, plus
/// the residual certificate of the factorization they came from.
#[derive(Clone, Debug)]
pub struct RootList {
    pub roots: Vec<BigComplex>,
    pub residual: Float,
}

/// One completed split during [`fact`]: the frontier then held `pieces`
/// polynomials whose product differed from the input by `residual`
/// relatively.
#[derive(Clone, Debug)]
pub struct SplitEvent {
    pub pieces: usize,
    pub residual: Float,
}

/// Factors `P` into `deg(P)` linear factors with
/// `|P - L1*...*Ln| < eps * |P|`. Every split runs at the tolerance
/// `2^-n eps / n` (with `n` the original degree throughout), which makes
/// the partial products telescope within the overall budget.
pub fn fact(p: &Poly, eps: &Float, limits: &Limits) -> Result<FactorList> {
    Ok(fact_impl(p, eps, limits, false)?.0)
}

/// [`fact`] with the per-split frontier residuals exposed.
pub fn fact_traced(p: &Poly, eps: &Float, limits: &Limits) -> Result<(FactorList, Vec<SplitEvent>)> {
    fact_impl(p, eps, limits, true)
}

fn fact_impl(
    p: &Poly,
    eps: &Float,
    limits: &Limits,
    traced: bool,
) -> Result<(FactorList, Vec<SplitEvent>)> {
    let n = p.degree();
    if n < 1 {
        return Err(Error::InvalidInput("fact needs degree >= 1".into()));
    }
    if !(eps.is_finite() && eps.is_sign_positive() && !eps.is_zero() && *eps < 1u32) {
        return Err(Error::InvalidInput("tolerance must satisfy 0 < eps < 1".into()));
    }
    if n == 1 {
        return Ok((
            FactorList {
                factors: vec![p.clone()],
                residual: Float::new(Precision::MIN_BITS),
            },
            Vec::new(),
        ));
    }
    let n = n as usize;

    // per-split tolerance 2^-n eps / n, with the global degree at every level
    let split_eps = Float::with_val(96, eps / Float::with_val(96, n as f64)) >> (n as u32);
    let wp = Precision::new(p.max_prec().max(rel_bits(&split_eps) + 64));
    limits.check_bits(wp.bits(), n)?;
    let (monic, lead) = p.monic(wp).expect("degree >= 1");

    let mut frontier: Vec<Poly> = vec![monic.clone()];
    let mut events: Vec<SplitEvent> = Vec::new();
    while let Some(idx) = frontier.iter().position(|q| q.degree() > 1) {
        let target = frontier[idx].clone();
        let pair = ctr0(&target, &split_eps, limits).map_err(|e| match e {
            Error::PrecisionExhausted { .. } => e,
            other => Error::SplitFailed(format!(
                "degree-{} subproblem: {other}",
                target.degree()
            )),
        })?;
        frontier.splice(idx..=idx, [pair.f, pair.g]);
        if traced {
            events.push(SplitEvent {
                pieces: frontier.len(),
                residual: frontier_residual(&monic, &frontier),
            });
        }
    }

    let mut factors = frontier;
    debug_assert!(factors.iter().all(|f| f.degree() == 1));
    sort_by_root(&mut factors);
    // restore the leading coefficient on one designated factor; scaling a
    // linear factor leaves its root unchanged
    if let Some(first) = factors.first_mut() {
        *first = first.scale(&lead, wp);
    }

    let residual = verify_residual(p, &factors);
    if residual.is_nan() || residual >= *eps {
        return Err(Error::SplitFailed(
            "final residual verification failed".into(),
        ));
    }
    Ok((FactorList { factors, residual }, events))
}

/// Deterministic output order: by root real part, then imaginary part.
fn sort_by_root(factors: &mut [Poly]) {
    factors.sort_by(|a, b| {
        let ra = linear_root(a);
        let rb = linear_root(b);
        ra.re()
            .partial_cmp(rb.re())
            .unwrap()
            .then(ra.im().partial_cmp(rb.im()).unwrap())
    });
}

/// Root of a linear factor `a x + b`: `-b / a`.
pub(crate) fn linear_root(f: &Poly) -> BigComplex {
    let prec = Precision::new(f.max_prec());
    f.coeff(0).div(&f.coeff(1), prec).neg()
}

fn frontier_residual(reference: &Poly, frontier: &[Poly]) -> Float {
    let prec = Precision::new(
        frontier
            .iter()
            .map(|f| f.max_prec())
            .max()
            .unwrap_or(Precision::MIN_BITS)
            .max(reference.max_prec()),
    )
    .double();
    let mut prod = Poly::from_coeffs(vec![BigComplex::one(prec)]);
    for f in frontier {
        prod = prod.mul(f, prec);
    }
    let diff = reference.sub(&prod, prec).l1_norm(prec);
    let denom = reference.l1_norm_lower(prec);
    Float::with_val_round(prec.bits(), &diff / &denom, Round::Up).0
}

/// Independent residual certificate: `|P - prod(factors)| / |P|` in the
/// l1 norm, computed at at least twice the width of any input and rounded
/// so the result is an upper bound. This is the quantity reported to
/// users.
pub fn verify_residual(p: &Poly, factors: &[Poly]) -> Float {
    let widest = factors
        .iter()
        .map(|f| f.max_prec())
        .chain([p.max_prec()])
        .max()
        .unwrap_or(Precision::MIN_BITS);
    let prec = Precision::new(widest).double().plus(64);
    if p.is_zero() {
        let all_zero = factors.iter().any(|f| f.is_zero());
        return if all_zero {
            Float::new(prec.bits())
        } else {
            Float::with_val(prec.bits(), f64::INFINITY)
        };
    }
    let mut prod = Poly::from_coeffs(vec![BigComplex::one(prec)]);
    for f in factors {
        prod = prod.mul(f, prec);
    }
    let diff = p.sub(&prod, prec).l1_norm(prec);
    let denom = p.l1_norm_lower(prec);
    Float::with_val_round(prec.bits(), &diff / &denom, Round::Up).0
}

/// All roots of `P`, read off the linear factors of [`fact`].
pub fn roots(p: &Poly, eps: &Float, limits: &Limits) -> Result<RootList> {
    let list = fact(p, eps, limits)?;
    let roots = list.factors.iter().map(linear_root).collect();
    Ok(RootList {
        roots,
        residual: list.residual,
    })
}
